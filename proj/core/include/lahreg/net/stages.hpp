#pragma once

#include <cstdint>
#include <vector>

#include "lahreg/ad/tensor.hpp"
#include "lahreg/geom/point_cloud.hpp"
#include "lahreg/net/params.hpp"

namespace lahreg::net {

// Occupied-cell decomposition of a cloud on an axis-aligned grid. Cells are
// ordered by their integer key (lexicographic), so the layout is deterministic
// and independent of input order up to point ties.
struct VoxelGrid {
    geom::PointCloud representatives;         // member centroid per cell
    std::vector<std::int64_t> cell_of_point;  // input point -> cell index
    std::int64_t cell_count = 0;
};

VoxelGrid voxel_downsample(const geom::PointCloud& cloud, double edge);

struct StageOutput {
    geom::PointCloud points;
    ad::Tensor features;
};

// Voxel-grid downsampling: every point feature goes through MLP + linear
// residual, then features max-pool per cell and the cell centroid becomes the
// surviving point.
StageOutput encoder_stage(const geom::PointCloud& cloud, const ad::Tensor& features, double edge,
                          const EncoderParams& params);

// Upsampling: each fine point takes its nearest coarse point's feature
// (lowest index on ties), concatenated with its skip feature, through a
// two-layer MLP.
ad::Tensor decoder_stage(const geom::PointCloud& coarse, const ad::Tensor& coarse_features,
                         const geom::PointCloud& fine, const ad::Tensor& skip_features,
                         const DecoderParams& params);

// Brute-force nearest-coarse assignment used by the decoder.
std::vector<std::int64_t> nearest_indices(const geom::PointCloud& fine,
                                          const geom::PointCloud& coarse);

}  // namespace lahreg::net
