#include "lahreg/net/stages.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "lahreg/ad/ops.hpp"

namespace lahreg::net {

VoxelGrid voxel_downsample(const geom::PointCloud& cloud, double edge) {
    if (cloud.empty()) throw std::invalid_argument("voxel_downsample: empty cloud");
    if (!(edge > 0.0)) throw std::invalid_argument("voxel_downsample: edge must be positive");

    using Key = std::array<std::int64_t, 3>;
    std::map<Key, std::vector<std::int64_t>> cells;
    for (std::int64_t i = 0; i < cloud.size(); ++i) {
        Key key;
        for (int a = 0; a < 3; ++a) {
            key[static_cast<std::size_t>(a)] =
                static_cast<std::int64_t>(std::floor(cloud[i][a] / edge));
        }
        cells[key].push_back(i);
    }

    VoxelGrid grid;
    grid.cell_count = static_cast<std::int64_t>(cells.size());
    grid.cell_of_point.resize(static_cast<std::size_t>(cloud.size()));
    grid.representatives.points.reserve(cells.size());
    std::int64_t cell = 0;
    for (const auto& [key, members] : cells) {
        Eigen::Vector3d sum = Eigen::Vector3d::Zero();
        for (std::int64_t i : members) {
            sum += cloud[i];
            grid.cell_of_point[static_cast<std::size_t>(i)] = cell;
        }
        grid.representatives.points.push_back(sum / static_cast<double>(members.size()));
        ++cell;
    }
    return grid;
}

StageOutput encoder_stage(const geom::PointCloud& cloud, const ad::Tensor& features, double edge,
                          const EncoderParams& params) {
    if (cloud.size() != features.rows) {
        throw std::invalid_argument("encoder_stage: cloud size != feature rows");
    }
    const VoxelGrid grid = voxel_downsample(cloud, edge);

    ad::Tensor hidden = ad::relu(ad::linear(features, params.w1, params.b1));
    ad::Tensor transformed =
        ad::add(ad::linear(hidden, params.w2, params.b2), ad::matmul(features, params.proj));
    ad::Tensor pooled = ad::segment_max_rows(transformed, grid.cell_of_point, grid.cell_count);

    return {grid.representatives, pooled};
}

std::vector<std::int64_t> nearest_indices(const geom::PointCloud& fine,
                                          const geom::PointCloud& coarse) {
    if (coarse.empty()) throw std::invalid_argument("nearest_indices: empty coarse cloud");
    std::vector<std::int64_t> nearest(static_cast<std::size_t>(fine.size()), 0);
    for (std::int64_t i = 0; i < fine.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::int64_t j = 0; j < coarse.size(); ++j) {
            const double d2 = (fine[i] - coarse[j]).squaredNorm();
            if (d2 < best) {
                best = d2;
                nearest[static_cast<std::size_t>(i)] = j;
            }
        }
    }
    return nearest;
}

ad::Tensor decoder_stage(const geom::PointCloud& coarse, const ad::Tensor& coarse_features,
                         const geom::PointCloud& fine, const ad::Tensor& skip_features,
                         const DecoderParams& params) {
    if (coarse.size() != coarse_features.rows) {
        throw std::invalid_argument("decoder_stage: coarse cloud size != feature rows");
    }
    if (fine.size() != skip_features.rows) {
        throw std::invalid_argument("decoder_stage: fine cloud size != skip rows");
    }
    ad::Tensor up = ad::gather_rows(coarse_features, nearest_indices(fine, coarse));
    ad::Tensor cat = ad::concat_cols({up, skip_features});
    return ad::linear(ad::relu(ad::linear(cat, params.w1, params.b1)), params.w2, params.b2);
}

}  // namespace lahreg::net
