#pragma once

#include <cstdint>
#include <vector>

#include "lahreg/geom/point_cloud.hpp"
#include "lahreg/lsh/hash.hpp"

namespace lahreg::lsh {

// Contiguous, non-overlapping windows over a permuted point order. All
// windows hold window_size points except possibly the last one, which keeps
// the remainder.
struct WindowPartition {
    std::vector<std::int64_t> permutation;  // position -> original point index
    std::int64_t window_size = 0;
    std::vector<std::int64_t> offsets;  // start position of each window

    std::int64_t total() const { return static_cast<std::int64_t>(permutation.size()); }
    std::int64_t window_count() const { return static_cast<std::int64_t>(offsets.size()); }
    std::int64_t window_begin(std::int64_t w) const { return offsets[static_cast<std::size_t>(w)]; }
    std::int64_t window_end(std::int64_t w) const {
        return w + 1 < window_count() ? offsets[static_cast<std::size_t>(w + 1)] : total();
    }
};

// Stable sort of point indices by (hash, original index), then a uniform
// split into ceil(N / window_size) windows.
WindowPartition partition(const std::vector<std::int32_t>& hashes, std::int64_t window_size);

// Full pipeline: center the cloud on its centroid, hash, vote, partition.
// Centering makes the window layout invariant to cloud translation.
WindowPartition lsh_window_partition(const geom::PointCloud& cloud, const HashConfig& config,
                                     std::int64_t window_size);

// Per original-point window index.
std::vector<std::int64_t> window_ids(const WindowPartition& part);

}  // namespace lahreg::lsh
