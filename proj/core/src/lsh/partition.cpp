#include "lahreg/lsh/partition.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace lahreg::lsh {

WindowPartition partition(const std::vector<std::int32_t>& hashes, std::int64_t window_size) {
    const std::int64_t n_points = static_cast<std::int64_t>(hashes.size());
    if (n_points < 1) throw std::invalid_argument("partition: empty hash list");
    if (window_size < 1) throw std::invalid_argument("partition: window_size must be >= 1");

    WindowPartition out;
    out.window_size = window_size;
    out.permutation.resize(static_cast<std::size_t>(n_points));
    std::iota(out.permutation.begin(), out.permutation.end(), std::int64_t{0});
    std::stable_sort(out.permutation.begin(), out.permutation.end(),
                     [&](std::int64_t a, std::int64_t b) {
                         return hashes[static_cast<std::size_t>(a)] <
                                hashes[static_cast<std::size_t>(b)];
                     });

    const std::int64_t n_windows = (n_points + window_size - 1) / window_size;
    out.offsets.resize(static_cast<std::size_t>(n_windows));
    for (std::int64_t w = 0; w < n_windows; ++w) {
        out.offsets[static_cast<std::size_t>(w)] = w * window_size;
    }
    return out;
}

WindowPartition lsh_window_partition(const geom::PointCloud& cloud, const HashConfig& config,
                                     std::int64_t window_size) {
    const ProjectionTensor proj = sample_projection(config);
    const geom::PointCloud local = geom::centered(cloud);
    const RoundHashes rounds = hash_points(local, proj);
    return partition(vote(rounds), window_size);
}

std::vector<std::int64_t> window_ids(const WindowPartition& part) {
    std::vector<std::int64_t> ids(static_cast<std::size_t>(part.total()));
    for (std::int64_t w = 0; w < part.window_count(); ++w) {
        for (std::int64_t pos = part.window_begin(w); pos < part.window_end(w); ++pos) {
            ids[static_cast<std::size_t>(part.permutation[static_cast<std::size_t>(pos)])] = w;
        }
    }
    return ids;
}

}  // namespace lahreg::lsh
