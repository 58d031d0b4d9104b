#include "lahreg/lsh/baselines.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace lahreg::lsh {

namespace {

std::array<std::int64_t, 3> voxel_key(const Eigen::Vector3d& p, double edge) {
    return {static_cast<std::int64_t>(std::floor(p.x() / edge)),
            static_cast<std::int64_t>(std::floor(p.y() / edge)),
            static_cast<std::int64_t>(std::floor(p.z() / edge))};
}

}  // namespace

std::vector<std::int64_t> voxel_partition(const geom::PointCloud& cloud, double voxel_edge) {
    if (cloud.empty()) throw std::invalid_argument("voxel_partition: empty cloud");
    if (!(voxel_edge > 0.0)) throw std::invalid_argument("voxel_partition: edge must be positive");

    const std::int64_t n = cloud.size();
    std::vector<std::pair<std::array<std::int64_t, 3>, std::int64_t>> keyed;
    keyed.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        keyed.emplace_back(voxel_key(cloud[i], voxel_edge), i);
    }
    std::sort(keyed.begin(), keyed.end());

    std::vector<std::int64_t> ids(static_cast<std::size_t>(n));
    std::int64_t window = -1;
    std::array<std::int64_t, 3> prev{};
    for (std::size_t k = 0; k < keyed.size(); ++k) {
        if (window < 0 || keyed[k].first != prev) {
            ++window;
            prev = keyed[k].first;
        }
        ids[static_cast<std::size_t>(keyed[k].second)] = window;
    }
    return ids;
}

std::vector<std::int64_t> knn_partition(const geom::PointCloud& cloud, std::int64_t window_size) {
    if (cloud.empty()) throw std::invalid_argument("knn_partition: empty cloud");
    if (window_size < 1) throw std::invalid_argument("knn_partition: window_size must be >= 1");

    const std::int64_t n = cloud.size();
    std::vector<std::int64_t> ids(static_cast<std::size_t>(n), -1);
    std::vector<std::pair<double, std::int64_t>> near;
    near.reserve(static_cast<std::size_t>(n));

    std::int64_t window = 0;
    std::int64_t next_seed = 0;
    std::int64_t remaining = n;
    while (remaining >= window_size) {
        while (ids[static_cast<std::size_t>(next_seed)] >= 0) ++next_seed;
        const std::int64_t seed = next_seed;
        ids[static_cast<std::size_t>(seed)] = window;

        near.clear();
        for (std::int64_t i = 0; i < n; ++i) {
            if (ids[static_cast<std::size_t>(i)] >= 0) continue;
            near.emplace_back((cloud[i] - cloud[seed]).squaredNorm(), i);
        }
        const std::int64_t take =
            std::min<std::int64_t>(window_size - 1, static_cast<std::int64_t>(near.size()));
        std::partial_sort(near.begin(), near.begin() + take, near.end());
        for (std::int64_t k = 0; k < take; ++k) {
            ids[static_cast<std::size_t>(near[static_cast<std::size_t>(k)].second)] = window;
        }
        remaining -= take + 1;
        ++window;
    }
    if (remaining > 0) {
        for (std::int64_t i = 0; i < n; ++i) {
            if (ids[static_cast<std::size_t>(i)] < 0) ids[static_cast<std::size_t>(i)] = window;
        }
    }
    return ids;
}

std::uint64_t morton_encode(std::uint64_t x, std::uint64_t y, std::uint64_t z, int depth) {
    std::uint64_t code = 0;
    for (int bit = 0; bit < depth; ++bit) {
        code |= ((x >> bit) & 1ull) << (3 * bit);
        code |= ((y >> bit) & 1ull) << (3 * bit + 1);
        code |= ((z >> bit) & 1ull) << (3 * bit + 2);
    }
    return code;
}

WindowPartition octree_zorder_partition(const geom::PointCloud& cloud, std::int64_t window_size,
                                        int depth) {
    if (cloud.empty()) throw std::invalid_argument("octree_zorder_partition: empty cloud");
    if (window_size < 1) {
        throw std::invalid_argument("octree_zorder_partition: window_size must be >= 1");
    }
    if (depth < 1 || depth > 20) {
        throw std::invalid_argument("octree_zorder_partition: depth must be in [1, 20]");
    }

    const std::int64_t n = cloud.size();
    Eigen::Vector3d lo = cloud[0], hi = cloud[0];
    for (std::int64_t i = 1; i < n; ++i) {
        lo = lo.cwiseMin(cloud[i]);
        hi = hi.cwiseMax(cloud[i]);
    }
    const Eigen::Vector3d extent = hi - lo;
    const std::uint64_t cells = 1ull << depth;

    auto grid = [&](double v, double low, double span) -> std::uint64_t {
        if (!(span > 0.0)) return 0;
        double t = (v - low) / span * static_cast<double>(cells);
        auto c = static_cast<std::int64_t>(t);
        if (c < 0) c = 0;
        if (c >= static_cast<std::int64_t>(cells)) c = static_cast<std::int64_t>(cells) - 1;
        return static_cast<std::uint64_t>(c);
    };

    std::vector<std::uint64_t> codes(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        codes[static_cast<std::size_t>(i)] =
            morton_encode(grid(cloud[i].x(), lo.x(), extent.x()),
                          grid(cloud[i].y(), lo.y(), extent.y()),
                          grid(cloud[i].z(), lo.z(), extent.z()), depth);
    }

    WindowPartition out;
    out.window_size = window_size;
    out.permutation.resize(static_cast<std::size_t>(n));
    std::iota(out.permutation.begin(), out.permutation.end(), std::int64_t{0});
    std::stable_sort(out.permutation.begin(), out.permutation.end(),
                     [&](std::int64_t a, std::int64_t b) {
                         return codes[static_cast<std::size_t>(a)] <
                                codes[static_cast<std::size_t>(b)];
                     });
    const std::int64_t n_windows = (n + window_size - 1) / window_size;
    out.offsets.resize(static_cast<std::size_t>(n_windows));
    for (std::int64_t w = 0; w < n_windows; ++w) {
        out.offsets[static_cast<std::size_t>(w)] = w * window_size;
    }
    return out;
}

}  // namespace lahreg::lsh
