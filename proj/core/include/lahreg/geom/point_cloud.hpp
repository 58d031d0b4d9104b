#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <utility>
#include <vector>

namespace lahreg::geom {

// Ordered list of 3D points in meters. Index i refers to the same physical
// point across all operations that do not explicitly permute.
struct PointCloud {
    std::vector<Eigen::Vector3d> points;

    PointCloud() = default;
    explicit PointCloud(std::vector<Eigen::Vector3d> pts) : points(std::move(pts)) {}

    std::int64_t size() const { return static_cast<std::int64_t>(points.size()); }
    bool empty() const { return points.empty(); }

    const Eigen::Vector3d& operator[](std::int64_t i) const {
        return points[static_cast<std::size_t>(i)];
    }
    Eigen::Vector3d& operator[](std::int64_t i) {
        return points[static_cast<std::size_t>(i)];
    }

    // Mean of all points; the zero vector for an empty cloud.
    Eigen::Vector3d centroid() const;

    bool all_finite() const;
};

// Translate every point so the centroid lands at the origin.
PointCloud centered(const PointCloud& cloud);

// Putative point matches: (source index, target index) pairs with an optional
// per-pair feature distance (empty, or one entry per pair).
struct CorrespondenceSet {
    std::vector<std::pair<std::int64_t, std::int64_t>> pairs;
    std::vector<double> distances;

    std::int64_t size() const { return static_cast<std::int64_t>(pairs.size()); }
    bool empty() const { return pairs.empty(); }

    // Throws std::invalid_argument if any index is out of bounds for clouds of
    // the given sizes or the distance vector length is inconsistent.
    void validate(std::int64_t source_size, std::int64_t target_size) const;
};

}  // namespace lahreg::geom
