#include "lahreg/geom/point_cloud.hpp"

#include <cmath>
#include <stdexcept>

namespace lahreg::geom {

Eigen::Vector3d PointCloud::centroid() const {
    Eigen::Vector3d sum = Eigen::Vector3d::Zero();
    if (points.empty()) return sum;
    for (const auto& p : points) sum += p;
    return sum / static_cast<double>(points.size());
}

bool PointCloud::all_finite() const {
    for (const auto& p : points) {
        if (!p.allFinite()) return false;
    }
    return true;
}

PointCloud centered(const PointCloud& cloud) {
    const Eigen::Vector3d c = cloud.centroid();
    PointCloud out;
    out.points.reserve(cloud.points.size());
    for (const auto& p : cloud.points) out.points.push_back(p - c);
    return out;
}

void CorrespondenceSet::validate(std::int64_t source_size, std::int64_t target_size) const {
    for (const auto& [i, j] : pairs) {
        if (i < 0 || i >= source_size || j < 0 || j >= target_size) {
            throw std::invalid_argument("correspondence index out of bounds");
        }
    }
    if (!distances.empty() && distances.size() != pairs.size()) {
        throw std::invalid_argument("correspondence distances must be empty or match pair count");
    }
}

}  // namespace lahreg::geom
