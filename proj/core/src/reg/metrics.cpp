#include "lahreg/reg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lahreg::reg {

void MetricThresholds::validate() const {
    if (!(tau1 > 0.0)) throw std::invalid_argument("MetricThresholds: tau1 must be positive");
    if (!(tau2 > 0.0) || tau2 > 1.0) {
        throw std::invalid_argument("MetricThresholds: tau2 must lie in (0, 1]");
    }
    if (!(rr_rre_max > 0.0) || !(rr_rte_max > 0.0)) {
        throw std::invalid_argument("MetricThresholds: recall bounds must be positive");
    }
}

double inlier_ratio(const geom::CorrespondenceSet& matches, const geom::PointCloud& source,
                    const geom::PointCloud& target, const geom::RigidTransform& gt, double tau1) {
    if (matches.empty()) throw std::invalid_argument("inlier_ratio: empty correspondence set");
    matches.validate(source.size(), target.size());
    std::int64_t inliers = 0;
    for (const auto& [i, j] : matches.pairs) {
        const Eigen::Vector3d mapped = gt.rotation * source[i] + gt.translation;
        if ((mapped - target[j]).norm() <= tau1) ++inliers;
    }
    return static_cast<double>(inliers) / static_cast<double>(matches.size());
}

double fmr(const std::vector<double>& inlier_ratios, double tau2) {
    if (inlier_ratios.empty()) throw std::invalid_argument("fmr: no pairs");
    std::int64_t hits = 0;
    for (double ir : inlier_ratios) hits += ir >= tau2;
    return static_cast<double>(hits) / static_cast<double>(inlier_ratios.size());
}

double rre(const Eigen::Matrix3d& rotation_est, const Eigen::Matrix3d& rotation_gt) {
    if (!geom::is_rotation(rotation_est) || !geom::is_rotation(rotation_gt)) {
        throw std::invalid_argument("rre: arguments must be rotations");
    }
    const double trace = (rotation_est.transpose() * rotation_gt).trace();
    const double arg = std::clamp((trace - 1.0) / 2.0, -1.0, 1.0);
    return std::acos(arg) * 180.0 / 3.14159265358979323846;
}

double rte(const Eigen::Vector3d& translation_est, const Eigen::Vector3d& translation_gt) {
    return (translation_est - translation_gt).norm();
}

}  // namespace lahreg::reg
