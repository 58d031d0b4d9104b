#pragma once

#include <cstdint>
#include <vector>

#include "lahreg/geom/point_cloud.hpp"
#include "lahreg/geom/rigid_transform.hpp"

namespace lahreg::reg {

// Evaluation thresholds: tau1 bounds the residual of an inlier
// correspondence, tau2 is the inlier-ratio level a pair must reach to count
// as matched, and the rr_* bounds define a successful registration.
struct MetricThresholds {
    double tau1 = 0.10;        // meters
    double tau2 = 0.05;        // fraction
    double rr_rre_max = 5.0;   // degrees
    double rr_rte_max = 0.10;  // meters

    void validate() const;
};

// Fraction of correspondences whose ground-truth residual is within tau1.
double inlier_ratio(const geom::CorrespondenceSet& matches, const geom::PointCloud& source,
                    const geom::PointCloud& target, const geom::RigidTransform& gt, double tau1);

// Fraction of pairs whose inlier ratio reaches tau2.
double fmr(const std::vector<double>& inlier_ratios, double tau2);

// Relative rotation error in degrees: arccos((trace(R_est^T R_gt) - 1) / 2),
// argument clamped to [-1, 1]. Both arguments must be rotations.
double rre(const Eigen::Matrix3d& rotation_est, const Eigen::Matrix3d& rotation_gt);

// Relative translation error in meters.
double rte(const Eigen::Vector3d& translation_est, const Eigen::Vector3d& translation_gt);

}  // namespace lahreg::reg
