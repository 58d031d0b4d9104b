#pragma once

#include <Eigen/Core>

#include <cstdint>

#include "lahreg/geom/point_cloud.hpp"

namespace lahreg::geom {

// Proper rigid motion: rotation R in SO(3) plus translation t, mapping
// p -> R*p + t.
struct RigidTransform {
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Eigen::Vector3d translation = Eigen::Vector3d::Zero();

    static RigidTransform identity() { return {}; }

    Eigen::Vector3d operator()(const Eigen::Vector3d& p) const {
        return rotation * p + translation;
    }
};

// True when r is orthonormal with det +1, both within tol.
bool is_rotation(const Eigen::Matrix3d& r, double tol = 1e-9);

PointCloud apply_transform(const RigidTransform& t, const PointCloud& cloud);

// apply(compose(a, b), p) == apply(a, apply(b, p)).
RigidTransform compose(const RigidTransform& a, const RigidTransform& b);

RigidTransform invert(const RigidTransform& t);

// Uniform sample from SO(3), deterministic per seed.
Eigen::Matrix3d random_rotation(std::uint64_t seed);

}  // namespace lahreg::geom
