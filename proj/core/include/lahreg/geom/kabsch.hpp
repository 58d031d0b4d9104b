#pragma once

#include <vector>

#include "lahreg/geom/point_cloud.hpp"
#include "lahreg/geom/rigid_transform.hpp"

namespace lahreg::geom {

// Closed-form weighted least-squares rigid alignment: returns the transform
// minimizing sum_i w_i * ||R*src_i + t - dst_i||^2 via SVD of the weighted
// cross-covariance, with the standard sign flip of the smallest singular
// direction so the rotation stays in SO(3).
//
// Weights default to uniform when empty. A single correspondence yields
// rotation = identity and translation = dst[0] - src[0].
//
// Throws std::invalid_argument on length mismatch, empty input, negative
// weights, or a non-positive weight sum.
RigidTransform kabsch(const PointCloud& src, const PointCloud& dst,
                      const std::vector<double>& weights = {});

}  // namespace lahreg::geom
