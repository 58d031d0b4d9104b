#pragma once

#include <cstdint>
#include <vector>

#include "lahreg/geom/point_cloud.hpp"
#include "lahreg/geom/rigid_transform.hpp"

namespace lahreg::reg {

struct RansacResult {
    geom::RigidTransform transform;
    std::vector<bool> inliers;      // one flag per correspondence
    std::int64_t inlier_count = 0;  // under the returned transform
    bool success = false;           // false when no hypothesis had any inlier
};

// Hypothesize-and-verify: each iteration fits a transform to three distinct
// correspondences and scores it by inliers within the threshold; the best
// hypothesis (ties to the earliest iteration) is refit once on its inliers
// when at least three exist. Iteration RNG streams are derived from
// (seed, iteration), so the result is schedule independent.
RansacResult ransac(const geom::CorrespondenceSet& matches, const geom::PointCloud& source,
                    const geom::PointCloud& target, std::int64_t iterations,
                    double inlier_threshold, std::uint64_t seed);

}  // namespace lahreg::reg
