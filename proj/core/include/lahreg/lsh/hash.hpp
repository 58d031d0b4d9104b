#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "lahreg/geom/point_cloud.hpp"

namespace lahreg::lsh {

struct HashConfig {
    std::int64_t bins = 64;
    std::int64_t rounds = 4;
    std::uint64_t seed = 0;

    // Throws std::invalid_argument unless bins is even and >= 2 and rounds >= 1.
    void validate() const;
};

// Bank of Gaussian projection directions, one set of bins/2 directions per
// voting round. A point's score vector is the concatenation of its dot
// products with the directions and their negations.
struct ProjectionTensor {
    std::int64_t rounds = 0;
    std::int64_t half_bins = 0;
    std::vector<Eigen::Vector3d> dirs;  // round-major, rounds * half_bins entries

    const Eigen::Vector3d& dir(std::int64_t round, std::int64_t k) const {
        return dirs[static_cast<std::size_t>(round * half_bins + k)];
    }
    std::int64_t bins() const { return 2 * half_bins; }
};

ProjectionTensor sample_projection(const HashConfig& config);

// Row-major point x round table of bin indices.
struct RoundHashes {
    std::int64_t count = 0;
    std::int64_t rounds = 0;
    std::vector<std::int32_t> bins;

    std::int32_t at(std::int64_t point, std::int64_t round) const {
        return bins[static_cast<std::size_t>(point * rounds + round)];
    }
};

// Per point and round, the argmax bin over the 2*(bins/2) signed projection
// scores. Ties resolve to the lowest bin index.
RoundHashes hash_points(const geom::PointCloud& cloud, const ProjectionTensor& proj);

// Modal bin across rounds for each point; ties resolve to the lowest bin.
std::vector<std::int32_t> vote(const RoundHashes& rounds);

}  // namespace lahreg::lsh
