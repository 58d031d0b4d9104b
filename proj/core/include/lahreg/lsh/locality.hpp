#pragma once

#include <cstdint>
#include <vector>

#include "lahreg/geom/point_cloud.hpp"

namespace lahreg::lsh {

struct LocalityScore {
    double intra = 0.0;  // mean distance over same-window point pairs
    double inter = 0.0;  // mean distance over cross-window point pairs
};

// Brute-force means over the intra- and inter-window pair sets, measured in
// the original Euclidean space. Each set larger than max_pairs is estimated
// from max_pairs uniformly sampled pairs with a fixed internal seed;
// max_pairs = 0 forces the exact computation on both sets.
LocalityScore locality_score(const geom::PointCloud& cloud,
                             const std::vector<std::int64_t>& window_of,
                             std::int64_t max_pairs = 1'000'000);

}  // namespace lahreg::lsh
