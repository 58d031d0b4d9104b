#pragma once

#include <cstdint>

#include "lahreg/ad/tensor.hpp"
#include "lahreg/geom/point_cloud.hpp"

namespace lahreg::reg {

// Samples min(sample_count, N_p) distinct source rows uniformly and matches
// each to its nearest target descriptor by Euclidean distance (lowest index
// on ties). Distances are stored per pair. With mutual = true, a pair is kept
// only if the chosen target row's nearest source row (over all source rows)
// is the sampled one. Deterministic per seed.
geom::CorrespondenceSet nn_match(const ad::Tensor& descriptors_p, const ad::Tensor& descriptors_q,
                                 std::int64_t sample_count, std::uint64_t seed,
                                 bool mutual = false);

}  // namespace lahreg::reg
