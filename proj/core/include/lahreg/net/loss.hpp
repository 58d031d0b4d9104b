#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lahreg/ad/tensor.hpp"
#include "lahreg/geom/point_cloud.hpp"
#include "lahreg/geom/rigid_transform.hpp"
#include "lahreg/net/config.hpp"

namespace lahreg::net {

// Raised when a pair does not have enough aligned points to sample positives.
struct NoOverlapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One training pair: ground-truth aligned clouds, sampled positive matches,
// and per-anchor negative candidate indices (source anchors draw candidates
// from the target cloud and vice versa).
struct PairBatch {
    geom::PointCloud source, target;
    geom::RigidTransform gt;
    std::vector<std::pair<std::int64_t, std::int64_t>> positives;
    std::vector<std::vector<std::int64_t>> negatives_source;  // per positive, indices into target
    std::vector<std::vector<std::int64_t>> negatives_target;  // per positive, indices into source
};

// Samples n_pos positives uniformly among cross-cloud pairs within tau_pos
// under the ground-truth transform, then per anchor n_neg negatives uniformly
// among points farther than tau_pos from the anchor's true location.
// Deterministic per seed. Throws NoOverlapError when fewer than n_pos
// candidate matches exist.
PairBatch sample_pairs(const geom::PointCloud& source, const geom::PointCloud& target,
                       const geom::RigidTransform& gt, double tau_pos, std::int64_t n_pos,
                       std::int64_t n_neg, std::uint64_t seed);

// Hardest-contrastive objective over descriptor rows: mean squared hinge on
// positive distances past the positive margin, plus for each anchor the
// squared hinge on the margin minus its hardest (minimum) negative distance,
// divided by that anchor's candidate count and weighted by negative_weight.
ad::Tensor hardest_contrastive_loss(const ad::Tensor& descriptors_p, const ad::Tensor& descriptors_q,
                                    const PairBatch& batch, const LossConfig& config = {});

}  // namespace lahreg::net
