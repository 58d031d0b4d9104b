#include "lahreg/net/loss.hpp"

#include <string>

#include "lahreg/ad/ops.hpp"
#include "lahreg/util/rng.hpp"

namespace lahreg::net {
namespace {

// Uniform sample of `take` distinct entries via partial Fisher-Yates shuffle.
std::vector<std::int64_t> sample_distinct(std::vector<std::int64_t> pool, std::int64_t take,
                                          util::Rng& rng) {
    const auto n = static_cast<std::int64_t>(pool.size());
    for (std::int64_t i = 0; i < take; ++i) {
        const std::int64_t j = i + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(n - i)));
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    pool.resize(static_cast<std::size_t>(take));
    return pool;
}

std::vector<std::int64_t> negative_pool(const Eigen::Vector3d& anchor_true,
                                        const geom::PointCloud& candidates, double tau_pos) {
    std::vector<std::int64_t> pool;
    for (std::int64_t k = 0; k < candidates.size(); ++k) {
        if ((candidates[k] - anchor_true).norm() > tau_pos) pool.push_back(k);
    }
    return pool;
}

}  // namespace

PairBatch sample_pairs(const geom::PointCloud& source, const geom::PointCloud& target,
                       const geom::RigidTransform& gt, double tau_pos, std::int64_t n_pos,
                       std::int64_t n_neg, std::uint64_t seed) {
    if (source.empty() || target.empty()) {
        throw std::invalid_argument("sample_pairs: clouds must be non-empty");
    }
    if (!(tau_pos > 0.0)) throw std::invalid_argument("sample_pairs: tau_pos must be positive");
    if (n_pos < 1 || n_neg < 1) {
        throw std::invalid_argument("sample_pairs: n_pos and n_neg must be positive");
    }

    const geom::PointCloud aligned = geom::apply_transform(gt, source);

    std::vector<std::pair<std::int64_t, std::int64_t>> candidates;
    const double tau2 = tau_pos * tau_pos;
    for (std::int64_t i = 0; i < aligned.size(); ++i) {
        for (std::int64_t j = 0; j < target.size(); ++j) {
            if ((aligned[i] - target[j]).squaredNorm() <= tau2) candidates.emplace_back(i, j);
        }
    }
    if (static_cast<std::int64_t>(candidates.size()) < n_pos) {
        throw NoOverlapError("sample_pairs: only " + std::to_string(candidates.size()) +
                             " matches within tau_pos, need " + std::to_string(n_pos));
    }

    util::Rng rng(util::derive_seed(seed, "pair_batch"));
    std::vector<std::int64_t> order(candidates.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<std::int64_t>(i);
    order = sample_distinct(std::move(order), n_pos, rng);

    PairBatch batch;
    batch.source = source;
    batch.target = target;
    batch.gt = gt;
    batch.positives.reserve(static_cast<std::size_t>(n_pos));
    for (std::int64_t idx : order) batch.positives.push_back(candidates[static_cast<std::size_t>(idx)]);

    batch.negatives_source.reserve(batch.positives.size());
    batch.negatives_target.reserve(batch.positives.size());
    for (const auto& [i, j] : batch.positives) {
        std::vector<std::int64_t> pool_t = negative_pool(aligned[i], target, tau_pos);
        if (static_cast<std::int64_t>(pool_t.size()) < n_neg) {
            throw std::invalid_argument("sample_pairs: only " + std::to_string(pool_t.size()) +
                                        " negative candidates in target, need " +
                                        std::to_string(n_neg));
        }
        batch.negatives_source.push_back(sample_distinct(std::move(pool_t), n_neg, rng));

        // The target anchor's true location is the anchor itself; exclude the
        // source points that land within tau_pos of it.
        std::vector<std::int64_t> pool_s = negative_pool(target[j], aligned, tau_pos);
        if (static_cast<std::int64_t>(pool_s.size()) < n_neg) {
            throw std::invalid_argument("sample_pairs: only " + std::to_string(pool_s.size()) +
                                        " negative candidates in source, need " +
                                        std::to_string(n_neg));
        }
        batch.negatives_target.push_back(sample_distinct(std::move(pool_s), n_neg, rng));
    }
    return batch;
}

namespace {

// Row-wise Euclidean distances between gathered anchor and candidate rows.
ad::Tensor pair_distances(const ad::Tensor& anchors_desc, const ad::Tensor& cands_desc,
                          std::vector<std::int64_t> anchor_rows,
                          std::vector<std::int64_t> cand_rows) {
    ad::Tensor a = ad::gather_rows(anchors_desc, std::move(anchor_rows));
    ad::Tensor b = ad::gather_rows(cands_desc, std::move(cand_rows));
    return ad::sqrt_elem(ad::sum_rows(ad::square(ad::sub(a, b))));
}

// Sum over anchors of [margin - min_k D]_+^2 / |candidates(anchor)|.
ad::Tensor hardest_negative_term(const ad::Tensor& anchors_desc, const ad::Tensor& cands_desc,
                                 const std::vector<std::int64_t>& anchor_idx,
                                 const std::vector<std::vector<std::int64_t>>& candidate_sets,
                                 double margin) {
    const auto n_anchors = static_cast<std::int64_t>(anchor_idx.size());
    std::vector<std::int64_t> rep, flat, seg;
    ad::Tensor inv_counts = ad::Tensor::zeros(n_anchors, 1);
    for (std::int64_t a = 0; a < n_anchors; ++a) {
        const auto& cands = candidate_sets[static_cast<std::size_t>(a)];
        for (std::int64_t k : cands) {
            rep.push_back(anchor_idx[static_cast<std::size_t>(a)]);
            flat.push_back(k);
            seg.push_back(a);
        }
        inv_counts.at(a, 0) = 1.0 / static_cast<double>(cands.size());
    }
    ad::Tensor d = pair_distances(anchors_desc, cands_desc, std::move(rep), std::move(flat));
    ad::Tensor min_d = ad::scale(ad::segment_max_rows(ad::scale(d, -1.0), seg, n_anchors), -1.0);
    ad::Tensor hinge = ad::relu(ad::shift(ad::scale(min_d, -1.0), margin));
    return ad::sum(ad::mul(ad::square(hinge), inv_counts));
}

}  // namespace

ad::Tensor hardest_contrastive_loss(const ad::Tensor& descriptors_p,
                                    const ad::Tensor& descriptors_q, const PairBatch& batch,
                                    const LossConfig& config) {
    if (batch.positives.empty()) {
        throw std::invalid_argument("hardest_contrastive_loss: empty positive set");
    }
    if (batch.negatives_source.size() != batch.positives.size() ||
        batch.negatives_target.size() != batch.positives.size()) {
        throw std::invalid_argument(
            "hardest_contrastive_loss: one negative candidate set per positive required");
    }
    if (descriptors_p.cols != descriptors_q.cols) {
        throw std::invalid_argument("hardest_contrastive_loss: descriptor widths differ");
    }

    std::vector<std::int64_t> ai, aj;
    ai.reserve(batch.positives.size());
    aj.reserve(batch.positives.size());
    for (const auto& [i, j] : batch.positives) {
        if (i < 0 || i >= descriptors_p.rows || j < 0 || j >= descriptors_q.rows) {
            throw std::invalid_argument("hardest_contrastive_loss: positive index out of range");
        }
        ai.push_back(i);
        aj.push_back(j);
    }
    for (const auto& sets : {&batch.negatives_source, &batch.negatives_target}) {
        const std::int64_t bound =
            sets == &batch.negatives_source ? descriptors_q.rows : descriptors_p.rows;
        for (const auto& cands : *sets) {
            if (cands.empty()) {
                throw std::invalid_argument(
                    "hardest_contrastive_loss: empty negative candidate set");
            }
            for (std::int64_t k : cands) {
                if (k < 0 || k >= bound) {
                    throw std::invalid_argument(
                        "hardest_contrastive_loss: negative index out of range");
                }
            }
        }
    }

    ad::Tensor d_pos = pair_distances(descriptors_p, descriptors_q, ai, aj);
    ad::Tensor positive =
        ad::mean(ad::square(ad::relu(ad::shift(d_pos, -config.positive_margin))));

    ad::Tensor neg_p = hardest_negative_term(descriptors_p, descriptors_q, ai,
                                             batch.negatives_source, config.negative_margin);
    ad::Tensor neg_q = hardest_negative_term(descriptors_q, descriptors_p, aj,
                                             batch.negatives_target, config.negative_margin);

    return ad::add(positive, ad::scale(ad::add(neg_p, neg_q), config.negative_weight));
}

}  // namespace lahreg::net
