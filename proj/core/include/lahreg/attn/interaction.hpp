#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "lahreg/attn/group.hpp"

namespace lahreg::attn {

// Row i = L2-normalized channel-wise max over window i's rows.
ad::Tensor window_global_descriptors(const std::vector<ad::Tensor>& windows);

// Pairwise descriptor similarity, n_p x n_q. With L2-normalized inputs every
// entry is a cosine in [-1, 1].
ad::Tensor overlap_matrix(const ad::Tensor& g_p, const ad::Tensor& g_q);

// Union of per-row and per-column argmax pairs, deduplicated and sorted;
// argmax ties resolve to the lowest index.
std::vector<std::pair<std::int64_t, std::int64_t>> match_windows(const ad::Tensor& overlap);

// Bidirectional cross-attention between matched windows of the two sides.
// Every matched window cross-attends to the concatenation of all its matched
// partners' pre-update rows; both directions read pre-update features, so the
// update order is immaterial. Unmatched windows pass through unchanged.
std::pair<ad::Tensor, ad::Tensor> interaction_transformer(
    const ad::Tensor& features_p, const lsh::WindowPartition& part_p,
    const ad::Tensor& features_q, const lsh::WindowPartition& part_q,
    const AttentionConfig& config, const AttentionParams& params);

}  // namespace lahreg::attn
