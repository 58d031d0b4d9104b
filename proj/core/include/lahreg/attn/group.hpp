#pragma once

#include <cstdint>
#include <vector>

#include "lahreg/ad/ops.hpp"
#include "lahreg/attn/params.hpp"
#include "lahreg/lsh/partition.hpp"

namespace lahreg::attn {

// Pre-norm residual attention over explicit query and key/value row sets:
//   O = Fq + MHA(LN(Fq) -> Q, LN(Fkv) -> K,V);  X = O + FFN(LN(O)).
// Self-attention is the queries == keyvals case.
ad::Tensor attention_block(const ad::Tensor& queries, const ad::Tensor& keyvals,
                           const AttentionParams& params, std::int64_t heads,
                           std::int64_t head_dim);

ad::Tensor mhsa_block(const ad::Tensor& window, const AttentionParams& params, std::int64_t heads,
                      std::int64_t head_dim);

// For each of n windows, cross_window_count distinct other windows sampled
// uniformly without replacement (all other windows when fewer exist).
// Deterministic per seed; each window draws from an independent substream.
std::vector<std::vector<std::int64_t>> cross_window_sample(std::int64_t n_windows,
                                                           std::int64_t cross_window_count,
                                                           std::uint64_t seed);

// Windowed self-attention where each window's K/V rows are augmented with the
// rows of its sampled peer windows. Results return to original point order.
// samples_override, when given, replaces the seeded sampler (used to pin down
// receptive-field behavior in tests).
ad::Tensor group_transformer(const ad::Tensor& features, const lsh::WindowPartition& part,
                             const AttentionConfig& config, const AttentionParams& params,
                             const std::vector<std::vector<std::int64_t>>* samples_override =
                                 nullptr);

}  // namespace lahreg::attn
