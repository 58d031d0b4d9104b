#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "lahreg/ad/tensor.hpp"
#include "lahreg/util/rng.hpp"

namespace lahreg::attn {

struct AttentionConfig {
    std::int64_t heads = 1;
    std::int64_t head_dim = 1;
    std::int64_t window_points = 1;        // M
    std::int64_t cross_window_count = 0;   // CWN
    std::uint64_t seed = 0;

    std::int64_t width() const { return heads * head_dim; }
    void validate() const;
};

// Parameters of one pre-norm attention block: LN -> multi-head attention ->
// residual, then LN -> FFN (hidden width 4C) -> residual.
struct AttentionParams {
    ad::Tensor ln1_gain, ln1_bias;
    ad::Tensor wq, bq, wk, bk, wv, bv;
    ad::Tensor wo, bo;
    ad::Tensor ln2_gain, ln2_bias;
    ad::Tensor ffn_w1, ffn_b1, ffn_w2, ffn_b2;

    std::int64_t width() const { return wq.rows; }

    // Stable-order traversal used for watching, checkpoints, and the
    // optimizer state keys.
    void visit(const std::string& prefix,
               const std::function<void(const std::string&, ad::Tensor&)>& fn);
};

// Gains start at one, biases at zero, projections at N(0, 1/sqrt(fan_in)).
AttentionParams init_attention_params(std::int64_t width, util::Rng& rng);

}  // namespace lahreg::attn
