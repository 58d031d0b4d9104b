#include "lahreg/attn/params.hpp"

#include <cmath>
#include <stdexcept>

namespace lahreg::attn {

void AttentionConfig::validate() const {
    if (heads < 1) throw std::invalid_argument("AttentionConfig: heads must be >= 1");
    if (head_dim < 1) throw std::invalid_argument("AttentionConfig: head_dim must be >= 1");
    if (window_points < 1) {
        throw std::invalid_argument("AttentionConfig: window_points must be >= 1");
    }
    if (cross_window_count < 0) {
        throw std::invalid_argument("AttentionConfig: cross_window_count must be >= 0");
    }
}

void AttentionParams::visit(const std::string& prefix,
                            const std::function<void(const std::string&, ad::Tensor&)>& fn) {
    fn(prefix + ".ln1.gain", ln1_gain);
    fn(prefix + ".ln1.bias", ln1_bias);
    fn(prefix + ".q.w", wq);
    fn(prefix + ".q.b", bq);
    fn(prefix + ".k.w", wk);
    fn(prefix + ".k.b", bk);
    fn(prefix + ".v.w", wv);
    fn(prefix + ".v.b", bv);
    fn(prefix + ".out.w", wo);
    fn(prefix + ".out.b", bo);
    fn(prefix + ".ln2.gain", ln2_gain);
    fn(prefix + ".ln2.bias", ln2_bias);
    fn(prefix + ".ffn1.w", ffn_w1);
    fn(prefix + ".ffn1.b", ffn_b1);
    fn(prefix + ".ffn2.w", ffn_w2);
    fn(prefix + ".ffn2.b", ffn_b2);
}

namespace {

ad::Tensor gaussian_matrix(std::int64_t rows, std::int64_t cols, double stddev, util::Rng& rng) {
    ad::Tensor t = ad::Tensor::zeros(rows, cols);
    for (auto& v : *t.data) v = rng.gaussian() * stddev;
    return t;
}

}  // namespace

AttentionParams init_attention_params(std::int64_t width, util::Rng& rng) {
    if (width < 1) throw std::invalid_argument("init_attention_params: width must be >= 1");
    const std::int64_t hidden = 4 * width;
    const double s_in = 1.0 / std::sqrt(static_cast<double>(width));
    const double s_hidden = 1.0 / std::sqrt(static_cast<double>(hidden));

    AttentionParams p;
    p.ln1_gain = ad::Tensor::full(1, width, 1.0);
    p.ln1_bias = ad::Tensor::zeros(1, width);
    p.wq = gaussian_matrix(width, width, s_in, rng);
    p.bq = ad::Tensor::zeros(1, width);
    p.wk = gaussian_matrix(width, width, s_in, rng);
    p.bk = ad::Tensor::zeros(1, width);
    p.wv = gaussian_matrix(width, width, s_in, rng);
    p.bv = ad::Tensor::zeros(1, width);
    p.wo = gaussian_matrix(width, width, s_in, rng);
    p.bo = ad::Tensor::zeros(1, width);
    p.ln2_gain = ad::Tensor::full(1, width, 1.0);
    p.ln2_bias = ad::Tensor::zeros(1, width);
    p.ffn_w1 = gaussian_matrix(width, hidden, s_in, rng);
    p.ffn_b1 = ad::Tensor::zeros(1, hidden);
    p.ffn_w2 = gaussian_matrix(hidden, width, s_hidden, rng);
    p.ffn_b2 = ad::Tensor::zeros(1, width);
    return p;
}

}  // namespace lahreg::attn
