#include "lahreg/attn/group.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lahreg/lsh/gather.hpp"

namespace lahreg::attn {

ad::Tensor attention_block(const ad::Tensor& queries, const ad::Tensor& keyvals,
                           const AttentionParams& params, std::int64_t heads,
                           std::int64_t head_dim) {
    const std::int64_t width = heads * head_dim;
    if (queries.cols != width || keyvals.cols != width) {
        throw std::invalid_argument("attention_block: feature width must equal heads * head_dim");
    }
    if (params.width() != width) {
        throw std::invalid_argument("attention_block: parameter width mismatch");
    }

    const bool self = queries.data == keyvals.data && queries.node == keyvals.node;
    ad::Tensor nq = ad::layer_norm_rows(queries, params.ln1_gain, params.ln1_bias);
    ad::Tensor nkv = self ? nq : ad::layer_norm_rows(keyvals, params.ln1_gain, params.ln1_bias);

    ad::Tensor q = ad::linear(nq, params.wq, params.bq);
    ad::Tensor k = ad::linear(nkv, params.wk, params.bk);
    ad::Tensor v = ad::linear(nkv, params.wv, params.bv);

    const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(head_dim));
    std::vector<ad::Tensor> head_outputs;
    head_outputs.reserve(static_cast<std::size_t>(heads));
    for (std::int64_t h = 0; h < heads; ++h) {
        const std::int64_t lo = h * head_dim, hi = (h + 1) * head_dim;
        ad::Tensor qh = ad::slice_cols(q, lo, hi);
        ad::Tensor kh = ad::slice_cols(k, lo, hi);
        ad::Tensor vh = ad::slice_cols(v, lo, hi);
        ad::Tensor weights =
            ad::softmax_rows(ad::scale(ad::matmul(qh, ad::transpose(kh)), inv_sqrt_d));
        head_outputs.push_back(ad::matmul(weights, vh));
    }
    ad::Tensor merged = ad::concat_cols(head_outputs);
    ad::Tensor o = ad::add(queries, ad::linear(merged, params.wo, params.bo));

    ad::Tensor no = ad::layer_norm_rows(o, params.ln2_gain, params.ln2_bias);
    ad::Tensor hidden = ad::relu(ad::linear(no, params.ffn_w1, params.ffn_b1));
    return ad::add(o, ad::linear(hidden, params.ffn_w2, params.ffn_b2));
}

ad::Tensor mhsa_block(const ad::Tensor& window, const AttentionParams& params, std::int64_t heads,
                      std::int64_t head_dim) {
    return attention_block(window, window, params, heads, head_dim);
}

std::vector<std::vector<std::int64_t>> cross_window_sample(std::int64_t n_windows,
                                                           std::int64_t cross_window_count,
                                                           std::uint64_t seed) {
    if (n_windows < 1) throw std::invalid_argument("cross_window_sample: need >= 1 window");
    if (cross_window_count < 0) {
        throw std::invalid_argument("cross_window_sample: negative sample count");
    }
    const std::int64_t take = std::min(cross_window_count, n_windows - 1);
    std::vector<std::vector<std::int64_t>> out(static_cast<std::size_t>(n_windows));
    for (std::int64_t w = 0; w < n_windows; ++w) {
        auto& picks = out[static_cast<std::size_t>(w)];
        if (take == 0) continue;
        util::Rng rng(util::derive_seed(seed, static_cast<std::uint64_t>(w)));
        while (static_cast<std::int64_t>(picks.size()) < take) {
            auto cand =
                static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(n_windows - 1)));
            if (cand >= w) ++cand;
            if (std::find(picks.begin(), picks.end(), cand) == picks.end()) {
                picks.push_back(cand);
            }
        }
    }
    return out;
}

ad::Tensor group_transformer(const ad::Tensor& features, const lsh::WindowPartition& part,
                             const AttentionConfig& config, const AttentionParams& params,
                             const std::vector<std::vector<std::int64_t>>* samples_override) {
    config.validate();
    if (features.rows != part.total()) {
        throw std::invalid_argument("group_transformer: feature rows do not match partition");
    }
    if (features.cols != config.width()) {
        throw std::invalid_argument("group_transformer: feature width mismatch");
    }
    if (part.window_size != config.window_points) {
        throw std::invalid_argument("group_transformer: partition window size mismatch");
    }

    const std::int64_t n = part.window_count();
    std::vector<std::vector<std::int64_t>> samples;
    if (samples_override != nullptr) {
        if (static_cast<std::int64_t>(samples_override->size()) != n) {
            throw std::invalid_argument("group_transformer: bad sample list length");
        }
        for (std::int64_t w = 0; w < n; ++w) {
            for (std::int64_t s : (*samples_override)[static_cast<std::size_t>(w)]) {
                if (s < 0 || s >= n || s == w) {
                    throw std::invalid_argument("group_transformer: bad sample window id");
                }
            }
        }
        samples = *samples_override;
    } else {
        samples = cross_window_sample(n, config.cross_window_count, config.seed);
    }

    std::vector<ad::Tensor> windows = lsh::gather_windows(features, part);
    std::vector<ad::Tensor> outputs;
    outputs.reserve(windows.size());
    for (std::int64_t w = 0; w < n; ++w) {
        const auto& extra = samples[static_cast<std::size_t>(w)];
        if (extra.empty()) {
            outputs.push_back(mhsa_block(windows[static_cast<std::size_t>(w)], params,
                                         config.heads, config.head_dim));
            continue;
        }
        std::vector<ad::Tensor> kv_parts;
        kv_parts.reserve(extra.size() + 1);
        kv_parts.push_back(windows[static_cast<std::size_t>(w)]);
        for (std::int64_t s : extra) kv_parts.push_back(windows[static_cast<std::size_t>(s)]);
        ad::Tensor kv = ad::concat_rows(kv_parts);
        outputs.push_back(attention_block(windows[static_cast<std::size_t>(w)], kv, params,
                                          config.heads, config.head_dim));
    }
    return lsh::unpartition(outputs, part);
}

}  // namespace lahreg::attn
