#pragma once

// Plain-double reference implementation of the pre-norm attention block,
// written without the tensor library so the two can cross-check each other.

#include <cmath>
#include <cstdint>
#include <vector>

#include "lahreg/attn/params.hpp"

namespace refimpl {

using Mat = std::vector<std::vector<double>>;

inline Mat to_mat(const lahreg::ad::Tensor& t) {
    Mat m(static_cast<std::size_t>(t.rows),
          std::vector<double>(static_cast<std::size_t>(t.cols)));
    for (std::int64_t r = 0; r < t.rows; ++r) {
        for (std::int64_t c = 0; c < t.cols; ++c) {
            m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = t.at(r, c);
        }
    }
    return m;
}

inline Mat layer_norm(const Mat& x, const Mat& gain, const Mat& bias, double eps = 1e-5) {
    Mat y = x;
    const std::size_t cols = x[0].size();
    for (std::size_t r = 0; r < x.size(); ++r) {
        double m = 0.0;
        for (double v : x[r]) m += v;
        m /= static_cast<double>(cols);
        double var = 0.0;
        for (double v : x[r]) var += (v - m) * (v - m);
        var /= static_cast<double>(cols);
        const double inv = 1.0 / std::sqrt(var + eps);
        for (std::size_t c = 0; c < cols; ++c) {
            y[r][c] = gain[0][c] * (x[r][c] - m) * inv + bias[0][c];
        }
    }
    return y;
}

inline Mat linear(const Mat& x, const Mat& w, const Mat& b) {
    const std::size_t rows = x.size(), inner = w.size(), cols = w[0].size();
    Mat y(rows, std::vector<double>(cols, 0.0));
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            double acc = b[0][c];
            for (std::size_t k = 0; k < inner; ++k) acc += x[r][k] * w[k][c];
            y[r][c] = acc;
        }
    }
    return y;
}

inline Mat add(const Mat& a, const Mat& b) {
    Mat y = a;
    for (std::size_t r = 0; r < a.size(); ++r) {
        for (std::size_t c = 0; c < a[r].size(); ++c) y[r][c] += b[r][c];
    }
    return y;
}

inline Mat attention_block(const Mat& queries, const Mat& keyvals,
                           const lahreg::attn::AttentionParams& p, std::int64_t heads,
                           std::int64_t head_dim) {
    const Mat g1 = to_mat(p.ln1_gain), c1 = to_mat(p.ln1_bias);
    const Mat nq = layer_norm(queries, g1, c1);
    const Mat nkv = layer_norm(keyvals, g1, c1);
    const Mat q = linear(nq, to_mat(p.wq), to_mat(p.bq));
    const Mat k = linear(nkv, to_mat(p.wk), to_mat(p.bk));
    const Mat v = linear(nkv, to_mat(p.wv), to_mat(p.bv));

    const std::size_t mq = queries.size(), mk = keyvals.size();
    const auto d = static_cast<std::size_t>(head_dim);
    Mat merged(mq, std::vector<double>(static_cast<std::size_t>(heads * head_dim), 0.0));
    for (std::int64_t h = 0; h < heads; ++h) {
        const std::size_t off = static_cast<std::size_t>(h) * d;
        for (std::size_t i = 0; i < mq; ++i) {
            std::vector<double> logits(mk, 0.0);
            double hi = -1e300;
            for (std::size_t j = 0; j < mk; ++j) {
                double acc = 0.0;
                for (std::size_t c = 0; c < d; ++c) acc += q[i][off + c] * k[j][off + c];
                logits[j] = acc / std::sqrt(static_cast<double>(head_dim));
                hi = std::max(hi, logits[j]);
            }
            double total = 0.0;
            for (std::size_t j = 0; j < mk; ++j) {
                logits[j] = std::exp(logits[j] - hi);
                total += logits[j];
            }
            for (std::size_t c = 0; c < d; ++c) {
                double acc = 0.0;
                for (std::size_t j = 0; j < mk; ++j) acc += logits[j] / total * v[j][off + c];
                merged[i][off + c] = acc;
            }
        }
    }

    const Mat o = add(queries, linear(merged, to_mat(p.wo), to_mat(p.bo)));
    const Mat no = layer_norm(o, to_mat(p.ln2_gain), to_mat(p.ln2_bias));
    Mat hidden = linear(no, to_mat(p.ffn_w1), to_mat(p.ffn_b1));
    for (auto& row : hidden) {
        for (double& x : row) x = std::max(0.0, x);
    }
    return add(o, linear(hidden, to_mat(p.ffn_w2), to_mat(p.ffn_b2)));
}

}  // namespace refimpl
