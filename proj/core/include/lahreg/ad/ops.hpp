#pragma once

#include <cstdint>
#include <vector>

#include "lahreg/ad/tensor.hpp"

namespace lahreg::ad {

// Elementwise; shapes must match exactly.
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);

Tensor scale(const Tensor& a, double factor);
Tensor shift(const Tensor& a, double offset);

Tensor matmul(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& a);

// x (N x C) * w (C x D) + b (1 x D broadcast over rows).
Tensor linear(const Tensor& x, const Tensor& w, const Tensor& b);

Tensor relu(const Tensor& a);
Tensor square(const Tensor& a);

// Elementwise square root; requires non-negative input. The derivative at
// exactly zero is taken as zero.
Tensor sqrt_elem(const Tensor& a);

// Numerically stable row softmax; every output row sums to 1.
Tensor softmax_rows(const Tensor& a);

// Per-row normalization to zero mean and unit (population) variance with the
// given epsilon, then elementwise gain and bias (both 1 x C).
Tensor layer_norm_rows(const Tensor& x, const Tensor& gain, const Tensor& bias,
                       double epsilon = 1e-5);

Tensor concat_rows(const std::vector<Tensor>& parts);
Tensor concat_cols(const std::vector<Tensor>& parts);
Tensor slice_cols(const Tensor& a, std::int64_t begin, std::int64_t end);

// out[k, :] = a[rows[k], :]. Indices may repeat; backward scatter-adds.
Tensor gather_rows(const Tensor& a, std::vector<std::int64_t> rows);

Tensor sum(const Tensor& a);
Tensor mean(const Tensor& a);
Tensor sum_rows(const Tensor& a);  // N x C -> N x 1

struct PoolResult {
    Tensor values;                     // 1 x C
    std::vector<std::int64_t> argmax;  // winning row per column, first row on ties
};
// Column-wise max over rows. Backward routes each column's gradient to the
// recorded argmax row only.
PoolResult max_pool_rows(const Tensor& a);

// Column-wise max within row segments; segment_of_row maps each row to
// [0, n_segments). Every segment must be non-empty.
Tensor segment_max_rows(const Tensor& a, const std::vector<std::int64_t>& segment_of_row,
                        std::int64_t n_segments);

// Rows scaled to unit Euclidean norm; all-zero rows stay zero (and receive
// zero gradient).
Tensor l2_normalize_rows(const Tensor& a);

}  // namespace lahreg::ad
