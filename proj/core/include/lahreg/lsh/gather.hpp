#pragma once

#include <vector>

#include "lahreg/ad/ops.hpp"
#include "lahreg/lsh/partition.hpp"

namespace lahreg::lsh {

// Window blocks of a feature matrix, in partition order. Differentiable.
std::vector<ad::Tensor> gather_windows(const ad::Tensor& features, const WindowPartition& part);

// Inverse scatter: unpartition(gather_windows(F, p), p) == F exactly.
ad::Tensor unpartition(const std::vector<ad::Tensor>& windows, const WindowPartition& part);

}  // namespace lahreg::lsh
