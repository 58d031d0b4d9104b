#pragma once

#include <functional>

#include "lahreg/ad/tensor.hpp"

namespace lahreg::ad {

// Scalar-valued function of one tensor; the tensor is already watched on the
// provided tape when called. Must be deterministic across calls.
using ScalarFn = std::function<Tensor(Tape&, Tensor&)>;

// Compares analytic gradients with central finite differences at the given
// step. Returns max over coordinates of
//   |analytic - central| / max(1e-8, |central|).
double finite_diff_check(const ScalarFn& f, const Tensor& x, double epsilon = 1e-6);

}  // namespace lahreg::ad
