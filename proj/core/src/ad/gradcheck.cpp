#include "lahreg/ad/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lahreg::ad {

namespace {

Tensor deep_copy(const Tensor& t) { return Tensor::from_values(t.rows, t.cols, *t.data); }

double eval_at(const ScalarFn& f, const Tensor& x) {
    Tape tape;
    Tensor xc = deep_copy(x);
    tape.watch(xc);
    Tensor loss = f(tape, xc);
    if (loss.numel() != 1) throw std::invalid_argument("finite_diff_check: f must be scalar");
    return loss.value();
}

}  // namespace

double finite_diff_check(const ScalarFn& f, const Tensor& x, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("finite_diff_check: epsilon must be > 0");

    Tape tape;
    Tensor xc = deep_copy(x);
    tape.watch(xc);
    Tensor loss = f(tape, xc);
    if (loss.numel() != 1) throw std::invalid_argument("finite_diff_check: f must be scalar");
    tape.backward(loss);
    const std::vector<double> analytic = tape.grad(xc);

    double worst = 0.0;
    Tensor probe = deep_copy(x);
    for (std::size_t i = 0; i < probe.data->size(); ++i) {
        const double original = (*probe.data)[i];
        (*probe.data)[i] = original + epsilon;
        const double plus = eval_at(f, probe);
        (*probe.data)[i] = original - epsilon;
        const double minus = eval_at(f, probe);
        (*probe.data)[i] = original;
        const double central = (plus - minus) / (2.0 * epsilon);
        const double err = std::abs(analytic[i] - central) / std::max(1e-8, std::abs(central));
        worst = std::max(worst, err);
    }
    return worst;
}

}  // namespace lahreg::ad
