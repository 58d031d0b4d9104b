#include "lahreg/ad/tensor.hpp"

#include <cmath>

namespace lahreg::ad {

Tensor Tensor::zeros(std::int64_t rows, std::int64_t cols) { return full(rows, cols, 0.0); }

Tensor Tensor::full(std::int64_t rows, std::int64_t cols, double value) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("Tensor: dimensions must be positive");
    Tensor t;
    t.rows = rows;
    t.cols = cols;
    t.data = std::make_shared<std::vector<double>>(static_cast<std::size_t>(rows * cols), value);
    return t;
}

Tensor Tensor::from_values(std::int64_t rows, std::int64_t cols, std::vector<double> values) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("Tensor: dimensions must be positive");
    if (static_cast<std::int64_t>(values.size()) != rows * cols) {
        throw std::invalid_argument("Tensor: value count does not match shape");
    }
    Tensor t;
    t.rows = rows;
    t.cols = cols;
    t.data = std::make_shared<std::vector<double>>(std::move(values));
    return t;
}

bool Tensor::all_finite() const {
    for (double v : *data) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

std::int64_t Tape::record(std::int64_t numel, Backprop fn) {
    nodes_.push_back({numel, std::move(fn)});
    grads_.emplace_back(static_cast<std::size_t>(numel), 0.0);
    return static_cast<std::int64_t>(nodes_.size()) - 1;
}

void Tape::watch(Tensor& t) {
    if (t.tape == this && t.node >= 0) return;
    if (t.tape != nullptr && t.tape != this) {
        throw std::invalid_argument("Tape::watch: tensor already tracked by another tape");
    }
    t.tape = this;
    t.node = record(t.numel(), nullptr);
}

void Tape::backward(const Tensor& loss) {
    if (loss.numel() != 1) throw std::invalid_argument("Tape::backward: loss must be scalar");
    if (loss.tape != this || loss.node < 0) {
        throw std::invalid_argument("Tape::backward: loss is not tracked by this tape");
    }
    slot(loss.node)[0] += 1.0;
    for (std::int64_t i = loss.node; i >= 0; --i) {
        auto& fn = nodes_[static_cast<std::size_t>(i)].backward;
        if (fn) fn(*this);
    }
}

const std::vector<double>& Tape::grad(const Tensor& t) const {
    if (t.tape != this || t.node < 0) {
        throw std::invalid_argument("Tape::grad: tensor is not tracked by this tape");
    }
    return grads_[static_cast<std::size_t>(t.node)];
}

}  // namespace lahreg::ad
