#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

namespace lahreg::ad {

class Tape;

// Dense row-major matrix of doubles; a scalar is 1x1. Copies are shallow and
// share the value buffer. Ops never mutate their inputs.
struct Tensor {
    std::shared_ptr<std::vector<double>> data;
    std::int64_t rows = 0;
    std::int64_t cols = 0;
    Tape* tape = nullptr;
    std::int64_t node = -1;  // -1 when not participating in gradients

    Tensor() = default;

    static Tensor zeros(std::int64_t rows, std::int64_t cols);
    static Tensor full(std::int64_t rows, std::int64_t cols, double value);
    static Tensor from_values(std::int64_t rows, std::int64_t cols, std::vector<double> values);
    static Tensor scalar(double value) { return full(1, 1, value); }

    std::int64_t numel() const { return rows * cols; }
    double* ptr() { return data->data(); }
    const double* ptr() const { return data->data(); }
    double& at(std::int64_t r, std::int64_t c) {
        return (*data)[static_cast<std::size_t>(r * cols + c)];
    }
    double at(std::int64_t r, std::int64_t c) const {
        return (*data)[static_cast<std::size_t>(r * cols + c)];
    }
    double value() const {
        if (numel() != 1) throw std::invalid_argument("Tensor::value: not a scalar");
        return (*data)[0];
    }
    bool all_finite() const;
    bool tracked() const { return tape != nullptr && node >= 0; }

    // Forget any tape association. The value buffer is kept; call this before
    // re-watching a parameter on the next step's tape.
    void detach() {
        tape = nullptr;
        node = -1;
    }
};

// Reverse-mode tape. Nodes are recorded in execution order; backward() walks
// them in reverse, which is a reverse topological order by construction. One
// tape is single-writer; use a fresh tape per forward/backward pass.
class Tape {
  public:
    using Backprop = std::function<void(Tape&)>;

    // Registers a node with a gradient slot of the given element count.
    // Returns the node id. fn may be empty (leaves).
    std::int64_t record(std::int64_t numel, Backprop fn);

    // Marks a tensor as a gradient-participating leaf on this tape.
    void watch(Tensor& t);

    // Seeds d(loss)/d(loss) = 1 and accumulates gradients into every node
    // recorded before the loss. The loss must be a tracked 1x1 tensor.
    void backward(const Tensor& loss);

    // Gradient slot access; grad() requires a tracked tensor.
    std::vector<double>& slot(std::int64_t node) { return grads_[static_cast<std::size_t>(node)]; }
    const std::vector<double>& grad(const Tensor& t) const;

    std::int64_t size() const { return static_cast<std::int64_t>(nodes_.size()); }

  private:
    struct Node {
        std::int64_t numel;
        Backprop backward;
    };
    std::vector<Node> nodes_;
    std::vector<std::vector<double>> grads_;
};

}  // namespace lahreg::ad
