#include "lahreg/ad/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Core>

namespace lahreg::ad {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMat = Eigen::Map<RowMat>;
using CMapMat = Eigen::Map<const RowMat>;

CMapMat cview(const Tensor& t) { return {t.ptr(), t.rows, t.cols}; }
MapMat mview(Tensor& t) { return {t.ptr(), t.rows, t.cols}; }

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

Tape* common_tape(std::initializer_list<const Tensor*> inputs) {
    Tape* tape = nullptr;
    for (const Tensor* t : inputs) {
        if (!t->tracked()) continue;
        if (tape == nullptr) {
            tape = t->tape;
        } else {
            require(tape == t->tape, "ad: inputs tracked by different tapes");
        }
    }
    return tape;
}

std::size_t z(std::int64_t i) { return static_cast<std::size_t>(i); }

}  // namespace

Tensor add(const Tensor& a, const Tensor& b) {
    require(a.rows == b.rows && a.cols == b.cols, "add: shape mismatch");
    Tensor out = Tensor::zeros(a.rows, a.cols);
    const auto n = z(out.numel());
    for (std::size_t i = 0; i < n; ++i) (*out.data)[i] = (*a.data)[i] + (*b.data)[i];
    if (Tape* tape = common_tape({&a, &b})) {
        const std::int64_t out_node = tape->size();
        const std::int64_t an = a.node, bn = b.node;
        out.tape = tape;
        out.node = tape->record(out.numel(), [out_node, an, bn, n](Tape& t) {
            const auto& up = t.slot(out_node);
            if (an >= 0) {
                auto& g = t.slot(an);
                for (std::size_t i = 0; i < n; ++i) g[i] += up[i];
            }
            if (bn >= 0) {
                auto& g = t.slot(bn);
                for (std::size_t i = 0; i < n; ++i) g[i] += up[i];
            }
        });
    }
    return out;
}

Tensor sub(const Tensor& a, const Tensor& b) {
    require(a.rows == b.rows && a.cols == b.cols, "sub: shape mismatch");
    Tensor out = Tensor::zeros(a.rows, a.cols);
    const auto n = z(out.numel());
    for (std::size_t i = 0; i < n; ++i) (*out.data)[i] = (*a.data)[i] - (*b.data)[i];
    if (Tape* tape = common_tape({&a, &b})) {
        const std::int64_t out_node = tape->size();
        const std::int64_t an = a.node, bn = b.node;
        out.tape = tape;
        out.node = tape->record(out.numel(), [out_node, an, bn, n](Tape& t) {
            const auto& up = t.slot(out_node);
            if (an >= 0) {
                auto& g = t.slot(an);
                for (std::size_t i = 0; i < n; ++i) g[i] += up[i];
            }
            if (bn >= 0) {
                auto& g = t.slot(bn);
                for (std::size_t i = 0; i < n; ++i) g[i] -= up[i];
            }
        });
    }
    return out;
}

Tensor mul(const Tensor& a, const Tensor& b) {
    require(a.rows == b.rows && a.cols == b.cols, "mul: shape mismatch");
    Tensor out = Tensor::zeros(a.rows, a.cols);
    const auto n = z(out.numel());
    for (std::size_t i = 0; i < n; ++i) (*out.data)[i] = (*a.data)[i] * (*b.data)[i];
    if (Tape* tape = common_tape({&a, &b})) {
        const std::int64_t out_node = tape->size();
        const Tensor ac = a, bc = b;
        out.tape = tape;
        out.node = tape->record(out.numel(), [out_node, ac, bc, n](Tape& t) {
            const auto& up = t.slot(out_node);
            if (ac.node >= 0) {
                auto& g = t.slot(ac.node);
                for (std::size_t i = 0; i < n; ++i) g[i] += up[i] * (*bc.data)[i];
            }
            if (bc.node >= 0) {
                auto& g = t.slot(bc.node);
                for (std::size_t i = 0; i < n; ++i) g[i] += up[i] * (*ac.data)[i];
            }
        });
    }
    return out;
}

Tensor scale(const Tensor& a, double factor) {
    Tensor out = Tensor::zeros(a.rows, a.cols);
    const auto n = z(out.numel());
    for (std::size_t i = 0; i < n; ++i) (*out.data)[i] = (*a.data)[i] * factor;
    if (Tape* tape = common_tape({&a})) {
        const std::int64_t out_node = tape->size();
        const std::int64_t an = a.node;
        out.tape = tape;
        out.node = tape->record(out.numel(), [out_node, an, factor, n](Tape& t) {
            const auto& up = t.slot(out_node);
            auto& g = t.slot(an);
            for (std::size_t i = 0; i < n; ++i) g[i] += up[i] * factor;
        });
    }
    return out;
}

Tensor shift(const Tensor& a, double offset) {
    Tensor out = Tensor::zeros(a.rows, a.cols);
    const auto n = z(out.numel());
    for (std::size_t i = 0; i < n; ++i) (*out.data)[i] = (*a.data)[i] + offset;
    if (Tape* tape = common_tape({&a})) {
        const std::int64_t out_node = tape->size();
        const std::int64_t an = a.node;
        out.tape = tape;
        out.node = tape->record(out.numel(), [out_node, an, n](Tape& t) {
            const auto& up = t.slot(out_node);
            auto& g = t.slot(an);
            for (std::size_t i = 0; i < n; ++i) g[i] += up[i];
        });
    }
    return out;
}

Tensor matmul(const Tensor& a, const Tensor& b) {
    require(a.cols == b.rows, "matmul: inner dimension mismatch");
    Tensor out = Tensor::zeros(a.rows, b.cols);
    mview(out).noalias() = cview(a) * cview(b);
    if (Tape* tape = common_tape({&a, &b})) {
        const std::int64_t out_node = tape->size();
        const Tensor ac = a, bc = b;
        out.tape = tape;
        out.node = tape->record(out.numel(), [out_node, ac, bc](Tape& t) {
            CMapMat up(t.slot(out_node).data(), ac.rows, bc.cols);
            if (ac.node >= 0) {
                MapMat g(t.slot(ac.node).data(), ac.rows, ac.cols);
                g.noalias() += up * cview(bc).transpose();
            }
            if (bc.node >= 0) {
                MapMat g(t.slot(bc.node).data(), bc.rows, bc.cols);
                g.noalias() += cview(ac).transpose() * up;
            }
        });
    }
    return out;
}

Tensor transpose(const Tensor& a) {
    Tensor out = Tensor::zeros(a.cols, a.rows);
    mview(out) = cview(a).transpose();
    if (Tape* tape = common_tape({&a})) {
        const std::int64_t out_node = tape->size();
        const std::int64_t an = a.node;
        const std::int64_t r = a.rows, c = a.cols;
        out.tape = tape;
        out.node = tape->record(out.numel(), [out_node, an, r, c](Tape& t) {
            CMapMat up(t.slot(out_node).data(), c, r);
            MapMat g(t.slot(an).data(), r, c);
            g += up.transpose();
        });
    }
    return out;
}

Tensor linear(const Tensor& x, const Tensor& w, const Tensor& b) {
    require(x.cols == w.rows, "linear: inner dimension mismatch");
    require(b.rows == 1 && b.cols == w.cols, "linear: bias must be 1 x output width");
    Tensor out = Tensor::zeros(x.rows, w.cols);
    mview(out).noalias() = cview(x) * cview(w);
    mview(out).rowwise() += cview(b).row(0);
    if (Tape* tape = common_tape({&x, &w, &b})) {
        const std::int64_t out_node = tape->size();
        const Tensor xc = x, wc = w, bc = b;
        out.tape = tape;
        out.node = tape->record(out.numel(), [out_node, xc, wc, bc](Tape& t) {
            CMapMat up(t.slot(out_node).data(), xc.rows, wc.cols);
            if (xc.node >= 0) {
                MapMat g(t.slot(xc.node).data(), xc.rows, xc.cols);
                g.noalias() += up * cview(wc).transpose();
            }
            if (wc.node >= 0) {
                MapMat g(t.slot(wc.node).data(), wc.rows, wc.cols);
                g.noalias() += cview(xc).transpose() * up;
            }
            if (bc.node >= 0) {
                MapMat g(t.slot(bc.node).data(), 1, bc.cols);
                g.row(0) += up.colwise().sum();
            }
        });
    }
    return out;
}

Tensor relu(const Tensor& a) {
    Tensor out = Tensor::zeros(a.rows, a.cols);
    const auto n = z(out.numel());
    for (std::size_t i = 0; i < n; ++i) (*out.data)[i] = std::max(0.0, (*a.data)[i]);
    if (Tape* tape = common_tape({&a})) {
        const std::int64_t out_node = tape->size();
        const Tensor ac = a;
        out.tape = tape;
        out.node = tape->record(out.numel(), [out_node, ac, n](Tape& t) {
            const auto& up = t.slot(out_node);
            auto& g = t.slot(ac.node);
            for (std::size_t i = 0; i < n; ++i) {
                if ((*ac.data)[i] > 0.0) g[i] += up[i];
            }
        });
    }
    return out;
}

Tensor square(const Tensor& a) {
    Tensor out = Tensor::zeros(a.rows, a.cols);
    const auto n = z(out.numel());
    for (std::size_t i = 0; i < n; ++i) (*out.data)[i] = (*a.data)[i] * (*a.data)[i];
    if (Tape* tape = common_tape({&a})) {
        const std::int64_t out_node = tape->size();
        const Tensor ac = a;
        out.tape = tape;
        out.node = tape->record(out.numel(), [out_node, ac, n](Tape& t) {
            const auto& up = t.slot(out_node);
            auto& g = t.slot(ac.node);
            for (std::size_t i = 0; i < n; ++i) g[i] += up[i] * 2.0 * (*ac.data)[i];
        });
    }
    return out;
}

Tensor sqrt_elem(const Tensor& a) {
    Tensor out = Tensor::zeros(a.rows, a.cols);
    const auto n = z(out.numel());
    for (std::size_t i = 0; i < n; ++i) {
        const double v = (*a.data)[i];
        require(v >= 0.0, "sqrt_elem: negative input");
        (*out.data)[i] = std::sqrt(v);
    }
    if (Tape* tape = common_tape({&a})) {
        const std::int64_t out_node = tape->size();
        const std::int64_t an = a.node;
        const Tensor oc = out;
        out.tape = tape;
        out.node = tape->record(out.numel(), [out_node, an, oc, n](Tape& t) {
            const auto& up = t.slot(out_node);
            auto& g = t.slot(an);
            for (std::size_t i = 0; i < n; ++i) {
                const double y = (*oc.data)[i];
                if (y > 0.0) g[i] += up[i] * 0.5 / y;
            }
        });
    }
    return out;
}

Tensor softmax_rows(const Tensor& a) {
    require(a.cols >= 1, "softmax_rows: empty rows");
    Tensor out = Tensor::zeros(a.rows, a.cols);
    for (std::int64_t r = 0; r < a.rows; ++r) {
        double hi = a.at(r, 0);
        for (std::int64_t c = 1; c < a.cols; ++c) hi = std::max(hi, a.at(r, c));
        double total = 0.0;
        for (std::int64_t c = 0; c < a.cols; ++c) {
            const double e = std::exp(a.at(r, c) - hi);
            out.at(r, c) = e;
            total += e;
        }
        for (std::int64_t c = 0; c < a.cols; ++c) out.at(r, c) /= total;
    }
    if (Tape* tape = common_tape({&a})) {
        const std::int64_t out_node = tape->size();
        const std::int64_t an = a.node;
        const Tensor oc = out;
        out.tape = tape;
        out.node = tape->record(out.numel(), [out_node, an, oc](Tape& t) {
            const auto& up = t.slot(out_node);
            auto& g = t.slot(an);
            for (std::int64_t r = 0; r < oc.rows; ++r) {
                double dot = 0.0;
                for (std::int64_t c = 0; c < oc.cols; ++c) {
                    dot += up[z(r * oc.cols + c)] * oc.at(r, c);
                }
                for (std::int64_t c = 0; c < oc.cols; ++c) {
                    g[z(r * oc.cols + c)] += oc.at(r, c) * (up[z(r * oc.cols + c)] - dot);
                }
            }
        });
    }
    return out;
}

Tensor layer_norm_rows(const Tensor& x, const Tensor& gain, const Tensor& bias, double epsilon) {
    require(x.cols >= 1, "layer_norm_rows: empty rows");
    require(gain.rows == 1 && gain.cols == x.cols, "layer_norm_rows: gain must be 1 x C");
    require(bias.rows == 1 && bias.cols == x.cols, "layer_norm_rows: bias must be 1 x C");
    require(epsilon > 0.0, "layer_norm_rows: epsilon must be positive");

    const std::int64_t c_count = x.cols;
    Tensor out = Tensor::zeros(x.rows, x.cols);
    std::vector<double> means(z(x.rows));
    std::vector<double> invs(z(x.rows));
    for (std::int64_t r = 0; r < x.rows; ++r) {
        double m = 0.0;
        for (std::int64_t c = 0; c < c_count; ++c) m += x.at(r, c);
        m /= static_cast<double>(c_count);
        double var = 0.0;
        for (std::int64_t c = 0; c < c_count; ++c) {
            const double d = x.at(r, c) - m;
            var += d * d;
        }
        var /= static_cast<double>(c_count);
        const double inv = 1.0 / std::sqrt(var + epsilon);
        means[z(r)] = m;
        invs[z(r)] = inv;
        for (std::int64_t c = 0; c < c_count; ++c) {
            out.at(r, c) = gain.at(0, c) * (x.at(r, c) - m) * inv + bias.at(0, c);
        }
    }
    if (Tape* tape = common_tape({&x, &gain, &bias})) {
        const std::int64_t out_node = tape->size();
        const Tensor xc = x, gc = gain, bc = bias;
        out.tape = tape;
        out.node = tape->record(
            out.numel(), [out_node, xc, gc, bc, means = std::move(means),
                          invs = std::move(invs)](Tape& t) {
                const auto& up = t.slot(out_node);
                const std::int64_t cc = xc.cols;
                const auto dim = static_cast<double>(cc);
                for (std::int64_t r = 0; r < xc.rows; ++r) {
                    const double m = means[z(r)];
                    const double inv = invs[z(r)];
                    double sum1 = 0.0, sum2 = 0.0;
                    for (std::int64_t c = 0; c < cc; ++c) {
                        const double xhat = (xc.at(r, c) - m) * inv;
                        const double dxhat = up[z(r * cc + c)] * gc.at(0, c);
                        sum1 += dxhat;
                        sum2 += dxhat * xhat;
                    }
                    if (xc.node >= 0) {
                        auto& g = t.slot(xc.node);
                        for (std::int64_t c = 0; c < cc; ++c) {
                            const double xhat = (xc.at(r, c) - m) * inv;
                            const double dxhat = up[z(r * cc + c)] * gc.at(0, c);
                            g[z(r * cc + c)] += inv * (dxhat - sum1 / dim - xhat * sum2 / dim);
                        }
                    }
                    if (gc.node >= 0) {
                        auto& g = t.slot(gc.node);
                        for (std::int64_t c = 0; c < cc; ++c) {
                            const double xhat = (xc.at(r, c) - m) * inv;
                            g[z(c)] += up[z(r * cc + c)] * xhat;
                        }
                    }
                    if (bc.node >= 0) {
                        auto& g = t.slot(bc.node);
                        for (std::int64_t c = 0; c < cc; ++c) g[z(c)] += up[z(r * cc + c)];
                    }
                }
            });
    }
    return out;
}

Tensor concat_rows(const std::vector<Tensor>& parts) {
    require(!parts.empty(), "concat_rows: no inputs");
    const std::int64_t cols = parts.front().cols;
    std::int64_t rows = 0;
    for (const Tensor& p : parts) {
        require(p.cols == cols, "concat_rows: column mismatch");
        rows += p.rows;
    }
    Tensor out = Tensor::zeros(rows, cols);
    std::int64_t r0 = 0;
    for (const Tensor& p : parts) {
        std::copy(p.data->begin(), p.data->end(), out.data->begin() + r0 * cols);
        r0 += p.rows;
    }
    std::vector<const Tensor*> refs;
    refs.reserve(parts.size());
    for (const Tensor& p : parts) refs.push_back(&p);
    Tape* tape = nullptr;
    for (const Tensor* p : refs) {
        if (p->tracked()) {
            require(tape == nullptr || tape == p->tape, "ad: inputs tracked by different tapes");
            tape = p->tape;
        }
    }
    if (tape) {
        const std::int64_t out_node = tape->size();
        const std::vector<Tensor> pc = parts;
        out.tape = tape;
        out.node = tape->record(out.numel(), [out_node, pc, cols](Tape& t) {
            const auto& up = t.slot(out_node);
            std::int64_t base = 0;
            for (const Tensor& p : pc) {
                if (p.node >= 0) {
                    auto& g = t.slot(p.node);
                    for (std::int64_t i = 0; i < p.rows * cols; ++i) {
                        g[z(i)] += up[z(base + i)];
                    }
                }
                base += p.rows * cols;
            }
        });
    }
    return out;
}

Tensor concat_cols(const std::vector<Tensor>& parts) {
    require(!parts.empty(), "concat_cols: no inputs");
    const std::int64_t rows = parts.front().rows;
    std::int64_t cols = 0;
    for (const Tensor& p : parts) {
        require(p.rows == rows, "concat_cols: row mismatch");
        cols += p.cols;
    }
    Tensor out = Tensor::zeros(rows, cols);
    std::int64_t c0 = 0;
    for (const Tensor& p : parts) {
        for (std::int64_t r = 0; r < rows; ++r) {
            for (std::int64_t c = 0; c < p.cols; ++c) out.at(r, c0 + c) = p.at(r, c);
        }
        c0 += p.cols;
    }
    Tape* tape = nullptr;
    for (const Tensor& p : parts) {
        if (p.tracked()) {
            require(tape == nullptr || tape == p.tape, "ad: inputs tracked by different tapes");
            tape = p.tape;
        }
    }
    if (tape) {
        const std::int64_t out_node = tape->size();
        const std::vector<Tensor> pc = parts;
        out.tape = tape;
        out.node = tape->record(out.numel(), [out_node, pc, rows, cols](Tape& t) {
            const auto& up = t.slot(out_node);
            std::int64_t base = 0;
            for (const Tensor& p : pc) {
                if (p.node >= 0) {
                    auto& g = t.slot(p.node);
                    for (std::int64_t r = 0; r < rows; ++r) {
                        for (std::int64_t c = 0; c < p.cols; ++c) {
                            g[z(r * p.cols + c)] += up[z(r * cols + base + c)];
                        }
                    }
                }
                base += p.cols;
            }
        });
    }
    return out;
}

Tensor slice_cols(const Tensor& a, std::int64_t begin, std::int64_t end) {
    require(begin >= 0 && begin < end && end <= a.cols, "slice_cols: bad column range");
    const std::int64_t width = end - begin;
    Tensor out = Tensor::zeros(a.rows, width);
    for (std::int64_t r = 0; r < a.rows; ++r) {
        for (std::int64_t c = 0; c < width; ++c) out.at(r, c) = a.at(r, begin + c);
    }
    if (Tape* tape = common_tape({&a})) {
        const std::int64_t out_node = tape->size();
        const std::int64_t an = a.node, rows = a.rows, cols = a.cols;
        out.tape = tape;
        out.node = tape->record(out.numel(), [out_node, an, rows, cols, begin, width](Tape& t) {
            const auto& up = t.slot(out_node);
            auto& g = t.slot(an);
            for (std::int64_t r = 0; r < rows; ++r) {
                for (std::int64_t c = 0; c < width; ++c) {
                    g[z(r * cols + begin + c)] += up[z(r * width + c)];
                }
            }
        });
    }
    return out;
}

Tensor gather_rows(const Tensor& a, std::vector<std::int64_t> rows) {
    require(!rows.empty(), "gather_rows: no indices");
    for (std::int64_t r : rows) {
        require(r >= 0 && r < a.rows, "gather_rows: index out of range");
    }
    const auto n_out = static_cast<std::int64_t>(rows.size());
    Tensor out = Tensor::zeros(n_out, a.cols);
    for (std::int64_t k = 0; k < n_out; ++k) {
        const std::int64_t src = rows[z(k)];
        for (std::int64_t c = 0; c < a.cols; ++c) out.at(k, c) = a.at(src, c);
    }
    if (Tape* tape = common_tape({&a})) {
        const std::int64_t out_node = tape->size();
        const std::int64_t an = a.node, cols = a.cols;
        out.tape = tape;
        out.node = tape->record(out.numel(),
                                [out_node, an, cols, idx = std::move(rows)](Tape& t) {
                                    const auto& up = t.slot(out_node);
                                    auto& g = t.slot(an);
                                    for (std::size_t k = 0; k < idx.size(); ++k) {
                                        const auto src = z(idx[k] * cols);
                                        for (std::int64_t c = 0; c < cols; ++c) {
                                            g[src + z(c)] += up[k * z(cols) + z(c)];
                                        }
                                    }
                                });
    }
    return out;
}

Tensor sum(const Tensor& a) {
    Tensor out = Tensor::zeros(1, 1);
    double total = 0.0;
    for (double v : *a.data) total += v;
    (*out.data)[0] = total;
    if (Tape* tape = common_tape({&a})) {
        const std::int64_t out_node = tape->size();
        const std::int64_t an = a.node;
        const auto n = z(a.numel());
        out.tape = tape;
        out.node = tape->record(1, [out_node, an, n](Tape& t) {
            const double up = t.slot(out_node)[0];
            auto& g = t.slot(an);
            for (std::size_t i = 0; i < n; ++i) g[i] += up;
        });
    }
    return out;
}

Tensor mean(const Tensor& a) {
    Tensor out = Tensor::zeros(1, 1);
    double total = 0.0;
    for (double v : *a.data) total += v;
    const auto n = static_cast<double>(a.numel());
    (*out.data)[0] = total / n;
    if (Tape* tape = common_tape({&a})) {
        const std::int64_t out_node = tape->size();
        const std::int64_t an = a.node;
        const auto count = z(a.numel());
        out.tape = tape;
        out.node = tape->record(1, [out_node, an, count, n](Tape& t) {
            const double up = t.slot(out_node)[0] / n;
            auto& g = t.slot(an);
            for (std::size_t i = 0; i < count; ++i) g[i] += up;
        });
    }
    return out;
}

Tensor sum_rows(const Tensor& a) {
    Tensor out = Tensor::zeros(a.rows, 1);
    for (std::int64_t r = 0; r < a.rows; ++r) {
        double total = 0.0;
        for (std::int64_t c = 0; c < a.cols; ++c) total += a.at(r, c);
        out.at(r, 0) = total;
    }
    if (Tape* tape = common_tape({&a})) {
        const std::int64_t out_node = tape->size();
        const std::int64_t an = a.node, rows = a.rows, cols = a.cols;
        out.tape = tape;
        out.node = tape->record(out.numel(), [out_node, an, rows, cols](Tape& t) {
            const auto& up = t.slot(out_node);
            auto& g = t.slot(an);
            for (std::int64_t r = 0; r < rows; ++r) {
                for (std::int64_t c = 0; c < cols; ++c) g[z(r * cols + c)] += up[z(r)];
            }
        });
    }
    return out;
}

PoolResult max_pool_rows(const Tensor& a) {
    require(a.rows >= 1, "max_pool_rows: empty input");
    PoolResult res;
    res.values = Tensor::zeros(1, a.cols);
    res.argmax.assign(z(a.cols), 0);
    for (std::int64_t c = 0; c < a.cols; ++c) {
        double best = a.at(0, c);
        std::int64_t best_row = 0;
        for (std::int64_t r = 1; r < a.rows; ++r) {
            if (a.at(r, c) > best) {
                best = a.at(r, c);
                best_row = r;
            }
        }
        res.values.at(0, c) = best;
        res.argmax[z(c)] = best_row;
    }
    if (Tape* tape = common_tape({&a})) {
        const std::int64_t out_node = tape->size();
        const std::int64_t an = a.node, cols = a.cols;
        res.values.tape = tape;
        res.values.node =
            tape->record(res.values.numel(), [out_node, an, cols, am = res.argmax](Tape& t) {
                const auto& up = t.slot(out_node);
                auto& g = t.slot(an);
                for (std::int64_t c = 0; c < cols; ++c) {
                    g[z(am[z(c)] * cols + c)] += up[z(c)];
                }
            });
    }
    return res;
}

Tensor segment_max_rows(const Tensor& a, const std::vector<std::int64_t>& segment_of_row,
                        std::int64_t n_segments) {
    require(static_cast<std::int64_t>(segment_of_row.size()) == a.rows,
            "segment_max_rows: assignment length mismatch");
    require(n_segments >= 1, "segment_max_rows: need at least one segment");
    for (std::int64_t s : segment_of_row) {
        require(s >= 0 && s < n_segments, "segment_max_rows: segment id out of range");
    }

    Tensor out = Tensor::full(n_segments, a.cols, -std::numeric_limits<double>::infinity());
    std::vector<std::int64_t> argmax(z(n_segments * a.cols), -1);
    for (std::int64_t r = 0; r < a.rows; ++r) {
        const std::int64_t s = segment_of_row[z(r)];
        for (std::int64_t c = 0; c < a.cols; ++c) {
            if (a.at(r, c) > out.at(s, c)) {
                out.at(s, c) = a.at(r, c);
                argmax[z(s * a.cols + c)] = r;
            }
        }
    }
    for (std::int64_t s = 0; s < n_segments; ++s) {
        require(argmax[z(s * a.cols)] >= 0, "segment_max_rows: empty segment");
    }
    if (Tape* tape = common_tape({&a})) {
        const std::int64_t out_node = tape->size();
        const std::int64_t an = a.node, cols = a.cols;
        out.tape = tape;
        out.node = tape->record(out.numel(),
                                [out_node, an, cols, am = std::move(argmax)](Tape& t) {
                                    const auto& up = t.slot(out_node);
                                    auto& g = t.slot(an);
                                    for (std::size_t k = 0; k < am.size(); ++k) {
                                        const std::int64_t c =
                                            static_cast<std::int64_t>(k) % cols;
                                        g[z(am[k] * cols + c)] += up[k];
                                    }
                                });
    }
    return out;
}

Tensor l2_normalize_rows(const Tensor& a) {
    Tensor out = Tensor::zeros(a.rows, a.cols);
    std::vector<double> norms(z(a.rows));
    for (std::int64_t r = 0; r < a.rows; ++r) {
        double sq = 0.0;
        for (std::int64_t c = 0; c < a.cols; ++c) sq += a.at(r, c) * a.at(r, c);
        const double norm = std::sqrt(sq);
        norms[z(r)] = norm;
        // Only an exactly-zero row maps to zero; NaN norms must divide so a
        // numerical blowup stays visible downstream instead of vanishing.
        if (norm != 0.0) {
            for (std::int64_t c = 0; c < a.cols; ++c) out.at(r, c) = a.at(r, c) / norm;
        }
    }
    if (Tape* tape = common_tape({&a})) {
        const std::int64_t out_node = tape->size();
        const std::int64_t an = a.node, cols = a.cols;
        const Tensor oc = out;
        out.tape = tape;
        out.node = tape->record(out.numel(),
                                [out_node, an, cols, oc, ns = std::move(norms)](Tape& t) {
                                    const auto& up = t.slot(out_node);
                                    auto& g = t.slot(an);
                                    for (std::int64_t r = 0; r < oc.rows; ++r) {
                                        const double norm = ns[z(r)];
                                        if (norm == 0.0) continue;
                                        double dot = 0.0;
                                        for (std::int64_t c = 0; c < cols; ++c) {
                                            dot += up[z(r * cols + c)] * oc.at(r, c);
                                        }
                                        for (std::int64_t c = 0; c < cols; ++c) {
                                            g[z(r * cols + c)] +=
                                                (up[z(r * cols + c)] - dot * oc.at(r, c)) / norm;
                                        }
                                    }
                                });
    }
    return out;
}

}  // namespace lahreg::ad
