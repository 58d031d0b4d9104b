#include "lahreg/lsh/gather.hpp"

#include <stdexcept>

namespace lahreg::lsh {

std::vector<ad::Tensor> gather_windows(const ad::Tensor& features, const WindowPartition& part) {
    if (features.rows != part.total()) {
        throw std::invalid_argument("gather_windows: row count does not match partition");
    }
    std::vector<ad::Tensor> out;
    out.reserve(static_cast<std::size_t>(part.window_count()));
    for (std::int64_t w = 0; w < part.window_count(); ++w) {
        std::vector<std::int64_t> rows(
            part.permutation.begin() + part.window_begin(w),
            part.permutation.begin() + part.window_end(w));
        out.push_back(ad::gather_rows(features, std::move(rows)));
    }
    return out;
}

ad::Tensor unpartition(const std::vector<ad::Tensor>& windows, const WindowPartition& part) {
    if (static_cast<std::int64_t>(windows.size()) != part.window_count()) {
        throw std::invalid_argument("unpartition: window count mismatch");
    }
    for (std::int64_t w = 0; w < part.window_count(); ++w) {
        if (windows[static_cast<std::size_t>(w)].rows != part.window_end(w) - part.window_begin(w)) {
            throw std::invalid_argument("unpartition: window row count mismatch");
        }
    }
    ad::Tensor permuted = windows.size() == 1 ? windows.front() : ad::concat_rows(windows);
    std::vector<std::int64_t> inverse(static_cast<std::size_t>(part.total()));
    for (std::int64_t pos = 0; pos < part.total(); ++pos) {
        inverse[static_cast<std::size_t>(part.permutation[static_cast<std::size_t>(pos)])] = pos;
    }
    return ad::gather_rows(permuted, std::move(inverse));
}

}  // namespace lahreg::lsh
