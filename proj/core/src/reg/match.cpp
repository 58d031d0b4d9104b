#include "lahreg/reg/match.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "lahreg/util/rng.hpp"

namespace lahreg::reg {
namespace {

double row_distance2(const ad::Tensor& a, std::int64_t i, const ad::Tensor& b, std::int64_t j) {
    double acc = 0.0;
    for (std::int64_t c = 0; c < a.cols; ++c) {
        const double d = a.at(i, c) - b.at(j, c);
        acc += d * d;
    }
    return acc;
}

std::int64_t nearest_row(const ad::Tensor& haystack, const ad::Tensor& needles,
                         std::int64_t needle) {
    std::int64_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::int64_t j = 0; j < haystack.rows; ++j) {
        const double d = row_distance2(needles, needle, haystack, j);
        if (d < best_d) {
            best_d = d;
            best = j;
        }
    }
    return best;
}

}  // namespace

geom::CorrespondenceSet nn_match(const ad::Tensor& descriptors_p, const ad::Tensor& descriptors_q,
                                 std::int64_t sample_count, std::uint64_t seed, bool mutual) {
    if (descriptors_p.rows == 0 || descriptors_q.rows == 0) {
        throw std::invalid_argument("nn_match: empty descriptor sets");
    }
    if (descriptors_p.cols != descriptors_q.cols) {
        throw std::invalid_argument("nn_match: descriptor widths differ");
    }
    if (sample_count < 1) throw std::invalid_argument("nn_match: sample_count must be positive");

    const std::int64_t take = std::min(sample_count, descriptors_p.rows);
    std::vector<std::int64_t> pool(static_cast<std::size_t>(descriptors_p.rows));
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = static_cast<std::int64_t>(i);
    util::Rng rng(util::derive_seed(seed, "nn_sample"));
    for (std::int64_t i = 0; i < take; ++i) {
        const std::int64_t j =
            i + static_cast<std::int64_t>(
                    rng.below(static_cast<std::uint64_t>(descriptors_p.rows - i)));
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }

    geom::CorrespondenceSet matches;
    for (std::int64_t s = 0; s < take; ++s) {
        const std::int64_t i = pool[static_cast<std::size_t>(s)];
        const std::int64_t j = nearest_row(descriptors_q, descriptors_p, i);
        if (mutual && nearest_row(descriptors_p, descriptors_q, j) != i) continue;
        matches.pairs.emplace_back(i, j);
        matches.distances.push_back(std::sqrt(row_distance2(descriptors_p, i, descriptors_q, j)));
    }
    return matches;
}

}  // namespace lahreg::reg
