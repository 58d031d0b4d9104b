#include "lahreg/lsh/locality.hpp"

#include <algorithm>
#include <stdexcept>

#include "lahreg/util/rng.hpp"

namespace lahreg::lsh {

namespace {

constexpr std::uint64_t kPairSampleSeed = 0x9d2c5680ca35f00dull;

double dist(const geom::PointCloud& cloud, std::int64_t i, std::int64_t j) {
    return (cloud[i] - cloud[j]).norm();
}

}  // namespace

LocalityScore locality_score(const geom::PointCloud& cloud,
                             const std::vector<std::int64_t>& window_of,
                             std::int64_t max_pairs) {
    const std::int64_t n = cloud.size();
    if (static_cast<std::int64_t>(window_of.size()) != n) {
        throw std::invalid_argument("locality_score: assignment length mismatch");
    }
    if (max_pairs < 0) throw std::invalid_argument("locality_score: max_pairs must be >= 0");

    std::int64_t max_id = -1;
    for (std::int64_t id : window_of) {
        if (id < 0) throw std::invalid_argument("locality_score: negative window id");
        max_id = std::max(max_id, id);
    }
    const std::int64_t n_windows = max_id + 1;
    std::vector<std::vector<std::int64_t>> members(static_cast<std::size_t>(n_windows));
    for (std::int64_t i = 0; i < n; ++i) {
        members[static_cast<std::size_t>(window_of[static_cast<std::size_t>(i)])].push_back(i);
    }
    std::int64_t occupied = 0;
    std::int64_t intra_count = 0;
    for (const auto& m : members) {
        if (!m.empty()) ++occupied;
        const auto c = static_cast<std::int64_t>(m.size());
        intra_count += c * (c - 1) / 2;
    }
    if (occupied < 2) throw std::invalid_argument("locality_score: need at least two windows");

    const std::int64_t total_count = n * (n - 1) / 2;
    const std::int64_t inter_count = total_count - intra_count;
    const bool exact_intra = max_pairs == 0 || intra_count <= max_pairs;
    const bool exact_inter = max_pairs == 0 || inter_count <= max_pairs;

    LocalityScore out;

    if (exact_intra && exact_inter) {
        double intra_sum = 0.0, inter_sum = 0.0;
        for (std::int64_t i = 0; i < n; ++i) {
            for (std::int64_t j = i + 1; j < n; ++j) {
                const double d = dist(cloud, i, j);
                if (window_of[static_cast<std::size_t>(i)] ==
                    window_of[static_cast<std::size_t>(j)]) {
                    intra_sum += d;
                } else {
                    inter_sum += d;
                }
            }
        }
        out.intra = intra_count > 0 ? intra_sum / static_cast<double>(intra_count) : 0.0;
        out.inter = inter_count > 0 ? inter_sum / static_cast<double>(inter_count) : 0.0;
        return out;
    }

    util::Rng rng(kPairSampleSeed);

    if (exact_intra) {
        double sum = 0.0;
        for (const auto& m : members) {
            for (std::size_t a = 0; a < m.size(); ++a) {
                for (std::size_t b = a + 1; b < m.size(); ++b) {
                    sum += dist(cloud, m[a], m[b]);
                }
            }
        }
        out.intra = intra_count > 0 ? sum / static_cast<double>(intra_count) : 0.0;
    } else {
        // Pick a window proportional to its pair count, then a uniform
        // distinct pair inside it; uniform over the whole intra set.
        std::vector<std::int64_t> cumulative;
        cumulative.reserve(members.size());
        std::int64_t running = 0;
        for (const auto& m : members) {
            const auto c = static_cast<std::int64_t>(m.size());
            running += c * (c - 1) / 2;
            cumulative.push_back(running);
        }
        double sum = 0.0;
        for (std::int64_t s = 0; s < max_pairs; ++s) {
            const std::int64_t r = static_cast<std::int64_t>(
                rng.below(static_cast<std::uint64_t>(intra_count)));
            const auto w = static_cast<std::size_t>(
                std::upper_bound(cumulative.begin(), cumulative.end(), r) - cumulative.begin());
            const auto c = static_cast<std::uint64_t>(members[w].size());
            const std::uint64_t a = rng.below(c);
            std::uint64_t b = rng.below(c - 1);
            if (b >= a) ++b;
            sum += dist(cloud, members[w][static_cast<std::size_t>(a)],
                        members[w][static_cast<std::size_t>(b)]);
        }
        out.intra = sum / static_cast<double>(max_pairs);
    }

    if (exact_inter) {
        double sum = 0.0;
        for (std::size_t w1 = 0; w1 < members.size(); ++w1) {
            for (std::size_t w2 = w1 + 1; w2 < members.size(); ++w2) {
                for (std::int64_t i : members[w1]) {
                    for (std::int64_t j : members[w2]) sum += dist(cloud, i, j);
                }
            }
        }
        out.inter = inter_count > 0 ? sum / static_cast<double>(inter_count) : 0.0;
    } else {
        double sum = 0.0;
        std::int64_t attempts_left = 64 * max_pairs;
        std::int64_t got = 0;
        while (got < max_pairs && attempts_left > 0) {
            --attempts_left;
            const auto i = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(n)));
            auto j = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(n - 1)));
            if (j >= i) ++j;
            if (window_of[static_cast<std::size_t>(i)] == window_of[static_cast<std::size_t>(j)]) {
                continue;
            }
            sum += dist(cloud, i, j);
            ++got;
        }
        if (got < max_pairs) {
            // Heavily skewed assignment; fall back to the exact sweep.
            sum = 0.0;
            for (std::size_t w1 = 0; w1 < members.size(); ++w1) {
                for (std::size_t w2 = w1 + 1; w2 < members.size(); ++w2) {
                    for (std::int64_t i : members[w1]) {
                        for (std::int64_t j : members[w2]) sum += dist(cloud, i, j);
                    }
                }
            }
            out.inter = sum / static_cast<double>(inter_count);
        } else {
            out.inter = sum / static_cast<double>(max_pairs);
        }
    }
    return out;
}

}  // namespace lahreg::lsh
