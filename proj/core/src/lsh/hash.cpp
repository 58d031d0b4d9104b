#include "lahreg/lsh/hash.hpp"

#include <stdexcept>
#include <string>

#include "lahreg/util/parallel.hpp"
#include "lahreg/util/rng.hpp"

namespace lahreg::lsh {

void HashConfig::validate() const {
    if (bins < 2 || bins % 2 != 0) {
        throw std::invalid_argument("HashConfig: bins must be even and >= 2, got " +
                                    std::to_string(bins));
    }
    if (rounds < 1) {
        throw std::invalid_argument("HashConfig: rounds must be >= 1, got " +
                                    std::to_string(rounds));
    }
}

ProjectionTensor sample_projection(const HashConfig& config) {
    config.validate();
    ProjectionTensor out;
    out.rounds = config.rounds;
    out.half_bins = config.bins / 2;
    out.dirs.reserve(static_cast<std::size_t>(out.rounds * out.half_bins));
    util::Rng rng(util::derive_seed(config.seed, "projection"));
    for (std::int64_t r = 0; r < out.rounds; ++r) {
        for (std::int64_t k = 0; k < out.half_bins; ++k) {
            out.dirs.emplace_back(rng.gaussian(), rng.gaussian(), rng.gaussian());
        }
    }
    return out;
}

RoundHashes hash_points(const geom::PointCloud& cloud, const ProjectionTensor& proj) {
    if (cloud.empty()) throw std::invalid_argument("hash_points: empty cloud");
    RoundHashes out;
    out.count = cloud.size();
    out.rounds = proj.rounds;
    out.bins.resize(static_cast<std::size_t>(out.count * out.rounds));

    const std::int64_t half = proj.half_bins;
    util::parallel_for(0, out.count, [&](std::int64_t lo, std::int64_t hi) {
        std::vector<double> dots(static_cast<std::size_t>(half));
        for (std::int64_t i = lo; i < hi; ++i) {
            const Eigen::Vector3d& p = cloud[i];
            for (std::int64_t r = 0; r < proj.rounds; ++r) {
                for (std::int64_t k = 0; k < half; ++k) {
                    dots[static_cast<std::size_t>(k)] = p.dot(proj.dir(r, k));
                }
                std::int32_t best_bin = 0;
                double best = dots[0];
                for (std::int64_t k = 1; k < half; ++k) {
                    if (dots[static_cast<std::size_t>(k)] > best) {
                        best = dots[static_cast<std::size_t>(k)];
                        best_bin = static_cast<std::int32_t>(k);
                    }
                }
                for (std::int64_t k = 0; k < half; ++k) {
                    if (-dots[static_cast<std::size_t>(k)] > best) {
                        best = -dots[static_cast<std::size_t>(k)];
                        best_bin = static_cast<std::int32_t>(half + k);
                    }
                }
                out.bins[static_cast<std::size_t>(i * proj.rounds + r)] = best_bin;
            }
        }
    });
    return out;
}

std::vector<std::int32_t> vote(const RoundHashes& rounds) {
    if (rounds.rounds < 1) throw std::invalid_argument("vote: need at least one round");
    std::vector<std::int32_t> out(static_cast<std::size_t>(rounds.count));
    const std::int64_t l = rounds.rounds;
    util::parallel_for(0, rounds.count, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t i = lo; i < hi; ++i) {
            std::int32_t best_bin = 0;
            std::int64_t best_count = -1;
            for (std::int64_t a = 0; a < l; ++a) {
                const std::int32_t v = rounds.at(i, a);
                std::int64_t count = 0;
                for (std::int64_t b = 0; b < l; ++b) {
                    if (rounds.at(i, b) == v) ++count;
                }
                if (count > best_count || (count == best_count && v < best_bin)) {
                    best_count = count;
                    best_bin = v;
                }
            }
            out[static_cast<std::size_t>(i)] = best_bin;
        }
    });
    return out;
}

}  // namespace lahreg::lsh
