#include "lahreg/reg/ransac.hpp"

#include <stdexcept>

#include "lahreg/geom/kabsch.hpp"
#include "lahreg/util/rng.hpp"

namespace lahreg::reg {
namespace {

std::int64_t count_inliers(const geom::CorrespondenceSet& matches, const geom::PointCloud& source,
                           const geom::PointCloud& target, const geom::RigidTransform& t,
                           double threshold, std::vector<bool>* mask) {
    std::int64_t count = 0;
    for (std::size_t m = 0; m < matches.pairs.size(); ++m) {
        const auto& [i, j] = matches.pairs[m];
        const bool in = (t.rotation * source[i] + t.translation - target[j]).norm() <= threshold;
        if (mask) (*mask)[m] = in;
        count += in;
    }
    return count;
}

}  // namespace

RansacResult ransac(const geom::CorrespondenceSet& matches, const geom::PointCloud& source,
                    const geom::PointCloud& target, std::int64_t iterations,
                    double inlier_threshold, std::uint64_t seed) {
    if (matches.size() < 3) {
        throw std::invalid_argument("ransac: need at least 3 correspondences");
    }
    matches.validate(source.size(), target.size());
    if (iterations < 1) throw std::invalid_argument("ransac: iterations must be positive");
    if (!(inlier_threshold > 0.0)) {
        throw std::invalid_argument("ransac: inlier threshold must be positive");
    }

    const auto n = static_cast<std::uint64_t>(matches.size());
    geom::RigidTransform best;
    std::int64_t best_count = 0;
    bool have_best = false;

    for (std::int64_t it = 0; it < iterations; ++it) {
        util::Rng rng(util::derive_seed(seed, static_cast<std::uint64_t>(it)));
        std::int64_t pick[3];
        pick[0] = static_cast<std::int64_t>(rng.below(n));
        do {
            pick[1] = static_cast<std::int64_t>(rng.below(n));
        } while (pick[1] == pick[0]);
        do {
            pick[2] = static_cast<std::int64_t>(rng.below(n));
        } while (pick[2] == pick[0] || pick[2] == pick[1]);

        geom::PointCloud src3, dst3;
        for (std::int64_t k : pick) {
            const auto& [i, j] = matches.pairs[static_cast<std::size_t>(k)];
            src3.points.push_back(source[i]);
            dst3.points.push_back(target[j]);
        }
        const geom::RigidTransform hypothesis = geom::kabsch(src3, dst3);
        const std::int64_t count =
            count_inliers(matches, source, target, hypothesis, inlier_threshold, nullptr);
        if (count > best_count) {
            best_count = count;
            best = hypothesis;
            have_best = true;
        }
    }

    RansacResult result;
    result.inliers.assign(matches.pairs.size(), false);
    if (!have_best) return result;  // zero inliers under every hypothesis

    // Refit once on the best hypothesis's inliers when enough exist, then
    // report the inlier set of whichever transform is returned.
    std::vector<bool> mask(matches.pairs.size(), false);
    count_inliers(matches, source, target, best, inlier_threshold, &mask);
    if (best_count >= 3) {
        geom::PointCloud src_in, dst_in;
        for (std::size_t m = 0; m < matches.pairs.size(); ++m) {
            if (!mask[m]) continue;
            const auto& [i, j] = matches.pairs[m];
            src_in.points.push_back(source[i]);
            dst_in.points.push_back(target[j]);
        }
        best = geom::kabsch(src_in, dst_in);
    }

    result.transform = best;
    result.inlier_count =
        count_inliers(matches, source, target, best, inlier_threshold, &result.inliers);
    result.success = result.inlier_count > 0;
    return result;
}

}  // namespace lahreg::reg
