#include "lahreg/io/synth.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "lahreg/util/rng.hpp"

namespace lahreg::io {

namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::Vector3d random_unit(util::Rng& rng) {
    for (;;) {
        Eigen::Vector3d v(rng.gaussian(), rng.gaussian(), rng.gaussian());
        const double n = v.norm();
        if (n > 1e-12) return v / n;
    }
}

geom::PointCloud sample_surface_impl(SurfaceKind kind, std::int64_t count, util::Rng& rng) {
    geom::PointCloud cloud;
    cloud.points.reserve(static_cast<std::size_t>(count));
    switch (kind) {
        case SurfaceKind::room_corner: {
            // Three unit squares meeting at the origin, like the inside of a
            // box corner.
            for (std::int64_t i = 0; i < count; ++i) {
                const auto face = rng.below(3);
                const double u = rng.uniform(), v = rng.uniform();
                if (face == 0) cloud.points.emplace_back(u, v, 0.0);
                else if (face == 1) cloud.points.emplace_back(u, 0.0, v);
                else cloud.points.emplace_back(0.0, u, v);
            }
            break;
        }
        case SurfaceKind::polyhedral: {
            // Axis-aligned box shell with per-seed edge lengths, faces drawn
            // proportionally to their area.
            const Eigen::Vector3d edge(rng.uniform(0.5, 1.2), rng.uniform(0.5, 1.2),
                                       rng.uniform(0.5, 1.2));
            const double areas[3] = {edge.y() * edge.z(), edge.x() * edge.z(),
                                     edge.x() * edge.y()};
            const double total = 2.0 * (areas[0] + areas[1] + areas[2]);
            for (std::int64_t i = 0; i < count; ++i) {
                double pick = rng.uniform(0.0, total);
                int face = 0;
                for (; face < 5; ++face) {
                    if (pick < areas[face / 2]) break;
                    pick -= areas[face / 2];
                }
                const int axis = face / 2;
                Eigen::Vector3d p(rng.uniform(0.0, edge.x()), rng.uniform(0.0, edge.y()),
                                  rng.uniform(0.0, edge.z()));
                p[axis] = face % 2 == 1 ? edge[axis] : 0.0;
                cloud.points.push_back(p);
            }
            break;
        }
        case SurfaceKind::gaussian_mixture: {
            constexpr int kCenters = 8;
            constexpr double kSpread = 0.08;
            Eigen::Vector3d centers[kCenters];
            for (auto& c : centers)
                c = Eigen::Vector3d(rng.uniform(), rng.uniform(), rng.uniform());
            for (std::int64_t i = 0; i < count; ++i) {
                const auto& c = centers[rng.below(kCenters)];
                cloud.points.push_back(
                    c + kSpread * Eigen::Vector3d(rng.gaussian(), rng.gaussian(), rng.gaussian()));
            }
            break;
        }
    }
    return cloud;
}

geom::PointCloud slice(const geom::PointCloud& pool, const std::vector<std::int64_t>& order,
                       std::int64_t begin, std::int64_t count) {
    geom::PointCloud out;
    out.points.reserve(static_cast<std::size_t>(count));
    for (std::int64_t i = begin; i < begin + count; ++i)
        out.points.push_back(pool[order[static_cast<std::size_t>(i)]]);
    return out;
}

}  // namespace

geom::PointCloud sample_surface(SurfaceKind kind, std::int64_t count, std::uint64_t seed) {
    util::Rng rng(seed);
    return sample_surface_impl(kind, count, rng);
}

SurfaceKind surface_kind_from_string(const std::string& name) {
    if (name == "room-corner") return SurfaceKind::room_corner;
    if (name == "polyhedral") return SurfaceKind::polyhedral;
    if (name == "gaussian-mixture") return SurfaceKind::gaussian_mixture;
    throw std::invalid_argument("unknown surface kind \"" + name +
                                "\" (room-corner | polyhedral | gaussian-mixture)");
}

std::string to_string(SurfaceKind kind) {
    switch (kind) {
        case SurfaceKind::room_corner: return "room-corner";
        case SurfaceKind::polyhedral: return "polyhedral";
        case SurfaceKind::gaussian_mixture: return "gaussian-mixture";
    }
    return "room-corner";
}

void SceneConfig::validate() const {
    if (points_per_fragment < 1)
        throw std::invalid_argument("SceneConfig: points_per_fragment must be >= 1");
    if (!(overlap_target > 0.0) || overlap_target > 1.0)
        throw std::invalid_argument("SceneConfig: overlap_target must be in (0, 1]");
    if (!(noise_sigma >= 0.0))
        throw std::invalid_argument("SceneConfig: noise_sigma must be >= 0");
    if (!(max_rotation_deg >= 0.0) || max_rotation_deg > 180.0)
        throw std::invalid_argument("SceneConfig: max_rotation_deg must be in [0, 180]");
    if (!(max_translation >= 0.0))
        throw std::invalid_argument("SceneConfig: max_translation must be >= 0");
}

double overlap_fraction(const geom::PointCloud& source, const geom::PointCloud& target,
                        const geom::RigidTransform& t, double tau) {
    if (source.empty() || target.empty()) return 0.0;
    const double tau_sq = tau * tau;
    std::vector<Eigen::Vector3d> moved;
    moved.reserve(static_cast<std::size_t>(source.size()));
    for (const auto& p : source.points) moved.push_back(t(p));

    std::int64_t hits_p = 0;
    for (const auto& p : moved) {
        for (const auto& q : target.points) {
            if ((p - q).squaredNorm() <= tau_sq) {
                ++hits_p;
                break;
            }
        }
    }
    std::int64_t hits_q = 0;
    for (const auto& q : target.points) {
        for (const auto& p : moved) {
            if ((p - q).squaredNorm() <= tau_sq) {
                ++hits_q;
                break;
            }
        }
    }
    return 0.5 * (static_cast<double>(hits_p) / static_cast<double>(source.size()) +
                  static_cast<double>(hits_q) / static_cast<double>(target.size()));
}

SynthPair synth_pair(const SceneConfig& cfg) {
    cfg.validate();
    const std::int64_t n = cfg.points_per_fragment;

    util::Rng surface_rng(util::derive_seed(cfg.seed, "surface"));
    util::Rng carve_rng(util::derive_seed(cfg.seed, "carve"));
    util::Rng transform_rng(util::derive_seed(cfg.seed, "transform"));
    util::Rng noise_rng(util::derive_seed(cfg.seed, "noise"));

    // Pool of 3n points ordered along a random direction. The first crop is
    // the leading window; the second starts s positions later, so s = 0 is
    // identical crops and s = 2n fully disjoint ones.
    const geom::PointCloud pool = sample_surface_impl(cfg.surface, 3 * n, surface_rng);
    const Eigen::Vector3d dir = random_unit(carve_rng);
    std::vector<std::int64_t> order(pool.points.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::int64_t a, std::int64_t b) {
        return pool[a].dot(dir) < pool[b].dot(dir);
    });

    const geom::PointCloud crop_a = slice(pool, order, 0, n);
    const auto measure = [&](std::int64_t s) {
        return overlap_fraction(crop_a, slice(pool, order, s, n), geom::RigidTransform::identity());
    };

    std::int64_t shift = 0;
    double achieved = 1.0;
    if (cfg.overlap_target < 1.0) {
        // Measured overlap decreases in s; bisect, then keep the closer
        // endpoint (ties to the smaller shift).
        std::int64_t lo = 0, hi = 2 * n;
        double m_lo = 1.0, m_hi = measure(hi);
        while (hi - lo > 1) {
            const std::int64_t mid = lo + (hi - lo) / 2;
            const double m = measure(mid);
            if (m >= cfg.overlap_target) {
                lo = mid;
                m_lo = m;
            } else {
                hi = mid;
                m_hi = m;
            }
        }
        const bool take_lo =
            std::abs(m_lo - cfg.overlap_target) <= std::abs(m_hi - cfg.overlap_target);
        shift = take_lo ? lo : hi;
        achieved = take_lo ? m_lo : m_hi;
        if (std::abs(achieved - cfg.overlap_target) > 0.05)
            throw std::runtime_error("synth_pair: overlap target " +
                                     std::to_string(cfg.overlap_target) +
                                     " unreachable; closest crop measures " +
                                     std::to_string(achieved));
    }
    const geom::PointCloud crop_b = slice(pool, order, shift, n);

    SynthPair out;
    const double angle = transform_rng.uniform(0.0, cfg.max_rotation_deg) * kPi / 180.0;
    const Eigen::Vector3d axis = random_unit(transform_rng);
    out.gt.rotation = Eigen::AngleAxisd(angle, axis).toRotationMatrix();
    out.gt.translation = transform_rng.uniform(0.0, cfg.max_translation) * random_unit(transform_rng);

    out.source = crop_a;
    out.target = geom::apply_transform(out.gt, crop_b);
    if (cfg.noise_sigma > 0.0) {
        for (auto& q : out.target.points)
            q += cfg.noise_sigma *
                 Eigen::Vector3d(noise_rng.gaussian(), noise_rng.gaussian(), noise_rng.gaussian());
    }
    out.overlap = cfg.noise_sigma > 0.0 || cfg.overlap_target >= 1.0
                      ? overlap_fraction(out.source, out.target, out.gt)
                      : achieved;
    return out;
}

}  // namespace lahreg::io
