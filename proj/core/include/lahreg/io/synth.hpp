#pragma once

#include <cstdint>
#include <string>

#include "lahreg/geom/point_cloud.hpp"
#include "lahreg/geom/rigid_transform.hpp"

namespace lahreg::io {

// Base shape the fragment pair is carved from, all at desk scale (~1 m).
enum class SurfaceKind { room_corner, polyhedral, gaussian_mixture };

// Accepts "room-corner", "polyhedral", "gaussian-mixture"; throws
// std::invalid_argument otherwise.
SurfaceKind surface_kind_from_string(const std::string& name);
std::string to_string(SurfaceKind kind);

struct SceneConfig {
    SurfaceKind surface = SurfaceKind::room_corner;
    std::int64_t points_per_fragment = 2000;
    double overlap_target = 0.5;    // fraction of points shared, in (0, 1]
    double noise_sigma = 0.0;       // meters, applied to the target fragment
    double max_rotation_deg = 30.0;
    double max_translation = 0.5;   // meters
    std::uint64_t seed = 0;

    // Throws std::invalid_argument on any violated constraint.
    void validate() const;
};

struct SynthPair {
    geom::PointCloud source;   // fragment P in the base frame
    geom::PointCloud target;   // fragment Q, moved by gt and perturbed
    geom::RigidTransform gt;   // maps source-frame points onto the target frame
    double overlap = 0.0;      // measured fraction of the returned pair
};

// Proximity radius that defines when a point counts as present in both
// fragments.
inline constexpr double kOverlapTau = 0.05;

// count(p in source: min_q |t(p) - q| <= tau) / |source| averaged with the
// mirrored fraction over the target. Brute force; empty clouds give 0.
double overlap_fraction(const geom::PointCloud& source, const geom::PointCloud& target,
                        const geom::RigidTransform& t, double tau = kOverlapTau);

// count points of the base shape, deterministic per seed. Also the data
// generator behind the partition benchmarks.
geom::PointCloud sample_surface(SurfaceKind kind, std::int64_t count, std::uint64_t seed);

// Carves n points per fragment, deterministic per cfg.seed. Samples one base
// shape, sorts it along a random direction, and slides the second crop until
// the measured overlap lands within +-0.05 of the target; full overlap
// short-circuits to byte-identical crops, so noise 0 gives target ==
// gt(source) exactly. Throws std::runtime_error when no crop offset reaches
// the target band.
SynthPair synth_pair(const SceneConfig& cfg);

}  // namespace lahreg::io
