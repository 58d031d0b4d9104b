#pragma once

#include <array>
#include <cstdint>

namespace lahreg::net {

// Shape of the three-level pyramid: two group-attention stages feeding a
// pair-interaction bottleneck, mirrored by three decoder stages. Stage widths
// are stored explicitly and must equal heads x head_dim at each level.
struct NetworkConfig {
    std::array<std::int64_t, 3> stage_widths{64, 256, 512};

    std::array<std::int64_t, 2> gt_window_points{128, 64};
    std::array<std::int64_t, 2> gt_heads{2, 4};
    std::array<std::int64_t, 2> gt_head_dims{32, 64};

    std::int64_t it_window_points = 32;
    std::int64_t it_heads = 4;
    std::int64_t it_head_dim = 128;

    std::int64_t descriptor_dim = 32;

    // Voxel edge (meters) of each downsampling stage, coarsest last.
    std::array<double, 3> voxel_edges{0.03, 0.06, 0.12};

    std::int64_t hash_bins = 64;
    std::int64_t hash_rounds = 4;
    std::int64_t cross_window_count = 2;

    std::uint64_t seed = 0;

    // Throws std::invalid_argument on any violated constraint.
    void validate() const;
};

// Margins and negative weight of the hardest-contrastive objective.
struct LossConfig {
    double positive_margin = 0.1;
    double negative_margin = 1.4;
    double negative_weight = 0.5;
};

// Width of the raw per-point input features (centered coordinates).
inline constexpr std::int64_t kInputDim = 3;

}  // namespace lahreg::net
