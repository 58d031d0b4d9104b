#include "lahreg/net/config.hpp"

#include <stdexcept>
#include <string>

namespace lahreg::net {

void NetworkConfig::validate() const {
    for (int s = 0; s < 2; ++s) {
        if (gt_heads[static_cast<std::size_t>(s)] < 1 ||
            gt_head_dims[static_cast<std::size_t>(s)] < 1 ||
            gt_window_points[static_cast<std::size_t>(s)] < 1) {
            throw std::invalid_argument("NetworkConfig: stage " + std::to_string(s + 1) +
                                        " attention sizes must be positive");
        }
        const std::int64_t derived = gt_heads[static_cast<std::size_t>(s)] *
                                     gt_head_dims[static_cast<std::size_t>(s)];
        if (stage_widths[static_cast<std::size_t>(s)] != derived) {
            throw std::invalid_argument(
                "NetworkConfig: stage " + std::to_string(s + 1) + " width " +
                std::to_string(stage_widths[static_cast<std::size_t>(s)]) +
                " != heads x head_dim = " + std::to_string(derived));
        }
    }
    if (it_heads < 1 || it_head_dim < 1 || it_window_points < 1) {
        throw std::invalid_argument("NetworkConfig: interaction attention sizes must be positive");
    }
    if (stage_widths[2] != it_heads * it_head_dim) {
        throw std::invalid_argument("NetworkConfig: bottleneck width " +
                                    std::to_string(stage_widths[2]) + " != heads x head_dim = " +
                                    std::to_string(it_heads * it_head_dim));
    }
    if (descriptor_dim < 1) {
        throw std::invalid_argument("NetworkConfig: descriptor_dim must be positive");
    }
    for (double edge : voxel_edges) {
        if (!(edge > 0.0)) {
            throw std::invalid_argument("NetworkConfig: voxel edges must be positive");
        }
    }
    if (hash_bins < 2 || hash_bins % 2 != 0) {
        throw std::invalid_argument("NetworkConfig: hash_bins must be even and >= 2");
    }
    if (hash_rounds < 1) {
        throw std::invalid_argument("NetworkConfig: hash_rounds must be >= 1");
    }
    if (cross_window_count < 0) {
        throw std::invalid_argument("NetworkConfig: cross_window_count must be >= 0");
    }
}

}  // namespace lahreg::net
