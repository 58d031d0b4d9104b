#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "lahreg/ad/tensor.hpp"
#include "lahreg/geom/point_cloud.hpp"
#include "lahreg/net/params.hpp"

namespace lahreg::net {

// Per-call knobs. The window-layout seeds travel with the cloud slot: swapping
// the clouds together with their seeds mirrors the computation exactly.
struct ForwardOptions {
    std::optional<std::uint64_t> seed_p;
    std::optional<std::uint64_t> seed_q;
};

struct ForwardResult {
    ad::Tensor descriptors_p;  // |P| x descriptor_dim, unit rows
    ad::Tensor descriptors_q;  // |Q| x descriptor_dim, unit rows
};

// Full pair forward pass: per-cloud centering, three encoder stages with two
// group-attention stages in between, pair interaction at the bottleneck,
// mirrored decoders with skip connections, then a linear head with L2 row
// normalization. Pure given the parameters; gradients flow when the
// parameters are watched on a tape.
ForwardResult forward(const geom::PointCloud& cloud_p, const geom::PointCloud& cloud_q,
                      const NetworkConfig& config, const NetworkParams& params,
                      const ForwardOptions& options = {});

}  // namespace lahreg::net
