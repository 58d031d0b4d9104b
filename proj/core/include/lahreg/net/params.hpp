#pragma once

#include <functional>
#include <string>

#include "lahreg/ad/tensor.hpp"
#include "lahreg/attn/params.hpp"
#include "lahreg/net/config.hpp"

namespace lahreg::net {

// Per-point two-layer MLP plus a linear residual projection, applied before
// voxel max-pooling in an encoder stage.
struct EncoderParams {
    ad::Tensor w1, b1, w2, b2, proj;
};

// Two-layer MLP applied to [upsampled coarse feature ; skip feature].
struct DecoderParams {
    ad::Tensor w1, b1, w2, b2;
};

struct NetworkParams {
    EncoderParams enc1, enc2, enc3;
    attn::AttentionParams gt1, gt2, it;
    DecoderParams dec3, dec2, dec1;
    ad::Tensor head_w, head_b;

    // Stable pipeline-order traversal; the names key optimizer state and
    // checkpoint entries.
    void visit(const std::function<void(const std::string&, ad::Tensor&)>& fn);
};

// Deterministic initialization from the config seed: unit gains, zero biases,
// N(0, 1/sqrt(fan_in)) weights.
NetworkParams init_network_params(const NetworkConfig& config);

// Checkpoint round-trip; load verifies that every stored array matches the
// current parameter names and shapes.
void save_network(NetworkParams& params, const std::string& path);
void load_network(NetworkParams& params, const std::string& path);

}  // namespace lahreg::net
