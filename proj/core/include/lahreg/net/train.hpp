#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "lahreg/net/loss.hpp"
#include "lahreg/net/network.hpp"

namespace lahreg::net {

struct AdamConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

// One bias-corrected moment update on a flat value buffer.
void adam_apply(std::vector<double>& value, const std::vector<double>& grad,
                std::vector<double>& m, std::vector<double>& v, std::int64_t step,
                const AdamConfig& config);

// First-order optimizer with per-parameter moment state keyed by the
// parameter visit names.
class Adam {
  public:
    explicit Adam(AdamConfig config = {}) : config_(config) {}

    const AdamConfig& config() const { return config_; }
    std::int64_t steps_taken() const { return step_; }

    // Applies one update to every visited parameter; gradients are read from
    // the tape the parameters are currently watched on.
    void step(NetworkParams& params);

  private:
    AdamConfig config_;
    std::int64_t step_ = 0;
    std::unordered_map<std::string, std::pair<std::vector<double>, std::vector<double>>> state_;
};

// One forward/backward/update on a single pair batch. Returns the loss value.
// Throws std::runtime_error when the loss is not finite.
double train_step(NetworkParams& params, Adam& optimizer, const PairBatch& batch,
                  const NetworkConfig& net_config, const LossConfig& loss_config,
                  const ForwardOptions& options = {});

struct TrainPair {
    geom::PointCloud source, target;
    geom::RigidTransform gt;
};

struct TrainConfig {
    NetworkConfig network;
    LossConfig loss;
    AdamConfig adam;
    std::int64_t steps = 500;
    double tau_pos = 0.05;
    std::int64_t n_pos = 128;
    std::int64_t n_neg = 128;
    std::uint64_t seed = 1;
    std::string log_path;         // per-step CSV (step,loss,seconds); empty = no log
    std::string checkpoint_path;  // final parameter snapshot; empty = no checkpoint
};

struct TrainResult {
    std::vector<double> losses;  // one entry per step
};

// Cycles through the pairs, resampling the batch each step from a seed
// derived from (config.seed, step). Two runs with identical inputs produce
// identical loss curves.
TrainResult train_loop(const TrainConfig& config, const std::vector<TrainPair>& pairs,
                       NetworkParams& params);

}  // namespace lahreg::net
