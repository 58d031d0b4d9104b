#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "lahreg/io/synth.hpp"
#include "lahreg/lsh/hash.hpp"
#include "lahreg/net/train.hpp"
#include "lahreg/reg/metrics.hpp"

namespace lahreg::io {

struct RansacConfig {
    std::int64_t match_samples = 500;  // putative correspondences drawn per pair
    bool mutual = false;
    std::int64_t iterations = 1000;
    double inlier_threshold = 0.05;  // meters
    std::uint64_t seed = 0;

    void validate() const;
};

// Steps and batch shape of the training shell; the network, loss, and
// optimizer sections live beside it in RunConfig.
struct TrainShell {
    std::int64_t steps = 500;
    double tau_pos = 0.05;  // meters
    std::int64_t n_pos = 128;
    std::int64_t n_neg = 128;
    std::uint64_t seed = 1;

    void validate() const;
};

struct PathsConfig {
    std::string pairs_manifest;
    std::string checkpoint;
    std::string log;
    std::string output;
};

// Everything a command needs, in one versioned file. Parsing is strict: every
// field must be present, unknown fields are rejected, and all problems are
// reported together.
struct RunConfig {
    lsh::HashConfig hash;
    net::NetworkConfig network;
    net::LossConfig loss;
    net::AdamConfig adam;
    reg::MetricThresholds thresholds;
    RansacConfig ransac;
    SceneConfig scene;
    TrainShell train;
    PathsConfig paths;
};

class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const { return problems_; }

  private:
    std::vector<std::string> problems_;
};

// Every invariant violation across all sections, one message per field;
// empty when the config is valid.
std::vector<std::string> violations(const RunConfig& cfg);

// Throws ConfigError listing every structural and semantic problem at once.
RunConfig parse_run_config(const std::string& json_text);

// Stable field order, full double precision; parse(serialize(cfg)) == cfg.
std::string serialize_run_config(const RunConfig& cfg);

RunConfig load_run_config(const std::string& path);
void save_run_config(const std::string& path, const RunConfig& cfg);

}  // namespace lahreg::io
