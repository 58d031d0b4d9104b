#include "lahreg/io/run_config.hpp"

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

namespace lahreg::io {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) {
        if (!out.empty()) out += "; ";
        out += p;
    }
    return out;
}

// Strict extraction pass over one config object: type mismatches, missing
// fields, and unknown fields all land in `problems` while extraction
// continues, so a single parse reports everything.
class Walker {
  public:
    explicit Walker(std::vector<std::string>& problems) : problems_(problems) {}

    const ordered_json* section(const ordered_json& root, const char* name) {
        if (!root.contains(name)) {
            problems_.push_back(std::string(name) + ": missing section");
            return nullptr;
        }
        if (!root[name].is_object()) {
            problems_.push_back(std::string(name) + ": must be an object");
            return nullptr;
        }
        return &root[name];
    }

    void check_keys(const ordered_json& obj, const std::string& prefix,
                    std::initializer_list<const char*> allowed) {
        for (const auto& [key, value] : obj.items()) {
            bool known = false;
            for (const char* k : allowed) known |= key == k;
            if (!known) problems_.push_back(prefix + ": unknown field \"" + key + "\"");
        }
    }

    void get_i64(const ordered_json& obj, const std::string& prefix, const char* key,
                 std::int64_t& out) {
        const ordered_json* v = field(obj, prefix, key);
        if (!v) return;
        if (!v->is_number_integer() && !v->is_number_unsigned())
            problems_.push_back(prefix + "." + key + ": must be an integer");
        else
            out = v->get<std::int64_t>();
    }

    void get_u64(const ordered_json& obj, const std::string& prefix, const char* key,
                 std::uint64_t& out) {
        const ordered_json* v = field(obj, prefix, key);
        if (!v) return;
        if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<std::int64_t>() >= 0))
            problems_.push_back(prefix + "." + key + ": must be a nonnegative integer");
        else
            out = v->get<std::uint64_t>();
    }

    void get_f64(const ordered_json& obj, const std::string& prefix, const char* key,
                 double& out) {
        const ordered_json* v = field(obj, prefix, key);
        if (!v) return;
        if (!v->is_number())
            problems_.push_back(prefix + "." + key + ": must be a number");
        else
            out = v->get<double>();
    }

    void get_bool(const ordered_json& obj, const std::string& prefix, const char* key, bool& out) {
        const ordered_json* v = field(obj, prefix, key);
        if (!v) return;
        if (!v->is_boolean())
            problems_.push_back(prefix + "." + key + ": must be a boolean");
        else
            out = v->get<bool>();
    }

    void get_str(const ordered_json& obj, const std::string& prefix, const char* key,
                 std::string& out) {
        const ordered_json* v = field(obj, prefix, key);
        if (!v) return;
        if (!v->is_string())
            problems_.push_back(prefix + "." + key + ": must be a string");
        else
            out = v->get<std::string>();
    }

    template <typename T, std::size_t N>
    void get_array(const ordered_json& obj, const std::string& prefix, const char* key,
                   std::array<T, N>& out) {
        const ordered_json* v = field(obj, prefix, key);
        if (!v) return;
        if (!v->is_array() || v->size() != N) {
            problems_.push_back(prefix + "." + key + ": must be an array of " +
                                std::to_string(N) + " numbers");
            return;
        }
        for (std::size_t i = 0; i < N; ++i) {
            const auto& e = (*v)[i];
            if constexpr (std::is_floating_point_v<T>) {
                if (!e.is_number()) {
                    problems_.push_back(prefix + "." + key + ": must be an array of numbers");
                    return;
                }
            } else {
                if (!e.is_number_integer() && !e.is_number_unsigned()) {
                    problems_.push_back(prefix + "." + key + ": must be an array of integers");
                    return;
                }
            }
            out[i] = e.get<T>();
        }
    }

  private:
    const ordered_json* field(const ordered_json& obj, const std::string& prefix,
                              const char* key) {
        if (!obj.contains(key)) {
            problems_.push_back(prefix + "." + key + ": missing");
            return nullptr;
        }
        return &obj[key];
    }

    std::vector<std::string>& problems_;
};

void check_path_creatable(const std::string& label, const std::string& path,
                          std::vector<std::string>& problems) {
    if (path.empty()) return;
    namespace fs = std::filesystem;
    std::error_code ec;
    if (fs::exists(path, ec)) return;
    // Walk to the nearest existing ancestor; it must be a directory for the
    // path to be creatable.
    fs::path ancestor = fs::absolute(path, ec).parent_path();
    while (!ancestor.empty() && !fs::exists(ancestor, ec)) {
        const auto parent = ancestor.parent_path();
        if (parent == ancestor) break;
        ancestor = parent;
    }
    if (!ancestor.empty() && fs::exists(ancestor, ec) && !fs::is_directory(ancestor, ec))
        problems.push_back("paths." + label + ": " + ancestor.string() +
                           " exists and is not a directory");
}

}  // namespace

void RansacConfig::validate() const {
    if (match_samples < 1)
        throw std::invalid_argument("RansacConfig: match_samples must be >= 1");
    if (iterations < 1) throw std::invalid_argument("RansacConfig: iterations must be >= 1");
    if (!(inlier_threshold > 0.0))
        throw std::invalid_argument("RansacConfig: inlier_threshold must be positive");
}

void TrainShell::validate() const {
    if (steps < 0) throw std::invalid_argument("TrainShell: steps must be >= 0");
    if (!(tau_pos > 0.0)) throw std::invalid_argument("TrainShell: tau_pos must be positive");
    if (n_pos < 1 || n_neg < 1)
        throw std::invalid_argument("TrainShell: n_pos and n_neg must be >= 1");
}

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error("invalid config: " + join(problems)), problems_(std::move(problems)) {}

std::vector<std::string> violations(const RunConfig& cfg) {
    std::vector<std::string> out;

    if (cfg.hash.bins < 2 || cfg.hash.bins % 2 != 0)
        out.push_back("hash.bins: must be even and >= 2");
    if (cfg.hash.rounds < 1) out.push_back("hash.rounds: must be >= 1");

    const auto& n = cfg.network;
    for (std::size_t s = 0; s < 2; ++s) {
        const std::string stage = "network stage " + std::to_string(s + 1);
        if (n.gt_heads[s] < 1 || n.gt_head_dims[s] < 1 || n.gt_window_points[s] < 1)
            out.push_back(stage + ": attention sizes must be positive");
        else if (n.stage_widths[s] != n.gt_heads[s] * n.gt_head_dims[s])
            out.push_back(stage + ": width " + std::to_string(n.stage_widths[s]) +
                          " != heads x head_dim = " +
                          std::to_string(n.gt_heads[s] * n.gt_head_dims[s]));
    }
    if (n.it_heads < 1 || n.it_head_dim < 1 || n.it_window_points < 1)
        out.push_back("network: interaction attention sizes must be positive");
    else if (n.stage_widths[2] != n.it_heads * n.it_head_dim)
        out.push_back("network: bottleneck width " + std::to_string(n.stage_widths[2]) +
                      " != heads x head_dim = " + std::to_string(n.it_heads * n.it_head_dim));
    if (n.descriptor_dim < 1) out.push_back("network.descriptor_dim: must be positive");
    for (double edge : n.voxel_edges)
        if (!(edge > 0.0)) {
            out.push_back("network.voxel_edges: must be positive");
            break;
        }
    if (n.hash_bins < 2 || n.hash_bins % 2 != 0)
        out.push_back("network.hash_bins: must be even and >= 2");
    if (n.hash_rounds < 1) out.push_back("network.hash_rounds: must be >= 1");
    if (n.cross_window_count < 0) out.push_back("network.cross_window_count: must be >= 0");

    if (!(cfg.loss.positive_margin >= 0.0))
        out.push_back("loss.positive_margin: must be >= 0");
    if (!(cfg.loss.negative_margin > 0.0))
        out.push_back("loss.negative_margin: must be positive");
    if (!(cfg.loss.negative_weight >= 0.0))
        out.push_back("loss.negative_weight: must be >= 0");

    if (!(cfg.adam.learning_rate > 0.0)) out.push_back("adam.learning_rate: must be positive");
    if (!(cfg.adam.beta1 >= 0.0) || cfg.adam.beta1 >= 1.0)
        out.push_back("adam.beta1: must lie in [0, 1)");
    if (!(cfg.adam.beta2 >= 0.0) || cfg.adam.beta2 >= 1.0)
        out.push_back("adam.beta2: must lie in [0, 1)");
    if (!(cfg.adam.epsilon > 0.0)) out.push_back("adam.epsilon: must be positive");

    if (!(cfg.thresholds.tau1 > 0.0)) out.push_back("thresholds.tau1: must be positive");
    if (!(cfg.thresholds.tau2 > 0.0) || cfg.thresholds.tau2 > 1.0)
        out.push_back("thresholds.tau2: must lie in (0, 1]");
    if (!(cfg.thresholds.rr_rre_max > 0.0))
        out.push_back("thresholds.rr_rre_max: must be positive");
    if (!(cfg.thresholds.rr_rte_max > 0.0))
        out.push_back("thresholds.rr_rte_max: must be positive");

    if (cfg.ransac.match_samples < 1) out.push_back("ransac.match_samples: must be >= 1");
    if (cfg.ransac.iterations < 1) out.push_back("ransac.iterations: must be >= 1");
    if (!(cfg.ransac.inlier_threshold > 0.0))
        out.push_back("ransac.inlier_threshold: must be positive");

    if (cfg.scene.points_per_fragment < 1)
        out.push_back("scene.points_per_fragment: must be >= 1");
    if (!(cfg.scene.overlap_target > 0.0) || cfg.scene.overlap_target > 1.0)
        out.push_back("scene.overlap_target: must lie in (0, 1]");
    if (!(cfg.scene.noise_sigma >= 0.0)) out.push_back("scene.noise_sigma: must be >= 0");
    if (!(cfg.scene.max_rotation_deg >= 0.0) || cfg.scene.max_rotation_deg > 180.0)
        out.push_back("scene.max_rotation_deg: must lie in [0, 180]");
    if (!(cfg.scene.max_translation >= 0.0))
        out.push_back("scene.max_translation: must be >= 0");

    if (cfg.train.steps < 0) out.push_back("train.steps: must be >= 0");
    if (!(cfg.train.tau_pos > 0.0)) out.push_back("train.tau_pos: must be positive");
    if (cfg.train.n_pos < 1) out.push_back("train.n_pos: must be >= 1");
    if (cfg.train.n_neg < 1) out.push_back("train.n_neg: must be >= 1");

    check_path_creatable("pairs_manifest", cfg.paths.pairs_manifest, out);
    check_path_creatable("checkpoint", cfg.paths.checkpoint, out);
    check_path_creatable("log", cfg.paths.log, out);
    check_path_creatable("output", cfg.paths.output, out);
    return out;
}

RunConfig parse_run_config(const std::string& json_text) {
    const ordered_json root = ordered_json::parse(json_text, nullptr, false);
    if (root.is_discarded()) throw ConfigError({"config is not valid JSON"});
    if (!root.is_object()) throw ConfigError({"config root must be an object"});

    std::vector<std::string> problems;
    Walker w(problems);
    RunConfig cfg;

    w.check_keys(root, "config",
                 {"version", "hash", "network", "loss", "adam", "thresholds", "ransac", "scene",
                  "train", "paths"});
    std::int64_t version = 1;
    w.get_i64(root, "config", "version", version);
    if (version != 1) problems.push_back("config.version: expected 1");

    if (const auto* j = w.section(root, "hash")) {
        w.check_keys(*j, "hash", {"bins", "rounds", "seed"});
        w.get_i64(*j, "hash", "bins", cfg.hash.bins);
        w.get_i64(*j, "hash", "rounds", cfg.hash.rounds);
        w.get_u64(*j, "hash", "seed", cfg.hash.seed);
    }
    if (const auto* j = w.section(root, "network")) {
        w.check_keys(*j, "network",
                     {"stage_widths", "gt_window_points", "gt_heads", "gt_head_dims",
                      "it_window_points", "it_heads", "it_head_dim", "descriptor_dim",
                      "voxel_edges", "hash_bins", "hash_rounds", "cross_window_count", "seed"});
        w.get_array(*j, "network", "stage_widths", cfg.network.stage_widths);
        w.get_array(*j, "network", "gt_window_points", cfg.network.gt_window_points);
        w.get_array(*j, "network", "gt_heads", cfg.network.gt_heads);
        w.get_array(*j, "network", "gt_head_dims", cfg.network.gt_head_dims);
        w.get_i64(*j, "network", "it_window_points", cfg.network.it_window_points);
        w.get_i64(*j, "network", "it_heads", cfg.network.it_heads);
        w.get_i64(*j, "network", "it_head_dim", cfg.network.it_head_dim);
        w.get_i64(*j, "network", "descriptor_dim", cfg.network.descriptor_dim);
        w.get_array(*j, "network", "voxel_edges", cfg.network.voxel_edges);
        w.get_i64(*j, "network", "hash_bins", cfg.network.hash_bins);
        w.get_i64(*j, "network", "hash_rounds", cfg.network.hash_rounds);
        w.get_i64(*j, "network", "cross_window_count", cfg.network.cross_window_count);
        w.get_u64(*j, "network", "seed", cfg.network.seed);
    }
    if (const auto* j = w.section(root, "loss")) {
        w.check_keys(*j, "loss", {"positive_margin", "negative_margin", "negative_weight"});
        w.get_f64(*j, "loss", "positive_margin", cfg.loss.positive_margin);
        w.get_f64(*j, "loss", "negative_margin", cfg.loss.negative_margin);
        w.get_f64(*j, "loss", "negative_weight", cfg.loss.negative_weight);
    }
    if (const auto* j = w.section(root, "adam")) {
        w.check_keys(*j, "adam", {"learning_rate", "beta1", "beta2", "epsilon"});
        w.get_f64(*j, "adam", "learning_rate", cfg.adam.learning_rate);
        w.get_f64(*j, "adam", "beta1", cfg.adam.beta1);
        w.get_f64(*j, "adam", "beta2", cfg.adam.beta2);
        w.get_f64(*j, "adam", "epsilon", cfg.adam.epsilon);
    }
    if (const auto* j = w.section(root, "thresholds")) {
        w.check_keys(*j, "thresholds", {"tau1", "tau2", "rr_rre_max", "rr_rte_max"});
        w.get_f64(*j, "thresholds", "tau1", cfg.thresholds.tau1);
        w.get_f64(*j, "thresholds", "tau2", cfg.thresholds.tau2);
        w.get_f64(*j, "thresholds", "rr_rre_max", cfg.thresholds.rr_rre_max);
        w.get_f64(*j, "thresholds", "rr_rte_max", cfg.thresholds.rr_rte_max);
    }
    if (const auto* j = w.section(root, "ransac")) {
        w.check_keys(*j, "ransac",
                     {"match_samples", "mutual", "iterations", "inlier_threshold", "seed"});
        w.get_i64(*j, "ransac", "match_samples", cfg.ransac.match_samples);
        w.get_bool(*j, "ransac", "mutual", cfg.ransac.mutual);
        w.get_i64(*j, "ransac", "iterations", cfg.ransac.iterations);
        w.get_f64(*j, "ransac", "inlier_threshold", cfg.ransac.inlier_threshold);
        w.get_u64(*j, "ransac", "seed", cfg.ransac.seed);
    }
    if (const auto* j = w.section(root, "scene")) {
        w.check_keys(*j, "scene",
                     {"surface", "points_per_fragment", "overlap_target", "noise_sigma",
                      "max_rotation_deg", "max_translation", "seed"});
        std::string surface = to_string(cfg.scene.surface);
        w.get_str(*j, "scene", "surface", surface);
        try {
            cfg.scene.surface = surface_kind_from_string(surface);
        } catch (const std::invalid_argument& e) {
            problems.push_back(std::string("scene.surface: ") + e.what());
        }
        w.get_i64(*j, "scene", "points_per_fragment", cfg.scene.points_per_fragment);
        w.get_f64(*j, "scene", "overlap_target", cfg.scene.overlap_target);
        w.get_f64(*j, "scene", "noise_sigma", cfg.scene.noise_sigma);
        w.get_f64(*j, "scene", "max_rotation_deg", cfg.scene.max_rotation_deg);
        w.get_f64(*j, "scene", "max_translation", cfg.scene.max_translation);
        w.get_u64(*j, "scene", "seed", cfg.scene.seed);
    }
    if (const auto* j = w.section(root, "train")) {
        w.check_keys(*j, "train", {"steps", "tau_pos", "n_pos", "n_neg", "seed"});
        w.get_i64(*j, "train", "steps", cfg.train.steps);
        w.get_f64(*j, "train", "tau_pos", cfg.train.tau_pos);
        w.get_i64(*j, "train", "n_pos", cfg.train.n_pos);
        w.get_i64(*j, "train", "n_neg", cfg.train.n_neg);
        w.get_u64(*j, "train", "seed", cfg.train.seed);
    }
    if (const auto* j = w.section(root, "paths")) {
        w.check_keys(*j, "paths", {"pairs_manifest", "checkpoint", "log", "output"});
        w.get_str(*j, "paths", "pairs_manifest", cfg.paths.pairs_manifest);
        w.get_str(*j, "paths", "checkpoint", cfg.paths.checkpoint);
        w.get_str(*j, "paths", "log", cfg.paths.log);
        w.get_str(*j, "paths", "output", cfg.paths.output);
    }

    for (auto& v : violations(cfg)) problems.push_back(std::move(v));
    if (!problems.empty()) throw ConfigError(std::move(problems));
    return cfg;
}

std::string serialize_run_config(const RunConfig& cfg) {
    ordered_json root;
    root["version"] = 1;
    root["hash"] = {{"bins", cfg.hash.bins}, {"rounds", cfg.hash.rounds}, {"seed", cfg.hash.seed}};
    root["network"] = {{"stage_widths", cfg.network.stage_widths},
                       {"gt_window_points", cfg.network.gt_window_points},
                       {"gt_heads", cfg.network.gt_heads},
                       {"gt_head_dims", cfg.network.gt_head_dims},
                       {"it_window_points", cfg.network.it_window_points},
                       {"it_heads", cfg.network.it_heads},
                       {"it_head_dim", cfg.network.it_head_dim},
                       {"descriptor_dim", cfg.network.descriptor_dim},
                       {"voxel_edges", cfg.network.voxel_edges},
                       {"hash_bins", cfg.network.hash_bins},
                       {"hash_rounds", cfg.network.hash_rounds},
                       {"cross_window_count", cfg.network.cross_window_count},
                       {"seed", cfg.network.seed}};
    root["loss"] = {{"positive_margin", cfg.loss.positive_margin},
                    {"negative_margin", cfg.loss.negative_margin},
                    {"negative_weight", cfg.loss.negative_weight}};
    root["adam"] = {{"learning_rate", cfg.adam.learning_rate},
                    {"beta1", cfg.adam.beta1},
                    {"beta2", cfg.adam.beta2},
                    {"epsilon", cfg.adam.epsilon}};
    root["thresholds"] = {{"tau1", cfg.thresholds.tau1},
                          {"tau2", cfg.thresholds.tau2},
                          {"rr_rre_max", cfg.thresholds.rr_rre_max},
                          {"rr_rte_max", cfg.thresholds.rr_rte_max}};
    root["ransac"] = {{"match_samples", cfg.ransac.match_samples},
                      {"mutual", cfg.ransac.mutual},
                      {"iterations", cfg.ransac.iterations},
                      {"inlier_threshold", cfg.ransac.inlier_threshold},
                      {"seed", cfg.ransac.seed}};
    root["scene"] = {{"surface", to_string(cfg.scene.surface)},
                     {"points_per_fragment", cfg.scene.points_per_fragment},
                     {"overlap_target", cfg.scene.overlap_target},
                     {"noise_sigma", cfg.scene.noise_sigma},
                     {"max_rotation_deg", cfg.scene.max_rotation_deg},
                     {"max_translation", cfg.scene.max_translation},
                     {"seed", cfg.scene.seed}};
    root["train"] = {{"steps", cfg.train.steps},
                     {"tau_pos", cfg.train.tau_pos},
                     {"n_pos", cfg.train.n_pos},
                     {"n_neg", cfg.train.n_neg},
                     {"seed", cfg.train.seed}};
    root["paths"] = {{"pairs_manifest", cfg.paths.pairs_manifest},
                     {"checkpoint", cfg.paths.checkpoint},
                     {"log", cfg.paths.log},
                     {"output", cfg.paths.output}};
    return root.dump(2) + "\n";
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str());
}

void save_run_config(const std::string& path, const RunConfig& cfg) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot create " + path);
    out << serialize_run_config(cfg);
    if (!out) throw std::runtime_error("write failed on " + path);
}

}  // namespace lahreg::io
