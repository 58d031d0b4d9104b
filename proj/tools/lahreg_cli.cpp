// Command-line shell around the registration library: synthetic scenes,
// partition inspection, timing sweeps, training, descriptor extraction,
// registration, and evaluation. Each command is a thin composition of library
// calls; outputs with fixed configs and seeds are bit-reproducible except for
// wall-time fields. Failures exit nonzero with a JSON error on stderr.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "lahreg/ad/checkpoint.hpp"
#include "lahreg/io/cloud_io.hpp"
#include "lahreg/io/manifest.hpp"
#include "lahreg/io/run_config.hpp"
#include "lahreg/io/synth.hpp"
#include "lahreg/lsh/baselines.hpp"
#include "lahreg/lsh/partition.hpp"
#include "lahreg/net/network.hpp"
#include "lahreg/net/train.hpp"
#include "lahreg/reg/match.hpp"
#include "lahreg/reg/metrics.hpp"
#include "lahreg/reg/ransac.hpp"
#include "lahreg/reg/report.hpp"
#include "lahreg/util/parallel.hpp"
#include "lahreg/util/rng.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace lahreg;

int fail(const std::string& type, const std::string& message,
         const std::vector<std::string>& problems = {}) {
    json err = {{"error", {{"type", type}, {"message", message}}}};
    if (!problems.empty()) err["error"]["problems"] = problems;
    std::cerr << err.dump(2) << std::endl;
    return 1;
}

// JSON result to --output when given, stdout otherwise.
void emit(const json& j, const std::string& output) {
    if (output.empty()) {
        std::cout << j.dump(2) << '\n';
        return;
    }
    std::ofstream out(output, std::ios::binary);
    if (!out) throw std::runtime_error("cannot create " + output);
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed on " + output);
}

void emit_text(const std::string& text, const std::string& output) {
    if (output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(output, std::ios::binary);
    if (!out) throw std::runtime_error("cannot create " + output);
    out << text;
    if (!out) throw std::runtime_error("write failed on " + output);
}

json transform_json(const geom::RigidTransform& t) {
    json rot = json::array();
    for (int r = 0; r < 3; ++r)
        rot.push_back({t.rotation(r, 0), t.rotation(r, 1), t.rotation(r, 2)});
    return {{"rotation", rot},
            {"translation", {t.translation.x(), t.translation.y(), t.translation.z()}}};
}

io::RunConfig load_config(const std::string& path) {
    return path.empty() ? io::RunConfig{} : io::load_run_config(path);
}

// Mean seconds per run; short runs are repeated so the clock resolution does
// not dominate.
double time_run(const std::function<void()>& fn) {
    using clock = std::chrono::steady_clock;
    double total = 0.0;
    int reps = 0;
    do {
        const auto t0 = clock::now();
        fn();
        total += std::chrono::duration<double>(clock::now() - t0).count();
        ++reps;
    } while (total < 0.25 && reps < 5);
    return total / reps;
}

// ---- commands ----

void run_partition(const std::string& input, const std::string& output,
                   const lsh::HashConfig& hash, std::int64_t window_points) {
    const auto cloud = io::read_cloud(input);
    const auto part = lsh::lsh_window_partition(cloud, hash, window_points);
    json sizes = json::array();
    for (std::int64_t w = 0; w < part.window_count(); ++w)
        sizes.push_back(part.window_end(w) - part.window_begin(w));
    emit({{"input", input},
          {"count", part.total()},
          {"window_size", part.window_size},
          {"window_sizes", sizes},
          {"window_of_point", lsh::window_ids(part)},
          {"permutation", part.permutation},
          {"hash", {{"bins", hash.bins}, {"rounds", hash.rounds}, {"seed", hash.seed}}}},
         output);
}

void run_bench_partition(const std::vector<std::int64_t>& sizes,
                         const std::vector<std::string>& methods,
                         const std::vector<std::int64_t>& rounds_list,
                         std::int64_t window_points, std::int64_t bins, std::uint64_t seed,
                         const std::string& output) {
    std::string csv = "method,n,rounds,seconds,seconds_per_point\n";
    char buf[192];
    const auto add_row = [&](const std::string& method, std::int64_t n, std::int64_t rounds,
                             double seconds) {
        std::snprintf(buf, sizeof buf, "%s,%lld,%lld,%.6e,%.6e\n", method.c_str(),
                      static_cast<long long>(n), static_cast<long long>(rounds), seconds,
                      seconds / static_cast<double>(n));
        csv += buf;
    };
    for (const auto& method : methods) {
        for (const std::int64_t n : sizes) {
            if (n < 1) throw std::invalid_argument("bench-partition: sizes must be >= 1");
            const auto cloud = io::sample_surface(io::SurfaceKind::gaussian_mixture, n,
                                                  util::derive_seed(seed, std::uint64_t(n)));
            if (method == "lsh") {
                for (const std::int64_t rounds : rounds_list) {
                    const lsh::HashConfig hash{bins, rounds, seed};
                    hash.validate();
                    add_row(method, n, rounds, time_run([&] {
                                lsh::lsh_window_partition(cloud, hash, window_points);
                            }));
                }
            } else if (method == "knn") {
                add_row(method, n, 0,
                        time_run([&] { lsh::knn_partition(cloud, window_points); }));
            } else if (method == "zorder") {
                add_row(method, n, 0, time_run([&] {
                            lsh::octree_zorder_partition(cloud, window_points, 10);
                        }));
            } else if (method == "voxel") {
                add_row(method, n, 0, time_run([&] { lsh::voxel_partition(cloud, 0.1); }));
            } else {
                throw std::invalid_argument("bench-partition: unknown method \"" + method +
                                            "\" (lsh | knn | zorder | voxel)");
            }
        }
    }
    emit_text(csv, output);
}

void run_synth(const io::SceneConfig& scene, std::int64_t pair_count,
               const std::string& output_dir) {
    if (pair_count < 1) throw std::invalid_argument("synth: --pairs must be >= 1");
    scene.validate();
    fs::create_directories(output_dir);
    io::PairsManifest manifest;
    json overlaps = json::array();
    for (std::int64_t i = 0; i < pair_count; ++i) {
        io::SceneConfig per = scene;
        per.seed = util::derive_seed(scene.seed, static_cast<std::uint64_t>(i));
        const auto pair = io::synth_pair(per);
        char name[32];
        std::snprintf(name, sizeof name, "pair_%03lld", static_cast<long long>(i));
        fs::create_directories(fs::path(output_dir) / name);
        const std::string base = std::string(name) + "/";
        io::write_cloud((fs::path(output_dir) / name / "source.ply").string(), pair.source);
        io::write_cloud((fs::path(output_dir) / name / "target.ply").string(), pair.target);
        io::write_pair_meta((fs::path(output_dir) / name / "meta.json").string(),
                            {pair.gt, pair.overlap, per.seed});
        manifest.entries.push_back(
            {name, base + "source.ply", base + "target.ply", base + "meta.json"});
        overlaps.push_back(pair.overlap);
    }
    const std::string manifest_path = (fs::path(output_dir) / "manifest.json").string();
    io::write_manifest(manifest_path, manifest);
    std::cout << json{{"manifest", manifest_path}, {"pairs", pair_count}, {"overlaps", overlaps}}
                     .dump(2)
              << '\n';
}

void run_train(const io::RunConfig& cfg) {
    if (cfg.paths.pairs_manifest.empty())
        throw std::invalid_argument("train: paths.pairs_manifest (or --manifest) is required");
    const auto pairs = io::load_pairs(cfg.paths.pairs_manifest);
    if (pairs.empty()) throw std::runtime_error("train: manifest lists no pairs");

    net::TrainConfig tc;
    tc.network = cfg.network;
    tc.loss = cfg.loss;
    tc.adam = cfg.adam;
    tc.steps = cfg.train.steps;
    tc.tau_pos = cfg.train.tau_pos;
    tc.n_pos = cfg.train.n_pos;
    tc.n_neg = cfg.train.n_neg;
    tc.seed = cfg.train.seed;
    tc.log_path = cfg.paths.log;
    tc.checkpoint_path = cfg.paths.checkpoint;

    auto params = net::init_network_params(cfg.network);
    const auto result = net::train_loop(tc, pairs, params);
    json j = {{"pairs", pairs.size()},
              {"steps", result.losses.size()},
              {"checkpoint", cfg.paths.checkpoint},
              {"log", cfg.paths.log}};
    if (!result.losses.empty()) {
        j["first_loss"] = result.losses.front();
        j["final_loss"] = result.losses.back();
    }
    std::cout << j.dump(2) << '\n';
}

void run_describe(const io::RunConfig& cfg, const std::string& checkpoint,
                  const std::string& source_path, const std::string& target_path,
                  const std::string& output) {
    if (output.empty()) throw std::invalid_argument("describe: --output is required");
    auto params = net::init_network_params(cfg.network);
    net::load_network(params, checkpoint);
    const auto source = io::read_cloud(source_path);
    const auto target = io::read_cloud(target_path);
    const auto fwd = net::forward(source, target, cfg.network, params);
    ad::save_arrays(
        output,
        {{"source", fwd.descriptors_p.rows, fwd.descriptors_p.cols, *fwd.descriptors_p.data},
         {"target", fwd.descriptors_q.rows, fwd.descriptors_q.cols, *fwd.descriptors_q.data}});
    std::cout << json{{"output", output},
                      {"source_rows", fwd.descriptors_p.rows},
                      {"target_rows", fwd.descriptors_q.rows},
                      {"descriptor_dim", fwd.descriptors_p.cols}}
                     .dump(2)
              << '\n';
}

ad::Tensor tensor_from_array(const ad::NamedArray& a) {
    return ad::Tensor::from_values(a.rows, a.cols, a.values);
}

void run_register(const io::RunConfig& cfg, const std::string& checkpoint,
                  const std::string& descriptors, const std::string& source_path,
                  const std::string& target_path, const std::string& output) {
    const auto source = io::read_cloud(source_path);
    const auto target = io::read_cloud(target_path);

    ad::Tensor desc_p, desc_q;
    if (!descriptors.empty()) {
        bool have_p = false, have_q = false;
        for (const auto& a : ad::load_arrays(descriptors)) {
            if (a.name == "source") {
                desc_p = tensor_from_array(a);
                have_p = true;
            } else if (a.name == "target") {
                desc_q = tensor_from_array(a);
                have_q = true;
            }
        }
        if (!have_p || !have_q)
            throw std::runtime_error("register: " + descriptors +
                                     " must hold \"source\" and \"target\" arrays");
        if (desc_p.rows != source.size() || desc_q.rows != target.size())
            throw std::runtime_error("register: descriptor row counts do not match the clouds");
    } else if (!checkpoint.empty()) {
        auto params = net::init_network_params(cfg.network);
        net::load_network(params, checkpoint);
        const auto fwd = net::forward(source, target, cfg.network, params);
        desc_p = fwd.descriptors_p;
        desc_q = fwd.descriptors_q;
    } else {
        throw std::invalid_argument("register: provide --descriptors or --checkpoint");
    }

    const auto matches = reg::nn_match(desc_p, desc_q, cfg.ransac.match_samples,
                                       util::derive_seed(cfg.ransac.seed, "match"),
                                       cfg.ransac.mutual);
    reg::RansacResult result;
    if (!matches.empty())
        result = reg::ransac(matches, source, target, cfg.ransac.iterations,
                             cfg.ransac.inlier_threshold,
                             util::derive_seed(cfg.ransac.seed, "ransac"));
    json j = transform_json(result.transform);
    j["success"] = result.success;
    j["inlier_count"] = result.inlier_count;
    j["match_count"] = matches.size();
    emit(j, output);
}

reg::PairEvaluation evaluate_pair(const net::TrainPair& pair, const net::NetworkConfig& ncfg,
                                  const net::NetworkParams& params, const io::RunConfig& cfg,
                                  std::uint64_t seed) {
    net::ForwardOptions options;
    options.seed_p = util::derive_seed(seed, "layout_p");
    options.seed_q = util::derive_seed(seed, "layout_q");
    const auto fwd = net::forward(pair.source, pair.target, ncfg, params, options);
    const auto matches =
        reg::nn_match(fwd.descriptors_p, fwd.descriptors_q, cfg.ransac.match_samples,
                      util::derive_seed(seed, "match"), cfg.ransac.mutual);
    reg::PairEvaluation ev;
    if (matches.empty()) return ev;  // no putative matches: counts as a failed pair
    ev.inlier_ratio =
        reg::inlier_ratio(matches, pair.source, pair.target, pair.gt, cfg.thresholds.tau1);
    const auto result =
        reg::ransac(matches, pair.source, pair.target, cfg.ransac.iterations,
                    cfg.ransac.inlier_threshold, util::derive_seed(seed, "ransac"));
    ev.success = result.success;
    if (result.success) {
        ev.rre_deg = reg::rre(result.transform.rotation, pair.gt.rotation);
        ev.rte_m = reg::rte(result.transform.translation, pair.gt.translation);
    }
    return ev;
}

void run_evaluate(const io::RunConfig& cfg, const std::string& manifest_path,
                  const std::string& checkpoint, std::vector<std::int64_t> rounds_list,
                  std::vector<std::int64_t> cwn_list, const std::string& output_dir,
                  std::uint64_t seed) {
    if (output_dir.empty()) throw std::invalid_argument("evaluate: --output directory is required");
    if (rounds_list.empty()) rounds_list = {cfg.network.hash_rounds};
    if (cwn_list.empty()) cwn_list = {cfg.network.cross_window_count};
    fs::create_directories(output_dir);
    const auto pairs = io::load_pairs(manifest_path);
    if (pairs.empty()) throw std::runtime_error("evaluate: manifest lists no pairs");

    std::string settings_csv = "rounds,cross_windows,fmr,rr,ir_mean,rre_mean,rte_mean\n";
    json settings = json::array();
    char buf[192];
    for (const std::int64_t rounds : rounds_list) {
        for (const std::int64_t cwn : cwn_list) {
            net::NetworkConfig ncfg = cfg.network;
            ncfg.hash_rounds = rounds;
            ncfg.cross_window_count = cwn;
            ncfg.validate();
            auto params = net::init_network_params(ncfg);
            net::load_network(params, checkpoint);

            std::vector<reg::PairEvaluation> evals(pairs.size());
            util::parallel_for(0, static_cast<std::int64_t>(pairs.size()),
                               [&](std::int64_t lo, std::int64_t hi) {
                                   for (std::int64_t i = lo; i < hi; ++i)
                                       evals[static_cast<std::size_t>(i)] = evaluate_pair(
                                           pairs[static_cast<std::size_t>(i)], ncfg, params, cfg,
                                           util::derive_seed(seed,
                                                             static_cast<std::uint64_t>(i)));
                               });
            const auto report = reg::summarize(evals, cfg.thresholds);

            const std::string stem =
                "report_r" + std::to_string(rounds) + "_c" + std::to_string(cwn);
            emit_text(reg::to_json(report) + "\n",
                      (fs::path(output_dir) / (stem + ".json")).string());
            emit_text(reg::to_csv(report), (fs::path(output_dir) / (stem + ".csv")).string());

            double ir_sum = 0.0;
            for (const auto& ev : report.pairs) ir_sum += ev.inlier_ratio;
            const double ir_mean = ir_sum / static_cast<double>(report.pairs.size());
            std::snprintf(buf, sizeof buf, "%lld,%lld,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                          static_cast<long long>(rounds), static_cast<long long>(cwn), report.fmr,
                          report.rr, ir_mean, report.rre_mean, report.rte_mean);
            settings_csv += buf;
            settings.push_back({{"rounds", rounds},
                                {"cross_windows", cwn},
                                {"fmr", report.fmr},
                                {"rr", report.rr},
                                {"ir_mean", ir_mean},
                                {"rre_mean", report.rre_mean},
                                {"rte_mean", report.rte_mean},
                                {"report", stem + ".json"}});
        }
    }
    emit_text(settings_csv, (fs::path(output_dir) / "settings.csv").string());
    std::cout << json{{"output", output_dir}, {"pairs", pairs.size()}, {"settings", settings}}
                     .dump(2)
              << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LSH-windowed point-cloud registration toolkit"};
    app.require_subcommand(1);

    // config
    std::string c_output;
    auto* config_cmd = app.add_subcommand("config", "emit the default run config JSON");
    config_cmd->add_option("--output,-o", c_output, "config path (stdout when omitted)");
    config_cmd->callback([&] { emit_text(io::serialize_run_config(io::RunConfig{}), c_output); });

    // partition
    std::string p_input, p_output, p_config;
    std::int64_t p_window = 64;
    std::optional<std::int64_t> p_bins, p_rounds;
    std::optional<std::uint64_t> p_seed;
    auto* partition = app.add_subcommand("partition", "hash a cloud and emit its window manifest");
    partition->add_option("--input,-i", p_input, "cloud file (.xyz or .ply)")->required();
    partition->add_option("--output,-o", p_output, "manifest JSON path (stdout when omitted)");
    partition->add_option("--config,-c", p_config, "run config JSON");
    partition->add_option("--window-points,-M", p_window, "points per window");
    partition->add_option("--bins", p_bins, "hash bins (even, >= 2)");
    partition->add_option("--rounds", p_rounds, "voting rounds");
    partition->add_option("--seed,-s", p_seed, "projection seed");
    partition->callback([&] {
        auto cfg = load_config(p_config);
        if (p_bins) cfg.hash.bins = *p_bins;
        if (p_rounds) cfg.hash.rounds = *p_rounds;
        if (p_seed) cfg.hash.seed = *p_seed;
        cfg.hash.validate();
        run_partition(p_input, p_output, cfg.hash, p_window);
    });

    // bench-partition
    std::vector<std::int64_t> b_sizes{10000, 100000};
    std::vector<std::string> b_methods{"lsh", "knn"};
    std::vector<std::int64_t> b_rounds{4};
    std::int64_t b_window = 64, b_bins = 64;
    std::uint64_t b_seed = 0;
    std::string b_output;
    auto* bench = app.add_subcommand("bench-partition", "time partition methods over cloud sizes");
    bench->add_option("--sizes", b_sizes, "cloud sizes")->delimiter(',');
    bench->add_option("--methods", b_methods, "lsh | knn | zorder | voxel")->delimiter(',');
    bench->add_option("--rounds", b_rounds, "voting-round settings, one CSV row per value (lsh)")
        ->delimiter(',');
    bench->add_option("--window-points,-M", b_window, "points per window");
    bench->add_option("--bins", b_bins, "hash bins");
    bench->add_option("--seed,-s", b_seed, "data and projection seed");
    bench->add_option("--output,-o", b_output, "CSV path (stdout when omitted)");
    bench->callback([&] {
        run_bench_partition(b_sizes, b_methods, b_rounds, b_window, b_bins, b_seed, b_output);
    });

    // synth
    std::string s_output, s_config, s_surface;
    std::int64_t s_pairs = 1;
    std::optional<std::int64_t> s_points;
    std::optional<double> s_overlap, s_noise, s_max_rot, s_max_trans;
    std::optional<std::uint64_t> s_seed;
    auto* synth = app.add_subcommand("synth", "generate synthetic fragment pairs plus a manifest");
    synth->add_option("--output,-o", s_output, "output directory")->required();
    synth->add_option("--pairs,-n", s_pairs, "number of pairs");
    synth->add_option("--config,-c", s_config, "run config JSON (scene section)");
    synth->add_option("--surface", s_surface, "room-corner | polyhedral | gaussian-mixture");
    synth->add_option("--points", s_points, "points per fragment");
    synth->add_option("--overlap", s_overlap, "overlap fraction target in (0, 1]");
    synth->add_option("--noise", s_noise, "noise sigma in meters");
    synth->add_option("--max-rotation", s_max_rot, "max rotation in degrees");
    synth->add_option("--max-translation", s_max_trans, "max translation in meters");
    synth->add_option("--seed,-s", s_seed, "scene seed");
    synth->callback([&] {
        auto cfg = load_config(s_config);
        if (!s_surface.empty()) cfg.scene.surface = io::surface_kind_from_string(s_surface);
        if (s_points) cfg.scene.points_per_fragment = *s_points;
        if (s_overlap) cfg.scene.overlap_target = *s_overlap;
        if (s_noise) cfg.scene.noise_sigma = *s_noise;
        if (s_max_rot) cfg.scene.max_rotation_deg = *s_max_rot;
        if (s_max_trans) cfg.scene.max_translation = *s_max_trans;
        if (s_seed) cfg.scene.seed = *s_seed;
        run_synth(cfg.scene, s_pairs, s_output);
    });

    // train
    std::string t_config, t_manifest, t_checkpoint, t_log;
    std::optional<std::int64_t> t_steps;
    std::optional<std::uint64_t> t_seed;
    auto* train = app.add_subcommand("train", "fit descriptors on a pairs manifest");
    train->add_option("--config,-c", t_config, "run config JSON")->required();
    train->add_option("--manifest", t_manifest, "overrides paths.pairs_manifest");
    train->add_option("--checkpoint", t_checkpoint, "overrides paths.checkpoint");
    train->add_option("--log", t_log, "overrides paths.log");
    train->add_option("--steps", t_steps, "overrides train.steps");
    train->add_option("--seed,-s", t_seed, "overrides train.seed");
    train->callback([&] {
        auto cfg = load_config(t_config);
        if (!t_manifest.empty()) cfg.paths.pairs_manifest = t_manifest;
        if (!t_checkpoint.empty()) cfg.paths.checkpoint = t_checkpoint;
        if (!t_log.empty()) cfg.paths.log = t_log;
        if (t_steps) cfg.train.steps = *t_steps;
        if (t_seed) cfg.train.seed = *t_seed;
        run_train(cfg);
    });

    // describe
    std::string d_config, d_checkpoint, d_source, d_target, d_output;
    std::optional<std::uint64_t> d_seed;
    auto* describe = app.add_subcommand("describe", "write descriptors for a cloud pair");
    describe->add_option("--config,-c", d_config, "run config JSON (network section)");
    describe->add_option("--checkpoint", d_checkpoint, "parameter snapshot")->required();
    describe->add_option("--source", d_source, "source cloud")->required();
    describe->add_option("--target", d_target, "target cloud")->required();
    describe->add_option("--output,-o", d_output, "descriptor array file")->required();
    describe->add_option("--seed,-s", d_seed, "overrides network.seed (window layouts)");
    describe->callback([&] {
        auto cfg = load_config(d_config);
        if (d_seed) cfg.network.seed = *d_seed;
        run_describe(cfg, d_checkpoint, d_source, d_target, d_output);
    });

    // register
    std::string r_config, r_checkpoint, r_descriptors, r_source, r_target, r_output;
    std::optional<std::int64_t> r_matches, r_iterations;
    std::optional<double> r_threshold;
    std::optional<bool> r_mutual;
    std::optional<std::uint64_t> r_seed;
    auto* reg_cmd = app.add_subcommand("register", "estimate the rigid transform for a pair");
    reg_cmd->add_option("--config,-c", r_config, "run config JSON");
    reg_cmd->add_option("--source", r_source, "source cloud")->required();
    reg_cmd->add_option("--target", r_target, "target cloud")->required();
    reg_cmd->add_option("--descriptors", r_descriptors, "descriptor file from describe");
    reg_cmd->add_option("--checkpoint", r_checkpoint, "compute descriptors with this snapshot");
    reg_cmd->add_option("--matches", r_matches, "correspondences to sample");
    reg_cmd->add_flag("--mutual,!--no-mutual", r_mutual, "keep mutual nearest neighbors only");
    reg_cmd->add_option("--iterations", r_iterations, "hypothesis count");
    reg_cmd->add_option("--inlier-threshold", r_threshold, "inlier radius in meters");
    reg_cmd->add_option("--output,-o", r_output, "transform JSON path (stdout when omitted)");
    reg_cmd->add_option("--seed,-s", r_seed, "matching and hypothesis seed");
    reg_cmd->callback([&] {
        auto cfg = load_config(r_config);
        if (r_matches) cfg.ransac.match_samples = *r_matches;
        if (r_mutual) cfg.ransac.mutual = *r_mutual;
        if (r_iterations) cfg.ransac.iterations = *r_iterations;
        if (r_threshold) cfg.ransac.inlier_threshold = *r_threshold;
        if (r_seed) cfg.ransac.seed = *r_seed;
        cfg.ransac.validate();
        run_register(cfg, r_checkpoint, r_descriptors, r_source, r_target, r_output);
    });

    // evaluate
    std::string e_config, e_manifest, e_checkpoint, e_output;
    std::vector<std::int64_t> e_rounds, e_cwn;
    std::uint64_t e_seed = 0;
    auto* evaluate = app.add_subcommand("evaluate", "score a checkpoint over a pairs manifest");
    evaluate->add_option("--config,-c", e_config, "run config JSON");
    evaluate->add_option("--manifest", e_manifest, "pairs manifest")->required();
    evaluate->add_option("--checkpoint", e_checkpoint, "parameter snapshot")->required();
    evaluate->add_option("--rounds,-l", e_rounds, "voting-round settings, one row per value")
        ->delimiter(',');
    evaluate->add_option("--cwn", e_cwn, "cross-window counts, one row per value")->delimiter(',');
    evaluate->add_option("--output,-o", e_output, "report directory")->required();
    evaluate->add_option("--seed,-s", e_seed, "evaluation seed");
    evaluate->callback([&] {
        const auto cfg = load_config(e_config);
        run_evaluate(cfg, e_manifest, e_checkpoint, e_rounds, e_cwn, e_output, e_seed);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("usage", e.what());
    } catch (const io::ConfigError& e) {
        return fail("config", "invalid configuration", e.problems());
    } catch (const io::ParseError& e) {
        return fail("parse", e.what());
    } catch (const std::invalid_argument& e) {
        return fail("argument", e.what());
    } catch (const std::exception& e) {
        return fail("runtime", e.what());
    }
    return 0;
}
