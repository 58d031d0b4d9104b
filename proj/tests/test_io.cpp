#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "lahreg/geom/rigid_transform.hpp"
#include "lahreg/io/cloud_io.hpp"
#include "lahreg/io/manifest.hpp"
#include "lahreg/io/run_config.hpp"
#include "lahreg/io/synth.hpp"
#include "lahreg/util/rng.hpp"

using lahreg::geom::PointCloud;
using lahreg::geom::RigidTransform;
using namespace lahreg::io;

namespace {

// Scratch directory wiped on scope exit.
struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("lahreg_test_" + std::to_string(lahreg::util::Rng(
                                     std::chrono::steady_clock::now().time_since_epoch().count())
                                     .next_u64()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

void write_bytes(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

void push_f32_le(std::string& out, float v) {
    const auto bits = std::bit_cast<std::uint32_t>(v);
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

bool same_points(const PointCloud& a, const PointCloud& b) {
    if (a.size() != b.size()) return false;
    for (std::int64_t i = 0; i < a.size(); ++i)
        if (std::memcmp(a[i].data(), b[i].data(), 3 * sizeof(double)) != 0) return false;
    return true;
}

PointCloud random_cloud(std::int64_t n, std::uint64_t seed) {
    lahreg::util::Rng rng(seed);
    PointCloud cloud;
    for (std::int64_t i = 0; i < n; ++i)
        cloud.points.emplace_back(rng.gaussian() * 1e3, rng.uniform(-1, 1), rng.uniform() * 1e-7);
    return cloud;
}

// Literal restatement of the mutual-proximity overlap measure, no early
// exits, for checking the library's number.
double overlap_oracle(const PointCloud& p, const PointCloud& q, const RigidTransform& t,
                      double tau) {
    std::int64_t hit_p = 0, hit_q = 0;
    std::vector<bool> q_hit(static_cast<std::size_t>(q.size()), false);
    for (std::int64_t i = 0; i < p.size(); ++i) {
        bool any = false;
        for (std::int64_t j = 0; j < q.size(); ++j) {
            if ((t(p[i]) - q[j]).norm() <= tau) {
                any = true;
                q_hit[static_cast<std::size_t>(j)] = true;
            }
        }
        hit_p += any;
    }
    for (std::int64_t j = 0; j < q.size(); ++j) hit_q += q_hit[static_cast<std::size_t>(j)];
    return 0.5 * (static_cast<double>(hit_p) / static_cast<double>(p.size()) +
                  static_cast<double>(hit_q) / static_cast<double>(q.size()));
}

}  // namespace

TEST_CASE("xyz format") {
    TempDir dir;

    SUBCASE("triple per line") {
        write_text(dir.file("a.xyz"), "1.0 2.0 3.0\n-4.5e2 0 .25\n\n  7 8 9  \n");
        const auto cloud = read_xyz(dir.file("a.xyz"));
        REQUIRE(cloud.size() == 3);
        CHECK(cloud[0] == Eigen::Vector3d(1.0, 2.0, 3.0));
        CHECK(cloud[1] == Eigen::Vector3d(-450.0, 0.0, 0.25));
        CHECK(cloud[2] == Eigen::Vector3d(7.0, 8.0, 9.0));
    }

    SUBCASE("round trip is exact") {
        const auto cloud = random_cloud(50, 11);
        write_xyz(dir.file("b.xyz"), cloud);
        CHECK(same_points(read_xyz(dir.file("b.xyz")), cloud));
    }

    SUBCASE("malformed rows name the line") {
        write_text(dir.file("c.xyz"), "1 2 3\n4 5\n");
        CHECK_THROWS_WITH_AS(read_xyz(dir.file("c.xyz")),
                             doctest::Contains(":2"), ParseError);
        write_text(dir.file("d.xyz"), "1 2 3 4\n");
        CHECK_THROWS_AS(read_xyz(dir.file("d.xyz")), ParseError);
        write_text(dir.file("e.xyz"), "one two three\n");
        CHECK_THROWS_AS(read_xyz(dir.file("e.xyz")), ParseError);
    }
}

TEST_CASE("extension dispatch") {
    TempDir dir;
    CHECK_THROWS_AS(read_cloud(dir.file("a.txt")), std::invalid_argument);
    CHECK_THROWS_AS(write_cloud(dir.file("a.txt"), PointCloud{}), std::invalid_argument);
    CHECK_THROWS_AS(read_cloud(dir.file("noext")), std::invalid_argument);
    CHECK_THROWS_AS(read_xyz(dir.file("missing.xyz")), std::runtime_error);

    PointCloud one;
    one.points.emplace_back(1.0, 2.0, 3.0);
    write_cloud(dir.file("A.PLY"), one);  // case-insensitive extensions
    CHECK(same_points(read_cloud(dir.file("A.PLY")), one));
}

TEST_CASE("ply binary round trip is bit exact") {
    TempDir dir;
    PointCloud cloud;
    cloud.points.emplace_back(0.1, -0.0, 1e-300);
    cloud.points.emplace_back(3.141592653589793, -2.718281828459045, 6.02214076e23);
    cloud.points.emplace_back(std::nextafter(1.0, 2.0), -1e308, 0.0);
    write_ply(dir.file("p.ply"), cloud);
    CHECK(same_points(read_ply(dir.file("p.ply")), cloud));

    const auto big = random_cloud(200, 5);
    write_ply(dir.file("q.ply"), big);
    CHECK(same_points(read_ply(dir.file("q.ply")), big));
}

TEST_CASE("ply ascii round trip") {
    TempDir dir;
    const auto cloud = random_cloud(40, 9);
    write_ply(dir.file("a.ply"), cloud, PlyFormat::ascii);
    const auto back = read_ply(dir.file("a.ply"));
    REQUIRE(back.size() == cloud.size());
    for (std::int64_t i = 0; i < cloud.size(); ++i)
        CHECK((back[i] - cloud[i]).norm() <= 1e-6 * cloud[i].norm());
}

TEST_CASE("ply ascii with extra properties and elements") {
    TempDir dir;
    // Colors after the coordinates, a leading comment, and a face element
    // after the vertices; only x/y/z should land in the cloud.
    write_text(dir.file("c.ply"),
               "ply\n"
               "format ascii 1.0\n"
               "comment made by hand\n"
               "element vertex 2\n"
               "property float x\n"
               "property float y\n"
               "property float z\n"
               "property uchar red\n"
               "property uchar green\n"
               "property uchar blue\n"
               "element face 1\n"
               "property list uchar int vertex_indices\n"
               "end_header\n"
               "1 2 3 255 0 0\n"
               "4 5 6 0 255 0\n"
               "3 0 1 0\n");
    const auto cloud = read_ply(dir.file("c.ply"));
    REQUIRE(cloud.size() == 2);
    CHECK(cloud[0] == Eigen::Vector3d(1, 2, 3));
    CHECK(cloud[1] == Eigen::Vector3d(4, 5, 6));
}

TEST_CASE("ply ascii with properties around the coordinates") {
    TempDir dir;
    write_text(dir.file("c.ply"),
               "ply\n"
               "format ascii 1.0\n"
               "element vertex 1\n"
               "property int label\n"
               "property double z\n"
               "property double x\n"
               "property double y\n"
               "end_header\n"
               "7 30 10 20\n");
    const auto cloud = read_ply(dir.file("c.ply"));
    REQUIRE(cloud.size() == 1);
    CHECK(cloud[0] == Eigen::Vector3d(10, 20, 30));
}

TEST_CASE("ply binary with float coordinates and skipped properties") {
    TempDir dir;
    std::string body =
        "ply\n"
        "format binary_little_endian 1.0\n"
        "element scan 1\n"
        "property list uchar float offsets\n"
        "element vertex 2\n"
        "property uchar intensity\n"
        "property float x\n"
        "property float y\n"
        "property float z\n"
        "end_header\n";
    // scan element: one row, list of two floats.
    body.push_back(static_cast<char>(2));
    push_f32_le(body, 9.0f);
    push_f32_le(body, 8.0f);
    // vertex rows: intensity then coordinates.
    body.push_back(static_cast<char>(77));
    push_f32_le(body, 1.5f);
    push_f32_le(body, -2.5f);
    push_f32_le(body, 0.125f);
    body.push_back(static_cast<char>(12));
    push_f32_le(body, 4.0f);
    push_f32_le(body, 5.0f);
    push_f32_le(body, -6.0f);
    write_bytes(dir.file("b.ply"), body);

    const auto cloud = read_ply(dir.file("b.ply"));
    REQUIRE(cloud.size() == 2);
    CHECK(cloud[0] == Eigen::Vector3d(1.5, -2.5, 0.125));
    CHECK(cloud[1] == Eigen::Vector3d(4.0, 5.0, -6.0));
}

TEST_CASE("ply malformed inputs") {
    TempDir dir;

    SUBCASE("missing magic") {
        write_text(dir.file("m.ply"), "plop\nformat ascii 1.0\nend_header\n");
        CHECK_THROWS_WITH_AS(read_ply(dir.file("m.ply")), doctest::Contains("first line"),
                             ParseError);
    }
    SUBCASE("big endian is rejected") {
        write_text(dir.file("m.ply"),
                   "ply\nformat binary_big_endian 1.0\nelement vertex 0\nproperty float x\n"
                   "property float y\nproperty float z\nend_header\n");
        CHECK_THROWS_WITH_AS(read_ply(dir.file("m.ply")), doctest::Contains("unsupported"),
                             ParseError);
    }
    SUBCASE("unknown property type") {
        write_text(dir.file("m.ply"),
                   "ply\nformat ascii 1.0\nelement vertex 1\nproperty quadfloat x\nend_header\n");
        CHECK_THROWS_AS(read_ply(dir.file("m.ply")), ParseError);
    }
    SUBCASE("header without end_header") {
        write_text(dir.file("m.ply"), "ply\nformat ascii 1.0\nelement vertex 1\n");
        CHECK_THROWS_WITH_AS(read_ply(dir.file("m.ply")), doctest::Contains("end_header"),
                             ParseError);
    }
    SUBCASE("vertex without z") {
        write_text(dir.file("m.ply"),
                   "ply\nformat ascii 1.0\nelement vertex 1\nproperty float x\n"
                   "property float y\nend_header\n1 2\n");
        CHECK_THROWS_WITH_AS(read_ply(dir.file("m.ply")), doctest::Contains("x/y/z"), ParseError);
    }
    SUBCASE("bad ascii row names its line") {
        write_text(dir.file("m.ply"),
                   "ply\nformat ascii 1.0\nelement vertex 2\nproperty float x\n"
                   "property float y\nproperty float z\nend_header\n1 2 3\n4 oops 6\n");
        CHECK_THROWS_WITH_AS(read_ply(dir.file("m.ply")), doctest::Contains(":9"), ParseError);
    }
    SUBCASE("truncated binary payload reports the byte offset") {
        std::string body =
            "ply\nformat binary_little_endian 1.0\nelement vertex 2\nproperty float x\n"
            "property float y\nproperty float z\nend_header\n";
        const auto header_size = body.size();
        push_f32_le(body, 1.0f);
        push_f32_le(body, 2.0f);
        push_f32_le(body, 3.0f);
        push_f32_le(body, 4.0f);  // second row cut short
        write_bytes(dir.file("m.ply"), body);
        const std::string expected = "byte " + std::to_string(header_size + 16);
        CHECK_THROWS_WITH_AS(read_ply(dir.file("m.ply")), doctest::Contains(expected.c_str()),
                             ParseError);
    }
    SUBCASE("ascii trailing tokens") {
        write_text(dir.file("m.ply"),
                   "ply\nformat ascii 1.0\nelement vertex 1\nproperty float x\n"
                   "property float y\nproperty float z\nend_header\n1 2 3 4\n");
        CHECK_THROWS_WITH_AS(read_ply(dir.file("m.ply")), doctest::Contains("trailing"),
                             ParseError);
    }
}

TEST_CASE("scene config validation") {
    SceneConfig cfg;
    cfg.validate();
    SceneConfig bad = cfg;
    bad.overlap_target = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.overlap_target = 1.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.noise_sigma = -1e-9;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.points_per_fragment = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.max_rotation_deg = 181.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    CHECK(surface_kind_from_string("polyhedral") == SurfaceKind::polyhedral);
    CHECK(to_string(SurfaceKind::gaussian_mixture) == "gaussian-mixture");
    CHECK_THROWS_AS(surface_kind_from_string("torus"), std::invalid_argument);
}

TEST_CASE("synth_pair determinism and full overlap") {
    SceneConfig cfg;
    cfg.points_per_fragment = 300;
    cfg.overlap_target = 1.0;
    cfg.noise_sigma = 0.0;
    cfg.seed = 42;

    const auto pair = synth_pair(cfg);
    REQUIRE(pair.source.size() == 300);
    REQUIRE(pair.target.size() == 300);
    CHECK(pair.overlap == 1.0);
    CHECK(same_points(pair.target, lahreg::geom::apply_transform(pair.gt, pair.source)));
    CHECK(lahreg::geom::is_rotation(pair.gt.rotation));

    const auto again = synth_pair(cfg);
    CHECK(same_points(again.source, pair.source));
    CHECK(same_points(again.target, pair.target));
    CHECK(again.overlap == pair.overlap);

    cfg.seed = 43;
    CHECK_FALSE(same_points(synth_pair(cfg).source, pair.source));
}

TEST_CASE("synth_pair hits the overlap band") {
    SceneConfig cfg;
    cfg.points_per_fragment = 1200;
    cfg.overlap_target = 0.2;
    cfg.noise_sigma = 0.0;
    cfg.seed = 7;

    for (const auto kind :
         {SurfaceKind::room_corner, SurfaceKind::polyhedral, SurfaceKind::gaussian_mixture}) {
        CAPTURE(static_cast<int>(kind));
        cfg.surface = kind;
        const auto pair = synth_pair(cfg);
        const double measured = overlap_oracle(pair.source, pair.target, pair.gt, kOverlapTau);
        CHECK(measured >= 0.15);
        CHECK(measured <= 0.25);
        CHECK(pair.overlap == doctest::Approx(measured).epsilon(1e-12));
    }
}

TEST_CASE("synth_pair noise perturbs only the target") {
    SceneConfig cfg;
    cfg.points_per_fragment = 200;
    cfg.overlap_target = 0.6;
    cfg.seed = 3;

    const auto clean = synth_pair(cfg);
    cfg.noise_sigma = 0.004;
    const auto noisy = synth_pair(cfg);
    CHECK(same_points(clean.source, noisy.source));
    CHECK(noisy.gt.rotation == clean.gt.rotation);
    CHECK_FALSE(same_points(clean.target, noisy.target));
    double max_shift = 0.0;
    for (std::int64_t i = 0; i < clean.target.size(); ++i)
        max_shift = std::max(max_shift, (clean.target[i] - noisy.target[i]).norm());
    CHECK(max_shift > 0.0);
    CHECK(max_shift < 0.004 * 6);  // a 6-sigma excursion over 600 draws is out of the question
}

TEST_CASE("synth_pair rejects unreachable overlap targets") {
    // Five points per fragment on a desk-sized surface sit far apart, so the
    // measured overlap moves in steps of ~0.2 and cannot land within 0.05 of
    // one half.
    SceneConfig cfg;
    cfg.points_per_fragment = 5;
    cfg.overlap_target = 0.5;
    cfg.seed = 1;
    CHECK_THROWS_WITH_AS(synth_pair(cfg), doctest::Contains("unreachable"), std::runtime_error);
}

TEST_CASE("pair metadata and manifest round trip") {
    TempDir dir;
    SceneConfig cfg;
    cfg.points_per_fragment = 60;
    cfg.overlap_target = 0.8;
    cfg.seed = 12;
    const auto pair = synth_pair(cfg);

    write_cloud(dir.file("source.ply"), pair.source);
    write_cloud(dir.file("target.ply"), pair.target);
    write_pair_meta(dir.file("meta.json"), {pair.gt, pair.overlap, cfg.seed});

    PairsManifest manifest;
    manifest.entries.push_back({"pair_000", "source.ply", "target.ply", "meta.json"});
    write_manifest(dir.file("manifest.json"), manifest);

    const auto meta = read_pair_meta(dir.file("meta.json"));
    CHECK(meta.gt.rotation == pair.gt.rotation);  // shortest-repr JSON doubles round-trip
    CHECK(meta.gt.translation == pair.gt.translation);
    CHECK(meta.overlap == pair.overlap);
    CHECK(meta.seed == cfg.seed);

    const auto loaded = load_pairs(dir.file("manifest.json"));
    REQUIRE(loaded.size() == 1);
    CHECK(same_points(loaded[0].source, pair.source));
    CHECK(same_points(loaded[0].target, pair.target));
    CHECK(loaded[0].gt.rotation == pair.gt.rotation);

    SUBCASE("bad transform is rejected") {
        auto broken = pair.gt;
        broken.rotation(0, 0) = 2.0;
        write_pair_meta(dir.file("bad.json"), {broken, 0.0, 0});
        CHECK_THROWS_WITH_AS(read_pair_meta(dir.file("bad.json")),
                             doctest::Contains("orthonormal"), std::runtime_error);
    }
}

TEST_CASE("run config round trip and strict parsing") {
    RunConfig cfg;

    SUBCASE("serialize-parse is identity") {
        cfg.hash.seed = 99;
        cfg.network.cross_window_count = 3;
        cfg.adam.learning_rate = 0.000244140625;  // exactly representable
        cfg.ransac.mutual = true;
        cfg.scene.surface = SurfaceKind::polyhedral;
        cfg.paths.checkpoint = "model.bin";
        const auto back = parse_run_config(serialize_run_config(cfg));
        CHECK(back.hash.seed == 99);
        CHECK(back.network.cross_window_count == 3);
        CHECK(back.network.stage_widths == cfg.network.stage_widths);
        CHECK(back.network.voxel_edges == cfg.network.voxel_edges);
        CHECK(back.adam.learning_rate == 0.000244140625);
        CHECK(back.ransac.mutual);
        CHECK(back.scene.surface == SurfaceKind::polyhedral);
        CHECK(back.paths.checkpoint == "model.bin");
        CHECK(back.train.seed == cfg.train.seed);
        CHECK(serialize_run_config(back) == serialize_run_config(cfg));
    }

    SUBCASE("defaults survive a file round trip") {
        TempDir dir;
        save_run_config(dir.file("cfg.json"), cfg);
        const auto back = load_run_config(dir.file("cfg.json"));
        CHECK(serialize_run_config(back) == serialize_run_config(cfg));
    }

    SUBCASE("unknown fields are rejected by name") {
        auto text = serialize_run_config(cfg);
        text.insert(text.find("\"hash\""), "\"extra\": 1,\n  ");
        CHECK_THROWS_WITH_AS(parse_run_config(text), doctest::Contains("unknown field \"extra\""),
                             ConfigError);
    }

    SUBCASE("every violation is listed at once") {
        cfg.hash.bins = 63;
        cfg.scene.overlap_target = 0.0;
        cfg.adam.learning_rate = -1.0;
        cfg.network.stage_widths[0] = 65;
        try {
            parse_run_config(serialize_run_config(cfg));
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            const auto& problems = e.problems();
            REQUIRE(problems.size() == 4);
            const std::string all = e.what();
            CHECK(all.find("hash.bins") != std::string::npos);
            CHECK(all.find("scene.overlap_target") != std::string::npos);
            CHECK(all.find("adam.learning_rate") != std::string::npos);
            CHECK(all.find("stage 1") != std::string::npos);
        }
    }

    SUBCASE("missing fields and sections are named") {
        CHECK_THROWS_WITH_AS(parse_run_config("{\"version\": 1}"),
                             doctest::Contains("network: missing section"), ConfigError);
        auto text = serialize_run_config(cfg);
        const auto pos = text.find("\"rounds\"");
        const auto end = text.find('\n', pos);
        text.erase(pos, end - pos + 1);
        CHECK_THROWS_WITH_AS(parse_run_config(text), doctest::Contains("hash.rounds: missing"),
                             ConfigError);
    }

    SUBCASE("type and version errors") {
        CHECK_THROWS_WITH_AS(parse_run_config("not json at all"),
                             doctest::Contains("not valid JSON"), ConfigError);
        auto text = serialize_run_config(cfg);
        text.replace(text.find("\"version\": 1"), 12, "\"version\": 2");
        CHECK_THROWS_WITH_AS(parse_run_config(text), doctest::Contains("expected 1"), ConfigError);
        text = serialize_run_config(cfg);
        text.replace(text.find("\"bins\": 64"), 10, "\"bins\": \"64\"");
        CHECK_THROWS_WITH_AS(parse_run_config(text), doctest::Contains("hash.bins: must be an"),
                             ConfigError);
    }

    SUBCASE("violations mirror the section validators") {
        CHECK(violations(cfg).empty());
        cfg.thresholds.tau2 = 1.5;
        CHECK_THROWS_AS(cfg.thresholds.validate(), std::invalid_argument);
        const auto list = violations(cfg);
        REQUIRE(list.size() == 1);
        CHECK(list[0].find("thresholds.tau2") != std::string::npos);
    }
}

#ifdef LAHREG_CLI_PATH

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out, err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Runs the command-line tool with stdout/stderr captured to files.
CliResult run_cli(const TempDir& dir, const std::string& args) {
    const std::string out = dir.file("cli_stdout"), err = dir.file("cli_stderr");
    const std::string cmd = "\"" LAHREG_CLI_PATH "\" " + args + " > \"" + out + "\" 2> \"" + err + "\"";
    const int status = std::system(cmd.c_str());
    return {status == 0 ? 0 : 1, slurp(out), slurp(err)};
}

}  // namespace

TEST_CASE("command-line contract: results, errors, and reproducibility") {
    TempDir dir;

    SUBCASE("partition emits uniform window sizes with the remainder last") {
        std::string xyz;
        for (int i = 0; i < 10; ++i) xyz += std::to_string(0.1 * i) + " 0 0\n";
        write_text(dir.file("ten.xyz"), xyz);
        const auto r = run_cli(dir, "partition --input \"" + dir.file("ten.xyz") + "\" -M 4");
        REQUIRE(r.exit_code == 0);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(j["count"] == 10);
        CHECK(j["window_sizes"] == nlohmann::json({4, 4, 2}));
    }

    SUBCASE("invalid config exits nonzero with every violation listed") {
        write_text(dir.file("bad.json"), R"({"version": 1, "hash": {"bins": 63}})");
        const auto r = run_cli(dir, "partition --input nowhere.xyz --config \"" +
                                        dir.file("bad.json") + "\"");
        REQUIRE(r.exit_code == 1);
        const auto j = nlohmann::json::parse(r.err);
        CHECK(j["error"]["type"] == "config");
        const auto& problems = j["error"]["problems"];
        REQUIRE(problems.is_array());
        bool found = false;
        for (const auto& p : problems) {
            found = found || p.get<std::string>().find("hash.bins") != std::string::npos;
        }
        CHECK(found);
        CHECK(problems.size() > 1);  // the missing sections are reported too
    }

    SUBCASE("missing input exits nonzero with a runtime error payload") {
        const auto r = run_cli(dir, "partition --input \"" + dir.file("nope.xyz") + "\"");
        REQUIRE(r.exit_code == 1);
        const auto j = nlohmann::json::parse(r.err);
        CHECK(j["error"]["type"] == "runtime");
    }

    SUBCASE("generation is bit-reproducible across invocations") {
        const auto a = run_cli(dir, "synth --output \"" + dir.file("a") +
                                        "\" --pairs 1 --points 200 --overlap 0.6 --seed 9");
        const auto b = run_cli(dir, "synth --output \"" + dir.file("b") +
                                        "\" --pairs 1 --points 200 --overlap 0.6 --seed 9");
        REQUIRE(a.exit_code == 0);
        REQUIRE(b.exit_code == 0);
        CHECK(slurp(dir.file("a") + "/pair_000/source.ply") ==
              slurp(dir.file("b") + "/pair_000/source.ply"));
        CHECK(slurp(dir.file("a") + "/pair_000/target.ply") ==
              slurp(dir.file("b") + "/pair_000/target.ply"));
        CHECK(slurp(dir.file("a") + "/pair_000/meta.json") ==
              slurp(dir.file("b") + "/pair_000/meta.json"));
    }
}

#endif  // LAHREG_CLI_PATH
