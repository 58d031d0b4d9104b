#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <vector>

#include <Eigen/Geometry>

#include "lahreg/ad/gradcheck.hpp"
#include "lahreg/ad/ops.hpp"
#include "lahreg/geom/rigid_transform.hpp"
#include "lahreg/net/config.hpp"
#include "lahreg/net/loss.hpp"
#include "lahreg/net/network.hpp"
#include "lahreg/net/stages.hpp"
#include "lahreg/net/train.hpp"
#include "lahreg/util/rng.hpp"

using lahreg::ad::Tensor;
using lahreg::geom::PointCloud;
using lahreg::geom::RigidTransform;
using lahreg::net::LossConfig;
using lahreg::net::NetworkConfig;
using lahreg::net::NetworkParams;
using lahreg::net::PairBatch;
namespace ad = lahreg::ad;
namespace geom = lahreg::geom;
namespace net = lahreg::net;
namespace util = lahreg::util;

namespace {

PointCloud random_cloud(std::int64_t n, std::uint64_t seed, double scale = 1.0) {
    util::Rng rng(seed);
    PointCloud cloud;
    cloud.points.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        cloud.points.emplace_back(rng.uniform(-scale, scale), rng.uniform(-scale, scale),
                                  rng.uniform(-scale, scale));
    }
    return cloud;
}

Tensor rand_tensor(std::int64_t rows, std::int64_t cols, std::uint64_t seed) {
    util::Rng rng(seed);
    Tensor t = Tensor::zeros(rows, cols);
    for (std::int64_t i = 0; i < t.numel(); ++i) t.ptr()[i] = rng.gaussian();
    return t;
}

RigidTransform rot_z(double angle, const Eigen::Vector3d& t) {
    RigidTransform out;
    out.rotation = Eigen::AngleAxisd(angle, Eigen::Vector3d::UnitZ()).toRotationMatrix();
    out.translation = t;
    return out;
}

// Small pyramid that still exercises every stage on double-digit point counts.
NetworkConfig toy_config() {
    NetworkConfig cfg;
    cfg.stage_widths = {4, 8, 16};
    cfg.gt_window_points = {8, 4};
    cfg.gt_heads = {1, 1};
    cfg.gt_head_dims = {4, 8};
    cfg.it_window_points = 4;
    cfg.it_heads = 2;
    cfg.it_head_dim = 8;
    cfg.descriptor_dim = 6;
    cfg.voxel_edges = {0.18, 0.35, 0.7};
    cfg.hash_bins = 8;
    cfg.hash_rounds = 2;
    cfg.cross_window_count = 1;
    cfg.seed = 7;
    return cfg;
}

double dist_rows(const Tensor& a, std::int64_t i, const Tensor& b, std::int64_t j) {
    double acc = 0.0;
    for (std::int64_t c = 0; c < a.cols; ++c) {
        const double d = a.at(i, c) - b.at(j, c);
        acc += d * d;
    }
    return std::sqrt(acc);
}

// Literal scalar transliteration of the training objective.
double loss_oracle(const Tensor& fp, const Tensor& fq, const PairBatch& batch,
                   const LossConfig& cfg) {
    const double n = static_cast<double>(batch.positives.size());
    double total = 0.0;
    for (std::size_t a = 0; a < batch.positives.size(); ++a) {
        const auto [i, j] = batch.positives[a];
        const double d_pos = dist_rows(fp, i, fq, j);
        total += std::pow(std::max(0.0, d_pos - cfg.positive_margin), 2.0) / n;

        double min_i = std::numeric_limits<double>::infinity();
        for (std::int64_t k : batch.negatives_source[a]) {
            min_i = std::min(min_i, dist_rows(fp, i, fq, k));
        }
        total += cfg.negative_weight *
                 (std::pow(std::max(0.0, cfg.negative_margin - min_i), 2.0) /
                  static_cast<double>(batch.negatives_source[a].size()));

        double min_j = std::numeric_limits<double>::infinity();
        for (std::int64_t k : batch.negatives_target[a]) {
            min_j = std::min(min_j, dist_rows(fq, j, fp, k));
        }
        total += cfg.negative_weight *
                 (std::pow(std::max(0.0, cfg.negative_margin - min_j), 2.0) /
                  static_cast<double>(batch.negatives_target[a].size()));
    }
    return total;
}

std::vector<double> snapshot_params(NetworkParams& params) {
    std::vector<double> flat;
    params.visit([&](const std::string&, Tensor& t) {
        flat.insert(flat.end(), t.data->begin(), t.data->end());
    });
    return flat;
}

}  // namespace

TEST_CASE("network config defaults carry the published attention shape") {
    NetworkConfig cfg;
    cfg.validate();
    CHECK(cfg.stage_widths == std::array<std::int64_t, 3>{64, 256, 512});
    CHECK(cfg.gt_window_points == std::array<std::int64_t, 2>{128, 64});
    CHECK(cfg.gt_heads == std::array<std::int64_t, 2>{2, 4});
    CHECK(cfg.gt_head_dims == std::array<std::int64_t, 2>{32, 64});
    CHECK(cfg.it_window_points == 32);
    CHECK(cfg.it_heads == 4);
    CHECK(cfg.it_head_dim == 128);
    CHECK(cfg.hash_bins == 64);
    CHECK(cfg.hash_rounds == 4);
    CHECK(cfg.cross_window_count == 2);

    LossConfig loss;
    CHECK(loss.positive_margin == 0.1);
    CHECK(loss.negative_margin == 1.4);
    CHECK(loss.negative_weight == 0.5);

    NetworkConfig bad = cfg;
    bad.stage_widths[0] = 65;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.it_head_dim = 100;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.descriptor_dim = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.voxel_edges[1] = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.hash_bins = 7;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("voxel membership equals an integer-floor bucketing oracle") {
    const PointCloud cloud = random_cloud(200, 41);
    const double edge = 0.27;
    const net::VoxelGrid grid = net::voxel_downsample(cloud, edge);

    // Independent grouping: sort (key, index) pairs lexicographically.
    using Key = std::array<std::int64_t, 3>;
    std::vector<std::pair<Key, std::int64_t>> tagged;
    for (std::int64_t i = 0; i < cloud.size(); ++i) {
        Key k;
        for (int a = 0; a < 3; ++a) {
            k[static_cast<std::size_t>(a)] =
                static_cast<std::int64_t>(std::floor(cloud[i][a] / edge));
        }
        tagged.emplace_back(k, i);
    }
    std::sort(tagged.begin(), tagged.end());

    std::vector<std::vector<std::int64_t>> cells;
    for (std::size_t i = 0; i < tagged.size(); ++i) {
        if (i == 0 || tagged[i].first != tagged[i - 1].first) cells.emplace_back();
        cells.back().push_back(tagged[i].second);
    }

    REQUIRE(grid.cell_count == static_cast<std::int64_t>(cells.size()));
    REQUIRE(grid.representatives.size() == grid.cell_count);
    for (std::size_t c = 0; c < cells.size(); ++c) {
        Eigen::Vector3d sum = Eigen::Vector3d::Zero();
        for (std::int64_t i : cells[c]) {
            CHECK(grid.cell_of_point[static_cast<std::size_t>(i)] ==
                  static_cast<std::int64_t>(c));
            sum += cloud[i];
        }
        const Eigen::Vector3d centroid = sum / static_cast<double>(cells[c].size());
        CHECK((grid.representatives[static_cast<std::int64_t>(c)] - centroid).norm() <= 1e-12);
    }
}

TEST_CASE("encoder stage leaves sparse clouds unmerged and applies MLP plus residual") {
    // Grid-aligned points two units apart; any edge below 2 keeps them apart.
    PointCloud cloud;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) cloud.points.emplace_back(2.0 * i, 2.0 * j, 0.0);

    util::Rng rng(5);
    net::EncoderParams p;
    p.w1 = rand_tensor(3, 5, 50);
    p.b1 = rand_tensor(1, 5, 51);
    p.w2 = rand_tensor(5, 5, 52);
    p.b2 = rand_tensor(1, 5, 53);
    p.proj = rand_tensor(3, 5, 54);

    Tensor features = rand_tensor(cloud.size(), 3, 55);
    const net::StageOutput out = net::encoder_stage(cloud, features, 0.5, p);
    REQUIRE(out.points.size() == cloud.size());
    REQUIRE(out.features.rows == cloud.size());
    REQUIRE(out.features.cols == 5);

    // Per-point oracle: relu(x W1 + b1) W2 + b2 + x proj, in cell-key order.
    const net::VoxelGrid grid = net::voxel_downsample(cloud, 0.5);
    for (std::int64_t i = 0; i < cloud.size(); ++i) {
        const std::int64_t c = grid.cell_of_point[static_cast<std::size_t>(i)];
        CHECK((out.points[c] - cloud[i]).norm() == 0.0);
        for (std::int64_t o = 0; o < 5; ++o) {
            double acc2 = p.b2.at(0, o);
            for (std::int64_t h = 0; h < 5; ++h) {
                double acc1 = p.b1.at(0, h);
                for (std::int64_t a = 0; a < 3; ++a) acc1 += features.at(i, a) * p.w1.at(a, h);
                acc2 += std::max(0.0, acc1) * p.w2.at(h, o);
            }
            for (std::int64_t a = 0; a < 3; ++a) acc2 += features.at(i, a) * p.proj.at(a, o);
            CHECK(std::abs(out.features.at(c, o) - acc2) <= 1e-12);
        }
    }

    SUBCASE("total collapse pools everything into the centroid cell") {
        const net::StageOutput one = net::encoder_stage(cloud, features, 100.0, p);
        REQUIRE(one.points.size() == 1);
        CHECK((one.points[0] - cloud.centroid()).norm() <= 1e-12);
        // Pooled feature is the column-wise max over all transformed rows.
        for (std::int64_t o = 0; o < 5; ++o) {
            double best = -std::numeric_limits<double>::infinity();
            for (std::int64_t c = 0; c < out.features.rows; ++c) {
                best = std::max(best, out.features.at(c, o));
            }
            CHECK(one.features.at(0, o) == best);
        }
    }

    SUBCASE("argument errors") {
        CHECK_THROWS_AS(net::encoder_stage(PointCloud{}, Tensor::zeros(0, 3), 0.5, p),
                        std::invalid_argument);
        CHECK_THROWS_AS(net::encoder_stage(cloud, rand_tensor(4, 3, 56), 0.5, p),
                        std::invalid_argument);
        CHECK_THROWS_AS(net::voxel_downsample(cloud, 0.0), std::invalid_argument);
    }
}

TEST_CASE("decoder nearest-coarse assignment matches a brute-force oracle") {
    const PointCloud fine = random_cloud(120, 61);
    const PointCloud coarse = random_cloud(17, 62);
    const std::vector<std::int64_t> got = net::nearest_indices(fine, coarse);
    for (std::int64_t i = 0; i < fine.size(); ++i) {
        std::int64_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::int64_t j = 0; j < coarse.size(); ++j) {
            const double d = (fine[i] - coarse[j]).norm();
            if (d < best_d) {
                best_d = d;
                best = j;
            }
        }
        CHECK(got[static_cast<std::size_t>(i)] == best);
    }
}

TEST_CASE("decoder stage composes gather, skip concat, and the two-layer MLP") {
    const PointCloud coarse = random_cloud(6, 63);
    Tensor f_coarse = rand_tensor(6, 4, 64);
    net::DecoderParams p;
    p.w1 = rand_tensor(4 + 3, 5, 65);
    p.b1 = rand_tensor(1, 5, 66);
    p.w2 = rand_tensor(5, 5, 67);
    p.b2 = rand_tensor(1, 5, 68);

    SUBCASE("identity pyramid routes every point to itself") {
        Tensor skip = rand_tensor(6, 3, 69);
        const Tensor out = net::decoder_stage(coarse, f_coarse, coarse, skip, p);
        REQUIRE(out.rows == 6);
        for (std::int64_t i = 0; i < 6; ++i) {
            for (std::int64_t o = 0; o < 5; ++o) {
                double acc2 = p.b2.at(0, o);
                for (std::int64_t h = 0; h < 5; ++h) {
                    double acc1 = p.b1.at(0, h);
                    for (std::int64_t a = 0; a < 4; ++a) acc1 += f_coarse.at(i, a) * p.w1.at(a, h);
                    for (std::int64_t a = 0; a < 3; ++a) acc1 += skip.at(i, a) * p.w1.at(4 + a, h);
                    acc2 += std::max(0.0, acc1) * p.w2.at(h, o);
                }
                CHECK(std::abs(out.at(i, o) - acc2) <= 1e-12);
            }
        }
    }

    SUBCASE("single coarse point broadcasts one feature") {
        PointCloud one;
        one.points.emplace_back(0.0, 0.0, 0.0);
        const PointCloud fine = random_cloud(9, 70);
        Tensor skip = Tensor::zeros(9, 3);
        const Tensor out =
            net::decoder_stage(one, rand_tensor(1, 4, 71), fine, skip, p);
        for (std::int64_t i = 1; i < 9; ++i) {
            for (std::int64_t o = 0; o < 5; ++o) CHECK(out.at(i, o) == out.at(0, o));
        }
    }

    SUBCASE("argument errors") {
        CHECK_THROWS_AS(
            net::decoder_stage(PointCloud{}, Tensor::zeros(0, 4), coarse, rand_tensor(6, 3, 72), p),
            std::invalid_argument);
        CHECK_THROWS_AS(
            net::decoder_stage(coarse, f_coarse, coarse, rand_tensor(5, 3, 73), p),
            std::invalid_argument);
    }
}

TEST_CASE("forward produces unit-norm descriptors of the requested width") {
    const NetworkConfig cfg = toy_config();
    NetworkParams params = net::init_network_params(cfg);
    const PointCloud p = random_cloud(60, 81);
    const PointCloud q = random_cloud(47, 82);

    const net::ForwardResult out = net::forward(p, q, cfg, params);
    REQUIRE(out.descriptors_p.rows == 60);
    REQUIRE(out.descriptors_q.rows == 47);
    REQUIRE(out.descriptors_p.cols == cfg.descriptor_dim);
    REQUIRE(out.descriptors_q.cols == cfg.descriptor_dim);
    for (std::int64_t i = 0; i < out.descriptors_p.rows; ++i) {
        double norm2 = 0.0;
        for (std::int64_t c = 0; c < out.descriptors_p.cols; ++c) {
            norm2 += out.descriptors_p.at(i, c) * out.descriptors_p.at(i, c);
        }
        CHECK(std::abs(std::sqrt(norm2) - 1.0) <= 1e-10);
    }

    SUBCASE("repeat call is bit-identical") {
        const net::ForwardResult again = net::forward(p, q, cfg, params);
        CHECK(*again.descriptors_p.data == *out.descriptors_p.data);
        CHECK(*again.descriptors_q.data == *out.descriptors_q.data);
    }

    SUBCASE("empty cloud is rejected") {
        CHECK_THROWS_AS(net::forward(PointCloud{}, q, cfg, params), std::invalid_argument);
    }
}

TEST_CASE("swapping the clouds together with their layout seeds swaps the outputs") {
    const NetworkConfig cfg = toy_config();
    NetworkParams params = net::init_network_params(cfg);
    const PointCloud p = random_cloud(52, 83);
    const PointCloud q = random_cloud(52, 84);

    net::ForwardOptions fwd;
    fwd.seed_p = 111;
    fwd.seed_q = 222;
    net::ForwardOptions rev;
    rev.seed_p = 222;
    rev.seed_q = 111;

    const net::ForwardResult a = net::forward(p, q, cfg, params, fwd);
    const net::ForwardResult b = net::forward(q, p, cfg, params, rev);
    CHECK(*a.descriptors_p.data == *b.descriptors_q.data);
    CHECK(*a.descriptors_q.data == *b.descriptors_p.data);
}

TEST_CASE("translating both clouds leaves the descriptors unchanged") {
    const NetworkConfig cfg = toy_config();
    NetworkParams params = net::init_network_params(cfg);
    const PointCloud p = random_cloud(55, 85);
    const PointCloud q = random_cloud(40, 86);

    PointCloud p_shift = p, q_shift = q;
    const Eigen::Vector3d v(3.75, -1.25, 0.5);
    for (auto& pt : p_shift.points) pt += v;
    for (auto& pt : q_shift.points) pt += v;

    const net::ForwardResult a = net::forward(p, q, cfg, params);
    const net::ForwardResult b = net::forward(p_shift, q_shift, cfg, params);
    double worst = 0.0;
    for (std::int64_t i = 0; i < a.descriptors_p.numel(); ++i) {
        worst = std::max(worst, std::abs(a.descriptors_p.ptr()[i] - b.descriptors_p.ptr()[i]));
    }
    for (std::int64_t i = 0; i < a.descriptors_q.numel(); ++i) {
        worst = std::max(worst, std::abs(a.descriptors_q.ptr()[i] - b.descriptors_q.ptr()[i]));
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("pair sampling on a perfectly aligned copy returns index matches") {
    const PointCloud p = random_cloud(80, 87);
    const RigidTransform t = rot_z(0.7, {0.3, -0.2, 0.9});
    const PointCloud q = geom::apply_transform(t, p);

    const PairBatch batch = net::sample_pairs(p, q, t, 1e-9, 20, 30, 5);
    REQUIRE(batch.positives.size() == 20);
    for (const auto& [i, j] : batch.positives) CHECK(i == j);
    REQUIRE(batch.negatives_source.size() == 20);
    for (std::size_t a = 0; a < batch.positives.size(); ++a) {
        CHECK(batch.negatives_source[a].size() == 30);
        CHECK(batch.negatives_target[a].size() == 30);
        // Negatives never collide with the anchor's true match.
        for (std::int64_t k : batch.negatives_source[a]) CHECK(k != batch.positives[a].second);
        for (std::int64_t k : batch.negatives_target[a]) CHECK(k != batch.positives[a].first);
    }
}

TEST_CASE("pair sampling respects the distance bound on a partial overlap") {
    const PointCloud p = random_cloud(150, 88);
    const RigidTransform t = rot_z(-0.4, {0.1, 0.2, -0.3});
    const PointCloud aligned = geom::apply_transform(t, p);

    // Target: jittered copies of half the source, plus far-away clutter.
    PointCloud q;
    util::Rng rng(89);
    const double tau = 0.05;
    for (std::int64_t i = 0; i < 75; ++i) {
        Eigen::Vector3d jitter(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                               rng.uniform(-1.0, 1.0));
        q.points.push_back(aligned[i] + jitter * (0.4 * tau));
    }
    for (std::int64_t i = 0; i < 75; ++i) {
        q.points.push_back(Eigen::Vector3d(10.0, 10.0, 10.0) +
                           Eigen::Vector3d(rng.uniform(0, 1), rng.uniform(0, 1),
                                           rng.uniform(0, 1)));
    }

    const PairBatch batch = net::sample_pairs(p, q, t, tau, 40, 25, 17);
    for (std::size_t a = 0; a < batch.positives.size(); ++a) {
        const auto [i, j] = batch.positives[a];
        CHECK((aligned[i] - q[j]).norm() <= tau);
        for (std::int64_t k : batch.negatives_source[a]) {
            CHECK((q[k] - aligned[i]).norm() > tau);
        }
        for (std::int64_t k : batch.negatives_target[a]) {
            CHECK((aligned[k] - q[j]).norm() > tau);
        }
    }

    SUBCASE("same seed reproduces the batch, another seed moves it") {
        const PairBatch again = net::sample_pairs(p, q, t, tau, 40, 25, 17);
        CHECK(again.positives == batch.positives);
        CHECK(again.negatives_source == batch.negatives_source);
        const PairBatch other = net::sample_pairs(p, q, t, tau, 40, 25, 18);
        CHECK(other.positives != batch.positives);
    }
}

TEST_CASE("pair sampling failure modes") {
    const PointCloud p = random_cloud(30, 90, 0.5);
    PointCloud q = random_cloud(30, 91, 0.5);
    for (auto& pt : q.points) pt += Eigen::Vector3d(50, 0, 0);
    CHECK_THROWS_AS(net::sample_pairs(p, q, RigidTransform::identity(), 0.05, 5, 5, 1),
                    net::NoOverlapError);

    // Everything within tau: positives exist but no negative pool.
    CHECK_THROWS_AS(net::sample_pairs(p, p, RigidTransform::identity(), 100.0, 5, 5, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(net::sample_pairs(p, q, RigidTransform::identity(), -1.0, 5, 5, 1),
                    std::invalid_argument);
}

TEST_CASE("loss vanishes when both hinges are inactive") {
    // Matched descriptors identical; negatives two apart on the unit sphere.
    Tensor fp = Tensor::from_values(2, 2, {1, 0, -1, 0});
    Tensor fq = Tensor::from_values(2, 2, {1, 0, -1, 0});
    PairBatch batch;
    batch.positives = {{0, 0}};
    batch.negatives_source = {{1}};
    batch.negatives_target = {{1}};
    const Tensor loss = net::hardest_contrastive_loss(fp, fq, batch);
    CHECK(loss.value() == 0.0);
}

TEST_CASE("single active positive pair at distance 0.6 costs exactly 0.25") {
    Tensor fp = Tensor::from_values(2, 2, {0, 0, 2.0, 0});
    Tensor fq = Tensor::from_values(2, 2, {0.6, 0, -1.4, 0});
    PairBatch batch;
    batch.positives = {{0, 0}};
    batch.negatives_source = {{1}};  // distance from (0,0) to (-1.4,0) is exactly the margin
    batch.negatives_target = {{1}};  // distance from (0.6,0) to (2,0) is exactly the margin
    const Tensor loss = net::hardest_contrastive_loss(fp, fq, batch);
    CHECK(loss.value() == 0.25);
}

TEST_CASE("loss equals the scalar-loop oracle on random instances") {
    for (int trial = 0; trial < 25; ++trial) {
        const auto seed = static_cast<std::uint64_t>(900 + trial);
        util::Rng rng(seed);
        const std::int64_t np = 6 + static_cast<std::int64_t>(rng.below(6));
        const std::int64_t nq = 6 + static_cast<std::int64_t>(rng.below(6));
        Tensor fp = rand_tensor(np, 4, seed * 3 + 1);
        Tensor fq = rand_tensor(nq, 4, seed * 3 + 2);

        PairBatch batch;
        const std::int64_t n_pos = 2 + static_cast<std::int64_t>(rng.below(3));
        for (std::int64_t a = 0; a < n_pos; ++a) {
            batch.positives.emplace_back(static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(np))),
                                         static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(nq))));
            std::vector<std::int64_t> ns, nt;
            const std::int64_t k_s = 1 + static_cast<std::int64_t>(rng.below(4));
            const std::int64_t k_t = 1 + static_cast<std::int64_t>(rng.below(4));
            for (std::int64_t k = 0; k < k_s; ++k) {
                ns.push_back(static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(nq))));
            }
            for (std::int64_t k = 0; k < k_t; ++k) {
                nt.push_back(static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(np))));
            }
            batch.negatives_source.push_back(ns);
            batch.negatives_target.push_back(nt);
        }

        LossConfig cfg;
        const Tensor loss = net::hardest_contrastive_loss(fp, fq, batch, cfg);
        CHECK(std::abs(loss.value() - loss_oracle(fp, fq, batch, cfg)) <= 1e-12);
    }
}

TEST_CASE("loss gradient passes the finite-difference check") {
    Tensor fp = rand_tensor(10, 4, 910);
    Tensor fq = rand_tensor(9, 4, 911);
    PairBatch batch;
    batch.positives = {{0, 1}, {2, 3}, {5, 0}, {7, 8}};
    batch.negatives_source = {{2, 4}, {5, 6}, {1, 7}, {0, 3}};
    batch.negatives_target = {{3, 6}, {1, 9}, {4, 8}, {2, 5}};

    const double err_p = ad::finite_diff_check(
        [&](ad::Tape&, Tensor& t) { return net::hardest_contrastive_loss(t, fq, batch); }, fp);
    CHECK(err_p <= 1e-4);
    const double err_q = ad::finite_diff_check(
        [&](ad::Tape&, Tensor& t) { return net::hardest_contrastive_loss(fp, t, batch); }, fq);
    CHECK(err_q <= 1e-4);
}

TEST_CASE("loss input validation") {
    Tensor fp = rand_tensor(4, 3, 912);
    Tensor fq = rand_tensor(4, 3, 913);
    PairBatch batch;
    CHECK_THROWS_AS(net::hardest_contrastive_loss(fp, fq, batch), std::invalid_argument);

    batch.positives = {{0, 0}};
    CHECK_THROWS_AS(net::hardest_contrastive_loss(fp, fq, batch), std::invalid_argument);

    batch.negatives_source = {{}};
    batch.negatives_target = {{1}};
    CHECK_THROWS_AS(net::hardest_contrastive_loss(fp, fq, batch), std::invalid_argument);

    batch.negatives_source = {{9}};
    CHECK_THROWS_AS(net::hardest_contrastive_loss(fp, fq, batch), std::invalid_argument);

    batch.positives = {{0, 7}};
    batch.negatives_source = {{1}};
    CHECK_THROWS_AS(net::hardest_contrastive_loss(fp, fq, batch), std::invalid_argument);
}

TEST_CASE("adam first step moves by roughly the learning rate against the gradient") {
    net::AdamConfig cfg;
    std::vector<double> value{1.0, -2.0};
    std::vector<double> grad{0.5, -0.25};
    std::vector<double> m, v;
    net::adam_apply(value, grad, m, v, 1, cfg);

    // After bias correction the first update is lr * g / (|g| + eps).
    const double step0 = cfg.learning_rate * 0.5 / (0.5 + cfg.epsilon);
    const double step1 = cfg.learning_rate * (-0.25) / (0.25 + cfg.epsilon);
    CHECK(std::abs(value[0] - (1.0 - step0)) <= 1e-15);
    CHECK(std::abs(value[1] - (-2.0 - step1)) <= 1e-15);

    CHECK_THROWS_AS(net::adam_apply(value, {1.0}, m, v, 2, cfg), std::invalid_argument);
}

namespace {

struct ToyProblem {
    NetworkConfig cfg = toy_config();
    NetworkParams params;
    net::TrainPair pair;

    ToyProblem() : params(net::init_network_params(cfg)) {
        pair.source = random_cloud(70, 95);
        pair.gt = rot_z(0.5, {0.2, -0.1, 0.3});
        pair.target = geom::apply_transform(pair.gt, pair.source);
    }
};

}  // namespace

TEST_CASE("zero learning rate leaves every parameter untouched") {
    ToyProblem toy;
    const std::vector<double> before = snapshot_params(toy.params);

    net::AdamConfig adam_cfg;
    adam_cfg.learning_rate = 0.0;
    net::Adam adam(adam_cfg);
    const PairBatch batch =
        net::sample_pairs(toy.pair.source, toy.pair.target, toy.pair.gt, 0.05, 12, 12, 3);
    const double loss = net::train_step(toy.params, adam, batch, toy.cfg, LossConfig{});
    CHECK(std::isfinite(loss));
    CHECK(snapshot_params(toy.params) == before);
}

TEST_CASE("repeated steps on one fixed batch drive the loss down") {
    ToyProblem toy;
    net::Adam adam;
    const PairBatch batch =
        net::sample_pairs(toy.pair.source, toy.pair.target, toy.pair.gt, 0.05, 12, 12, 3);

    std::vector<double> losses;
    for (int step = 0; step < 220; ++step) {
        losses.push_back(net::train_step(toy.params, adam, batch, toy.cfg, LossConfig{}));
    }
    // Over any 100-step span the loss drops by at least 1% relative, until it
    // bottoms out near zero (hinge objectives can reach exactly zero).
    for (std::size_t k = 0; k + 100 < losses.size(); ++k) {
        if (losses[k] < 1e-8) break;
        CHECK(losses[k + 100] < 0.99 * losses[k]);
    }
    CHECK(losses.back() < 0.5 * losses.front());
}

TEST_CASE("training loop is deterministic and logs one row per step") {
    ToyProblem toy;
    net::TrainConfig cfg;
    cfg.network = toy.cfg;
    cfg.steps = 6;
    cfg.tau_pos = 0.05;
    cfg.n_pos = 10;
    cfg.n_neg = 10;
    cfg.seed = 77;
    cfg.log_path = "toy_train_log.csv";
    cfg.checkpoint_path = "toy_train_ckpt.bin";

    NetworkParams run1 = net::init_network_params(toy.cfg);
    const net::TrainResult r1 = net::train_loop(cfg, {toy.pair}, run1);
    NetworkParams run2 = net::init_network_params(toy.cfg);
    const net::TrainResult r2 = net::train_loop(cfg, {toy.pair}, run2);

    REQUIRE(r1.losses.size() == 6);
    CHECK(r1.losses == r2.losses);
    CHECK(snapshot_params(run1) == snapshot_params(run2));

    std::FILE* f = std::fopen(cfg.log_path.c_str(), "rb");
    REQUIRE(f != nullptr);
    char buffer[4096];
    const std::size_t len = std::fread(buffer, 1, sizeof buffer - 1, f);
    std::fclose(f);
    buffer[len] = '\0';
    int rows = 0;
    for (std::size_t i = 0; i < len; ++i) rows += buffer[i] == '\n';
    CHECK(rows == 7);  // header + six steps

    // The checkpoint restores the trained parameters bit-for-bit.
    NetworkParams restored = net::init_network_params(toy.cfg);
    net::load_network(restored, cfg.checkpoint_path);
    CHECK(snapshot_params(restored) == snapshot_params(run1));
    std::remove(cfg.log_path.c_str());
    std::remove(cfg.checkpoint_path.c_str());
}

TEST_CASE("non-finite loss aborts with a diagnostic") {
    ToyProblem toy;
    toy.params.head_w.at(0, 0) = std::numeric_limits<double>::quiet_NaN();
    net::Adam adam;
    const PairBatch batch =
        net::sample_pairs(toy.pair.source, toy.pair.target, toy.pair.gt, 0.05, 8, 8, 3);
    CHECK_THROWS_AS(net::train_step(toy.params, adam, batch, toy.cfg, LossConfig{}),
                    std::runtime_error);
    // Parameters are left detached and usable for the next attempt.
    toy.params.visit([&](const std::string&, Tensor& t) { CHECK(!t.tracked()); });
}

TEST_CASE("checkpoint shape mismatches are reported by name") {
    NetworkConfig small = toy_config();
    NetworkParams params = net::init_network_params(small);
    net::save_network(params, "net_ckpt_shape.bin");

    NetworkConfig wider = small;
    wider.descriptor_dim = 9;
    NetworkParams other = net::init_network_params(wider);
    CHECK_THROWS_WITH_AS(net::load_network(other, "net_ckpt_shape.bin"),
                         doctest::Contains("head.w"), std::runtime_error);
    std::remove("net_ckpt_shape.bin");
}
