#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lahreg/geom/kabsch.hpp"
#include "lahreg/geom/point_cloud.hpp"
#include "lahreg/geom/rigid_transform.hpp"
#include "lahreg/util/rng.hpp"

using namespace lahreg;
using geom::PointCloud;
using geom::RigidTransform;

namespace {

PointCloud random_cloud(std::int64_t n, std::uint64_t seed, double scale = 1.0) {
    util::Rng rng(seed);
    PointCloud pc;
    pc.points.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        pc.points.emplace_back(rng.uniform(-scale, scale), rng.uniform(-scale, scale),
                               rng.uniform(-scale, scale));
    }
    return pc;
}

RigidTransform rot_z(double angle_rad, const Eigen::Vector3d& t) {
    RigidTransform out;
    const double c = std::cos(angle_rad);
    const double s = std::sin(angle_rad);
    out.rotation << c, -s, 0, s, c, 0, 0, 0, 1;
    out.translation = t;
    return out;
}

}  // namespace

TEST_CASE("centroid matches running-sum computed by hand") {
    PointCloud pc;
    pc.points = {{1.0, 2.0, 3.0}, {-1.0, 0.0, 5.0}, {3.0, 4.0, -2.0}};
    double ex = (1.0 - 1.0 + 3.0) / 3.0;
    double ey = (2.0 + 0.0 + 4.0) / 3.0;
    double ez = (3.0 + 5.0 - 2.0) / 3.0;
    Eigen::Vector3d c = pc.centroid();
    CHECK(c.x() == doctest::Approx(ex).epsilon(1e-15));
    CHECK(c.y() == doctest::Approx(ey).epsilon(1e-15));
    CHECK(c.z() == doctest::Approx(ez).epsilon(1e-15));

    PointCloud empty;
    CHECK(empty.centroid().norm() == 0.0);
}

TEST_CASE("centered cloud has zero centroid") {
    PointCloud pc = random_cloud(257, 11);
    PointCloud c = geom::centered(pc);
    CHECK(c.size() == pc.size());
    CHECK(c.centroid().norm() < 1e-12);
}

TEST_CASE("all_finite flags nan and inf coordinates") {
    PointCloud pc = random_cloud(16, 3);
    CHECK(pc.all_finite());
    pc.points[7].y() = std::nan("");
    CHECK_FALSE(pc.all_finite());
    pc.points[7].y() = 0.0;
    pc.points[2].z() = std::numeric_limits<double>::infinity();
    CHECK_FALSE(pc.all_finite());
}

TEST_CASE("correspondence validation rejects out-of-range and mismatched lengths") {
    geom::CorrespondenceSet cs;
    cs.pairs = {{0, 1}, {2, 0}};
    CHECK_NOTHROW(cs.validate(3, 2));
    CHECK_THROWS_AS(cs.validate(2, 2), std::invalid_argument);
    CHECK_THROWS_AS(cs.validate(3, 1), std::invalid_argument);
    cs.pairs.push_back({-1, 0});
    CHECK_THROWS_AS(cs.validate(3, 2), std::invalid_argument);
    cs.pairs.pop_back();
    cs.distances = {0.5};
    CHECK_THROWS_AS(cs.validate(3, 2), std::invalid_argument);
}

TEST_CASE("apply_transform agrees with per-component arithmetic") {
    RigidTransform t = rot_z(0.7, {0.3, -1.2, 2.5});
    PointCloud pc = random_cloud(100, 5);
    PointCloud moved = geom::apply_transform(t, pc);
    REQUIRE(moved.size() == pc.size());
    const double c = std::cos(0.7), s = std::sin(0.7);
    for (std::int64_t i = 0; i < pc.size(); ++i) {
        const auto& p = pc[i];
        double ex = c * p.x() - s * p.y() + 0.3;
        double ey = s * p.x() + c * p.y() - 1.2;
        double ez = p.z() + 2.5;
        CHECK(std::abs(moved[i].x() - ex) < 1e-12);
        CHECK(std::abs(moved[i].y() - ey) < 1e-12);
        CHECK(std::abs(moved[i].z() - ez) < 1e-12);
    }
}

TEST_CASE("compose equals sequential application") {
    RigidTransform a = rot_z(0.4, {1, 2, 3});
    RigidTransform b;
    b.rotation = geom::random_rotation(77);
    b.translation = {-0.5, 0.25, 4.0};
    RigidTransform ab = geom::compose(a, b);
    PointCloud pc = random_cloud(50, 9);
    for (std::int64_t i = 0; i < pc.size(); ++i) {
        Eigen::Vector3d seq = a(b(pc[i]));
        Eigen::Vector3d one = ab(pc[i]);
        CHECK((seq - one).norm() < 1e-10);
    }
}

TEST_CASE("invert round-trips points and double inversion is the identity map") {
    RigidTransform t;
    t.rotation = geom::random_rotation(123);
    t.translation = {0.1, -7.0, 2.2};
    RigidTransform inv = geom::invert(t);
    RigidTransform invinv = geom::invert(inv);
    PointCloud pc = random_cloud(40, 21);
    for (std::int64_t i = 0; i < pc.size(); ++i) {
        CHECK((inv(t(pc[i])) - pc[i]).norm() < 1e-12);
        CHECK((invinv(pc[i]) - t(pc[i])).norm() < 1e-12);
    }
}

TEST_CASE("is_rotation accepts members of SO(3) and rejects scalings and reflections") {
    CHECK(geom::is_rotation(Eigen::Matrix3d::Identity()));
    for (std::uint64_t s = 0; s < 20; ++s) {
        CHECK(geom::is_rotation(geom::random_rotation(s)));
    }
    Eigen::Matrix3d scaled = 1.1 * Eigen::Matrix3d::Identity();
    CHECK_FALSE(geom::is_rotation(scaled));
    Eigen::Matrix3d reflect = Eigen::Matrix3d::Identity();
    reflect(2, 2) = -1.0;
    CHECK_FALSE(geom::is_rotation(reflect));
    Eigen::Matrix3d skew = Eigen::Matrix3d::Identity();
    skew(0, 1) = 1e-3;
    CHECK_FALSE(geom::is_rotation(skew));
}

TEST_CASE("random_rotation is deterministic per seed and roughly direction-uniform") {
    Eigen::Matrix3d a = geom::random_rotation(42);
    Eigen::Matrix3d b = geom::random_rotation(42);
    CHECK((a - b).norm() == 0.0);
    Eigen::Matrix3d c = geom::random_rotation(43);
    CHECK((a - c).norm() > 1e-6);

    // Rotating a fixed vector by many independent rotations should average out.
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    const int trials = 10000;
    for (int s = 0; s < trials; ++s) {
        mean += geom::random_rotation(static_cast<std::uint64_t>(s)) * Eigen::Vector3d::UnitX();
    }
    mean /= trials;
    CHECK(mean.norm() < 0.05);
}

TEST_CASE("kabsch recovers a transform it is shown exactly") {
    RigidTransform gt = rot_z(M_PI / 6.0, {1, 2, 3});
    PointCloud src = random_cloud(20, 31);
    PointCloud dst = geom::apply_transform(gt, src);
    RigidTransform est = geom::kabsch(src, dst);
    CHECK((est.rotation - gt.rotation).norm() < 1e-9);
    CHECK((est.translation - gt.translation).norm() < 1e-9);
    CHECK(geom::is_rotation(est.rotation));
}

TEST_CASE("kabsch with a rotation drawn at random and larger clouds") {
    for (std::uint64_t s = 0; s < 10; ++s) {
        RigidTransform gt;
        gt.rotation = geom::random_rotation(1000 + s);
        util::Rng rng(2000 + s);
        gt.translation = {rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
        PointCloud src = random_cloud(200, 3000 + s, 4.0);
        PointCloud dst = geom::apply_transform(gt, src);
        RigidTransform est = geom::kabsch(src, dst);
        CHECK((est.rotation - gt.rotation).norm() < 1e-9);
        CHECK((est.translation - gt.translation).norm() < 1e-9);
    }
}

TEST_CASE("kabsch zero-weight pairs are ignored exactly") {
    RigidTransform gt = rot_z(-0.9, {0.5, 0.5, -0.5});
    PointCloud src = random_cloud(30, 71);
    PointCloud dst = geom::apply_transform(gt, src);
    // Corrupt two pairs, then zero them out.
    dst.points[4] += Eigen::Vector3d(10, -3, 7);
    dst.points[19] -= Eigen::Vector3d(2, 2, 2);
    std::vector<double> w(30, 1.0);
    w[4] = 0.0;
    w[19] = 0.0;
    RigidTransform est = geom::kabsch(src, dst, w);
    CHECK((est.rotation - gt.rotation).norm() < 1e-9);
    CHECK((est.translation - gt.translation).norm() < 1e-9);

    // The same corrupt pairs with uniform weights must move the answer.
    RigidTransform biased = geom::kabsch(src, dst);
    CHECK((biased.rotation - gt.rotation).norm() > 1e-6);
}

TEST_CASE("kabsch single pair fixes rotation to identity") {
    PointCloud src, dst;
    src.points = {{1, 1, 1}};
    dst.points = {{4, -1, 0.5}};
    RigidTransform est = geom::kabsch(src, dst);
    CHECK((est.rotation - Eigen::Matrix3d::Identity()).norm() == 0.0);
    CHECK((est.translation - Eigen::Vector3d(3, -2, -0.5)).norm() < 1e-15);
}

TEST_CASE("kabsch input validation") {
    PointCloud a = random_cloud(4, 1);
    PointCloud b = random_cloud(5, 2);
    PointCloud empty;
    CHECK_THROWS_AS(geom::kabsch(a, b), std::invalid_argument);
    CHECK_THROWS_AS(geom::kabsch(empty, empty), std::invalid_argument);
    PointCloud c = random_cloud(4, 3);
    CHECK_THROWS_AS(geom::kabsch(a, c, {1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(geom::kabsch(a, c, {1.0, 1.0, 1.0, -0.1}), std::invalid_argument);
    CHECK_THROWS_AS(geom::kabsch(a, c, {0.0, 0.0, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("kabsch estimate preserves pairwise distances when applied") {
    PointCloud src = random_cloud(60, 91, 2.0);
    RigidTransform gt;
    gt.rotation = geom::random_rotation(555);
    gt.translation = {1, -1, 0.25};
    PointCloud dst = geom::apply_transform(gt, src);
    RigidTransform est = geom::kabsch(src, dst);
    PointCloud moved = geom::apply_transform(est, src);
    for (std::int64_t i = 0; i + 1 < src.size(); ++i) {
        double before = (src[i] - src[i + 1]).norm();
        double after = (moved[i] - moved[i + 1]).norm();
        CHECK(std::abs(before - after) < 1e-10);
    }
}

TEST_CASE("rng uniform stays in range and gaussian has sane moments") {
    util::Rng rng(987);
    double sum = 0.0, sumsq = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        double g = rng.gaussian();
        sum += g;
        sumsq += g * g;
    }
    double mean = sum / n;
    double var = sumsq / n - mean * mean;
    CHECK(std::abs(mean) < 0.03);
    CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("rng below is bounded and covers small ranges") {
    util::Rng rng(55);
    std::vector<int> seen(7, 0);
    for (int i = 0; i < 7000; ++i) {
        std::uint64_t v = rng.below(7);
        REQUIRE(v < 7);
        seen[static_cast<std::size_t>(v)]++;
    }
    for (int count : seen) CHECK(count > 700);
}

TEST_CASE("derived seeds differ across tags and match across calls") {
    std::uint64_t a = util::derive_seed(1, "alpha");
    std::uint64_t b = util::derive_seed(1, "beta");
    std::uint64_t a2 = util::derive_seed(1, "alpha");
    CHECK(a == a2);
    CHECK(a != b);
    CHECK(util::derive_seed(1, 0) != util::derive_seed(2, 0));
    CHECK(util::derive_seed(1, 0) != util::derive_seed(1, 1));
}
