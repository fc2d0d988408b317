#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "sweep/prox_set.hpp"

using sweep::ErrorKind;
using sweep::ProxSet;
using sweep::Vector;

namespace {

Vector v2(double x, double y) { return (Vector(2) << x, y).finished(); }

ProxSet triangle() {
    return ProxSet::polytope({{v2(-1, 0), 0.0}, {v2(0, -1), 0.0}, {v2(1, 1) / std::sqrt(2.0), 1.0 / std::sqrt(2.0)}});
}

template <class F>
ErrorKind kind_of(F&& f) {
    try {
        f();
    } catch (const sweep::Error& e) {
        return e.kind();
    }
    FAIL("no error thrown");
    return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("distance examples") {
    CHECK(ProxSet::ball(Vector::Zero(2), 1.0).distance(v2(3, 0)) == doctest::Approx(2.0));
    CHECK(ProxSet::half_space(v2(1, 0), 0.0).distance(v2(-1, 5)) == 0.0);
    CHECK(triangle().distance(v2(1, 1)) == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-10));
    CHECK(kind_of([] { (void)ProxSet::ball(Vector::Zero(2), 1.0).distance(Vector::Zero(3)); }) ==
          ErrorKind::DimensionMismatch);
}

TEST_CASE("triangle distance agrees with a grid search") {
    // grid oracle on [-0.5, 1.5]^2 with independent membership
    const auto in = oracle::triangle({0, 0}, {1, 0}, {0, 1});
    double h = 0.0;
    const auto best = oracle::brute_project(in, {1, 1}, {-0.5, -0.5, 1.5, 1.5}, 2001, h);
    CHECK((best - oracle::Vec2(0.5, 0.5)).norm() <= 2 * h);
    CHECK(std::abs((best - oracle::Vec2(1, 1)).norm() - std::sqrt(0.5)) <= 2 * h);
}

TEST_CASE("projection examples") {
    const Vector p = ProxSet::half_space(v2(1, 0), 0.0).project(v2(2, 3));
    CHECK(p[0] == 0.0);
    CHECK(p[1] == 3.0);
    const Vector q = ProxSet::ball_complement(Vector::Zero(2), 1.0).project(v2(0.5, 0));
    CHECK(q[0] == doctest::Approx(1.0));
    CHECK(q[1] == doctest::Approx(0.0));
    const Vector t = triangle().project(v2(1, 1));
    CHECK(t[0] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(t[1] == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("projection errors") {
    const auto ring = ProxSet::ball_complement(Vector::Zero(2), 1.0);
    CHECK(kind_of([&] { (void)ring.project(Vector::Zero(2)); }) == ErrorKind::AtSingularity);
    CHECK(kind_of([] { (void)ProxSet::ball(Vector::Zero(2), 0.0); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] { (void)ProxSet::half_space(v2(2, 0), 0.0); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] { (void)ProxSet::polytope({{v2(1, 0), -1.0}, {v2(-1, 0), -1.0}}); }) == ErrorKind::EmptySet);
}

TEST_CASE("ball complement radius is its prox-regularity radius") {
    CHECK(ProxSet::ball_complement(Vector::Zero(2), 0.5).r() == 0.5);
    CHECK(std::isinf(ProxSet::ball(Vector::Zero(2), 0.5).r()));
    const auto rot = ProxSet::rigid_image(ProxSet::ball_complement(Vector::Zero(2), 0.5),
                                          Eigen::Rotation2Dd(0.3).toRotationMatrix(), v2(1, 2));
    CHECK(rot.r() == 0.5);
}

TEST_CASE("normal residual examples") {
    const auto hs = ProxSet::half_space(v2(1, 0), 0.0);
    std::vector<Vector> zs{v2(0, -4), v2(0, 7), v2(-1, 0), v2(-3, 2)};
    CHECK(sweep::normal_residual(hs, v2(0, 2), v2(1, 0), zs).worst_residual <= 0.0);

    const auto ball = ProxSet::ball(Vector::Zero(2), 1.0);
    const std::vector<Vector> far{v2(-1, 0)};
    CHECK(sweep::normal_residual(ball, v2(1, 0), v2(-1, 0), far).worst_residual == doctest::Approx(2.0));

    const auto ring = ProxSet::ball_complement(Vector::Zero(2), 1.0);
    const auto samples = sweep::sample_points(ring, sweep::Region::cube(Vector::Zero(2), 3.0), 500, 5);
    CHECK(sweep::normal_residual(ring, v2(1, 0), v2(-1, 0), samples).worst_residual <= 1e-9);

    CHECK(kind_of([&] { (void)sweep::normal_residual(ball, v2(2, 0), v2(1, 0), far); }) == ErrorKind::NotAMember);
}

TEST_CASE("sampling contract") {
    const auto ball = ProxSet::ball(Vector::Zero(2), 1.0);
    const auto pts = sweep::sample_points(ball, sweep::Region::cube(Vector::Zero(2), 2.0), 10, 7);
    CHECK(pts.size() == 10);
    for (const auto& p : pts) CHECK(p.norm() <= 1.0 + 1e-10);
    CHECK(sweep::sample_points(ball, sweep::Region::cube(Vector::Zero(2), 2.0), 10, 7) ==
          pts);  // seeded
    CHECK(sweep::sample_points(ProxSet::half_space(v2(0, 1), 0.5), sweep::Region::cube(Vector::Zero(2), 1.0), 1, 1)
              .size() == 1);

    const auto tri = triangle();
    const auto tp = sweep::sample_points(tri, {v2(-1, -1), v2(2, 2)}, 100, 3);
    CHECK(tp.size() == 100);
    auto near_edge = [&](auto dist) {
        for (const auto& p : tp) {
            if (dist(p) <= 1e-6) return true;
        }
        return false;
    };
    CHECK(near_edge([](const Vector& p) { return std::abs(p[0]); }));
    CHECK(near_edge([](const Vector& p) { return std::abs(p[1]); }));
    CHECK(near_edge([](const Vector& p) { return std::abs(p[0] + p[1] - 1.0) / std::sqrt(2.0); }));

    CHECK(kind_of([&] {
              (void)sweep::sample_points(ball, {v2(5, 5), v2(6, 6)}, 3, 1);
          }) == ErrorKind::EmptyIntersection);
}

TEST_CASE("projection invariants on random inputs") {
    sweep::Rng rng(42);
    const std::vector<ProxSet> sets{
        ProxSet::half_space(v2(0.6, 0.8), 0.3),
        ProxSet::ball(v2(0.2, -0.1), 0.9),
        ProxSet::box(v2(-1, -0.5), v2(0.5, 1)),
        triangle(),
        ProxSet::ball_complement(v2(0.1, 0.1), 0.8),
        ProxSet::rigid_image(triangle(), Eigen::Rotation2Dd(1.1).toRotationMatrix(), v2(0.3, -0.2)),
    };
    for (const auto& set : sets) {
        for (int i = 0; i < 100; ++i) {
            const Vector y = rng.in_region(sweep::Region::cube(Vector::Zero(2), 2.5));
            if (set.raw_distance(y) >= set.r() * 0.999) continue;
            const Vector x = set.project(y);
            CHECK(set.distance(x) <= 1e-10);
            CHECK((set.project(x) - x).norm() <= 1e-12);
            CHECK(std::abs((x - y).norm() - set.raw_distance(y)) <= 1e-9 * std::max(1.0, (x - y).norm()));
        }
    }
}

TEST_CASE("rigid images are equivariant") {
    const Eigen::Matrix2d q = Eigen::Rotation2Dd(0.7).toRotationMatrix();
    const Vector u = v2(0.4, -1.3);
    sweep::Rng rng(9);
    for (const auto& base : {triangle(), ProxSet::ball_complement(v2(0.2, 0), 0.6), ProxSet::box(v2(-1, -1), v2(1, 2))}) {
        const auto img = ProxSet::rigid_image(base, q, u);
        for (int i = 0; i < 50; ++i) {
            const Vector y = rng.in_region(sweep::Region::cube(Vector::Zero(2), 2.0));
            if (base.raw_distance(y) >= base.r() * 0.999) continue;
            const Vector lhs = img.project(q * y + u);
            const Vector rhs = q * base.project(y) + u;
            CHECK((lhs - rhs).norm() <= 1e-10);
        }
        CHECK(img.canonical().tag() != "rigid_image");
    }
}

TEST_CASE("box and the equivalent polytope project identically") {
    const auto box = ProxSet::box(v2(-1, -2), v2(1, 0.5));
    const auto poly = ProxSet::polytope({{v2(1, 0), 1.0}, {v2(-1, 0), 1.0}, {v2(0, 1), 0.5}, {v2(0, -1), 2.0}});
    sweep::Rng rng(4);
    for (int i = 0; i < 200; ++i) {
        const Vector y = rng.in_region(sweep::Region::cube(Vector::Zero(2), 3.0));
        CHECK((box.project(y) - poly.project(y)).norm() <= 1e-9);
    }
    CHECK(poly.bounded());
    CHECK(poly.vertices()->size() == 4);
    CHECK_FALSE(ProxSet::polytope({{v2(1, 0), 1.0}}).bounded());
}

TEST_CASE("polytope projection in higher dimension matches the box closed form") {
    const int n = 5;
    std::vector<sweep::HalfSpace> faces;
    for (int k = 0; k < n; ++k) {
        faces.push_back({Vector::Unit(n, k), 1.0});
        faces.push_back({-Vector::Unit(n, k), 1.0});
    }
    const auto poly = ProxSet::polytope(faces);
    sweep::Rng rng(12);
    for (int i = 0; i < 50; ++i) {
        const Vector y = rng.in_region(sweep::Region::cube(Vector::Zero(n), 3.0));
        const Vector expect = y.cwiseMax(-1.0).cwiseMin(1.0);
        CHECK((poly.project(y) - expect).norm() <= 1e-9);
    }
}
