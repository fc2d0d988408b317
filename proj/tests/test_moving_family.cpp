#include "doctest.h"

#include <cmath>
#include <memory>

#include "sweep/moving_family.hpp"
#include "sweep/scenario.hpp"

using sweep::MovingFamily;
using sweep::ProxSet;
using sweep::ScalarPath;
using sweep::Vector;
using sweep::VectorPath;

namespace {

Vector v2(double x, double y) { return (Vector(2) << x, y).finished(); }

MovingFamily shrinking(double offset, double rate, double horizon) {
    return MovingFamily::radius_schedule(VectorPath::constant(Vector::Zero(2)), ScalarPath::linear(offset, rate), false,
                                         horizon);
}

MovingFamily jumping() {
    return MovingFamily::piecewise({{0.0, 1.0, std::make_shared<const MovingFamily>(shrinking(1.0, -0.4, 1.0))},
                                    {1.0, 2.0, std::make_shared<const MovingFamily>(shrinking(1.4, -0.4, 2.0))}});
}

// the same shrinking rates with the upward jump removed
MovingFamily jump_removed() {
    return MovingFamily::piecewise({{0.0, 1.0, std::make_shared<const MovingFamily>(shrinking(1.0, -0.4, 1.0))},
                                    {1.0, 2.0, std::make_shared<const MovingFamily>(shrinking(1.0, -0.4, 2.0))}});
}

// independent boundary-sampling estimate of sup_{a in A} d(a, B) for discs
double disc_excess_oracle(const Vector& ca, double ra, const Vector& cb, double rb) {
    double best = 0.0;
    for (int k = 0; k < 10000; ++k) {
        const double phi = 6.283185307179586 * k / 10000.0;
        const Vector a = ca + ra * v2(std::cos(phi), std::sin(phi));
        best = std::max(best, (a - cb).norm() - rb);
    }
    return best;
}

}  // namespace

TEST_CASE("slice examples") {
    const auto tr = MovingFamily::translate(ProxSet::ball(Vector::Zero(2), 1.0), VectorPath::linear(Vector::Zero(2), v2(1, 0)), 1.0);
    CHECK(tr.slice(0.5) == ProxSet::ball(v2(0.5, 0), 1.0));
    CHECK(shrinking(1.0, -0.4, 1.0).slice(1.0) == ProxSet::ball(Vector::Zero(2), 0.6));
    const auto jf = jumping();
    CHECK(std::get<sweep::Ball>(jf.slice(1.0).shape()).radius == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::get<sweep::Ball>(jf.slice(std::nextafter(1.0, 0.0)).shape()).radius == doctest::Approx(0.6));
    CHECK_THROWS_AS(jf.slice(2.5), sweep::Error);
    CHECK_THROWS_AS(jf.slice(-0.1), sweep::Error);
    // approach from the left: e(C(1-h), C(1)) -> 0
    for (double h : {1e-1, 1e-3, 1e-6}) CHECK(sweep::excess(jf.slice(1.0 - h), jf.slice(1.0)).lower == 0.0);
}

TEST_CASE("piecewise admissibility follows the direction of the jump") {
    const auto up = jumping();
    const auto& pw = std::get<sweep::PiecewiseFamily>(up.kind());
    REQUIRE(pw.admissible.size() == 1);
    CHECK(pw.admissible[0]);
    CHECK(pw.jump_excess[0] == 0.0);
    const auto down = MovingFamily::piecewise({{0.0, 1.0, std::make_shared<const MovingFamily>(shrinking(1.4, -0.4, 1.0))},
                                               {1.0, 2.0, std::make_shared<const MovingFamily>(shrinking(1.0, -0.4, 2.0))}});
    const auto& pd = std::get<sweep::PiecewiseFamily>(down.kind());
    CHECK_FALSE(pd.admissible[0]);
    CHECK(pd.jump_excess[0] == doctest::Approx(0.4));
    CHECK(down.analytic_modulus().has_value() == false);
}

TEST_CASE("excess examples and asymmetry") {
    const auto b1 = ProxSet::ball(Vector::Zero(2), 1.0);
    const auto b2 = ProxSet::ball(Vector::Zero(2), 2.0);
    const auto big = sweep::excess(b2, b1);
    CHECK(big.method == sweep::ExcessMethod::analytic);
    CHECK(big.lower == 1.0);
    CHECK(sweep::excess(b1, b2).lower == 0.0);
    const auto hs = sweep::excess(ProxSet::half_space(v2(1, 0), 0.0), ProxSet::half_space(v2(1, 0), -0.5));
    CHECK(hs.lower == doctest::Approx(0.5));
    CHECK(std::isinf(sweep::excess(ProxSet::half_space(v2(1, 0), 0.0), ProxSet::half_space(v2(0, 1), 0.0)).lower));
}

TEST_CASE("disc excess formula agrees with boundary sampling") {
    sweep::Rng rng(77);
    for (int i = 0; i < 20; ++i) {
        const Vector ca = rng.in_region(sweep::Region::cube(Vector::Zero(2), 1.0));
        const Vector cb = rng.in_region(sweep::Region::cube(Vector::Zero(2), 1.0));
        const double ra = rng.uniform(0.2, 2.0);
        const double rb = rng.uniform(0.2, 2.0);
        const double got = sweep::excess(ProxSet::ball(ca, ra), ProxSet::ball(cb, rb)).lower;
        CHECK(got == doctest::Approx(std::max(disc_excess_oracle(ca, ra, cb, rb), 0.0)).epsilon(1e-6));
    }
}

TEST_CASE("polyhedral excess is exact, sampled excess is a lower bound") {
    const Eigen::Matrix2d q = Eigen::Rotation2Dd(0.4).toRotationMatrix();
    const auto a = ProxSet::rigid_image(ProxSet::box(v2(-1, -1), v2(1, 1)), q, v2(0.3, 0));
    const auto b = ProxSet::ball(Vector::Zero(2), 1.2);
    const auto exact = sweep::excess(a, b);
    CHECK(exact.method == sweep::ExcessMethod::analytic);
    double far = 0.0;
    for (double sx : {-1.0, 1.0}) {
        for (double sy : {-1.0, 1.0}) far = std::max(far, (q * Eigen::Vector2d(sx, sy) + Eigen::Vector2d(0.3, 0)).norm());
    }
    CHECK(exact.lower == doctest::Approx(far - 1.2).epsilon(1e-12));

    // disc over a triangle has no closed form here
    const auto disc = ProxSet::ball(v2(2, 0), 0.5);
    const auto tri = ProxSet::polytope({{v2(-1, 0), 0.0}, {v2(0, -1), 0.0}, {v2(1, 1) / std::sqrt(2.0), 1.0 / std::sqrt(2.0)}});
    const auto est = sweep::excess(disc, tri);
    double oracle = 0.0;
    for (int k = 0; k < 10000; ++k) {
        const double phi = 6.283185307179586 * k / 10000.0;
        oracle = std::max(oracle, tri.distance(v2(2, 0) + 0.5 * v2(std::cos(phi), std::sin(phi))));
    }
    CHECK(est.method == sweep::ExcessMethod::sampled);
    CHECK(est.lower <= oracle + 1e-9);
    CHECK(est.lower >= oracle - 1e-3);
    CHECK(tri.distance(est.witness) == doctest::Approx(est.lower));
}

TEST_CASE("excess triangle inequality on analytic triples") {
    sweep::Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        std::vector<ProxSet> s;
        for (int k = 0; k < 3; ++k) s.push_back(ProxSet::ball(rng.in_region(sweep::Region::cube(Vector::Zero(2), 1.0)), rng.uniform(0.1, 1.5)));
        const double ac = sweep::excess(s[0], s[2]).lower;
        const double ab = sweep::excess(s[0], s[1]).lower;
        const double bc = sweep::excess(s[1], s[2]).lower;
        CHECK(ac <= ab + bc + 1e-12);
    }
}

TEST_CASE("modulus examples") {
    const auto unit = MovingFamily::translate(ProxSet::ball(Vector::Zero(2), 1.0), VectorPath::linear(Vector::Zero(2), v2(1, 0)), 1.0);
    const auto est = sweep::estimate_modulus(unit, {0.25});
    CHECK(est[0].second == doctest::Approx(0.25));
    const auto still = MovingFamily::stationary(ProxSet::box(v2(-1, -1), v2(1, 1)), 1.0);
    CHECK(sweep::estimate_modulus(still, {0.1, 0.5})[1].second == 0.0);
    CHECK(sweep::estimate_modulus(jumping(), {0.5})[0].second == doctest::Approx(0.2));
}

TEST_CASE("sampled modulus of a jump family equals the jump-free counterpart") {
    sweep::SamplingBudget budget;
    budget.force_sampling = true;
    const std::vector<double> deltas{0.0625, 0.125, 0.25, 0.5, 1.0};
    const auto with_jump = sweep::estimate_modulus(jumping(), deltas, budget);
    const auto without = sweep::estimate_modulus(jump_removed(), deltas, budget);
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        CHECK(with_jump[i].second == doctest::Approx(without[i].second).epsilon(1e-9));
        CHECK(with_jump[i].second == doctest::Approx(0.4 * deltas[i]).epsilon(1e-9));
    }
    CHECK(jumping().analytic_modulus()->rate() == jump_removed().analytic_modulus()->rate());
    CHECK(jumping().analytic_modulus()->offset() == 0.0);
}

TEST_CASE("analytic moduli dominate sampled excess") {
    for (const auto& [name, desc] : sweep::list_builtins()) {
        const auto s = sweep::load_scenario(name);
        const auto& omega = s.family.analytic_modulus();
        REQUIRE(omega.has_value());
        sweep::Rng rng(31);
        for (int i = 0; i < 200; ++i) {
            double a = rng.uniform(0.0, s.horizon);
            double b = rng.uniform(0.0, s.horizon);
            if (a > b) std::swap(a, b);
            sweep::SamplingBudget budget;
            budget.samples = 32;
            budget.climb_iters = 10;
            const double e = sweep::excess(s.family.slice(a), s.family.slice(b), budget).lower;
            INFO(name << " s=" << a << " t=" << b);
            CHECK(e <= (*omega)(b - a) * (1.0 + 1e-6) + 1e-12);
        }
    }
}

TEST_CASE("compute_tau") {
    const auto id = sweep::Modulus::lipschitz(1.0);
    const double tau = sweep::compute_tau(id, 1.0, 0.5, 0.25, 1.0);
    CHECK(tau == doctest::Approx(0.25 - sweep::kTauMargin).epsilon(1e-12));
    CHECK(tau < 0.25);
    CHECK(sweep::compute_tau(sweep::Modulus::lipschitz(0.0), 1.0, 0.5, 0.25, 3.0) == 3.0);
    CHECK_THROWS_AS(sweep::compute_tau(id, 1.0, 0.5, 0.5, 1.0), sweep::Error);
    try {
        (void)sweep::compute_tau(sweep::Modulus::lipschitz(1.0, 1.0), 1.0, 0.5, 0.25, 1.0);
        FAIL("expected NoPositiveTau");
    } catch (const sweep::Error& e) {
        CHECK(e.kind() == sweep::ErrorKind::NoPositiveTau);
    }
}

TEST_CASE("inner ball persists for tau on the shrinking disc") {
    const auto fam = shrinking(1.0, -0.4, 1.0);
    const double tau = sweep::compute_tau(*fam.analytic_modulus(), fam.r(), 1.0, 0.5, 1.0);
    const auto check = sweep::verify_inner_ball(fam, Vector::Zero(2), 0.5, 0.0, tau, 50, 100);
    CHECK(check.cert.has_value());
    CHECK(check.worst_defect <= 0.0);
    CHECK_FALSE(sweep::verify_inner_ball(fam, Vector::Zero(2), 0.7, 0.0, 1.0).cert.has_value());
}

TEST_CASE("modulus table reads conservatively") {
    const auto m = sweep::Modulus::table({{0.1, 0.05}, {0.2, 0.03}, {0.4, 0.2}});
    CHECK_FALSE(m.analytic());
    CHECK(m(0.0) == 0.0);
    CHECK(m(0.05) == 0.05);
    CHECK(m(0.15) == 0.05);  // running max
    CHECK(m(0.3) == 0.2);
    CHECK(m(5.0) == 0.2);
}

TEST_CASE("rigid rotation modulus covers the spinning square") {
    const auto sq = ProxSet::box(v2(-1, -1), v2(1, 1));
    const auto fam = MovingFamily::rigid(sq, ScalarPath::linear(0.0, 1.0), VectorPath::linear(Vector::Zero(2), v2(0.2, 0)), 2.0);
    CHECK(fam.analytic_modulus()->rate() == doctest::Approx(std::sqrt(2.0) + 0.2));
    CHECK(std::isinf(fam.r()));
}
