#include "doctest.h"

#include <cmath>
#include <limits>
#include <sstream>

#include "oracles.hpp"
#include "sweep/catchup.hpp"

using sweep::ErrorKind;
using sweep::MovingFamily;
using sweep::ProxSet;
using sweep::TimeGrid;
using sweep::Vector;
using sweep::VectorPath;

namespace {

constexpr double kNoEps = std::numeric_limits<double>::infinity();

Vector v2(double x, double y) { return (Vector(2) << x, y).finished(); }

MovingFamily wall() {
    return MovingFamily::translate(ProxSet::half_space(v2(1, 0), 1.0), VectorPath::linear(Vector::Zero(2), v2(-1, 0)), 2.0);
}

MovingFamily obstacle() {
    return MovingFamily::radius_schedule(VectorPath::linear(v2(-1, 0), v2(1, 0)), sweep::ScalarPath::constant(0.5), true, 2.0);
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

TEST_CASE("static family never moves") {
    const auto fam = MovingFamily::stationary(ProxSet::ball(Vector::Zero(2), 1.0), 1.0);
    const auto traj = sweep::solve(fam, v2(0.5, 0), TimeGrid::uniform(0.0, 1.0, 17), kNoEps);
    for (const auto& p : traj.points) CHECK(sweep::same(p, v2(0.5, 0)));
    CHECK(traj.max_jump() == 0.0);
    CHECK(sweep::certify_steps(fam, traj, 16, 1).empty());
}

TEST_CASE("sweeping wall follows the closed form") {
    for (std::size_t n : {10u, 77u, 200u}) {
        const auto traj = sweep::solve(wall(), Vector::Zero(2), TimeGrid::uniform(0.0, 2.0, n), kNoEps);
        for (std::size_t j = 0; j < traj.points.size(); ++j) {
            CHECK(traj.points[j][0] == doctest::Approx(oracle::sweep_halfspace_x(traj.grid[j])).epsilon(1e-12));
            CHECK(traj.points[j][1] == 0.0);
        }
        CHECK(traj.points.back()[0] == doctest::Approx(-1.0));
    }
}

TEST_CASE("sweeping wall agrees with a 100x finer run at shared nodes") {
    const auto coarse = sweep::solve(wall(), Vector::Zero(2), TimeGrid::uniform(0.0, 2.0, 33), kNoEps);
    const auto fine = sweep::solve(wall(), Vector::Zero(2), TimeGrid::uniform(0.0, 2.0, 3300), kNoEps);
    for (std::size_t j = 0; j < coarse.points.size(); ++j) {
        CHECK((coarse.points[j] - fine.points[100 * j]).norm() <= 1e-12);
    }
}

TEST_CASE("moving obstacle pushes the point and tracks a fine-grid reference") {
    const auto fam = obstacle();
    const auto traj = sweep::solve(fam, Vector::Zero(2), TimeGrid::uniform(0.0, 2.0, 2000), kNoEps);
    const Vector end_center = v2(1, 0);
    CHECK((traj.points.back() - end_center).norm() <= 0.5 + 1e-6);
    CHECK(traj.max_jump() > 0.0);
    const auto ref = sweep::solve(fam, Vector::Zero(2), TimeGrid::uniform(0.0, 2.0, 200000), kNoEps);
    double worst = 0.0;
    for (std::size_t j = 0; j < traj.points.size(); ++j) worst = std::max(worst, (traj.points[j] - ref.points[100 * j]).norm());
    CHECK(worst <= 0.05);
    for (const auto& c : sweep::certify_steps(fam, traj, 500, 3)) CHECK(c.normal_report.worst_residual <= 1e-8);
}

TEST_CASE("step size equals the distance to the next slice") {
    const auto fam = obstacle();
    const auto traj = sweep::solve(fam, v2(0, 0.2), TimeGrid::uniform(0.0, 2.0, 300), 0.1);
    for (std::size_t j = 1; j < traj.points.size(); ++j) {
        const double d = fam.slice(traj.grid[j]).raw_distance(traj.points[j - 1]);
        CHECK(std::abs(traj.jumps[j].norm() - d) <= 1e-10);
        CHECK(fam.slice(traj.grid[j]).contains(traj.points[j]));
        CHECK(traj.jumps[j].norm() < 0.1);
    }
    CHECK(sweep::same(traj.points[0], v2(0, 0.2)));
}

TEST_CASE("solver errors") {
    const auto fam = obstacle();
    // starts inside the obstacle
    CHECK(kind_of([&] { (void)sweep::solve(fam, v2(-1, 0.1), TimeGrid::uniform(0.0, 2.0, 10), kNoEps); }) ==
          ErrorKind::InitialInfeasible);
    // one giant step lands the obstacle's center on the point
    try {
        (void)sweep::solve(fam, Vector::Zero(2), TimeGrid({0.0, 1.0, 2.0}), kNoEps);
        FAIL("expected TubeViolation");
    } catch (const sweep::Error& e) {
        CHECK(e.kind() == ErrorKind::TubeViolation);
        CHECK(e.index() == std::optional<std::size_t>(1));
    }
    CHECK(kind_of([] { (void)sweep::solve(wall(), Vector::Zero(2), TimeGrid::uniform(0.0, 2.0, 4), 0.1); }) ==
          ErrorKind::EpsExceeded);
}

TEST_CASE("interpolants") {
    const auto traj = sweep::solve(wall(), Vector::Zero(2), TimeGrid::uniform(0.0, 2.0, 8), kNoEps);
    const auto y = sweep::step_interpolant(traj);
    const auto x = sweep::affine_interpolant(traj);
    CHECK(sweep::same(y(0.0), traj.points[0]));
    CHECK(sweep::same(y(2.0), traj.points.back()));
    CHECK(sweep::same(y(std::nextafter(1.5, 0.0)), traj.points[5]));
    for (std::size_t j = 0; j < traj.points.size(); ++j) CHECK(sweep::same(x(traj.grid[j]), traj.points[j]));
    // t = 1.625 is the midpoint of [1.5, 1.75]
    CHECK(x(1.625)[0] == doctest::Approx(-0.625));

    const auto fine = sweep::solve(wall(), Vector::Zero(2), TimeGrid::uniform(0.0, 2.0, 201), 0.05);
    const auto yf = sweep::step_interpolant(fine);
    const auto xf = sweep::affine_interpolant(fine);
    double gap = 0.0;
    for (int k = 0; k <= 1000; ++k) gap = std::max(gap, (xf(0.002 * k) - yf(0.002 * k)).norm());
    CHECK(gap < 0.05);
    CHECK(gap <= fine.max_jump());
}

TEST_CASE("sweeping wall certificates use the exact normal") {
    const auto traj = sweep::solve(wall(), Vector::Zero(2), TimeGrid::uniform(0.0, 2.0, 101), kNoEps);
    const auto certs = sweep::certify_steps(wall(), traj, 200, 9);
    CHECK(certs.size() == 51);
    for (const auto& c : certs) {
        CHECK(c.normal_report.worst_residual <= 1e-9);
        CHECK(c.distance_moved <= c.excess_bound_used + 1e-12);
        CHECK(std::abs(traj.jumps[c.j][1]) == 0.0);
    }
    CHECK(sweep::certify_steps_serial(wall(), traj, 200, 9).size() == certs.size());
}

TEST_CASE("csv export") {
    const auto traj = sweep::solve(wall(), Vector::Zero(2), TimeGrid::uniform(0.0, 2.0, 4), kNoEps);
    std::ostringstream a;
    sweep::write_csv(a, wall(), traj);
    std::istringstream in(a.str());
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,x_0,x_1,jump_norm,dist_to_set");
    std::string row;
    int rows = 0;
    while (std::getline(in, row)) ++rows;
    CHECK(rows == 5);
    CHECK(a.str().find("1.5,-0.5,0,0.5,0") != std::string::npos);
    std::ostringstream b;
    sweep::write_csv(b, wall(), sweep::solve(wall(), Vector::Zero(2), TimeGrid::uniform(0.0, 2.0, 4), kNoEps));
    CHECK(a.str() == b.str());
}
