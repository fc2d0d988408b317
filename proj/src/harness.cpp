#include "sweep/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "sweep/svg.hpp"

namespace sweep {

using json = nlohmann::ordered_json;

namespace {

constexpr double kConstraintTol = 1e-9;

std::string num(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

SamplingBudget budget_for(const Scenario& s) {
    SamplingBudget b;
    b.seed = effective_seed(s);
    return b;
}

// declared radii may not exceed what the family actually has
std::optional<std::string> bad_radius(double declared, const MovingFamily& f) {
    if (declared > f.r()) return "declared r = " + num(declared) + " exceeds the family's r = " + num(f.r());
    return std::nullopt;
}

CheckResult constraint_check(const ConvergenceReport& rep) {
    const double worst = rep.constraint_residuals.empty()
                             ? 0.0
                             : *std::max_element(rep.constraint_residuals.begin(), rep.constraint_residuals.end());
    return {Check::constraint, worst <= kConstraintTol, kConstraintTol - worst,
            "max_j d(y_j, C(t_j)) over all levels = " + num(worst)};
}

CheckResult normal_check(const Scenario& s, const DiscreteTrajectory& finest) {
    try {
        const auto certs = certify_steps(s.family, finest, s.samples_per_step, effective_seed(s));
        double worst = 0.0;
        for (const auto& c : certs) worst = std::max(worst, c.normal_report.worst_residual);
        return {Check::normal, true, kCertifyFailure - worst,
                std::to_string(certs.size()) + " moving steps certified, worst residual " + num(worst)};
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::CertificationFailed) throw;
        return {Check::normal, false, -1.0, e.what()};
    }
}

CheckResult ball_check(const Scenario& s, const ConvergenceReport& rep, std::vector<LevelSummary>& levels) {
    const BallBoundSpec& spec = *s.ball_bound;
    VariationBoundParams p;
    p.r = spec.r.value_or(s.family.r());
    p.w = spec.w;
    p.rho = spec.rho;
    p.y0 = s.y0;
    if (auto why = bad_radius(p.r, s.family)) return {Check::ball_bound, false, -1.0, *why};
    const InnerBallCheck inner = verify_inner_ball(s.family, spec.w, spec.rho, 0.0, s.horizon, 50, 100, effective_seed(s));
    if (!inner.cert) {
        return {Check::ball_bound, false, -inner.worst_defect,
                "declared inner ball is not contained in C(t): defect " + num(inner.worst_defect)};
    }
    const double base = s.family.slice(0.0).distance(s.y0) + (s.y0 - spec.w).norm() + spec.rho;
    double margin = std::numeric_limits<double>::infinity();
    bool near_pole = false;
    try {
        for (std::size_t n = 0; n < rep.levels.size(); ++n) {
            // every consecutive excess at level n is below eps_n
            p.alpha = base + rep.eps[n];
            const BoundValue b = ball_variation_bound(p);
            near_pole = near_pole || b.near_pole;
            levels[n].ball_bound = b.value;
            margin = std::min(margin, b.value - rep.variations[n]);
        }
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::InapplicableBound) throw;
        return {Check::ball_bound, false, -1.0, std::string(e.what())};
    }
    std::string detail = "min over levels of bound - variation = " + num(margin);
    if (near_pole) detail += " (bound evaluated near its pole)";
    return {Check::ball_bound, margin >= 0.0, margin, detail};
}

CheckResult cone_check(const Scenario& s, const RefinementSchedule& sched, const ConvergenceReport& rep,
                       std::vector<LevelSummary>& levels, std::vector<std::string>& notes) {
    const ConeBoundSpec& spec = *s.cone_bound;
    const double r = spec.r.value_or(s.family.r());
    if (auto why = bad_radius(r, s.family)) return {Check::cone_bound, false, -1.0, *why};
    try {
        const Modulus omega = modulus_of(s.family, budget_for(s));
        const VariationBoundParams p = choose_cone_params(r, spec.R, spec.d, omega, s.horizon, &sched);
        const double bound = cone_variation_bound(p, s.horizon);
        notes.push_back("cone bound: lambda = " + num(p.lambda) + ", tau = " + num(p.tau) + ", eps_bar = " +
                        num(p.eps_bar) + ", applies from level " + std::to_string(p.n_bar));
        double margin = std::numeric_limits<double>::infinity();
        for (std::size_t n = static_cast<std::size_t>(p.n_bar); n < rep.levels.size(); ++n) {
            levels[n].cone_bound = bound;
            margin = std::min(margin, bound - rep.variations[n]);
        }
        return {Check::cone_bound, margin >= 0.0, margin,
                "bound " + num(bound) + " vs variation at levels >= " + std::to_string(p.n_bar)};
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::InapplicableBound && e.kind() != ErrorKind::NoFeasibleEps &&
            e.kind() != ErrorKind::NoPositiveTau) {
            throw;
        }
        return {Check::cone_bound, false, -1.0, e.what()};
    }
}

CheckResult cauchy_result(const ConvergenceReport& rep) {
    const CauchyVerdict v = cauchy_check(rep);
    std::string detail = std::string("sup_diffs ") + (v.decreasing ? "strictly decreasing" : "NOT strictly decreasing") +
                         ", late/early ratio growth " + num(v.growth);
    return {Check::cauchy, v.pass(), v.decreasing ? 2.0 - v.growth : -1.0, detail};
}

void jump_notes(const MovingFamily& f, std::vector<std::string>& notes) {
    const auto* pw = std::get_if<PiecewiseFamily>(&f.kind());
    if (pw == nullptr) return;
    for (std::size_t i = 0; i < pw->jump_excess.size(); ++i) {
        const double at = pw->pieces[i + 1].from;
        const double hd = excess(f.slice(at), pw->pieces[i].family->slice(at)).lower;
        std::string line = "jump at t = " + num(at) + ": e(C(t-), C(t)) = " + num(pw->jump_excess[i]) +
                           ", reverse excess " + num(hd);
        line += pw->admissible[i] ? "; excess-continuous, modulus unaffected by the jump"
                                  : "; excess jump enters the modulus";
        notes.push_back(line);
    }
}

}  // namespace

bool RunReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

const CheckResult* RunReport::find(Check c) const {
    for (const auto& r : checks) {
        if (r.check == c) return &r;
    }
    return nullptr;
}

RefinementSchedule schedule_for(const Scenario& s, std::optional<int> levels) {
    ScheduleOptions opt;
    opt.refinement = s.schedule.refinement;
    opt.base_intervals = s.schedule.base_intervals;
    opt.budget = budget_for(s);
    return build_schedule(s.family, s.horizon, s.schedule.eps, levels.value_or(s.schedule.levels), opt);
}

RunReport run(const Scenario& s, const std::filesystem::path& out_dir, const RunOptions& options) {
    RunReport report;
    report.scenario = s.name;
    const RefinementSchedule sched = schedule_for(s, options.levels);
    ConvergenceReport rep = converge_study(s.family, s.y0, sched);

    for (std::size_t n = 0; n < rep.levels.size(); ++n) {
        LevelSummary l;
        l.level = rep.levels[n];
        l.eps = rep.eps[n];
        l.delta = sched.delta[n];
        l.intervals = sched.grids[n].intervals();
        l.variation = rep.variations[n];
        l.constraint_residual = rep.constraint_residuals[n];
        l.max_jump = rep.trajectories[n].max_jump();
        l.wall_seconds = rep.wall_seconds[n];
        if (n < rep.sup_diffs.size()) {
            l.sup_diff = rep.sup_diffs[n];
            l.cauchy_ratio = rep.cauchy_ratios[n];
        }
        report.levels.push_back(l);
    }

    jump_notes(s.family, report.notes);
    for (Check c : s.checks) {
        switch (c) {
            case Check::constraint: report.checks.push_back(constraint_check(rep)); break;
            case Check::normal: report.checks.push_back(normal_check(s, rep.trajectories.back())); break;
            case Check::ball_bound: report.checks.push_back(ball_check(s, rep, report.levels)); break;
            case Check::cone_bound: report.checks.push_back(cone_check(s, sched, rep, report.levels, report.notes)); break;
            case Check::cauchy: report.checks.push_back(cauchy_result(rep)); break;
        }
    }

    if (options.write_files) {
        std::error_code ec;
        std::filesystem::create_directories(out_dir, ec);
        if (ec) throw Error(ErrorKind::IoError, "cannot create " + out_dir.string() + ": " + ec.message());
        for (const auto& traj : rep.trajectories) {
            std::ostringstream csv;
            write_csv(csv, s.family, traj);
            write_file(out_dir / ("level_" + std::to_string(traj.level) + ".csv"), csv.str());
        }
        write_file(out_dir / "convergence.json", convergence_json(rep));
        report.convergence = std::move(rep);
        write_file(out_dir / "report.json", report_json(report));
        if (options.svg) {
            write_file(out_dir / "trajectory.svg",
                       trajectory_svg(report.convergence.trajectories.back(), s.name + ": finest level"));
            write_file(out_dir / "convergence.svg", convergence_svg(report.convergence, s.name + ": convergence"));
        }
    } else {
        report.convergence = std::move(rep);
    }
    return report;
}

std::string convergence_json(const ConvergenceReport& r) {
    json doc{{"levels", r.levels},
             {"eps", r.eps},
             {"sup_diffs", r.sup_diffs},
             {"variations", r.variations},
             {"cauchy_ratios", r.cauchy_ratios},
             {"constraint_residuals", r.constraint_residuals}};
    return doc.dump(2) + "\n";
}

std::string report_json(const RunReport& r) {
    auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    json levels = json::array();
    for (const auto& l : r.levels) {
        levels.push_back({{"level", l.level},
                          {"eps", l.eps},
                          {"delta", l.delta},
                          {"intervals", l.intervals},
                          {"variation", l.variation},
                          {"constraint_residual", l.constraint_residual},
                          {"max_jump", l.max_jump},
                          {"sup_diff", opt(l.sup_diff)},
                          {"cauchy_ratio", opt(l.cauchy_ratio)},
                          {"ball_bound", opt(l.ball_bound)},
                          {"cone_bound", opt(l.cone_bound)},
                          {"wall_seconds", l.wall_seconds}});
    }
    json checks = json::array();
    for (const auto& c : r.checks) {
        checks.push_back({{"check", to_string(c.check)},
                          {"pass", c.pass},
                          {"margin", std::isfinite(c.margin) ? json(c.margin) : json(nullptr)},
                          {"detail", c.detail}});
    }
    json doc{{"scenario", r.scenario},
             {"passed", r.passed()},
             {"levels", levels},
             {"checks", checks},
             {"notes", r.notes}};
    return doc.dump(2) + "\n";
}

}  // namespace sweep
