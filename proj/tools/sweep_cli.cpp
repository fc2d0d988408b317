// sweep: scenario-driven front end for the catching-up solver.
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "sweep/harness.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 2;
constexpr int kConfigError = 3;
constexpr int kRuntimeError = 4;

bool config_error(sweep::ErrorKind k) {
    using sweep::ErrorKind;
    return k == ErrorKind::SchemaError || k == ErrorKind::UnknownShapeTag || k == ErrorKind::InfeasibleInitialPoint ||
           k == ErrorKind::IoError || k == ErrorKind::InitialInfeasible || k == ErrorKind::InvalidArgument;
}

void print_levels(const sweep::RunReport& rep) {
    std::printf("%5s %10s %10s %9s %12s %12s %12s %12s %8s\n", "level", "eps", "delta", "intervals", "variation",
                "residual", "sup_diff", "ratio", "sec");
    for (const auto& l : rep.levels) {
        std::printf("%5d %10.3e %10.3e %9zu %12.6g %12.3e", l.level, l.eps, l.delta, l.intervals, l.variation,
                    l.constraint_residual);
        if (l.sup_diff) {
            std::printf(" %12.3e %12.3e", *l.sup_diff, *l.cauchy_ratio);
        } else {
            std::printf(" %12s %12s", "-", "-");
        }
        std::printf(" %8.3f\n", l.wall_seconds);
    }
}

int report_checks(const sweep::RunReport& rep) {
    for (const auto& c : rep.checks) {
        std::printf("%-4s %-10s margin %-12.4g %s\n", c.pass ? "ok" : "FAIL", sweep::to_string(c.check).c_str(),
                    c.margin, c.detail.c_str());
    }
    for (const auto& n : rep.notes) std::printf("note: %s\n", n.c_str());
    return rep.passed() ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Catching-up solver for Moreau sweeping processes"};
    app.require_subcommand(1);

    std::string config;
    std::string out_dir = "sweep_out";
    std::optional<int> levels;
    bool svg = false;

    auto* solve = app.add_subcommand("solve", "Run a scenario and evaluate its checks");
    solve->add_option("config", config, "Scenario file or builtin name")->required();
    solve->add_option("--out", out_dir, "Output directory");
    solve->add_option("--levels", levels, "Number of refinement levels")->check(CLI::PositiveNumber);
    solve->add_flag("--svg", svg, "Also write SVG plots");

    auto* converge = app.add_subcommand("converge", "Convergence study: sup differences, variations, Cauchy ratios");
    converge->add_option("config", config, "Scenario file or builtin name")->required();
    converge->add_option("--out", out_dir, "Output directory");
    converge->add_option("--levels", levels, "Number of refinement levels")->check(CLI::PositiveNumber);
    converge->add_flag("--svg", svg, "Also write SVG plots");

    std::string config_b;
    std::vector<double> times;
    auto* excess = app.add_subcommand("excess", "Excess e(C_A(S), C_B(T)) between two scenario families");
    excess->add_option("config_a", config, "First scenario")->required();
    excess->add_option("config_b", config_b, "Second scenario")->required();
    excess->add_option("--t", times, "Times S T")->expected(2)->required();

    int level = 0;
    auto* verify = app.add_subcommand("verify", "Certify the discrete inclusion at one level");
    verify->add_option("config", config, "Scenario file or builtin name")->required();
    verify->add_option("--level", level, "Level to certify")->required()->check(CLI::NonNegativeNumber);

    auto* list = app.add_subcommand("list", "List builtin scenarios");

    std::string show_name;
    auto* show = app.add_subcommand("show", "Print the JSON document of a builtin scenario");
    show->add_option("name", show_name, "Builtin name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (*list) {
            for (const auto& [name, desc] : sweep::list_builtins()) std::printf("%-28s %s\n", name.c_str(), desc.c_str());
            return kOk;
        }
        if (*show) {
            std::fputs(sweep::builtin_text(show_name).c_str(), stdout);
            std::fputs("\n", stdout);
            return kOk;
        }
        if (*excess) {
            const sweep::Scenario a = sweep::load_scenario(config);
            const sweep::Scenario b = sweep::load_scenario(config_b);
            const sweep::ExcessEstimate e = sweep::excess(a.family.slice(times[0]), b.family.slice(times[1]));
            std::printf("%.17g\n", e.lower);
            std::fprintf(stderr, "method: %s, samples: %zu\n",
                         e.method == sweep::ExcessMethod::analytic ? "analytic" : "sampled (lower estimate)",
                         e.sample_count);
            return kOk;
        }
        const sweep::Scenario s = sweep::load_scenario(config);
        if (*verify) {
            const sweep::RefinementSchedule sched = sweep::schedule_for(s, level + 1);
            const auto n = static_cast<std::size_t>(level);
            const sweep::DiscreteTrajectory traj = sweep::solve(s.family, s.y0, sched.grids[n], sched.eps[n], level);
            try {
                const auto certs = sweep::certify_steps(s.family, traj, s.samples_per_step, sweep::effective_seed(s));
                double worst = 0.0;
                for (const auto& c : certs) worst = std::max(worst, c.normal_report.worst_residual);
                std::printf("level %d: %zu intervals, %zu moving steps, worst normal residual %.3e\n", level,
                            traj.grid.intervals(), certs.size(), worst);
                return kOk;
            } catch (const sweep::Error& e) {
                if (e.kind() != sweep::ErrorKind::CertificationFailed) throw;
                std::printf("level %d: %s\n", level, e.what());
                return kCheckFailed;
            }
        }
        sweep::RunOptions opt;
        opt.levels = levels;
        opt.svg = svg;
        const sweep::RunReport rep = sweep::run(s, out_dir, opt);
        std::printf("%s\n", s.name.c_str());
        print_levels(rep);
        if (*converge) {
            const sweep::CauchyVerdict v = sweep::cauchy_check(rep.convergence);
            std::printf("cauchy: %s (growth %.3g)\n", v.pass() ? "ok" : "FAIL", v.growth);
            std::printf("wrote %s\n", out_dir.c_str());
            return v.pass() ? kOk : kCheckFailed;
        }
        const int code = report_checks(rep);
        std::printf("wrote %s\n", out_dir.c_str());
        return code;
    } catch (const sweep::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return config_error(e.kind()) ? kConfigError : kRuntimeError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kRuntimeError;
    }
}
