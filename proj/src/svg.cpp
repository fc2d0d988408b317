#include "sweep/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace sweep {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 400.0;
constexpr double kPad = 50.0;
constexpr int kMaxVertices = 2000;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

void open(std::ostringstream& out, const std::string& title) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
        << "</text>\n"
        << "<rect x=\"" << kPad << "\" y=\"" << kPad << "\" width=\"" << kWidth - 2 * kPad << "\" height=\""
        << kHeight - 2 * kPad << "\" fill=\"none\" stroke=\"#444\"/>\n";
}

}  // namespace

std::string trajectory_svg(const DiscreteTrajectory& traj, const std::string& title) {
    std::ostringstream out;
    open(out, title);
    const double t0 = traj.grid.t_first();
    const double t1 = traj.grid.t_last();
    double lo = 0.0;
    double hi = 0.0;
    for (const auto& p : traj.points) {
        lo = std::min(lo, p.minCoeff());
        hi = std::max(hi, p.maxCoeff());
    }
    if (hi - lo < 1e-12) {
        lo -= 1.0;
        hi += 1.0;
    }
    const double margin = 0.05 * (hi - lo);
    lo -= margin;
    hi += margin;
    auto sx = [&](double t) { return kPad + (t - t0) / (t1 - t0) * (kWidth - 2 * kPad); };
    auto sy = [&](double v) { return kHeight - kPad - (v - lo) / (hi - lo) * (kHeight - 2 * kPad); };

    const std::size_t n = traj.points.size();
    const std::size_t stride = std::max<std::size_t>(1, n / kMaxVertices);
    const Eigen::Index dim = traj.points.front().size();
    for (Eigen::Index k = 0; k < dim; ++k) {
        out << "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" << kColors[k % 6] << "\" points=\"";
        for (std::size_t j = 0; j < n; j += stride) out << fmt(sx(traj.grid[j])) << ',' << fmt(sy(traj.points[j][k])) << ' ';
        out << fmt(sx(traj.grid[n - 1])) << ',' << fmt(sy(traj.points[n - 1][k])) << "\"/>\n";
        out << "<text x=\"" << kWidth - kPad + 5 << "\" y=\"" << kPad + 14 * (k + 1) << "\" fill=\""
            << kColors[k % 6] << "\">x_" << k << "</text>\n";
    }
    out << "<text x=\"" << kPad << "\" y=\"" << kHeight - kPad + 15 << "\">" << fmt(t0) << "</text>\n"
        << "<text x=\"" << kWidth - kPad << "\" y=\"" << kHeight - kPad + 15 << "\" text-anchor=\"end\">"
        << fmt(t1) << "</text>\n"
        << "<text x=\"" << kPad - 5 << "\" y=\"" << sy(hi) + 10 << "\" text-anchor=\"end\">" << fmt(hi) << "</text>\n"
        << "<text x=\"" << kPad - 5 << "\" y=\"" << sy(lo) << "\" text-anchor=\"end\">" << fmt(lo) << "</text>\n"
        << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">t</text>\n"
        << "</svg>\n";
    return out.str();
}

std::string convergence_svg(const ConvergenceReport& report, const std::string& title) {
    std::ostringstream out;
    open(out, title);
    const std::size_t groups = report.sup_diffs.size();
    std::vector<double> values;
    for (std::size_t n = 0; n < groups; ++n) {
        values.push_back(report.eps[n]);
        if (report.sup_diffs[n] > 0.0) values.push_back(report.sup_diffs[n] * report.sup_diffs[n]);
    }
    if (groups == 0 || values.empty()) {
        out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight / 2 << "\" text-anchor=\"middle\">no data</text>\n</svg>\n";
        return out.str();
    }
    const double lo = std::floor(std::log10(*std::min_element(values.begin(), values.end()))) - 1.0;
    const double hi = std::ceil(std::log10(*std::max_element(values.begin(), values.end())));
    auto sy = [&](double v) {
        return kHeight - kPad - (std::log10(v) - lo) / (hi - lo) * (kHeight - 2 * kPad);
    };
    for (double e = lo; e <= hi; e += 1.0) {
        out << "<line x1=\"" << kPad << "\" x2=\"" << kWidth - kPad << "\" y1=\"" << fmt(sy(std::pow(10.0, e)))
            << "\" y2=\"" << fmt(sy(std::pow(10.0, e))) << "\" stroke=\"#ddd\"/>\n"
            << "<text x=\"" << kPad - 5 << "\" y=\"" << fmt(sy(std::pow(10.0, e)) + 4) << "\" text-anchor=\"end\">1e"
            << e << "</text>\n";
    }
    const double slot = (kWidth - 2 * kPad) / static_cast<double>(groups);
    const double bar = slot * 0.35;
    const double base = kHeight - kPad;
    for (std::size_t n = 0; n < groups; ++n) {
        const double x = kPad + slot * static_cast<double>(n) + slot * 0.15;
        const double ye = sy(report.eps[n]);
        out << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(ye) << "\" width=\"" << fmt(bar) << "\" height=\""
            << fmt(base - ye) << "\" fill=\"" << kColors[0] << "\"/>\n";
        const double sq = report.sup_diffs[n] * report.sup_diffs[n];
        if (sq > 0.0) {
            const double ys = std::max(sy(sq), kPad);
            out << "<rect x=\"" << fmt(x + bar) << "\" y=\"" << fmt(ys) << "\" width=\"" << fmt(bar)
                << "\" height=\"" << fmt(base - ys) << "\" fill=\"" << kColors[1] << "\"/>\n";
        }
        out << "<text x=\"" << fmt(x + bar) << "\" y=\"" << base + 15 << "\" text-anchor=\"middle\">n="
            << report.levels[n] << "</text>\n";
    }
    out << "<text x=\"" << kWidth - kPad << "\" y=\"" << kPad - 8 << "\" text-anchor=\"end\"><tspan fill=\""
        << kColors[0] << "\">eps_n</tspan>  <tspan fill=\"" << kColors[1]
        << "\">sup|x_{n+1} - x_n|^2</tspan></text>\n</svg>\n";
    return out.str();
}

}  // namespace sweep
