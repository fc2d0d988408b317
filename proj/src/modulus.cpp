#include "sweep/modulus.hpp"

#include <algorithm>

#include "sweep/error.hpp"

namespace sweep {

Modulus Modulus::lipschitz(double rate, double offset) {
    if (!(rate >= 0.0) || !(offset >= 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "modulus rate and offset must be nonnegative");
    }
    Modulus m;
    m.rate_ = rate;
    m.offset_ = offset;
    return m;
}

Modulus Modulus::table(std::vector<std::pair<double, double>> samples) {
    if (samples.empty()) throw Error(ErrorKind::InvalidArgument, "modulus table is empty");
    std::sort(samples.begin(), samples.end());
    double running = 0.0;
    for (auto& [delta, omega] : samples) {
        if (!(delta > 0.0)) throw Error(ErrorKind::InvalidArgument, "modulus table deltas must be positive");
        running = std::max(running, omega);
        omega = running;
    }
    Modulus m;
    m.analytic_ = false;
    m.samples_ = std::move(samples);
    return m;
}

double Modulus::operator()(double delta) const {
    if (delta <= 0.0) return 0.0;
    if (analytic_) return offset_ + rate_ * delta;
    const auto it = std::lower_bound(samples_.begin(), samples_.end(), std::make_pair(delta, -1.0),
                                     [](const auto& a, const auto& b) { return a.first < b.first; });
    return it == samples_.end() ? samples_.back().second : it->second;
}

}  // namespace sweep
