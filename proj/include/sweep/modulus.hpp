#pragma once

#include <utility>
#include <vector>

namespace sweep {

// Excess-continuity modulus omega(delta). Either a certified closed form
// offset + rate * delta, or a sampled table read conservatively (the value at the
// smallest tabulated delta at or above the query).
class Modulus {
public:
    static Modulus lipschitz(double rate, double offset = 0.0);
    static Modulus table(std::vector<std::pair<double, double>> samples);

    double operator()(double delta) const;

    bool analytic() const { return analytic_; }
    double rate() const { return rate_; }
    double offset() const { return offset_; }
    const std::vector<std::pair<double, double>>& samples() const { return samples_; }

private:
    bool analytic_ = true;
    double rate_ = 0.0;
    double offset_ = 0.0;
    std::vector<std::pair<double, double>> samples_;
};

}  // namespace sweep
