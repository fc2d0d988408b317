#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sweep {

// A subdivision t_0 < t_1 < ... < t_J of [t_first, t_last].
class TimeGrid {
public:
    explicit TimeGrid(std::vector<double> times);

    // Nodes t_first + (t_last - t_first) * (j / intervals). Two uniform grids whose
    // interval counts divide each other share their common nodes bit for bit.
    static TimeGrid uniform(double t_first, double t_last, std::size_t intervals);

    std::span<const double> times() const { return times_; }
    double operator[](std::size_t j) const { return times_[j]; }
    std::size_t size() const { return times_.size(); }
    std::size_t intervals() const { return times_.size() - 1; }
    double t_first() const { return times_.front(); }
    double t_last() const { return times_.back(); }
    double mesh() const;

    // Index j with t in [t_{j-1}, t_j); J at t_last.
    std::size_t interval_of(double t) const;

    // Every node of this grid is also a node of `finer`, bitwise.
    bool nested_in(const TimeGrid& finer) const;

    bool operator==(const TimeGrid&) const = default;

private:
    std::vector<double> times_;
};

/// Smallest node >= t, with t_first mapped to itself.
double anticipate(const TimeGrid& grid, double t);

}  // namespace sweep
