#include "sweep/time_grid.hpp"

#include <algorithm>
#include <string>

#include "sweep/error.hpp"

namespace sweep {

TimeGrid::TimeGrid(std::vector<double> times) : times_(std::move(times)) {
    if (times_.size() < 2) {
        throw Error(ErrorKind::InvalidArgument, "time grid needs at least two nodes");
    }
    for (std::size_t j = 1; j < times_.size(); ++j) {
        if (!(times_[j] > times_[j - 1])) {
            throw Error(ErrorKind::InvalidArgument,
                        "time grid not strictly increasing at node " + std::to_string(j));
        }
    }
}

TimeGrid TimeGrid::uniform(double t_first, double t_last, std::size_t intervals) {
    if (intervals == 0 || !(t_last > t_first)) {
        throw Error(ErrorKind::InvalidArgument, "uniform grid needs t_last > t_first and intervals >= 1");
    }
    std::vector<double> times(intervals + 1);
    const double span = t_last - t_first;
    const double n = static_cast<double>(intervals);
    times.front() = t_first;
    for (std::size_t j = 1; j < intervals; ++j) {
        times[j] = t_first + span * (static_cast<double>(j) / n);
    }
    times.back() = t_last;
    return TimeGrid(std::move(times));
}

double TimeGrid::mesh() const {
    double h = 0.0;
    for (std::size_t j = 1; j < times_.size(); ++j) h = std::max(h, times_[j] - times_[j - 1]);
    return h;
}

std::size_t TimeGrid::interval_of(double t) const {
    if (t < t_first() || t > t_last()) {
        throw Error(ErrorKind::OutOfRange, "time " + std::to_string(t) + " outside grid");
    }
    if (t == t_last()) return intervals();
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    return static_cast<std::size_t>(it - times_.begin());
}

bool TimeGrid::nested_in(const TimeGrid& finer) const {
    return std::includes(finer.times_.begin(), finer.times_.end(), times_.begin(), times_.end());
}

double anticipate(const TimeGrid& grid, double t) {
    if (t < grid.t_first() || t > grid.t_last()) {
        throw Error(ErrorKind::OutOfRange, "anticipate: time " + std::to_string(t) + " outside grid");
    }
    if (t == grid.t_first()) return grid.t_first();
    const auto times = grid.times();
    return *std::lower_bound(times.begin(), times.end(), t);
}

}  // namespace sweep
