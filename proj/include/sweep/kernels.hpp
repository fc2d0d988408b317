#pragma once

// Data-parallel reductions used by the sampling-heavy operations. Every kernel
// has a serial reference (`*_serial`) that the tests compare against; the
// OpenMP versions return bit-identical results because ties resolve to the
// lowest index and each term is evaluated independently.

#include <cstddef>
#include <exception>
#include <limits>
#include <span>
#include <vector>

#include <omp.h>

#include "sweep/vector.hpp"

namespace sweep {
class ProxSet;
}

namespace sweep::kernels {

struct ArgMax {
    double value = -std::numeric_limits<double>::infinity();
    std::size_t index = 0;

    void offer(double v, std::size_t i) {
        if (v > value || (v == value && i < index)) {
            value = v;
            index = i;
        }
    }
};

template <class F>
ArgMax argmax_serial(std::size_t n, F&& term) {
    ArgMax best;
    for (std::size_t i = 0; i < n; ++i) best.offer(term(i), i);
    return best;
}

template <class F>
ArgMax argmax(std::size_t n, F&& term) {
    if (n < 64 || omp_get_max_threads() == 1) return argmax_serial(n, term);
    std::vector<ArgMax> partial(static_cast<std::size_t>(omp_get_max_threads()));
    std::exception_ptr failure;
#pragma omp parallel
    {
        ArgMax local;
#pragma omp for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
            try {
                local.offer(term(static_cast<std::size_t>(i)), static_cast<std::size_t>(i));
            } catch (...) {
#pragma omp critical(sweep_kernel_failure)
                if (!failure) failure = std::current_exception();
            }
        }
        partial[static_cast<std::size_t>(omp_get_thread_num())] = local;
    }
    if (failure) std::rethrow_exception(failure);
    ArgMax best;
    for (const auto& p : partial) {
        if (p.value != -std::numeric_limits<double>::infinity()) best.offer(p.value, p.index);
    }
    if (best.value == -std::numeric_limits<double>::infinity() && n > 0) best.index = 0;
    return best;
}

/// max_i d(points[i], set)
ArgMax max_distance_serial(const ProxSet& set, std::span<const Vector> points);
ArgMax max_distance(const ProxSet& set, std::span<const Vector> points);

/// max_i <n, z_i - x> - curvature |z_i - x|^2
ArgMax max_normal_defect_serial(const Vector& x, const Vector& n, double curvature,
                                std::span<const Vector> z);
ArgMax max_normal_defect(const Vector& x, const Vector& n, double curvature, std::span<const Vector> z);

}  // namespace sweep::kernels
