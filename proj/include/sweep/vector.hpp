#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <string>

#include "sweep/error.hpp"

namespace sweep {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Containment tolerance on the defining inequalities of every shape.
inline constexpr double kContainTol = 1e-10;

inline void require_dim(const Vector& v, Eigen::Index dim, const char* what) {
    if (v.size() != dim) {
        throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": expected dimension " +
                                                      std::to_string(dim) + ", got " +
                                                      std::to_string(v.size()));
    }
}

/// Exact (bitwise) equality, tolerant of size mismatch.
inline bool same(const Vector& a, const Vector& b) {
    return a.size() == b.size() && (a.array() == b.array()).all();
}

inline bool same(const Matrix& a, const Matrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

/// Axis-aligned region used for sampling.
struct Region {
    Vector lo;
    Vector hi;

    Eigen::Index dim() const { return lo.size(); }
    bool contains(const Vector& p, double tol = 0.0) const {
        return ((p - lo).array() >= -tol).all() && ((hi - p).array() >= -tol).all();
    }
    static Region cube(const Vector& center, double half_width) {
        return {center.array() - half_width, center.array() + half_width};
    }
};

// Deterministic generator. Doubles are built from the top 53 bits so sequences
// do not depend on the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }
    Vector in_region(const Region& region) {
        Vector p(region.dim());
        for (Eigen::Index i = 0; i < p.size(); ++i) p[i] = uniform(region.lo[i], region.hi[i]);
        return p;
    }
    Vector unit(Eigen::Index dim) {
        Vector u(dim);
        do {
            for (Eigen::Index i = 0; i < dim; ++i) u[i] = normal();
        } while (u.norm() < 1e-12);
        return u / u.norm();
    }

private:
    std::uint64_t state_;
};

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    Rng rng(seed ^ (stream * 0xD1B54A32D192ED03ULL + 0x632BE59BD9B4E019ULL));
    return rng.next();
}

}  // namespace sweep
