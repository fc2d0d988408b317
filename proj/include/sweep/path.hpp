#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "sweep/vector.hpp"

namespace sweep {

/// value(t) = offset + rate * t on [from, to).
template <class V>
struct LinearPiece {
    double from = -std::numeric_limits<double>::infinity();
    double to = std::numeric_limits<double>::infinity();
    V offset;
    V rate;
};

namespace detail {
inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const Vector& v) { return v.norm(); }
inline bool equal(double a, double b) { return a == b; }
inline bool equal(const Vector& a, const Vector& b) { return same(a, b); }
}  // namespace detail

// Piecewise-linear time path, right-continuous at its breaks. These are the only
// path forms scenarios may declare, so every family built from them has a
// closed-form Lipschitz bound on its excess.
template <class V>
class Path {
public:
    static Path constant(V value) {
        V zero = value;
        zero *= 0.0;
        return Path({LinearPiece<V>{-kInf, kInf, std::move(value), std::move(zero)}});
    }
    static Path linear(V offset, V rate) { return Path({LinearPiece<V>{-kInf, kInf, std::move(offset), std::move(rate)}}); }
    static Path piecewise(std::vector<LinearPiece<V>> pieces) { return Path(std::move(pieces)); }

    const std::vector<LinearPiece<V>>& pieces() const { return pieces_; }

    V at(double t) const {
        for (std::size_t i = 0; i < pieces_.size(); ++i) {
            const auto& p = pieces_[i];
            const bool last = i + 1 == pieces_.size();
            if (t >= p.from && (t < p.to || (last && t == p.to))) return value(p, t);
        }
        throw Error(ErrorKind::OutOfRange, "path not defined at t = " + std::to_string(t));
    }

    /// Largest |rate| over pieces meeting [t0, t1].
    double speed(double t0, double t1) const {
        double s = 0.0;
        for (const auto& p : pieces_) {
            if (p.to >= t0 && p.from <= t1) s = std::max(s, detail::magnitude(p.rate));
        }
        return s;
    }

    bool continuous(double tol = 1e-12) const {
        for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) {
            const double t = pieces_[i].to;
            if (detail::magnitude(value(pieces_[i], t) - value(pieces_[i + 1], t)) > tol) return false;
        }
        return true;
    }

    /// Values at piece ends clipped to [t0, t1]; extremes of a piecewise-linear
    /// scalar path on the interval are among these.
    std::vector<V> knot_values(double t0, double t1) const {
        std::vector<V> out;
        for (const auto& p : pieces_) {
            const double a = std::max(p.from, t0);
            const double b = std::min(p.to, t1);
            if (a > b) continue;
            out.push_back(value(p, a));
            out.push_back(value(p, b));
        }
        return out;
    }

    friend bool operator==(const Path& l, const Path& r) {
        if (l.pieces_.size() != r.pieces_.size()) return false;
        for (std::size_t i = 0; i < l.pieces_.size(); ++i) {
            const auto& a = l.pieces_[i];
            const auto& b = r.pieces_[i];
            if (a.from != b.from || a.to != b.to || !detail::equal(a.offset, b.offset) ||
                !detail::equal(a.rate, b.rate)) {
                return false;
            }
        }
        return true;
    }

private:
    static constexpr double kInf = std::numeric_limits<double>::infinity();

    explicit Path(std::vector<LinearPiece<V>> pieces) : pieces_(std::move(pieces)) {
        if (pieces_.empty()) throw Error(ErrorKind::InvalidArgument, "path needs at least one piece");
        for (std::size_t i = 0; i < pieces_.size(); ++i) {
            if (!(pieces_[i].from < pieces_[i].to)) throw Error(ErrorKind::InvalidArgument, "path piece has empty range");
            if (i > 0 && pieces_[i].from != pieces_[i - 1].to) {
                throw Error(ErrorKind::InvalidArgument, "path pieces must be contiguous");
            }
        }
    }

    static V value(const LinearPiece<V>& p, double t) { return p.offset + p.rate * t; }

    std::vector<LinearPiece<V>> pieces_;
};

using ScalarPath = Path<double>;
using VectorPath = Path<Vector>;

}  // namespace sweep
