#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "sweep/modulus.hpp"
#include "sweep/path.hpp"
#include "sweep/prox_set.hpp"

namespace sweep {

class MovingFamily;

struct TranslateFamily {
    ProxSet base;
    VectorPath path;
    friend bool operator==(const TranslateFamily&, const TranslateFamily&) = default;
};

/// rotation by angle(t) in the (x_0, x_1) plane, then shift(t).
struct RigidFamily {
    ProxSet base;
    ScalarPath angle;
    VectorPath shift;
    friend bool operator==(const RigidFamily&, const RigidFamily&) = default;
};

/// Ball (or closed ball complement) with moving center and radius.
struct RadiusFamily {
    VectorPath center;
    ScalarPath radius;
    bool complement = false;
    friend bool operator==(const RadiusFamily&, const RadiusFamily&) = default;
};

struct FamilyPiece {
    double from = 0.0;
    double to = 0.0;
    std::shared_ptr<const MovingFamily> family;
};

/// Families glued at breakpoints, right-continuous: C(t*) is the post-jump set.
/// `jump_excess[i]` is e(C(t_i*-), C(t_i*)) at the i-th interior breakpoint.
struct PiecewiseFamily {
    std::vector<FamilyPiece> pieces;
    std::vector<double> jump_excess;
    std::vector<bool> admissible;
    friend bool operator==(const PiecewiseFamily& l, const PiecewiseFamily& r);
};

// t -> C(t) on [0, horizon] with a uniform prox-regularity radius.
class MovingFamily {
public:
    using Kind = std::variant<TranslateFamily, RigidFamily, RadiusFamily, PiecewiseFamily>;

    static MovingFamily stationary(ProxSet set, double horizon);
    static MovingFamily translate(ProxSet base, VectorPath path, double horizon);
    static MovingFamily rigid(ProxSet base, ScalarPath angle, VectorPath shift, double horizon);
    static MovingFamily radius_schedule(VectorPath center, ScalarPath radius, bool complement, double horizon);
    /// Pieces must tile [0, T] contiguously; horizon is the last piece's end.
    static MovingFamily piecewise(std::vector<FamilyPiece> pieces);

    const Kind& kind() const { return kind_; }
    double horizon() const { return horizon_; }
    double r() const { return r_; }
    Eigen::Index dim() const { return dim_; }
    const std::optional<Modulus>& analytic_modulus() const { return modulus_; }

    ProxSet slice(double t) const;
    /// Interior breakpoints of piecewise families (sorted, possibly empty).
    std::vector<double> breakpoints() const;

    friend bool operator==(const MovingFamily& l, const MovingFamily& r) {
        return l.horizon_ == r.horizon_ && l.kind_ == r.kind_;
    }

private:
    MovingFamily(Kind kind, double horizon);

    Kind kind_;
    double horizon_ = 0.0;
    double r_ = 0.0;
    Eigen::Index dim_ = 0;
    std::optional<Modulus> modulus_;
};

inline bool operator==(const PiecewiseFamily& l, const PiecewiseFamily& r) {
    if (l.pieces.size() != r.pieces.size()) return false;
    for (std::size_t i = 0; i < l.pieces.size(); ++i) {
        if (l.pieces[i].from != r.pieces[i].from || l.pieces[i].to != r.pieces[i].to ||
            !(*l.pieces[i].family == *r.pieces[i].family)) {
            return false;
        }
    }
    return true;
}

Matrix plane_rotation(Eigen::Index dim, double angle);

struct SamplingBudget {
    std::size_t samples = 256;
    std::uint64_t seed = 1;
    std::size_t climb_iters = 60;
    double half_width = 10.0;
    std::optional<Region> region;
    /// estimate_modulus samples (s, t) pairs even when a closed form exists.
    bool force_sampling = false;
};

enum class ExcessMethod { analytic, sampled };

/// Lower estimate of e(A, B) = sup_{a in A} d(a, B); exact when analytic.
struct ExcessEstimate {
    double lower = 0.0;
    Vector witness;
    ExcessMethod method = ExcessMethod::sampled;
    std::size_t sample_count = 0;
};

ExcessEstimate excess(const ProxSet& a, const ProxSet& b, const SamplingBudget& budget = {});

/// Pairs (delta, omega_hat(delta)); nondecreasing in delta.
std::vector<std::pair<double, double>> estimate_modulus(const MovingFamily& family,
                                                         const std::vector<double>& deltas,
                                                         const SamplingBudget& budget = {});

/// The family's closed-form modulus, or a sampled table over dyadic fractions of the horizon.
Modulus modulus_of(const MovingFamily& family, const SamplingBudget& budget = {}, int table_levels = 24);

inline constexpr double kTauMargin = 1e-9;

/// Largest delta found by bisection on [0, horizon] with omega(delta) < min(min(rho0 - rho, r), rho) - margin.
double compute_tau(const Modulus& omega, double r, double rho0, double rho, double horizon);

/// B_rho(w) contained in C(t) for the sampled t in [valid_from, valid_to].
struct InnerBallCert {
    Vector w;
    double rho = 0.0;
    double valid_from = 0.0;
    double valid_to = 0.0;
};

struct InnerBallCheck {
    std::optional<InnerBallCert> cert;
    double worst_defect = 0.0;
};

InnerBallCheck verify_inner_ball(const MovingFamily& family, const Vector& w, double rho, double from,
                                 double to, std::size_t times = 50, std::size_t sphere_points = 100,
                                 std::uint64_t seed = 1);

}  // namespace sweep
