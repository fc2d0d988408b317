#include "sweep/moving_family.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sweep/kernels.hpp"

namespace sweep {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kJumpTol = 1e-9;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_horizon(double horizon) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw Error(ErrorKind::InvalidArgument, "family horizon must be positive and finite");
    }
}

void require_path_dim(const VectorPath& path, Eigen::Index dim, const char* what) {
    for (const auto& p : path.pieces()) {
        require_dim(p.offset, dim, what);
        require_dim(p.rate, dim, what);
    }
}

double bounding_radius(const ProxSet& set) {
    if (auto verts = set.vertices()) {
        double m = 0.0;
        for (const auto& v : *verts) m = std::max(m, v.norm());
        return m;
    }
    const ProxSet c = set.canonical();
    if (const auto* ball = std::get_if<Ball>(&c.shape())) return ball->center.norm() + ball->radius;
    return kInf;
}

// Some member of the set, used to centre default sampling regions.
Vector some_member(const ProxSet& set) {
    const ProxSet c = set.canonical();
    return std::visit(
        Overloaded{[](const HalfSpace& s) -> Vector { return s.b * s.a; },
                   [](const Ball& s) -> Vector { return s.center; },
                   [](const Box& s) -> Vector { return 0.5 * (s.lo + s.hi); },
                   [](const Polytope& s) -> Vector { return s.anchor; },
                   [](const BallComplement& s) -> Vector {
                       return s.center + s.radius * Vector::Unit(s.center.size(), 0);
                   },
                   [](const RigidImage&) -> Vector {
                       throw Error(ErrorKind::InvalidArgument, "unexpected rigid image");
                   }},
        c.shape());
}

Vector direction_or_axis(const Vector& v) {
    const double len = v.norm();
    return len > 0.0 ? Vector(v / len) : Vector(Vector::Unit(v.size(), 0));
}

ExcessEstimate exact(double value, Vector witness) {
    return {value, std::move(witness), ExcessMethod::analytic, 0};
}

std::optional<ExcessEstimate> analytic_excess(const ProxSet& a, const ProxSet& b) {
    const auto& sa = a.shape();
    const auto& sb = b.shape();
    if (const auto* ba = std::get_if<Ball>(&sa)) {
        if (const auto* bb = std::get_if<Ball>(&sb)) {
            const Vector off = ba->center - bb->center;
            return exact(std::max(off.norm() + ba->radius - bb->radius, 0.0),
                         ba->center + ba->radius * direction_or_axis(off));
        }
        if (const auto* hb = std::get_if<HalfSpace>(&sb)) {
            return exact(std::max(hb->a.dot(ba->center) + ba->radius - hb->b, 0.0),
                         ba->center + ba->radius * hb->a);
        }
        if (const auto* cb = std::get_if<BallComplement>(&sb)) {
            const Vector off = cb->center - ba->center;
            const double gap = std::max(off.norm() - ba->radius, 0.0);
            const Vector witness = off.norm() <= ba->radius ? cb->center
                                                            : Vector(ba->center + ba->radius * direction_or_axis(off));
            return exact(std::max(cb->radius - gap, 0.0), witness);
        }
    }
    if (const auto* ha = std::get_if<HalfSpace>(&sa)) {
        if (const auto* hb = std::get_if<HalfSpace>(&sb)) {
            if ((ha->a - hb->a).norm() <= 1e-12) return exact(std::max(ha->b - hb->b, 0.0), ha->b * ha->a);
            return exact(kInf, ha->b * ha->a);
        }
    }
    if (const auto* ca = std::get_if<BallComplement>(&sa)) {
        if (const auto* cb = std::get_if<BallComplement>(&sb)) {
            const Vector off = cb->center - ca->center;
            const double near = std::max(ca->radius - off.norm(), 0.0);
            const Vector witness = off.norm() >= ca->radius
                                       ? cb->center
                                       : Vector(ca->center + ca->radius * direction_or_axis(off));
            return exact(std::max(cb->radius - near, 0.0), witness);
        }
    }
    // Convex distance is maximised over a polytope at a vertex.
    if (b.convex()) {
        if (auto verts = a.vertices(); verts && !verts->empty()) {
            const auto best = kernels::max_distance(b, *verts);
            return exact(std::max(best.value, 0.0), (*verts)[best.index]);
        }
    }
    if (!a.bounded() && b.bounded()) return exact(kInf, some_member(a));
    return std::nullopt;
}

}  // namespace

Matrix plane_rotation(Eigen::Index dim, double angle) {
    Matrix q = Matrix::Identity(dim, dim);
    const double c = std::cos(angle), s = std::sin(angle);
    q(0, 0) = c;
    q(0, 1) = -s;
    q(1, 0) = s;
    q(1, 1) = c;
    return q;
}

MovingFamily::MovingFamily(Kind kind, double horizon) : kind_(std::move(kind)), horizon_(horizon) {}

MovingFamily MovingFamily::stationary(ProxSet set, double horizon) {
    Vector zero = Vector::Zero(set.dim());
    return translate(std::move(set), VectorPath::constant(zero), horizon);
}

MovingFamily MovingFamily::translate(ProxSet base, VectorPath path, double horizon) {
    require_horizon(horizon);
    require_path_dim(path, base.dim(), "translate path");
    path.at(0.0);
    path.at(horizon);
    MovingFamily fam(TranslateFamily{base, path}, horizon);
    fam.dim_ = base.dim();
    fam.r_ = base.r();
    if (path.continuous()) {
        const ProxSet c = base.canonical();
        double rate = 0.0;
        if (const auto* h = std::get_if<HalfSpace>(&c.shape())) {
            for (const auto& p : path.pieces()) {
                if (p.to >= 0.0 && p.from <= horizon) rate = std::max(rate, -h->a.dot(p.rate));
            }
        } else {
            rate = path.speed(0.0, horizon);
        }
        fam.modulus_ = Modulus::lipschitz(rate);
    }
    return fam;
}

MovingFamily MovingFamily::rigid(ProxSet base, ScalarPath angle, VectorPath shift, double horizon) {
    require_horizon(horizon);
    if (base.dim() < 2) throw Error(ErrorKind::InvalidArgument, "rigid family needs dimension >= 2");
    require_path_dim(shift, base.dim(), "rigid shift path");
    angle.at(0.0);
    angle.at(horizon);
    shift.at(0.0);
    shift.at(horizon);
    MovingFamily fam(RigidFamily{base, angle, shift}, horizon);
    fam.dim_ = base.dim();
    fam.r_ = base.r();
    if (angle.continuous() && shift.continuous()) {
        const double spin = angle.speed(0.0, horizon);
        const double drift = shift.speed(0.0, horizon);
        if (spin == 0.0) {
            fam.modulus_ = Modulus::lipschitz(drift);
        } else if (const double reach = bounding_radius(base); std::isfinite(reach)) {
            // |Q(a)x - Q(b)x| <= |a - b| |x|
            fam.modulus_ = Modulus::lipschitz(spin * reach + drift);
        }
    }
    return fam;
}

MovingFamily MovingFamily::radius_schedule(VectorPath center, ScalarPath radius, bool complement, double horizon) {
    require_horizon(horizon);
    const Vector c0 = center.at(0.0);
    center.at(horizon);
    radius.at(0.0);
    radius.at(horizon);
    if (c0.size() == 0) throw Error(ErrorKind::InvalidArgument, "radius schedule: empty center");
    require_path_dim(center, c0.size(), "radius schedule center");
    double min_radius = kInf;
    for (double v : radius.knot_values(0.0, horizon)) min_radius = std::min(min_radius, v);
    if (!(min_radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "radius schedule: radius must stay positive");
    MovingFamily fam(RadiusFamily{center, radius, complement}, horizon);
    fam.dim_ = c0.size();
    fam.r_ = complement ? min_radius : kInf;
    if (center.continuous() && radius.continuous()) {
        double growth = 0.0;
        for (const auto& p : radius.pieces()) {
            if (p.to >= 0.0 && p.from <= horizon) growth = std::max(growth, complement ? p.rate : -p.rate);
        }
        fam.modulus_ = Modulus::lipschitz(center.speed(0.0, horizon) + growth);
    }
    return fam;
}

MovingFamily MovingFamily::piecewise(std::vector<FamilyPiece> pieces) {
    if (pieces.empty()) throw Error(ErrorKind::InvalidArgument, "piecewise family needs pieces");
    if (pieces.front().from != 0.0) throw Error(ErrorKind::InvalidArgument, "piecewise family must start at 0");
    const Eigen::Index dim = pieces.front().family->dim();
    PiecewiseFamily pw;
    double r = kInf;
    bool analytic = true;
    double rate = 0.0, offset = 0.0;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const auto& p = pieces[i];
        if (!p.family) throw Error(ErrorKind::InvalidArgument, "piecewise family: null piece");
        if (!(p.from < p.to)) throw Error(ErrorKind::InvalidArgument, "piecewise family: empty piece");
        if (i > 0 && p.from != pieces[i - 1].to) {
            throw Error(ErrorKind::InvalidArgument, "piecewise family: pieces must be contiguous");
        }
        if (p.family->horizon() < p.to) {
            throw Error(ErrorKind::InvalidArgument, "piecewise family: piece family ends before its interval");
        }
        if (p.family->dim() != dim) throw Error(ErrorKind::DimensionMismatch, "piecewise family: dimension mismatch");
        r = std::min(r, p.family->r());
        if (const auto& m = p.family->analytic_modulus(); m) {
            rate = std::max(rate, m->rate());
            offset += m->offset();
        } else {
            analytic = false;
        }
        if (i > 0) {
            const double t = p.from;
            const ExcessEstimate jump = excess(pieces[i - 1].family->slice(t), p.family->slice(t));
            pw.jump_excess.push_back(jump.lower);
            pw.admissible.push_back(jump.lower <= kJumpTol);
            if (jump.lower > kJumpTol) analytic = false;
            offset += jump.lower;
        }
    }
    const double horizon = pieces.back().to;
    pw.pieces = std::move(pieces);
    MovingFamily fam(std::move(pw), horizon);
    fam.dim_ = dim;
    fam.r_ = r;
    // Triangle inequality through each admissible breakpoint keeps the largest rate.
    if (analytic) fam.modulus_ = Modulus::lipschitz(rate, offset);
    return fam;
}

ProxSet MovingFamily::slice(double t) const {
    if (!(t >= 0.0 && t <= horizon_)) {
        throw Error(ErrorKind::OutOfRange, "slice time " + std::to_string(t) + " outside [0, horizon]");
    }
    return std::visit(
        Overloaded{[&](const TranslateFamily& f) { return f.base.translated(f.path.at(t)); },
                   [&](const RigidFamily& f) {
                       return ProxSet::rigid_image(f.base, plane_rotation(dim_, f.angle.at(t)), f.shift.at(t));
                   },
                   [&](const RadiusFamily& f) {
                       return f.complement ? ProxSet::ball_complement(f.center.at(t), f.radius.at(t))
                                           : ProxSet::ball(f.center.at(t), f.radius.at(t));
                   },
                   [&](const PiecewiseFamily& f) {
                       for (const auto& p : f.pieces) {
                           if (t < p.to) return p.family->slice(t);
                       }
                       return f.pieces.back().family->slice(t);
                   }},
        kind_);
}

std::vector<double> MovingFamily::breakpoints() const {
    std::vector<double> out;
    if (const auto* pw = std::get_if<PiecewiseFamily>(&kind_)) {
        for (std::size_t i = 1; i < pw->pieces.size(); ++i) out.push_back(pw->pieces[i].from);
    }
    return out;
}

ExcessEstimate excess(const ProxSet& a, const ProxSet& b, const SamplingBudget& budget) {
    if (a.dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, "excess: sets differ in dimension");
    const ProxSet ca = a.canonical();
    const ProxSet cb = b.canonical();
    if (auto est = analytic_excess(ca, cb)) return *est;

    Region region = budget.region ? *budget.region : Region::cube(some_member(ca), budget.half_width);
    if (auto box = ca.bounding_box(); box && !budget.region) {
        region = Region{box->lo.array() - 1e-9, box->hi.array() + 1e-9};
    }
    const std::vector<Vector> points = sample_points(ca, region, budget.samples, budget.seed);
    const auto best = kernels::max_distance(cb, points);
    ExcessEstimate est{best.value, points[best.index], ExcessMethod::sampled, points.size()};

    // Local random search from the best sample, staying in A and in the region.
    Rng rng(mix_seed(budget.seed, 0x5eed));
    double step = 0.05 * (region.hi - region.lo).norm();
    std::size_t misses = 0;
    for (std::size_t it = 0; it < budget.climb_iters && step > 1e-12; ++it) {
        Vector cand = (est.witness + step * rng.unit(ca.dim())).cwiseMax(region.lo).cwiseMin(region.hi);
        bool ok = true;
        if (!ca.contains(cand)) {
            try {
                if (!ca.convex() && ca.raw_distance(cand) >= ca.r()) {
                    ok = false;
                } else {
                    cand = ca.project(cand);
                }
            } catch (const Error&) {
                ok = false;
            }
        }
        if (ok && region.contains(cand, kContainTol)) {
            const double d = cb.distance(cand);
            if (d > est.lower) {
                est.lower = d;
                est.witness = cand;
                misses = 0;
                continue;
            }
        }
        if (++misses >= 4) {
            step *= 0.5;
            misses = 0;
        }
    }
    return est;
}

std::vector<std::pair<double, double>> estimate_modulus(const MovingFamily& family, const std::vector<double>& deltas,
                                                         const SamplingBudget& budget) {
    const double horizon = family.horizon();
    for (double d : deltas) {
        if (!(d > 0.0) || d > horizon) {
            throw Error(ErrorKind::InvalidArgument, "estimate_modulus: deltas must lie in (0, horizon]");
        }
    }
    std::vector<std::pair<double, double>> out;
    out.reserve(deltas.size());
    if (const auto& m = family.analytic_modulus(); m && !budget.force_sampling) {
        for (double d : deltas) out.emplace_back(d, (*m)(d));
        return out;
    }
    const std::vector<double> breaks = family.breakpoints();
    for (double d : deltas) {
        std::vector<std::pair<double, double>> pairs;
        for (double gap : {d, d / 2.0, d / 4.0}) {
            const double span = horizon - gap;
            for (int i = 0; i < 64; ++i) {
                const double s = span * (static_cast<double>(i) / 63.0);
                pairs.emplace_back(s, std::min(s + gap, horizon));
            }
            for (double tb : breaks) {
                for (double f : {1e-9, 0.25, 0.5, 0.75, 1.0}) {
                    const double s = tb - f * gap;
                    if (s >= 0.0 && s + gap <= horizon) pairs.emplace_back(s, s + gap);
                }
            }
        }
        const auto best = kernels::argmax(pairs.size(), [&](std::size_t i) {
            SamplingBudget local = budget;
            local.seed = mix_seed(budget.seed, i);
            return excess(family.slice(pairs[i].first), family.slice(pairs[i].second), local).lower;
        });
        out.emplace_back(d, std::max(best.value, 0.0));
    }
    // omega is nondecreasing by definition: any pair admissible for a smaller delta is admissible for a larger one.
    std::vector<std::size_t> order(out.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return out[x].first < out[y].first; });
    double running = 0.0;
    for (std::size_t i : order) {
        running = std::max(running, out[i].second);
        out[i].second = running;
    }
    return out;
}

Modulus modulus_of(const MovingFamily& family, const SamplingBudget& budget, int table_levels) {
    if (const auto& m = family.analytic_modulus(); m && !budget.force_sampling) return *m;
    std::vector<double> deltas;
    for (int k = 0; k <= table_levels; ++k) deltas.push_back(family.horizon() * std::ldexp(1.0, -k));
    return Modulus::table(estimate_modulus(family, deltas, budget));
}

double compute_tau(const Modulus& omega, double r, double rho0, double rho, double horizon) {
    if (!(rho > 0.0) || !(rho < rho0) || !(r > 0.0) || !(horizon > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "compute_tau: need 0 < rho < rho0, r > 0, horizon > 0");
    }
    const double eta = std::min(rho0 - rho, r);
    const double threshold = std::min(eta, rho) - kTauMargin;
    if (!(threshold > 0.0)) throw Error(ErrorKind::NoPositiveTau, "compute_tau: threshold is not positive");
    if (omega(horizon) < threshold) return horizon;
    double lo = 0.0, hi = horizon;
    for (int it = 0; it < 64; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (omega(mid) < threshold) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if (!(lo > 0.0)) {
        throw Error(ErrorKind::NoPositiveTau, "compute_tau: omega(delta) >= threshold for every sampled delta > 0");
    }
    return lo;
}

InnerBallCheck verify_inner_ball(const MovingFamily& family, const Vector& w, double rho, double from, double to,
                                 std::size_t times, std::size_t sphere_points, std::uint64_t seed) {
    require_dim(w, family.dim(), "inner ball center");
    if (!(rho > 0.0) || !(from <= to) || times < 1 || sphere_points < 1) {
        throw Error(ErrorKind::InvalidArgument, "verify_inner_ball: bad arguments");
    }
    std::vector<Vector> probes{w};
    Rng rng(seed);
    for (std::size_t k = 0; k < sphere_points; ++k) {
        Vector u;
        if (w.size() == 2) {
            const double phi = 6.283185307179586 * static_cast<double>(k) / static_cast<double>(sphere_points);
            u = Vector(2);
            u << std::cos(phi), std::sin(phi);
        } else {
            u = rng.unit(w.size());
        }
        probes.push_back(w + rho * u);
    }
    double worst = -kInf;
    for (std::size_t i = 0; i < times; ++i) {
        const double t = times == 1 ? from : from + (to - from) * (static_cast<double>(i) / static_cast<double>(times - 1));
        const ProxSet slice = family.slice(t);
        for (const auto& p : probes) worst = std::max(worst, slice.defect(p));
    }
    InnerBallCheck check;
    check.worst_defect = worst;
    if (worst <= kContainTol) check.cert = InnerBallCert{w, rho, from, to};
    return check;
}

}  // namespace sweep
