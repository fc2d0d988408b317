#include "sweep/prox_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sweep/kernels.hpp"

namespace sweep {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kUnitTol = 1e-12;
constexpr double kDykstraTol = 1e-12;
constexpr std::size_t kDykstraSweeps = 100000;
constexpr std::size_t kMaxCombinations = 200000;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_unit(const Vector& a, const char* what) {
    if (a.size() == 0 || std::abs(a.norm() - 1.0) > kUnitTol) {
        throw Error(ErrorKind::InvalidArgument, std::string(what) + ": normal must have unit norm");
    }
}

double polytope_defect(const std::vector<HalfSpace>& faces, const Vector& y) {
    double worst = -kInf;
    for (const auto& f : faces) worst = std::max(worst, f.a.dot(y) - f.b);
    return worst;
}

// Minimum-norm correction onto the faces whose Dykstra increments are nonzero.
// Accepted only if it satisfies the KKT conditions, otherwise the Dykstra iterate stands.
Vector polish_projection(const std::vector<HalfSpace>& faces, const std::vector<Vector>& increments,
                         const Vector& y, const Vector& approx) {
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < faces.size(); ++i) {
        if (increments[i].norm() > 0.0) active.push_back(i);
    }
    if (active.empty() || active.size() > static_cast<std::size_t>(y.size())) return approx;
    Matrix a(static_cast<Eigen::Index>(active.size()), y.size());
    Vector rhs(static_cast<Eigen::Index>(active.size()));
    for (std::size_t k = 0; k < active.size(); ++k) {
        a.row(static_cast<Eigen::Index>(k)) = faces[active[k]].a.transpose();
        rhs[static_cast<Eigen::Index>(k)] = faces[active[k]].a.dot(y) - faces[active[k]].b;
    }
    const Matrix gram = a * a.transpose();
    Eigen::FullPivLU<Matrix> lu(gram);
    if (lu.rank() < gram.rows()) return approx;
    const Vector mult = lu.solve(rhs);
    if ((mult.array() < -1e-12).any()) return approx;
    const Vector x = y - a.transpose() * mult;
    if (polytope_defect(faces, x) > 1e-12 || (x - approx).norm() > 1e-6) return approx;
    return x;
}

// Cyclic projections with Dykstra correction vectors onto the faces.
Vector project_polytope(const Polytope& poly, const Vector& y) {
    if (polytope_defect(poly.faces, y) <= 0.0) return y;
    const std::size_t m = poly.faces.size();
    Vector x = y;
    std::vector<Vector> inc(m, Vector::Zero(y.size()));
    for (std::size_t sweep = 0; sweep < kDykstraSweeps; ++sweep) {
        const Vector x_prev = x;
        double change = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const Vector u = x + inc[i];
            const double viol = poly.faces[i].a.dot(u) - poly.faces[i].b;
            Vector next = viol > 0.0 ? Vector(u - viol * poly.faces[i].a) : u;
            Vector next_inc = u - next;
            change += (next_inc - inc[i]).squaredNorm();
            inc[i] = std::move(next_inc);
            x = std::move(next);
        }
        change += (x - x_prev).squaredNorm();
        if (std::sqrt(change) <= kDykstraTol && polytope_defect(poly.faces, x) <= kContainTol) {
            return polish_projection(poly.faces, inc, y, x);
        }
    }
    throw Error(ErrorKind::DidNotConverge, "polytope projection exceeded its sweep budget");
}

// Calls f on every k-subset of {0..m-1}; stops early when f returns true.
template <class F>
bool for_each_combination(std::size_t m, std::size_t k, F&& f) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    if (k > m) return false;
    while (true) {
        if (f(idx)) return true;
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == m - k + i - 1) --i;
        if (i == 0) return false;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

double binomial(std::size_t m, std::size_t k) {
    double c = 1.0;
    for (std::size_t i = 0; i < k; ++i) c = c * static_cast<double>(m - i) / static_cast<double>(i + 1);
    return c;
}

void analyze_polytope(Polytope& poly) {
    const auto n = static_cast<std::size_t>(poly.anchor.size());
    const std::size_t m = poly.faces.size();
    Matrix a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < m; ++i) a.row(static_cast<Eigen::Index>(i)) = poly.faces[i].a.transpose();
    if (m < n || Eigen::FullPivLU<Matrix>(a).rank() < static_cast<Eigen::Index>(n) ||
        binomial(m, n) > kMaxCombinations || binomial(m, n - 1) > kMaxCombinations) {
        poly.bounded = false;
        return;
    }
    // Unbounded iff the recession cone {d : A d <= 0} has an extreme ray.
    const bool has_ray = for_each_combination(m, n - 1, [&](const std::vector<std::size_t>& s) {
        Matrix sub(static_cast<Eigen::Index>(s.size()), static_cast<Eigen::Index>(n));
        for (std::size_t k = 0; k < s.size(); ++k) sub.row(static_cast<Eigen::Index>(k)) = a.row(static_cast<Eigen::Index>(s[k]));
        Eigen::FullPivLU<Matrix> lu(sub.rows() > 0 ? sub : Matrix::Zero(1, static_cast<Eigen::Index>(n)));
        const Matrix kernel = lu.kernel();
        if (kernel.cols() != 1) return false;
        for (double sign : {1.0, -1.0}) {
            const Vector d = sign * kernel.col(0).normalized();
            if (((a * d).array() <= 1e-12).all()) return true;
        }
        return false;
    });
    if (has_ray) {
        poly.bounded = false;
        return;
    }
    poly.bounded = true;
    for_each_combination(m, n, [&](const std::vector<std::size_t>& s) {
        Matrix sub(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        Vector rhs(static_cast<Eigen::Index>(n));
        for (std::size_t k = 0; k < n; ++k) {
            sub.row(static_cast<Eigen::Index>(k)) = poly.faces[s[k]].a.transpose();
            rhs[static_cast<Eigen::Index>(k)] = poly.faces[s[k]].b;
        }
        Eigen::FullPivLU<Matrix> lu(sub);
        if (lu.rank() < static_cast<Eigen::Index>(n)) return false;
        const Vector v = lu.solve(rhs);
        if (polytope_defect(poly.faces, v) > 1e-9) return false;
        for (const auto& w : poly.vertices) {
            if ((w - v).norm() <= 1e-9) return false;
        }
        poly.vertices.push_back(v);
        return false;
    });
}

std::vector<Vector> box_vertices(const Box& box) {
    const auto n = box.lo.size();
    std::vector<Vector> out;
    const std::size_t count = std::size_t{1} << n;
    out.reserve(count);
    for (std::size_t mask = 0; mask < count; ++mask) {
        Vector v(n);
        for (Eigen::Index k = 0; k < n; ++k) v[k] = (mask >> k) & 1U ? box.hi[k] : box.lo[k];
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<HalfSpace> box_faces(const Box& box) {
    std::vector<HalfSpace> faces;
    const auto n = box.lo.size();
    for (Eigen::Index k = 0; k < n; ++k) {
        faces.push_back({Vector::Unit(n, k), box.hi[k]});
        faces.push_back({-Vector::Unit(n, k), -box.lo[k]});
    }
    return faces;
}

HalfSpace map_face(const HalfSpace& f, const Matrix& q, const Vector& u) {
    Vector a = q * f.a;
    a /= a.norm();
    return {a, f.b + a.dot(u)};
}

}  // namespace

bool operator==(const RigidImage& l, const RigidImage& r) {
    return *l.base == *r.base && same(l.rotation, r.rotation) && same(l.translation, r.translation);
}

ProxSet ProxSet::half_space(Vector a, double b) {
    require_unit(a, "half-space");
    if (!std::isfinite(b)) throw Error(ErrorKind::InvalidArgument, "half-space offset must be finite");
    return ProxSet(HalfSpace{std::move(a), b});
}

ProxSet ProxSet::ball(Vector center, double radius) {
    if (center.size() == 0) throw Error(ErrorKind::InvalidArgument, "ball: empty center");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw Error(ErrorKind::InvalidArgument, "ball: radius must be positive");
    return ProxSet(Ball{std::move(center), radius});
}

ProxSet ProxSet::box(Vector lo, Vector hi) {
    require_dim(hi, lo.size(), "box");
    if (lo.size() == 0 || lo.size() > 20 || ((hi - lo).array() < 0.0).any()) {
        throw Error(ErrorKind::InvalidArgument, "box: need 1 <= dim <= 20 and lo <= hi");
    }
    return ProxSet(Box{std::move(lo), std::move(hi)});
}

ProxSet ProxSet::polytope(std::vector<HalfSpace> faces) {
    if (faces.empty()) throw Error(ErrorKind::InvalidArgument, "polytope: no faces");
    const auto n = faces.front().a.size();
    for (const auto& f : faces) {
        require_dim(f.a, n, "polytope face");
        require_unit(f.a, "polytope face");
    }
    Polytope poly{std::move(faces), Vector::Zero(n), false, {}};
    try {
        poly.anchor = project_polytope(poly, Vector::Zero(n));
    } catch (const Error&) {
        throw Error(ErrorKind::EmptySet, "polytope: no feasible point found");
    }
    if (polytope_defect(poly.faces, poly.anchor) > kContainTol) {
        throw Error(ErrorKind::EmptySet, "polytope: anchor point failed re-verification");
    }
    analyze_polytope(poly);
    return ProxSet(std::move(poly));
}

ProxSet ProxSet::ball_complement(Vector center, double radius) {
    if (center.size() == 0) throw Error(ErrorKind::InvalidArgument, "ball complement: empty center");
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw Error(ErrorKind::InvalidArgument, "ball complement: radius must be positive");
    }
    return ProxSet(BallComplement{std::move(center), radius});
}

ProxSet ProxSet::rigid_image(ProxSet base, Matrix rotation, Vector translation) {
    const auto n = base.dim();
    require_dim(translation, n, "rigid image translation");
    if (rotation.rows() != n || rotation.cols() != n) {
        throw Error(ErrorKind::DimensionMismatch, "rigid image: rotation has wrong shape");
    }
    if ((rotation.transpose() * rotation - Matrix::Identity(n, n)).norm() > 1e-10) {
        throw Error(ErrorKind::InvalidArgument, "rigid image: rotation is not orthogonal");
    }
    return ProxSet(RigidImage{std::make_shared<const ProxSet>(std::move(base)), std::move(rotation),
                              std::move(translation)});
}

std::string ProxSet::tag() const {
    return std::visit(Overloaded{[](const HalfSpace&) { return std::string("halfspace"); },
                                 [](const Ball&) { return std::string("ball"); },
                                 [](const Box&) { return std::string("box"); },
                                 [](const Polytope&) { return std::string("polytope"); },
                                 [](const BallComplement&) { return std::string("ball_complement"); },
                                 [](const RigidImage&) { return std::string("rigid"); }},
                      shape_);
}

Eigen::Index ProxSet::dim() const {
    return std::visit(Overloaded{[](const HalfSpace& s) { return s.a.size(); },
                                 [](const Ball& s) { return s.center.size(); },
                                 [](const Box& s) { return s.lo.size(); },
                                 [](const Polytope& s) { return s.anchor.size(); },
                                 [](const BallComplement& s) { return s.center.size(); },
                                 [](const RigidImage& s) { return s.translation.size(); }},
                      shape_);
}

double ProxSet::r() const {
    return std::visit(Overloaded{[](const BallComplement& s) { return s.radius; },
                                 [](const RigidImage& s) { return s.base->r(); },
                                 [](const auto&) { return kInf; }},
                      shape_);
}

bool ProxSet::convex() const { return r() == kInf; }

bool ProxSet::bounded() const {
    return std::visit(Overloaded{[](const Ball&) { return true; }, [](const Box&) { return true; },
                                 [](const Polytope& s) { return s.bounded; },
                                 [](const RigidImage& s) { return s.base->bounded(); },
                                 [](const auto&) { return false; }},
                      shape_);
}

double ProxSet::defect(const Vector& y) const {
    require_dim(y, dim(), "defect");
    return std::visit(
        Overloaded{[&](const HalfSpace& s) { return s.a.dot(y) - s.b; },
                   [&](const Ball& s) { return (y - s.center).norm() - s.radius; },
                   [&](const Box& s) { return std::max((s.lo - y).maxCoeff(), (y - s.hi).maxCoeff()); },
                   [&](const Polytope& s) { return polytope_defect(s.faces, y); },
                   [&](const BallComplement& s) { return s.radius - (y - s.center).norm(); },
                   [&](const RigidImage& s) {
                       return s.base->defect(s.rotation.transpose() * (y - s.translation));
                   }},
        shape_);
}

double ProxSet::raw_distance(const Vector& y) const {
    require_dim(y, dim(), "distance");
    return std::visit(
        Overloaded{[&](const HalfSpace& s) { return std::max(s.a.dot(y) - s.b, 0.0); },
                   [&](const Ball& s) { return std::max((y - s.center).norm() - s.radius, 0.0); },
                   [&](const Box& s) { return (y - y.cwiseMax(s.lo).cwiseMin(s.hi)).norm(); },
                   [&](const Polytope& s) {
                       return polytope_defect(s.faces, y) <= 0.0 ? 0.0 : (project_polytope(s, y) - y).norm();
                   },
                   [&](const BallComplement& s) { return std::max(s.radius - (y - s.center).norm(), 0.0); },
                   [&](const RigidImage& s) {
                       return s.base->raw_distance(s.rotation.transpose() * (y - s.translation));
                   }},
        shape_);
}

double ProxSet::distance(const Vector& y) const { return contains(y) ? 0.0 : raw_distance(y); }

Vector ProxSet::project(const Vector& y) const {
    require_dim(y, dim(), "project");
    return std::visit(
        Overloaded{[&](const HalfSpace& s) -> Vector {
                       const double viol = s.a.dot(y) - s.b;
                       return viol > 0.0 ? Vector(y - viol * s.a) : y;
                   },
                   [&](const Ball& s) -> Vector {
                       const Vector off = y - s.center;
                       const double len = off.norm();
                       return len <= s.radius ? y : Vector(s.center + off * (s.radius / len));
                   },
                   [&](const Box& s) -> Vector { return y.cwiseMax(s.lo).cwiseMin(s.hi); },
                   [&](const Polytope& s) -> Vector { return project_polytope(s, y); },
                   [&](const BallComplement& s) -> Vector {
                       const Vector off = y - s.center;
                       const double len = off.norm();
                       if (len >= s.radius) return y;
                       if (len == 0.0) {
                           throw Error(ErrorKind::AtSingularity,
                                       "point at the excluded center; projection is not unique");
                       }
                       return s.center + off * (s.radius / len);
                   },
                   [&](const RigidImage& s) -> Vector {
                       return s.rotation * s.base->project(s.rotation.transpose() * (y - s.translation)) +
                              s.translation;
                   }},
        shape_);
}

ProxSet ProxSet::translated(const Vector& shift) const {
    require_dim(shift, dim(), "translate");
    return std::visit(
        Overloaded{[&](const HalfSpace& s) { return ProxSet(HalfSpace{s.a, s.b + s.a.dot(shift)}); },
                   [&](const Ball& s) { return ProxSet(Ball{s.center + shift, s.radius}); },
                   [&](const Box& s) { return ProxSet(Box{s.lo + shift, s.hi + shift}); },
                   [&](const Polytope& s) {
                       Polytope p = s;
                       for (auto& f : p.faces) f.b += f.a.dot(shift);
                       p.anchor += shift;
                       for (auto& v : p.vertices) v += shift;
                       return ProxSet(std::move(p));
                   },
                   [&](const BallComplement& s) { return ProxSet(BallComplement{s.center + shift, s.radius}); },
                   [&](const RigidImage& s) {
                       return ProxSet(RigidImage{s.base, s.rotation, s.translation + shift});
                   }},
        shape_);
}

ProxSet ProxSet::canonical() const {
    const auto* rigid = std::get_if<RigidImage>(&shape_);
    if (rigid == nullptr) return *this;
    const ProxSet base = rigid->base->canonical();
    const Matrix& q = rigid->rotation;
    const Vector& u = rigid->translation;
    auto map_polytope = [&](Polytope p) {
        for (auto& f : p.faces) f = map_face(f, q, u);
        p.anchor = q * p.anchor + u;
        for (auto& v : p.vertices) v = q * v + u;
        return ProxSet(std::move(p));
    };
    return std::visit(
        Overloaded{[&](const HalfSpace& s) { return ProxSet(map_face(s, q, u)); },
                   [&](const Ball& s) { return ProxSet(Ball{q * s.center + u, s.radius}); },
                   [&](const Box& s) {
                       return map_polytope(Polytope{box_faces(s), s.lo, true, box_vertices(s)});
                   },
                   [&](const Polytope& s) { return map_polytope(s); },
                   [&](const BallComplement& s) { return ProxSet(BallComplement{q * s.center + u, s.radius}); },
                   [&](const RigidImage&) -> ProxSet {
                       throw Error(ErrorKind::InvalidArgument, "canonical form left a rigid image");
                   }},
        base.shape_);
}

std::optional<std::vector<Vector>> ProxSet::vertices() const {
    const ProxSet c = canonical();
    if (const auto* box = std::get_if<Box>(&c.shape_)) return box_vertices(*box);
    if (const auto* poly = std::get_if<Polytope>(&c.shape_); poly && poly->bounded) return poly->vertices;
    return std::nullopt;
}

std::optional<Region> ProxSet::bounding_box() const {
    const ProxSet c = canonical();
    if (const auto* ball = std::get_if<Ball>(&c.shape_)) {
        return Region{ball->center.array() - ball->radius, ball->center.array() + ball->radius};
    }
    if (const auto* box = std::get_if<Box>(&c.shape_)) return Region{box->lo, box->hi};
    if (auto verts = c.vertices(); verts && !verts->empty()) {
        Vector lo = verts->front(), hi = verts->front();
        for (const auto& v : *verts) {
            lo = lo.cwiseMin(v);
            hi = hi.cwiseMax(v);
        }
        return Region{lo, hi};
    }
    return std::nullopt;
}

NormalResidualReport normal_residual(const ProxSet& set, const Vector& x, const Vector& n,
                                     std::span<const Vector> z_samples) {
    require_dim(n, set.dim(), "normal_residual");
    if (!set.contains(x)) {
        throw Error(ErrorKind::NotAMember, "normal_residual: base point is not in the set (defect " +
                                               std::to_string(set.defect(x)) + ")");
    }
    for (const auto& z : z_samples) require_dim(z, set.dim(), "normal_residual sample");
    NormalResidualReport report;
    report.samples = z_samples.size();
    report.worst_witness = x;
    if (z_samples.empty()) return report;
    const double curvature = set.convex() ? 0.0 : n.norm() / (2.0 * set.r());
    const auto best = kernels::max_normal_defect(x, n, curvature, z_samples);
    report.worst_residual = best.value;
    report.worst_witness = z_samples[best.index];
    return report;
}

std::vector<Vector> sample_points(const ProxSet& set, const Region& region, std::size_t count,
                                  std::uint64_t seed) {
    require_dim(region.lo, set.dim(), "sample region");
    require_dim(region.hi, set.dim(), "sample region");
    if (count == 0) throw Error(ErrorKind::InvalidArgument, "sample_points: count must be >= 1");
    Rng rng(seed);
    std::vector<Vector> out;
    out.reserve(count);
    const std::size_t budget = std::max<std::size_t>(1000000, 1000 * count);
    for (std::size_t attempt = 0; attempt < budget && out.size() < count; ++attempt) {
        Vector p = rng.in_region(region);
        if (set.contains(p)) {
            out.push_back(std::move(p));
            continue;
        }
        if (!set.convex() && set.raw_distance(p) >= set.r()) continue;
        try {
            Vector q = set.project(p);
            if (region.contains(q, kContainTol) && set.contains(q)) out.push_back(std::move(q));
        } catch (const Error&) {
            // singular or non-converged draws are discarded
        }
    }
    if (out.size() < count) {
        throw Error(ErrorKind::EmptyIntersection, "sample_points: found " + std::to_string(out.size()) +
                                                      " of " + std::to_string(count) + " members");
    }
    return out;
}

}  // namespace sweep
