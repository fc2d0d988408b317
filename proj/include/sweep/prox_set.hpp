#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sweep/vector.hpp"

namespace sweep {

/// {x : <a, x> <= b} with a of unit norm.
struct HalfSpace {
    Vector a;
    double b = 0.0;

    friend bool operator==(const HalfSpace& l, const HalfSpace& r) { return same(l.a, r.a) && l.b == r.b; }
};

/// Closed ball.
struct Ball {
    Vector center;
    double radius = 1.0;

    friend bool operator==(const Ball& l, const Ball& r) {
        return same(l.center, r.center) && l.radius == r.radius;
    }
};

struct Box {
    Vector lo;
    Vector hi;

    friend bool operator==(const Box& l, const Box& r) { return same(l.lo, r.lo) && same(l.hi, r.hi); }
};

/// Intersection of half-spaces. `anchor` is a member found (and checked) at
/// construction; `vertices` is filled when the polytope is bounded.
struct Polytope {
    std::vector<HalfSpace> faces;
    Vector anchor;
    bool bounded = false;
    std::vector<Vector> vertices;

    friend bool operator==(const Polytope& l, const Polytope& r) { return l.faces == r.faces; }
};

/// Closure of the complement of an open ball; prox-regular with r = radius.
struct BallComplement {
    Vector center;
    double radius = 1.0;

    friend bool operator==(const BallComplement& l, const BallComplement& r) {
        return same(l.center, r.center) && l.radius == r.radius;
    }
};

class ProxSet;

/// rotation * base + translation, rotation orthogonal.
struct RigidImage {
    std::shared_ptr<const ProxSet> base;
    Matrix rotation;
    Vector translation;

    friend bool operator==(const RigidImage& l, const RigidImage& r);
};

// A static prox-regular set. Values are immutable; copies share nothing mutable.
class ProxSet {
public:
    using Shape = std::variant<HalfSpace, Ball, Box, Polytope, BallComplement, RigidImage>;

    static ProxSet half_space(Vector a, double b);
    static ProxSet ball(Vector center, double radius);
    static ProxSet box(Vector lo, Vector hi);
    static ProxSet polytope(std::vector<HalfSpace> faces);
    static ProxSet ball_complement(Vector center, double radius);
    static ProxSet rigid_image(ProxSet base, Matrix rotation, Vector translation);

    const Shape& shape() const { return shape_; }
    std::string tag() const;
    Eigen::Index dim() const;

    /// Prox-regularity radius; +inf for convex shapes.
    double r() const;
    bool convex() const;
    bool bounded() const;

    /// Largest violation of the defining inequalities (<= 0 inside).
    double defect(const Vector& y) const;
    bool contains(const Vector& y, double tol = kContainTol) const { return defect(y) <= tol; }

    /// Distance with values inside the containment tolerance snapped to 0.
    double distance(const Vector& y) const;
    /// Unsnapped distance, used for residual reporting.
    double raw_distance(const Vector& y) const;

    /// Unique nearest point; requires distance(y) < r().
    Vector project(const Vector& y) const;

    ProxSet translated(const Vector& shift) const;
    /// Rigid images resolved into the equivalent primitive.
    ProxSet canonical() const;

    /// Vertices of bounded polyhedral shapes (box, bounded polytope).
    std::optional<std::vector<Vector>> vertices() const;
    std::optional<Region> bounding_box() const;

    friend bool operator==(const ProxSet& l, const ProxSet& r) { return l.shape_ == r.shape_; }

private:
    explicit ProxSet(Shape shape) : shape_(std::move(shape)) {}

    Shape shape_;
};

/// Max over samples of the hypo-monotonicity defect <n, z-x> - |n|/(2r) |z-x|^2.
struct NormalResidualReport {
    double worst_residual = 0.0;
    Vector worst_witness;
    std::size_t samples = 0;
};

NormalResidualReport normal_residual(const ProxSet& set, const Vector& x, const Vector& n,
                                     std::span<const Vector> z_samples);

/// Seeded member points of `set` inside `region`; rejected draws are projected so
/// that boundary points are represented.
std::vector<Vector> sample_points(const ProxSet& set, const Region& region, std::size_t count,
                                  std::uint64_t seed);

}  // namespace sweep
