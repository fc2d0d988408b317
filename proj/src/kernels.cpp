#include "sweep/kernels.hpp"

#include "sweep/prox_set.hpp"

namespace sweep::kernels {

ArgMax max_distance_serial(const ProxSet& set, std::span<const Vector> points) {
    return argmax_serial(points.size(), [&](std::size_t i) { return set.distance(points[i]); });
}

ArgMax max_distance(const ProxSet& set, std::span<const Vector> points) {
    return argmax(points.size(), [&](std::size_t i) { return set.distance(points[i]); });
}

namespace {
double normal_defect(const Vector& x, const Vector& n, double curvature, const Vector& z) {
    const Vector dz = z - x;
    return n.dot(dz) - curvature * dz.squaredNorm();
}
}  // namespace

ArgMax max_normal_defect_serial(const Vector& x, const Vector& n, double curvature,
                                std::span<const Vector> z) {
    return argmax_serial(z.size(), [&](std::size_t i) { return normal_defect(x, n, curvature, z[i]); });
}

ArgMax max_normal_defect(const Vector& x, const Vector& n, double curvature, std::span<const Vector> z) {
    return argmax(z.size(), [&](std::size_t i) { return normal_defect(x, n, curvature, z[i]); });
}

}  // namespace sweep::kernels
