#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "plad/grid.hpp"

namespace plad::faces {

// Interior faces of the grid, one family per axis. Axis-a faces separate two
// cells adjacent along axis a; there are (n-1) faces per line, n lines (d=2)
// or a single line (d=1). Boundary faces carry zero flux and are not
// enumerated. The same enumeration backs the p-Fisher sum, the moment-lemma
// left side, and the diffusive flux, so discrete integration by parts holds
// between them.
inline std::size_t count(const Grid& g, int axis) {
    (void)axis;
    const auto n = static_cast<std::size_t>(g.n);
    return g.d == 1 ? n - 1 : (n - 1) * n;
}

// Linear indices of the two cells the face separates (lower, upper).
inline std::pair<std::size_t, std::size_t> cells(const Grid& g, int axis, std::size_t f) {
    const auto n = static_cast<std::size_t>(g.n);
    if (g.d == 1) return {f, f + 1};
    if (axis == 0) {
        const std::size_t a = f / n, j = f % n;  // between rows a and a+1
        return {a * n + j, (a + 1) * n + j};
    }
    const std::size_t i = f / (n - 1), b = f % (n - 1);  // between columns b and b+1
    return {i * n + b, i * n + b + 1};
}

struct FaceGradient {
    double normal = 0.0;   // direct difference across the face
    double tangent = 0.0;  // reconstructed transverse component (d = 2)
    // plain sqrt, not hypot: gradients here are O(1) and this sits in the
    // per-step hot loop
    double magnitude2() const { return normal * normal + tangent * tangent; }
    double magnitude() const { return std::sqrt(magnitude2()); }
};

namespace detail {
// Cell-centered derivative along the stride direction: central inside,
// second-order one-sided at the ends (matches plad::gradient).
inline double lane_derivative(const std::vector<double>& v, std::size_t base, std::size_t stride, int i, int n,
                              double inv2dx) {
    auto at = [&](int k) { return v[base + static_cast<std::size_t>(k) * stride]; };
    if (i == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) * inv2dx;
    if (i == n - 1) return (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) * inv2dx;
    return (at(i + 1) - at(i - 1)) * inv2dx;
}
}  // namespace detail

// Gradient of cell data at an interior face: the normal part is the direct
// two-point difference; the tangential part (d = 2) averages the two
// adjacent cell-centered derivatives so the full vector is second-order
// accurate at the face center.
inline FaceGradient gradient_at(const std::vector<double>& v, const Grid& g, int axis, std::size_t f) {
    const int n = g.n;
    const double invdx = 1.0 / g.dx();
    FaceGradient out;
    if (g.d == 1) {
        out.normal = (v[f + 1] - v[f]) * invdx;
        return out;
    }
    const auto nn = static_cast<std::size_t>(n);
    const double inv2dx = 0.5 * invdx;
    if (axis == 0) {
        const std::size_t a = f / nn, j = f % nn;
        out.normal = (v[(a + 1) * nn + j] - v[a * nn + j]) * invdx;
        const double t_lo = detail::lane_derivative(v, a * nn, 1, static_cast<int>(j), n, inv2dx);
        const double t_hi = detail::lane_derivative(v, (a + 1) * nn, 1, static_cast<int>(j), n, inv2dx);
        out.tangent = 0.5 * (t_lo + t_hi);
    } else {
        const std::size_t i = f / (nn - 1), b = f % (nn - 1);
        out.normal = (v[i * nn + b + 1] - v[i * nn + b]) * invdx;
        const double t_lo = detail::lane_derivative(v, b, nn, static_cast<int>(i), n, inv2dx);
        const double t_hi = detail::lane_derivative(v, b + 1, nn, static_cast<int>(i), n, inv2dx);
        out.tangent = 0.5 * (t_lo + t_hi);
    }
    return out;
}

}  // namespace plad::faces
