#include "plad/field.hpp"

#include <cmath>
#include <cstddef>
#include <numbers>

#include "plad/errors.hpp"
#include "plad/reduce.hpp"

namespace plad {
namespace {

constexpr double kPi = std::numbers::pi;

double profile_value(const GaussianMixture& m, int d, double x0, double x1) {
    double acc = 0.0;
    for (const auto& c : m.components) {
        const double norm = std::pow(2.0 * kPi * c.sigma * c.sigma, -0.5 * d);
        double e = (x0 - c.center[0]) * (x0 - c.center[0]);
        if (d == 2) e += (x1 - c.center[1]) * (x1 - c.center[1]);
        acc += c.mass * norm * std::exp(-e / (2.0 * c.sigma * c.sigma));
    }
    return acc;
}

// Precondition lo < hi per axis is checked in discretize, before the
// parallel fill: an exception may not escape the OpenMP loop.
double profile_value(const IndicatorProfile& box, int d, double x0, double x1) {
    double vol = 1.0;
    for (int a = 0; a < d; ++a) vol *= box.hi[a] - box.lo[a];
    const bool inside =
        x0 >= box.lo[0] && x0 <= box.hi[0] && (d == 1 || (x1 >= box.lo[1] && x1 <= box.hi[1]));
    return inside ? box.mass / vol : 0.0;
}

double profile_value(const RingProfile& ring, int d, double x0, double x1) {
    const double r = d == 1 ? std::abs(x0) : std::hypot(x0, x1);
    const double z = (r - ring.radius) / ring.width;
    return std::exp(-0.5 * z * z);
}

template <class P>
void fill(DensityField& field, const P& profile) {
    const Grid& g = field.grid;
    const int n = g.n;
    if (g.d == 1) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) field.v[static_cast<std::size_t>(i)] = profile_value(profile, 1, g.coord(i), 0.0);
    } else {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) {
            const double x0 = g.coord(i);
            for (int j = 0; j < n; ++j) field.v[g.index(i, j)] = profile_value(profile, 2, x0, g.coord(j));
        }
    }
}

}  // namespace

DensityField make_field(const Grid& grid) { return DensityField{grid, std::vector<double>(grid.size(), 0.0)}; }

VectorField make_vector_field(const Grid& grid) {
    VectorField out{grid, {}};
    for (int a = 0; a < grid.d; ++a) out.comp[static_cast<std::size_t>(a)].assign(grid.size(), 0.0);
    return out;
}

DensityField discretize(const Profile& profile, const Grid& grid) {
    DensityField field = make_field(grid);
    std::visit(
        [&](const auto& p) {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, GaussianMixture>) {
                if (p.components.empty()) fail(ErrorCode::BadArgument, "mixture needs at least one component");
                for (const auto& c : p.components) {
                    if (!(c.sigma > 0.0)) fail(ErrorCode::BadArgument, "mixture component width must be positive");
                    if (!(c.mass > 0.0)) fail(ErrorCode::BadArgument, "mixture component mass must be positive");
                }
            }
            if constexpr (std::is_same_v<P, IndicatorProfile>) {
                for (int a = 0; a < grid.d; ++a)
                    if (!(p.hi[a] > p.lo[a]))
                        fail(ErrorCode::BadArgument, "indicator profile needs lo < hi per axis");
            }
            if constexpr (std::is_same_v<P, RingProfile>) {
                if (!(p.width > 0.0)) fail(ErrorCode::BadArgument, "ring width must be positive");
            }
            fill(field, p);
            if constexpr (std::is_same_v<P, RingProfile>) {
                rescale_to_mass(field, p.mass);  // shell mass has no tidy closed form on a box
            }
        },
        profile);
    return field;
}

double mass(const DensityField& field) {
    const double cell = std::pow(field.grid.dx(), field.grid.d);
    return blocked_sum(field.v.size(), [&](std::size_t i) { return field.v[i]; }) * cell;
}

double min_value(const DensityField& field) {
    return -max_reduce(field.v.size(), [&](std::size_t i) { return -field.v[i]; });
}

double max_value(const DensityField& field) {
    return max_reduce(field.v.size(), [&](std::size_t i) { return field.v[i]; });
}

void rescale_to_mass(DensityField& field, double target) {
    if (!(target > 0.0)) fail(ErrorCode::BadArgument, "target mass must be positive");
    const double m = mass(field);
    if (!(m > 0.0)) fail(ErrorCode::BadArgument, "cannot rescale a field with nonpositive mass");
    const double c = target / m;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(field.v.size()); ++i)
        field.v[static_cast<std::size_t>(i)] *= c;
}

namespace {

// Second-order one-sided stencils keep boundary gradients consistent with
// the interior central differences.
double diff_axis(const std::vector<double>& v, std::size_t base, std::size_t stride, int i, int n, double inv2dx) {
    auto at = [&](int k) { return v[base + static_cast<std::size_t>(k) * stride]; };
    if (i == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) * inv2dx;
    if (i == n - 1) return (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) * inv2dx;
    return (at(i + 1) - at(i - 1)) * inv2dx;
}

template <bool Parallel>
VectorField gradient_impl(const DensityField& field) {
    const Grid& g = field.grid;
    VectorField out = make_vector_field(g);
    const int n = g.n;
    const double inv2dx = 1.0 / (2.0 * g.dx());
    if (g.d == 1) {
#pragma omp parallel for schedule(static) if (Parallel)
        for (int i = 0; i < n; ++i)
            out.comp[0][static_cast<std::size_t>(i)] = diff_axis(field.v, 0, 1, i, n, inv2dx);
        return out;
    }
#pragma omp parallel for schedule(static) if (Parallel)
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const std::size_t idx = g.index(i, j);
            out.comp[0][idx] = diff_axis(field.v, static_cast<std::size_t>(j), static_cast<std::size_t>(n), i, n, inv2dx);
            out.comp[1][idx] = diff_axis(field.v, static_cast<std::size_t>(i) * static_cast<std::size_t>(n), 1, j, n, inv2dx);
        }
    }
    return out;
}

}  // namespace

VectorField gradient(const DensityField& field) { return gradient_impl<true>(field); }

GaussianMixture random_gaussian_mixture(CounterRng& rng, int d) {
    if (d != 1 && d != 2) fail(ErrorCode::InvalidDimension, "random mixture dimension must be 1 or 2");
    GaussianMixture mix;
    const int ncomp = rng.uniform_int(1, 4);
    for (int c = 0; c < ncomp; ++c) {
        GaussianComponent comp;
        comp.center[0] = rng.uniform(-1.5, 1.5);
        if (d == 2) comp.center[1] = rng.uniform(-1.5, 1.5);
        comp.sigma = rng.uniform(0.45, 1.1);
        comp.mass = rng.uniform(0.2, 2.0);
        mix.components.push_back(comp);
    }
    return mix;
}

namespace ref {

double mass(const DensityField& field) {
    const double cell = std::pow(field.grid.dx(), field.grid.d);
    return ref::blocked_sum(field.v.size(), [&](std::size_t i) { return field.v[i]; }) * cell;
}

VectorField gradient(const DensityField& field) { return gradient_impl<false>(field); }

}  // namespace ref
}  // namespace plad
