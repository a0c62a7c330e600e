#pragma once

#include <array>
#include <variant>
#include <vector>

#include "plad/grid.hpp"
#include "plad/rng.hpp"

namespace plad {

// Cell-averaged nonnegative density sampled at cell midpoints, row-major.
struct DensityField {
    Grid grid;
    std::vector<double> v;
};

// One cell-centered value per axis; comp[1] is unused when grid.d == 1.
struct VectorField {
    Grid grid;
    std::array<std::vector<double>, 2> comp;
};

DensityField make_field(const Grid& grid);
VectorField make_vector_field(const Grid& grid);

// Analytic initial profiles. Every profile carries its own target mass; the
// discretized field is close to that mass but only exact after rescaling
// (tails are truncated at the domain boundary and midpoint sampling is
// second order).
struct GaussianComponent {
    std::array<double, 2> center{0.0, 0.0};
    double sigma = 1.0;
    double mass = 1.0;
};

struct GaussianMixture {
    std::vector<GaussianComponent> components;
};

// Constant density on the axis-aligned box [lo, hi] (per axis), zero outside.
struct IndicatorProfile {
    std::array<double, 2> lo{-1.0, -1.0};
    std::array<double, 2> hi{1.0, 1.0};
    double mass = 1.0;
};

// Gaussian shell around |x| = radius; normalized on the grid, not in closed
// form, so the requested mass is hit exactly by construction.
struct RingProfile {
    double radius = 1.0;
    double width = 0.25;
    double mass = 1.0;
};

using Profile = std::variant<GaussianMixture, IndicatorProfile, RingProfile>;

DensityField discretize(const Profile& profile, const Grid& grid);

double mass(const DensityField& field);
double min_value(const DensityField& field);
double max_value(const DensityField& field);

// Multiplies the field so its discrete mass equals target up to roundoff
// (one multiply per cell, so a few ulp of relative error).
void rescale_to_mass(DensityField& field, double target);

// Cell-centered gradient: central differences inside, one-sided second-order
// stencils on the boundary rows.
VectorField gradient(const DensityField& field);

// 1-4 Gaussian bumps with centers in (-1.5, 1.5)^d, widths in (0.45, 1.1),
// masses in (0.2, 2). Drawing order is fixed so a seed pins the field.
GaussianMixture random_gaussian_mixture(CounterRng& rng, int d);

namespace ref {
double mass(const DensityField& field);
VectorField gradient(const DensityField& field);
}  // namespace ref

}  // namespace plad
