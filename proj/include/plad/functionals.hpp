#pragma once

#include <utility>
#include <vector>

#include "plad/convolution.hpp"
#include "plad/field.hpp"
#include "plad/regime.hpp"

namespace plad {

// The inequality checks compare continuum functionals through discrete sums
// on compactly supported, well-resolved fields; kTolGrid is the relative
// slack granted for that (it shrinks under grid refinement).
inline constexpr double kTolGrid = 1e-3;

// Sum of rho ln(rho) * dx^d with 0 ln 0 = 0.
double entropy(const DensityField& field);

// I_p(rho) = integral of |grad rho|^p / rho, evaluated through the
// equivalent (p')^p || grad(rho^{1/p'}) ||_p^p form: face-gradient sums of
// w = rho^{1/p'} (full face-gradient magnitude, averaged over the d face
// families), robust at rho = 0.
double p_fisher(const DensityField& field, double p);

// Integral of rho(x) <x>^k with the smooth bracket <x> = sqrt(1 + |x|^2).
double moment(const DensityField& field, double k);

// (sum rho^q dx^d)^{1/q}, q >= 1.
double lq_norm(const DensityField& field, double q);

// Double sum rho_i rho_j W(x_i - x_j) dx^{2d} with W(z) = |z|^{-alpha} off
// the diagonal and W(0) = eps^{-alpha}. The two-argument form is the direct
// deterministic definition; the engine form is the FFT fast path over the
// identically sampled kernel.
double interaction_energy(const DensityField& field, const KernelSpec& kernel);
double interaction_energy(const DensityField& field, ConvolutionEngine& engine);

// The unique nu > 0 with integral of exp(-nu <x>^k) over R^d equal to 1;
// requires k > 0. Root residual is verified to 1e-10.
double nu_k(int d, double k);

struct FunctionalReport {
    double mass = 0, entropy = 0, p_fisher = 0, moment_k = 0, interaction_energy = 0;
    std::vector<std::pair<double, double>> lq_norms;  // (q, value)
};

FunctionalReport functional_report(const DensityField& field, double p, double k, const std::vector<double>& qs,
                                   const KernelSpec& kernel);

// lhs <= rhs checks report ratio = lhs/rhs (0 when both sides vanish) and
// pass when ratio <= 1 + tol. The lower-bound check reports the normalized
// slack (lhs - rhs) / max(1, |lhs|, |rhs|) in `ratio` and passes when the
// slack is above -tol; near-tightness means |ratio| small.
struct InequalityReport {
    double lhs = 0, rhs = 0, ratio = 0, tol = kTolGrid;
    bool pass = false;
};

// Interpolation bound  ||rho||_q <= (C^S/p')^{r'p'/q'} M^{1 - r'/q'}
// I_p^{r'p'/(q'p)} for q in [1, r], r = p*/p'. Needs the Sobolev exponent
// machinery, hence p < d.
InequalityReport check_gns(const DensityField& field, const RegimeParams& params, double q);

// Explicit-constant forms of the moment-derivative estimate, both branches:
//   p >= 2 (k in [0,1]):
//     int |grad rho|^{p-2} grad rho . grad m <= k (||rho||_{p-1} I_p)^{1/p'}
//   p < 2 (k in (0, alpha_p(d,p))):
//     ... <= k (int rho m)^{1/p'} I_p^{1/p'} (int <x>^{(k-p)/(2-p)} dx)^{2/p-1}
// with m = <x>^k; the weight integral is finite exactly on that k-window.
InequalityReport check_moment_lemma(const DensityField& field, double p, double k);

// Carleman-type bound  entropy >= M ln M - nu_k * moment_k  (k > 0), with
// equality exactly on rho = M exp(-nu_k <x>^k).
InequalityReport entropy_lower_bound_check(const DensityField& field, double k);

// The equality profile of the bound above, sampled on the grid (mass is
// `target_mass` up to quadrature/truncation error, deliberately unrescaled).
DensityField entropy_equality_profile(const Grid& grid, double k, double target_mass);

namespace ref {
double entropy(const DensityField& field);
double p_fisher(const DensityField& field, double p);
double interaction_energy(const DensityField& field, const KernelSpec& kernel);
}  // namespace ref

}  // namespace plad
