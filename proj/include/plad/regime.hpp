#pragma once

#include <optional>
#include <string>
#include <vector>

#include "plad/errors.hpp"

namespace plad {

// Parameter-space analysis for
//
//     d rho / dt = div(|grad rho|^{p-2} grad rho) + lambda div((K_alpha * rho) rho),
//     K_alpha(x) = x / |x|^alpha,
//
// on R^d. The entropy balance pits the p-Fisher dissipation against the
// interaction production; both scale the same way along mass-preserving
// dilations exactly when alpha equals the critical line
//
//     alpha_p = p (d + 1) - 2 d.
//
// Admissible exponents: p in (2d/(d+1), 3d/(d+1)) (so alpha_p in (0, d)),
// alpha in (0, d), lambda > 0, and alpha_p + alpha > 1 so that a moment
// exponent k in ((1-alpha)_+, min(alpha_p, 1)) exists for the tightness
// argument.
enum class Regime {
    DiffusionDominated,   // alpha <  alpha_p
    FairCompetition,      // alpha == alpha_p (within tolerance)
    AggregationDominated  // alpha >  alpha_p
};

const char* regime_name(Regime r);

struct RegimeParams {
    int d = 0;
    double p = 0, alpha = 0, lambda = 0;
    // derived
    double p_conj = 0;   // p' = p/(p-1)
    double alpha_p = 0;  // critical line value
    // Sobolev exponent machinery exists only for p < d (hence d >= 2):
    std::optional<double> p_star;  // d p/(d-p)
    std::optional<double> r;       // p_star / p_conj
    double k_lo = 0, k_hi = 0;     // admissible moment-exponent window
    std::vector<std::string> warnings;
};

double alpha_p(int d, double p);
double p_window_lo(int d);  // 2d/(d+1), maps to alpha_p = 0
double p_window_hi(int d);  // 3d/(d+1), maps to alpha_p = d

// Check all admissibility constraints; throws plad::Error with a distinct
// code per violated constraint. d = 1 is accepted but carries a warning: the
// p-window forces p > d there, so the L^q interpolation bound and the
// critical mass are not defined.
RegimeParams validate(int d, double p, double alpha, double lambda);

// Parameters for the pure-diffusion limit lambda = 0 (the p-heat equation).
// No interaction kernel exists, so alpha plays no role and the constraints
// tied to it (alpha range, criticality gap) drop out; the moment-exponent
// window becomes (0, min(alpha_p, 1)).
RegimeParams p_heat_params(int d, double p);

// Trichotomy against the critical line; |alpha - alpha_p| within
// 1e-12 * max(1, |alpha_p|) counts as FairCompetition. Independent of lambda.
Regime classify(const RegimeParams& rp);

// Sharp constant C in ||u||_{L^{q*}} <= C ||grad u||_{L^q} on R^d,
// q* = dq/(d-q), 1 < q < d (Gamma-function closed form; cross-checked
// against the extremal-profile quadrature oracle in plad::oracle).
double sobolev_constant(int d, double q);

// Sharp constant C in the diagonal bilinear bound
//   iint f(x) |x-y|^{-alpha} g(y) dx dy <= C ||f||_{L^q} ||g||_{L^q},
//   q = 2d/(2d - alpha), 0 < alpha < d.
double hls_constant(int d, double alpha);

struct CriticalConstants {
    double sobolev = 0;  // C^S_{d,p}
    double hls = 0;      // diagonal constant at exponent alpha_p
    double c_dp = 0;     // lambda-independent mass constant
    double m_c = 0;      // critical mass  c_dp * lambda^{-1/(3-p)}
};

// Mass threshold below which the dissipation term controls the interaction
// production for every density of that mass. Requires p < d (so d >= 2).
CriticalConstants critical_mass(const RegimeParams& rp);

// (d, p, alpha) = (2, 2, 2) is where the critical line meets the classical
// parabolic-elliptic Keller-Segel scaling: alpha_p(2, 2) = 2 = alpha.
bool is_keller_segel_point(int d, double p, double alpha);

inline constexpr double kClassifyTol = 1e-12;

}  // namespace plad
