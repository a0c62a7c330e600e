#include "plad/regime.hpp"

#include <cmath>
#include <sstream>

namespace plad {

namespace {
constexpr double kPi = 3.14159265358979323846;

double gamma_ratio(double num1, double num2, double den1, double den2) {
    // Gamma(num1) Gamma(num2) / (Gamma(den1) Gamma(den2)) via lgamma
    return std::exp(std::lgamma(num1) + std::lgamma(num2) - std::lgamma(den1) - std::lgamma(den2));
}
}  // namespace

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::DiffusionDominated: return "DiffusionDominated";
        case Regime::FairCompetition: return "FairCompetition";
        case Regime::AggregationDominated: return "AggregationDominated";
    }
    return "?";
}

double alpha_p(int d, double p) { return p * (d + 1) - 2.0 * d; }

double p_window_lo(int d) { return 2.0 * d / (d + 1.0); }
double p_window_hi(int d) { return 3.0 * d / (d + 1.0); }

RegimeParams validate(int d, double p, double alpha, double lambda) {
    if (d < 1) fail(ErrorCode::InvalidDimension, "dimension must be a positive integer");
    const double plo = p_window_lo(d), phi = p_window_hi(d);
    if (!(p > plo && p < phi)) {
        std::ostringstream os;
        os << "p = " << p << " outside the admissible window (" << plo << ", " << phi << ") for d = " << d;
        fail(ErrorCode::POutOfWindow, os.str());
    }
    if (!(alpha > 0.0 && alpha < d)) {
        std::ostringstream os;
        os << "alpha = " << alpha << " outside (0, " << d << ")";
        fail(ErrorCode::AlphaOutOfRange, os.str());
    }
    if (!(lambda > 0.0)) fail(ErrorCode::NonpositiveLambda, "lambda must be positive");

    RegimeParams rp;
    rp.d = d;
    rp.p = p;
    rp.alpha = alpha;
    rp.lambda = lambda;
    rp.p_conj = p / (p - 1.0);
    rp.alpha_p = alpha_p(d, p);

    if (rp.alpha_p + alpha <= 1.0) {
        std::ostringstream os;
        os << "alpha_p + alpha = " << rp.alpha_p + alpha << " <= 1: no moment exponent makes the entropy tight";
        fail(ErrorCode::CriticalityGapTooSmall, os.str());
    }
    rp.k_lo = std::max(1.0 - alpha, 0.0);
    rp.k_hi = std::min(rp.alpha_p, 1.0);
    if (!(rp.k_lo < rp.k_hi)) fail(ErrorCode::EmptyKWindow, "empty moment-exponent window");

    if (p < d) {
        rp.p_star = d * p / (d - p);
        rp.r = *rp.p_star / rp.p_conj;
    }
    if (d == 1) {
        rp.warnings.push_back(
            "d = 1: the admissible window forces p > d, so the Sobolev exponent, the L^q "
            "interpolation bound and the critical mass are not defined; only the moment and "
            "entropy estimates apply");
    }
    return rp;
}

RegimeParams p_heat_params(int d, double p) {
    if (d < 1) fail(ErrorCode::InvalidDimension, "dimension must be a positive integer");
    const double plo = p_window_lo(d), phi = p_window_hi(d);
    if (!(p > plo && p < phi)) {
        std::ostringstream os;
        os << "p = " << p << " outside the admissible window (" << plo << ", " << phi << ") for d = " << d;
        fail(ErrorCode::POutOfWindow, os.str());
    }
    RegimeParams rp;
    rp.d = d;
    rp.p = p;
    rp.alpha = 0.0;
    rp.lambda = 0.0;
    rp.p_conj = p / (p - 1.0);
    rp.alpha_p = alpha_p(d, p);
    rp.k_lo = 0.0;
    rp.k_hi = std::min(rp.alpha_p, 1.0);  // > 0 inside the p-window
    if (p < d) {
        rp.p_star = d * p / (d - p);
        rp.r = *rp.p_star / rp.p_conj;
    }
    return rp;
}

Regime classify(const RegimeParams& rp) {
    const double tol = kClassifyTol * std::max(1.0, std::abs(rp.alpha_p));
    if (std::abs(rp.alpha - rp.alpha_p) <= tol) return Regime::FairCompetition;
    return rp.alpha < rp.alpha_p ? Regime::DiffusionDominated : Regime::AggregationDominated;
}

double sobolev_constant(int d, double q) {
    if (d < 2) fail(ErrorCode::InvalidDimension, "sharp Sobolev constant needs d >= 2");
    if (!(q > 1.0 && q < d))
        fail(ErrorCode::BadArgument, "sharp Sobolev constant needs 1 < q < d");
    const double dd = d;
    const double ratio = gamma_ratio(1.0 + dd / 2.0, dd, dd / q, 1.0 + dd - dd / q);
    return std::pow(kPi, -0.5) * std::pow(dd, -1.0 / q) *
           std::pow((q - 1.0) / (dd - q), 1.0 - 1.0 / q) * std::pow(ratio, 1.0 / dd);
}

double hls_constant(int d, double alpha) {
    if (d < 1) fail(ErrorCode::InvalidDimension, "dimension must be a positive integer");
    if (!(alpha > 0.0 && alpha < d))
        fail(ErrorCode::AlphaOutOfRange, "diagonal HLS constant needs 0 < alpha < d");
    const double dd = d;
    const double front = std::exp(std::lgamma(dd / 2.0 - alpha / 2.0) - std::lgamma(dd - alpha / 2.0));
    const double tail = std::exp(std::lgamma(dd / 2.0) - std::lgamma(dd));
    return std::pow(kPi, alpha / 2.0) * front * std::pow(tail, alpha / dd - 1.0);
}

CriticalConstants critical_mass(const RegimeParams& rp) {
    if (!(rp.p < rp.d))
        fail(ErrorCode::BadArgument,
             "critical mass needs the Sobolev exponent, i.e. p < d (unavailable for d = 1)");
    CriticalConstants c;
    c.sobolev = sobolev_constant(rp.d, rp.p);
    c.hls = hls_constant(rp.d, rp.alpha_p);  // interaction is compared at the critical line
    const double base = (rp.d - rp.alpha_p) * c.hls * std::pow(c.sobolev / rp.p_conj, rp.p);
    const double e = -1.0 / (3.0 - rp.p);
    c.c_dp = std::pow(base, e);
    c.m_c = c.c_dp * std::pow(rp.lambda, e);
    return c;
}

bool is_keller_segel_point(int d, double p, double alpha) {
    return d == 2 && std::abs(p - 2.0) <= kClassifyTol && std::abs(alpha - 2.0) <= kClassifyTol;
}

}  // namespace plad
