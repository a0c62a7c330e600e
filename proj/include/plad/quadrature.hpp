#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <utility>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "plad/errors.hpp"

namespace plad::quad {

// Adaptive quadrature on [a, b]; tanh-sinh tolerates integrable endpoint
// singularities, which is what the sharp-constant oracles need. Nodes land
// double-exponentially close to the endpoints, where an integrable
// singularity can still overflow in double precision (e.g. |r-s|^{-alpha}
// once the node rounds onto s = r); the true contribution of that sliver is
// below the quadrature weight ~1e-300, so non-finite evaluations are scored
// as zero. Callers must only pass convergent integrals — a divergent one
// would be silently truncated, which the closed-form cross-checks guard.
template <class F>
double integrate(F&& f, double a, double b, double tol = 1e-10) {
    boost::math::quadrature::tanh_sinh<double> integ;
    auto guarded = [&](double x) {
        const double v = f(x);
        return std::isfinite(v) ? v : 0.0;
    };
    return integ.integrate(guarded, a, b, tol);
}

// [a, inf) via r = a + (1-om)/om, om = 1 - u on u in [0, 1]. Slowly decaying
// tails turn into an algebraic endpoint singularity at u = 1 that tanh-sinh
// resolves only if om is known exactly there: u itself cannot represent
// distances below ~1e-16 from 1, so the node's exact endpoint distance xc
// (tanh-sinh's second functor argument, xc = b - x near b) supplies om.
// Without it, everything past om ~ 1e-16 evaluates as om = 0 and an
// integrand like om^{-3/4} silently loses ~1e-4 of its mass.
template <class F>
double integrate_half_line(F&& f, double a, double tol = 1e-10) {
    auto g = [&](double u, double xc) {
        double r, om;
        if (xc > 0.0) {  // right half: xc = 1 - u exactly, far below double's resolution at u
            om = xc;
            r = a + (1.0 - om) / om;
        } else {  // left half: u itself is exact
            om = 1.0 - u;
            r = a + u / om;
        }
        const double v = f(r) / (om * om);
        return std::isfinite(v) ? v : 0.0;
    };
    boost::math::quadrature::tanh_sinh<double> integ;
    return integ.integrate(g, 0.0, 1.0, tol);
}

// Root of a continuous function on a bracketing interval [lo, hi].
template <class F>
double find_root(F&& f, double lo, double hi) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0)) fail(ErrorCode::BadArgument, "find_root: interval does not bracket a root");
    boost::math::tools::eps_tolerance<double> tol(50);
    std::uintmax_t iters = 200;
    auto res = boost::math::tools::toms748_solve(std::forward<F>(f), lo, hi, flo, fhi, tol, iters);
    return 0.5 * (res.first + res.second);
}

// Maximize f on [lo, hi] by Brent search on -f; returns (argmax, max).
template <class F>
std::pair<double, double> maximize(F&& f, double lo, double hi) {
    auto neg = [&](double x) { return -f(x); };
    auto r = boost::math::tools::brent_find_minima(neg, lo, hi, 40);
    return {r.first, -r.second};
}

}  // namespace plad::quad
