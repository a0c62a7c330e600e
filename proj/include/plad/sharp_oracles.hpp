#pragma once

namespace plad::oracle {

// Quadrature-only evaluations of the sharp constants, kept deliberately
// independent of the Gamma-function closed forms in plad/regime.hpp so the
// two routes can be cross-checked against each other.

// Ratio ||h||_{q*} / ||grad h||_q maximized over the extremal family
//   h_b(x) = (1 + b |x|^{q/(q-1)})^{1 - d/q},   b > 0,
// by a 1-D search in log b with radial quadrature for the norms. (The family
// is a single dilation orbit, so the ratio is flat in b; the search is a
// consistency guard, not a real optimization problem.)
double sobolev_constant_oracle(int d, double q);

// Ratio  iint f(x)|x-y|^{-alpha} f(y) dx dy / ||f||_q^2  on the extremal
//   f(x) = (1 + |x|^2)^{-(2d-alpha)/2},   q = 2d/(2d - alpha),
// via nested adaptive quadrature after radial reduction. The angular factor
// is evaluated as ((r-s)^2 + 4 r s sin^2(theta/2))^{-alpha/2}; the naive
// r^2 + s^2 - 2 r s cos(theta) form cancels catastrophically near r = s.
double hls_constant_oracle(int d, double alpha);

}  // namespace plad::oracle
