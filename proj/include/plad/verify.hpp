#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace plad {

struct VerifyRow {
    std::string field_id;
    std::string check;
    double lhs = 0, rhs = 0, ratio = 0;
    bool pass = false;
};

struct VerifyResult {
    std::vector<VerifyRow> rows;
    bool all_pass = true;

    void add(VerifyRow row) {
        all_pass = all_pass && row.pass;
        rows.push_back(std::move(row));
    }
};

// Closed-form sharp constants against the extremal-profile quadrature
// oracles (six pairs each), plus the exact lambda-scaling of the critical
// mass. lhs = closed form, rhs = oracle, pass at relative gap <= tol.
VerifyResult verify_constants(double tol = 1e-5);

// Interpolation-inequality ratio on seeded random Gaussian mixtures
// (d = 2, n = 256, L = 8, p = 5/3) at q = 1, mid, r. The bound needs p < d,
// so this suite is d = 2 only.
VerifyResult verify_gns(int samples, std::uint64_t seed);

// Moment-derivative estimate on the mixture corpus, d in {1, 2}, covering
// both branches: p < 2 within k in (0, alpha_p) and p >= 2 with k in [0, 1].
VerifyResult verify_moment(int samples, std::uint64_t seed);

// Entropy lower bound on the corpus (k in {0.5, 1}) plus near-tightness on
// the equality profile M exp(-nu_k <x>^k).
VerifyResult verify_entropy_bound(int samples, std::uint64_t seed);

// Entropy-dissipation balance: d = 1, p = 1.4, lambda in {0, 0.5}, Gaussian
// start, n in {256, 512}. Checks max residual / I_p <= 2% at n = 256 and a
// n256/n512 residual ratio >= 3 (better than first-order shrinkage).
VerifyResult verify_dissipation();

void write_verify_csv(const std::string& path, const VerifyResult& result, const std::string& config_hash);

}  // namespace plad
