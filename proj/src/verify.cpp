#include "plad/verify.hpp"

#include <cmath>
#include <cstdio>

#include "plad/csv.hpp"
#include "plad/errors.hpp"
#include "plad/field.hpp"
#include "plad/functionals.hpp"
#include "plad/regime.hpp"
#include "plad/rng.hpp"
#include "plad/sharp_oracles.hpp"
#include "plad/solver.hpp"

namespace plad {
namespace {

template <class... Args>
std::string fmt(const char* f, Args... args) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

void require_samples(int samples) {
    if (samples <= 0) fail(ErrorCode::BadArgument, "verify: samples must be positive");
}

DensityField draw_mixture(CounterRng& rng, const Grid& grid) {
    return discretize(Profile{random_gaussian_mixture(rng, grid.d)}, grid);
}

}  // namespace

VerifyResult verify_constants(double tol) {
    VerifyResult out;
    auto add_pair = [&](const std::string& check, double closed, double orc) {
        VerifyRow row;
        row.field_id = "closed-form";
        row.check = check;
        row.lhs = closed;
        row.rhs = orc;
        row.ratio = closed / orc;
        row.pass = std::abs(closed - orc) <= tol * std::abs(orc);
        out.add(std::move(row));
    };

    const std::pair<int, double> sobolev_pairs[] = {{2, 1.5}, {2, 5.0 / 3.0}, {2, 1.8},
                                                    {3, 2.0}, {3, 1.7},       {4, 2.5}};
    for (auto [d, q] : sobolev_pairs)
        add_pair(fmt("sobolev d=%d q=%.6g", d, q), sobolev_constant(d, q), oracle::sobolev_constant_oracle(d, q));

    const std::pair<int, double> hls_pairs[] = {{1, 0.5}, {2, 0.5}, {2, 1.0}, {2, 1.5}, {3, 1.0}, {3, 2.0}};
    for (auto [d, a] : hls_pairs)
        add_pair(fmt("hls d=%d alpha=%.6g", d, a), hls_constant(d, a), oracle::hls_constant_oracle(d, a));

    // m_c(lambda) = c_dp lambda^{-1/(3-p)} must hold to the last bit: c_dp
    // does not depend on lambda, so rescaling lambda by s multiplies m_c by
    // exactly pow(s, -1/(3-p)).
    const double p = 5.0 / 3.0;
    const double e = -1.0 / (3.0 - p);
    const CriticalConstants base = critical_mass(validate(2, p, 1.0, 1.0));
    for (double s : {2.0, 4.0, 0.5}) {
        const CriticalConstants scaled = critical_mass(validate(2, p, 1.0, s));
        VerifyRow row;
        row.field_id = "closed-form";
        row.check = fmt("critical-mass-scaling d=2 p=5/3 lambda=%.6g", s);
        row.lhs = scaled.m_c;
        row.rhs = base.c_dp * std::pow(s, e);
        row.ratio = row.lhs / row.rhs;
        row.pass = (row.lhs == row.rhs) && (base.m_c == base.c_dp);
        out.add(std::move(row));
    }
    return out;
}

VerifyResult verify_gns(int samples, std::uint64_t seed) {
    require_samples(samples);
    VerifyResult out;
    const RegimeParams params = validate(2, 5.0 / 3.0, 1.0, 1.0);
    const Grid grid = make_grid(2, 256, 8.0);
    const double r = *params.r;
    const double qs[] = {1.0, 0.5 * (1.0 + r), r};
    CounterRng rng{seed, 0};
    for (int i = 0; i < samples; ++i) {
        const DensityField field = draw_mixture(rng, grid);
        for (double q : qs) {
            const InequalityReport rep = check_gns(field, params, q);
            VerifyRow row;
            row.field_id = fmt("mix2d-%d", i);
            row.check = fmt("gns q=%.6g", q);
            row.lhs = rep.lhs;
            row.rhs = rep.rhs;
            row.ratio = rep.ratio;
            row.pass = rep.pass;
            out.add(std::move(row));
        }
    }
    return out;
}

VerifyResult verify_moment(int samples, std::uint64_t seed) {
    require_samples(samples);
    VerifyResult out;
    // Both branches of the estimate in both dimensions. p < 2 needs
    // k < alpha_p(d, p); p >= 2 takes any k in [0, 1] (p itself is
    // unconstrained above 2 for this lemma).
    const std::pair<double, double> cases_1d[] = {{1.4, 0.2}, {1.4, 0.6}, {2.0, 0.5}, {2.0, 1.0}, {2.3, 1.0}};
    const std::pair<double, double> cases_2d[] = {{5.0 / 3.0, 0.3}, {5.0 / 3.0, 0.7}, {1.9, 0.5},
                                                  {1.9, 1.2},       {2.3, 1.0}};
    CounterRng rng{seed, 0};

    auto run_dim = [&](int d, const Grid& grid, const std::pair<double, double>* cases, int ncases, int count) {
        for (int i = 0; i < count; ++i) {
            const DensityField field = draw_mixture(rng, grid);
            for (int c = 0; c < ncases; ++c) {
                const auto [p, k] = cases[c];
                const InequalityReport rep = check_moment_lemma(field, p, k);
                VerifyRow row;
                row.field_id = fmt("mix%dd-%d", d, i);
                row.check = fmt("moment p=%.6g k=%.6g", p, k);
                row.lhs = rep.lhs;
                row.rhs = rep.rhs;
                row.ratio = rep.ratio;
                row.pass = rep.pass;
                out.add(std::move(row));
            }
        }
    };
    const int n1 = (samples + 1) / 2;
    run_dim(1, make_grid(1, 512, 8.0), cases_1d, 5, n1);
    run_dim(2, make_grid(2, 256, 8.0), cases_2d, 5, samples - n1);
    return out;
}

VerifyResult verify_entropy_bound(int samples, std::uint64_t seed) {
    require_samples(samples);
    VerifyResult out;
    CounterRng rng{seed, 0};
    const double ks[] = {0.5, 1.0};

    auto run_dim = [&](int d, const Grid& grid, int count) {
        for (int i = 0; i < count; ++i) {
            const DensityField field = draw_mixture(rng, grid);
            for (double k : ks) {
                const InequalityReport rep = entropy_lower_bound_check(field, k);
                VerifyRow row;
                row.field_id = fmt("mix%dd-%d", d, i);
                row.check = fmt("entropy-bound k=%.6g", k);
                row.lhs = rep.lhs;
                row.rhs = rep.rhs;
                row.ratio = rep.ratio;
                row.pass = rep.pass;
                out.add(std::move(row));
            }
        }
    };
    const int n1 = (samples + 1) / 2;
    run_dim(1, make_grid(1, 512, 8.0), n1);
    run_dim(2, make_grid(2, 256, 8.0), samples - n1);

    // Near-tightness on the equality profile M exp(-nu_k <x>^k) at k = 1,
    // where the box tail of the profile is ~3e-5 of the mass. (At k = 0.5
    // the tail decays so slowly that no affordable box holds it; the
    // corpus rows above still exercise k = 0.5 as a strict inequality.)
    struct TightCase {
        int d, n;
        double half_width;
    };
    for (const TightCase& tc : {TightCase{1, 512, 10.0}, TightCase{2, 256, 8.0}}) {
        const Grid grid = make_grid(tc.d, tc.n, tc.half_width);
        const DensityField profile = entropy_equality_profile(grid, 1.0, 1.0);
        const InequalityReport rep = entropy_lower_bound_check(profile, 1.0);
        VerifyRow row;
        row.field_id = fmt("equality-profile-%dd", tc.d);
        row.check = "entropy-bound-tight k=1";
        row.lhs = rep.lhs;
        row.rhs = rep.rhs;
        row.ratio = rep.ratio;  // normalized slack; tightness = |slack| small
        row.pass = rep.pass && std::abs(rep.ratio) <= 1e-3;
        out.add(std::move(row));
    }
    return out;
}

// Regularization radius that makes the midpoint interaction sum a consistent
// quadrature of the continuum double integral in d = 1.
//
// The interaction sum samples |x - y|^(-alpha) at cell-center offsets k*dx and
// uses eps^(-alpha) at offset zero.  Near the diagonal the midpoint values
// undershoot the exact cell-pair averages
//     c_k = ((k+1)^(2-a) - 2 k^(2-a) + (k-1)^(2-a)) / ((1-a)(2-a)),
// which leaves an O(dx^(1-a)) error with coefficient
//     S = c_0 + 2 * sum_k (c_k - k^(-a))  -  (eps/dx)^(-a).
// Choosing eps = dx * S0^(-1/a) with S0 = c_0 + 2*sum_k(c_k - k^(-a)) zeroes
// that coefficient, so the quadrature error of the interaction term drops
// below the O(dx) level of the transport discretization.  Off-ball kernel
// values are untouched: eps < dx means every nonzero grid offset sees the raw
// kernel, and the attraction velocity keeps its odd symmetry.
static double consistent_interaction_eps(double alpha, double dx) {
    const double beta = 2.0 - alpha;
    const auto cell_avg = [&](double k) {
        return (std::pow(k + 1.0, beta) - 2.0 * std::pow(k, beta) + std::pow(k - 1.0, beta)) /
               ((1.0 - alpha) * beta);
    };
    double sum = 0.0;
    const int kmax = 20000;
    for (int k = kmax; k >= 1; --k) sum += cell_avg(static_cast<double>(k)) - std::pow(static_cast<double>(k), -alpha);
    // Euler-Maclaurin tail of c_k - k^(-a) ~ a(a+1)/12 * k^(-a-2).
    sum += alpha * (alpha + 1.0) / 12.0 *
           (std::pow(kmax, -alpha - 1.0) / (alpha + 1.0) - std::pow(kmax, -alpha - 2.0) / 2.0);
    const double s0 = 2.0 / ((1.0 - alpha) * beta) + 2.0 * sum;
    return dx * std::pow(s0, -1.0 / alpha);
}

VerifyResult verify_dissipation() {
    VerifyResult out;
    for (double lambda : {0.0, 0.5}) {
        double max_rel[2] = {0.0, 0.0};
        bool reached[2] = {false, false};
        int idx = 0;
        for (int n : {256, 512}) {
            SolverConfig cfg;
            cfg.params = (lambda == 0.0) ? p_heat_params(1, 1.4) : validate(1, 1.4, 0.5, lambda);
            cfg.grid = make_grid(1, n, 5.0);
            if (lambda > 0.0) cfg.kernel_eps = consistent_interaction_eps(0.5, cfg.grid.dx());
            cfg.t_end = 1e-4;
            cfg.diag_every = 50;
            GaussianMixture mix;
            mix.components.push_back(GaussianComponent{{0.0, 0.0}, 1.0, 1.0});
            const DensityField field = discretize(Profile{mix}, cfg.grid);
            const Trajectory traj = run(field, cfg);
            reached[idx] = traj.status == RunStatus::ReachedTEnd;
            double worst = 0.0;
            for (const StepDiagnostics& row : traj.rows) {
                if (row.t <= 0.0) continue;  // the t = 0 row carries no residual
                worst = std::max(worst, row.dissipation_residual / std::abs(row.p_fisher));
            }
            max_rel[idx++] = worst;
        }
        {
            VerifyRow row;
            row.field_id = "gauss-1d";
            row.check = fmt("dissipation-residual lambda=%.6g n=256", lambda);
            row.lhs = max_rel[0];
            row.rhs = 0.02;  // residual must stay under 2% of |I_p|
            row.ratio = row.lhs / row.rhs;
            row.pass = reached[0] && max_rel[0] <= 0.02;
            out.add(std::move(row));
        }
        {
            VerifyRow row;
            row.field_id = "gauss-1d";
            row.check = fmt("dissipation-order lambda=%.6g n256/n512", lambda);
            row.lhs = max_rel[0];
            row.rhs = max_rel[1];
            row.ratio = max_rel[0] / max_rel[1];
            row.pass = reached[0] && reached[1] && row.ratio >= 3.0;
            out.add(std::move(row));
        }
    }
    return out;
}

void write_verify_csv(const std::string& path, const VerifyResult& result, const std::string& config_hash) {
    CsvWriter w(path);
    w.row({"field_id", "check", "lhs", "rhs", "ratio", "pass"});
    for (const VerifyRow& r : result.rows)
        w.row({r.field_id, r.check, g17(r.lhs), g17(r.rhs), g17(r.ratio), r.pass ? "1" : "0"});
    w.comment("config_hash=" + config_hash);
    w.comment(std::string("all_pass=") + (result.all_pass ? "1" : "0"));
    w.close(path);
}

}  // namespace plad
