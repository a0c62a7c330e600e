#include "plad/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "plad/errors.hpp"
#include "plad/face_ops.hpp"
#include "plad/quadrature.hpp"
#include "plad/reduce.hpp"

namespace plad {
namespace {

constexpr double kPi = std::numbers::pi;

double sphere_area(int d) { return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d); }

double cell_measure(const Grid& g) { return std::pow(g.dx(), g.d); }

// <x>^k at the cell with linear index idx.
double bracket_pow(const Grid& g, std::size_t idx, double k) {
    double r2;
    if (g.d == 1) {
        const double x = g.coord(static_cast<int>(idx));
        r2 = x * x;
    } else {
        const auto n = static_cast<std::size_t>(g.n);
        const double x0 = g.coord(static_cast<int>(idx / n));
        const double x1 = g.coord(static_cast<int>(idx % n));
        r2 = x0 * x0 + x1 * x1;
    }
    return std::pow(1.0 + r2, 0.5 * k);
}

template <class Sum>
double entropy_impl(const DensityField& field, Sum&& sum) {
    const double e = sum(field.v.size(), [&](std::size_t i) {
        const double v = field.v[i];
        return v > 0.0 ? v * std::log(v) : 0.0;
    });
    return e * cell_measure(field.grid);
}

template <bool Parallel, class Sum>
double p_fisher_impl(const DensityField& field, double p, Sum&& sum) {
    if (!(p > 1.0)) fail(ErrorCode::POutOfWindow, "p_fisher needs p > 1");
    const Grid& g = field.grid;
    const double ip_conj = (p - 1.0) / p;  // 1/p'
    std::vector<double> w(field.v.size());
#pragma omp parallel for schedule(static) if (Parallel)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(w.size()); ++i)
        w[static_cast<std::size_t>(i)] = std::pow(std::max(field.v[static_cast<std::size_t>(i)], 0.0), ip_conj);
    double acc = 0.0;
    for (int a = 0; a < g.d; ++a) {
        acc += sum(faces::count(g, a),
                   [&](std::size_t f) { return std::pow(faces::gradient_at(w, g, a, f).magnitude(), p); });
    }
    // Each face family tiles the domain once, so the per-axis magnitudes are
    // averaged rather than added.
    const double p_conj = p / (p - 1.0);
    return std::pow(p_conj, p) * acc * cell_measure(g) / g.d;
}

// Scalar-kernel offset table: W(o dx) for all cell offsets, W(0) = eps^{-alpha}.
std::vector<double> scalar_offset_table(const Grid& g, const KernelSpec& k) {
    const int n = g.n;
    const double dx = g.dx();
    if (g.d == 1) {
        std::vector<double> tab(static_cast<std::size_t>(2 * n - 1));
#pragma omp parallel for schedule(static)
        for (int o = -(n - 1); o <= n - 1; ++o) {
            const double r = std::abs(o) * dx;
            tab[static_cast<std::size_t>(o + n - 1)] = std::pow(o == 0 ? k.eps : r, -k.alpha);
        }
        return tab;
    }
    const int w = 2 * n - 1;
    std::vector<double> tab(static_cast<std::size_t>(w) * static_cast<std::size_t>(w));
#pragma omp parallel for schedule(static)
    for (int o1 = -(n - 1); o1 <= n - 1; ++o1)
        for (int o2 = -(n - 1); o2 <= n - 1; ++o2) {
            const double r = std::hypot(o1 * dx, o2 * dx);
            tab[static_cast<std::size_t>(o1 + n - 1) * w + static_cast<std::size_t>(o2 + n - 1)] =
                std::pow((o1 == 0 && o2 == 0) ? k.eps : r, -k.alpha);
        }
    return tab;
}

template <class Sum>
double interaction_impl(const DensityField& field, const KernelSpec& kernel, Sum&& sum) {
    const Grid& g = field.grid;
    if (!(kernel.alpha > 0.0 && kernel.alpha < g.d))
        fail(ErrorCode::AlphaOutOfRange, "interaction_energy needs alpha in (0, d)");
    if (!(kernel.eps > 0.0)) fail(ErrorCode::BadArgument, "interaction_energy needs eps > 0");
    const std::vector<double> tab = scalar_offset_table(g, kernel);
    const int n = g.n;
    const double* rho = field.v.data();
    double e;
    if (g.d == 1) {
        // term(i) folds the diagonal and both (i,j)/(j,i) appearances of each
        // unordered pair, so a single pass over i covers the double sum.
        e = sum(static_cast<std::size_t>(n), [&](std::size_t i) {
            const double* row = tab.data() + (n - 1 - static_cast<int>(i));
            double cross = 0.0;
            for (std::size_t j = i + 1; j < static_cast<std::size_t>(n); ++j) cross += row[j] * rho[j];
            return rho[i] * (tab[static_cast<std::size_t>(n - 1)] * rho[i] + 2.0 * cross);
        });
    } else {
        const int w = 2 * n - 1;
        const std::size_t center = static_cast<std::size_t>(n - 1) * w + static_cast<std::size_t>(n - 1);
        e = sum(g.size(), [&](std::size_t i) {
            const int i1 = static_cast<int>(i) / n, i2 = static_cast<int>(i) % n;
            double cross = 0.0;
            for (int j1 = i1; j1 < n; ++j1) {
                const double* trow = tab.data() + static_cast<std::size_t>(j1 - i1 + n - 1) * w + (n - 1 - i2);
                const double* rrow = rho + static_cast<std::size_t>(j1) * n;
                for (int j2 = (j1 == i1 ? i2 + 1 : 0); j2 < n; ++j2) cross += trow[j2] * rrow[j2];
            }
            return rho[i] * (tab[center] * rho[i] + 2.0 * cross);
        });
    }
    const double cell = cell_measure(g);
    return e * cell * cell;
}

}  // namespace

double entropy(const DensityField& field) {
    return entropy_impl(field, [](std::size_t n, auto&& t) { return blocked_sum(n, t); });
}

double p_fisher(const DensityField& field, double p) {
    return p_fisher_impl<true>(field, p, [](std::size_t n, auto&& t) { return blocked_sum(n, t); });
}

double moment(const DensityField& field, double k) {
    if (!(k >= 0.0)) fail(ErrorCode::BadArgument, "moment needs k >= 0");
    const Grid& g = field.grid;
    const double m =
        blocked_sum(field.v.size(), [&](std::size_t i) { return field.v[i] * bracket_pow(g, i, k); });
    return m * cell_measure(g);
}

double lq_norm(const DensityField& field, double q) {
    if (!(q >= 1.0)) fail(ErrorCode::BadArgument, "lq_norm needs q >= 1");
    const double s =
        blocked_sum(field.v.size(), [&](std::size_t i) { return std::pow(std::max(field.v[i], 0.0), q); });
    return std::pow(s * cell_measure(field.grid), 1.0 / q);
}

double interaction_energy(const DensityField& field, const KernelSpec& kernel) {
    return interaction_impl(field, kernel, [](std::size_t n, auto&& t) { return blocked_sum(n, t); });
}

double interaction_energy(const DensityField& field, ConvolutionEngine& engine) {
    const std::vector<double> phi = engine.potential(field);  // includes one dx^d
    const double e = blocked_sum(field.v.size(), [&](std::size_t i) { return field.v[i] * phi[i]; });
    return e * cell_measure(field.grid);
}

double nu_k(int d, double k) {
    if (d < 1) fail(ErrorCode::InvalidDimension, "nu_k needs d >= 1");
    if (!(k > 0.0)) fail(ErrorCode::BadArgument, "nu_k needs k > 0 (the normalizing integral diverges otherwise)");
    const double omega = sphere_area(d);
    auto normalization = [&](double nu) {
        // e^{-nu <r>^k} reaches e^{-80} near R; integrate decade by decade so
        // the stretched-exponential middle stays resolved.
        const double R = std::pow(80.0 / nu, 1.0 / k) + 20.0;
        auto g = [&](double r) {
            return std::exp(-nu * std::pow(1.0 + r * r, 0.5 * k)) * std::pow(r, d - 1.0);
        };
        double acc = 0.0, a = 0.0, b = 1.0;
        while (a < R) {
            const double ub = std::min(b, R);
            acc += quad::integrate(g, a, ub, 1e-12);
            a = ub;
            b *= 10.0;
        }
        return omega * acc - 1.0;
    };
    double lo = 1.0, hi = 1.0;
    for (int it = 0; normalization(hi) > 0.0; ++it) {
        hi *= 2.0;
        if (it > 60) fail(ErrorCode::InternalError, "nu_k bracketing failed (upper)");
    }
    for (int it = 0; normalization(lo) < 0.0; ++it) {
        lo *= 0.5;
        if (it > 60) fail(ErrorCode::InternalError, "nu_k bracketing failed (lower)");
    }
    const double nu = quad::find_root(normalization, lo, hi);
    if (std::abs(normalization(nu)) > 1e-10) fail(ErrorCode::InternalError, "nu_k residual exceeds 1e-10");
    return nu;
}

FunctionalReport functional_report(const DensityField& field, double p, double k, const std::vector<double>& qs,
                                   const KernelSpec& kernel) {
    FunctionalReport rep;
    rep.mass = mass(field);
    rep.entropy = entropy(field);
    rep.p_fisher = p_fisher(field, p);
    rep.moment_k = moment(field, k);
    rep.interaction_energy = interaction_energy(field, kernel);
    for (double q : qs) rep.lq_norms.emplace_back(q, lq_norm(field, q));
    return rep;
}

InequalityReport check_gns(const DensityField& field, const RegimeParams& params, double q) {
    if (field.grid.d != params.d) fail(ErrorCode::BadArgument, "check_gns: field dimension != params dimension");
    if (!params.r)
        fail(ErrorCode::BadArgument,
             "check_gns needs the interpolation exponent r = p*/p', which requires p < d (so d >= 2)");
    const double r = *params.r;
    if (!(q >= 1.0 && q <= r * (1.0 + 1e-12)))
        fail(ErrorCode::BadArgument, "check_gns needs q in [1, r]");

    const double iq = 1.0 - 1.0 / q;  // 1/q'
    const double rprime = r / (r - 1.0);
    const double e_const = rprime * params.p_conj * iq;
    const double e_mass = 1.0 - rprime * iq;
    const double e_fisher = e_const / params.p;

    const double cs = sobolev_constant(params.d, params.p);
    const double m = mass(field);
    const double ip = p_fisher(field, params.p);

    InequalityReport rep;
    rep.lhs = lq_norm(field, q);
    rep.rhs = std::pow(cs / params.p_conj, e_const) * std::pow(m, e_mass) * std::pow(ip, e_fisher);
    rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : (rep.lhs <= 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    rep.pass = rep.ratio <= 1.0 + rep.tol;
    return rep;
}

InequalityReport check_moment_lemma(const DensityField& field, double p, double k) {
    const Grid& g = field.grid;
    const int d = g.d;
    if (!(p > 1.0)) fail(ErrorCode::POutOfWindow, "check_moment_lemma needs p > 1");
    if (p >= 2.0) {
        if (!(k >= 0.0 && k <= 1.0)) fail(ErrorCode::BadArgument, "for p >= 2 the lemma needs k in [0, 1]");
    } else {
        const double ap = alpha_p(d, p);
        if (!(k > 0.0 && k < ap))
            fail(ErrorCode::BadArgument, "for p < 2 the lemma needs k in (0, alpha_p(d, p)) — "
                                         "the weight integral is finite exactly there");
    }

    // Left side: sum over faces of |grad rho|^{p-2} (grad rho . n)(grad m . n),
    // each face family supplying its axis component of the dot product.
    std::vector<double> mvals(g.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(mvals.size()); ++i)
        mvals[static_cast<std::size_t>(i)] = bracket_pow(g, static_cast<std::size_t>(i), k);
    const double invdx = 1.0 / g.dx();
    double lhs = 0.0;
    for (int a = 0; a < d; ++a) {
        lhs += blocked_sum(faces::count(g, a), [&](std::size_t f) {
            const faces::FaceGradient fg = faces::gradient_at(field.v, g, a, f);
            if (fg.normal == 0.0) return 0.0;
            const auto [lo_cell, hi_cell] = faces::cells(g, a, f);
            const double dm = (mvals[hi_cell] - mvals[lo_cell]) * invdx;
            return std::pow(fg.magnitude(), p - 2.0) * fg.normal * dm;
        });
    }
    lhs *= cell_measure(g);

    const double ip_conj = (p - 1.0) / p;  // 1/p'
    const double ip = p_fisher(field, p);
    double rhs;
    if (p >= 2.0) {
        rhs = k * std::pow(lq_norm(field, p - 1.0) * ip, ip_conj);
    } else {
        const double beta = (k - p) / (2.0 - p);  // < -d on the admissible window
        const double w_rad = quad::integrate_half_line(
            [&](double r) { return std::pow(1.0 + r * r, 0.5 * beta) * std::pow(r, d - 1.0); }, 0.0);
        const double weight = sphere_area(d) * w_rad;
        rhs = k * std::pow(moment(field, k), ip_conj) * std::pow(ip, ip_conj) * std::pow(weight, 2.0 / p - 1.0);
    }

    InequalityReport rep;
    rep.lhs = lhs;
    rep.rhs = rhs;
    rep.ratio = rhs > 0.0 ? lhs / rhs : (lhs <= 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    rep.pass = rhs > 0.0 ? rep.ratio <= 1.0 + rep.tol : lhs <= 0.0;
    return rep;
}

InequalityReport entropy_lower_bound_check(const DensityField& field, double k) {
    const double m = mass(field);
    if (!(m > 0.0)) fail(ErrorCode::BadArgument, "entropy lower bound needs positive mass");
    InequalityReport rep;
    rep.lhs = entropy(field);
    rep.rhs = m * std::log(m) - nu_k(field.grid.d, k) * moment(field, k);
    const double scale = std::max({1.0, std::abs(rep.lhs), std::abs(rep.rhs)});
    rep.ratio = (rep.lhs - rep.rhs) / scale;  // normalized slack, >= -tol to pass
    rep.pass = rep.ratio >= -rep.tol;
    return rep;
}

DensityField entropy_equality_profile(const Grid& grid, double k, double target_mass) {
    if (!(target_mass > 0.0)) fail(ErrorCode::BadArgument, "target mass must be positive");
    const double nu = nu_k(grid.d, k);
    DensityField field = make_field(grid);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(field.v.size()); ++i)
        field.v[static_cast<std::size_t>(i)] =
            target_mass * std::exp(-nu * bracket_pow(grid, static_cast<std::size_t>(i), k));
    return field;
}

namespace ref {

double entropy(const DensityField& field) {
    return entropy_impl(field, [](std::size_t n, auto&& t) { return ref::blocked_sum(n, t); });
}

double p_fisher(const DensityField& field, double p) {
    return p_fisher_impl<false>(field, p, [](std::size_t n, auto&& t) { return ref::blocked_sum(n, t); });
}

double interaction_energy(const DensityField& field, const KernelSpec& kernel) {
    return interaction_impl(field, kernel, [](std::size_t n, auto&& t) { return ref::blocked_sum(n, t); });
}

}  // namespace ref
}  // namespace plad
