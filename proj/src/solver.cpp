#include "plad/solver.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>

#include "plad/csv.hpp"
#include "plad/errors.hpp"
#include "plad/face_ops.hpp"
#include "plad/functionals.hpp"
#include "plad/reduce.hpp"

namespace plad {
namespace {

// phi_delta(|G|) from the squared gradient: (g2 + delta^2)^{(p-2)/2}.
// p = 5/3 gets a dedicated path because z^{-1/6} = 1/sqrt(cbrt(z)) is about
// three times cheaper than pow and this is the hot loop of every run.
struct PhiDelta {
    double half_pm2;  // (p - 2) / 2
    double delta2;
    bool third_root;

    PhiDelta(double p, double delta)
        : half_pm2(0.5 * (p - 2.0)), delta2(delta * delta), third_root(std::abs(half_pm2 + 1.0 / 6.0) < 1e-14) {}

    double operator()(double g2) const {
        const double z = g2 + delta2;
        if (third_root) return 1.0 / std::sqrt(std::cbrt(z));
        return std::pow(z, half_pm2);
    }
};

template <bool Parallel>
void diffusive_flux_into(const DensityField& field, double p, double delta, FaceFlux& out, double* maxphi) {
    if (!(p > 1.0)) fail(ErrorCode::POutOfWindow, "diffusive flux needs p > 1");
    if (delta < 0.0) fail(ErrorCode::BadArgument, "delta must be >= 0");
    const Grid& g = field.grid;
    const PhiDelta phi(p, delta);
    double phimax = 0.0;
    for (int a = 0; a < g.d; ++a) {
        auto& fx = out.axis[static_cast<std::size_t>(a)];
        fx.assign(faces::count(g, a), 0.0);
        const auto nf = static_cast<std::ptrdiff_t>(fx.size());
#pragma omp parallel for schedule(static) reduction(max : phimax) if (Parallel)
        for (std::ptrdiff_t f = 0; f < nf; ++f) {
            const faces::FaceGradient fg = faces::gradient_at(field.v, g, a, static_cast<std::size_t>(f));
            const double g2 = fg.magnitude2();
            if (g2 == 0.0 && delta == 0.0) continue;  // flux 0; avoids inf * 0 for p < 2
            const double ph = phi(g2);
            fx[static_cast<std::size_t>(f)] = ph * fg.normal;
            phimax = std::max(phimax, ph);
        }
    }
    if (maxphi) *maxphi = phimax;
}

inline double minmod(double x, double y) {
    if (x > 0.0 && y > 0.0) return std::min(x, y);
    if (x < 0.0 && y < 0.0) return std::max(x, y);
    return 0.0;
}

template <bool Parallel>
void aggregation_flux_into(const DensityField& field, const VectorField& velocity, double lambda, FaceFlux& out,
                           bool accumulate) {
    const Grid& g = field.grid;
    if (!(velocity.grid == g)) fail(ErrorCode::BadArgument, "velocity grid does not match field");
    const auto n = static_cast<std::size_t>(g.n);
    for (int a = 0; a < g.d; ++a) {
        auto& fx = out.axis[static_cast<std::size_t>(a)];
        if (!accumulate) fx.assign(faces::count(g, a), 0.0);
        const auto& v = velocity.comp[static_cast<std::size_t>(a)];
        // linear index distance between along-axis neighbours
        const std::size_t stride = (g.d == 1 || a == 1) ? 1 : n;
        const auto nf = static_cast<std::ptrdiff_t>(faces::count(g, a));
#pragma omp parallel for schedule(static) if (Parallel)
        for (std::ptrdiff_t f = 0; f < nf; ++f) {
            const auto fi = static_cast<std::size_t>(f);
            const auto [lo, hi] = faces::cells(g, a, fi);
            // along-axis position of the lower cell, 0 .. n-2
            const std::size_t pos = g.d == 1 ? fi : (a == 0 ? fi / n : fi % (n - 1));
            const double vf = 0.5 * (v[lo] + v[hi]);
            // Transport velocity is -lambda v, so vf < 0 means flow toward
            // +axis and the lower cell donates. The donor value is a
            // minmod-limited linear reconstruction at the face: the slope
            // vanishes at extrema and next to the boundary, the face value
            // stays between the donor value and the two-cell average (so it
            // is nonnegative whenever the cells are), and in smooth regions
            // the transport term becomes second order in dx, matching the
            // diffusive part.
            const double jump = field.v[hi] - field.v[lo];
            double up;
            if (vf < 0.0) {
                up = field.v[lo];
                if (pos >= 1) up += 0.5 * minmod(field.v[lo] - field.v[lo - stride], jump);
            } else {
                up = field.v[hi];
                if (pos + 2 < n) up -= 0.5 * minmod(field.v[hi + stride] - field.v[hi], jump);
            }
            fx[fi] += lambda * vf * up;
        }
    }
}

// rho += dt * div(flux) with zero-flux boundary, then the negativity audit.
template <bool Parallel>
void apply_update(DensityField& field, const FaceFlux& flux, double dt) {
    const Grid& g = field.grid;
    const int n = g.n;
    const double r = dt / g.dx();
    if (g.d == 1) {
        const auto& fx = flux.axis[0];
        std::vector<double> next(field.v.size());
#pragma omp parallel for schedule(static) if (Parallel)
        for (int i = 0; i < n; ++i) {
            const double right = i < n - 1 ? fx[static_cast<std::size_t>(i)] : 0.0;
            const double left = i > 0 ? fx[static_cast<std::size_t>(i - 1)] : 0.0;
            next[static_cast<std::size_t>(i)] = field.v[static_cast<std::size_t>(i)] + r * (right - left);
        }
        field.v = std::move(next);
    } else {
        const auto& fx0 = flux.axis[0];
        const auto& fx1 = flux.axis[1];
        const auto nn = static_cast<std::size_t>(n);
        std::vector<double> next(field.v.size());
#pragma omp parallel for schedule(static) if (Parallel)
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const std::size_t jj = static_cast<std::size_t>(j);
                const double up = i < n - 1 ? fx0[static_cast<std::size_t>(i) * nn + jj] : 0.0;
                const double down = i > 0 ? fx0[static_cast<std::size_t>(i - 1) * nn + jj] : 0.0;
                const double right = j < n - 1 ? fx1[static_cast<std::size_t>(i) * (nn - 1) + jj] : 0.0;
                const double left = j > 0 ? fx1[static_cast<std::size_t>(i) * (nn - 1) + jj - 1] : 0.0;
                next[g.index(i, j)] = field.v[g.index(i, j)] + r * ((up - down) + (right - left));
            }
        }
        field.v = std::move(next);
    }

    const double mx = max_value(field);
    const double floor = -1e-13 * mx;
    const double mn = min_value(field);
    if (mn < floor)
        fail(ErrorCode::NonPositivityViolation,
             "negative density beyond roundoff (min = " + std::to_string(mn) + ", max = " + std::to_string(mx) +
                 "): CFL too lax or flux defect");
    if (mn < 0.0) {
#pragma omp parallel for schedule(static) if (Parallel)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(field.v.size()); ++i)
            if (field.v[static_cast<std::size_t>(i)] < 0.0) field.v[static_cast<std::size_t>(i)] = 0.0;
    }
}

template <bool Parallel>
DensityField step_impl(const DensityField& field, const SolverConfig& config, double dt,
                       const VectorField* velocity, double delta) {
    FaceFlux flux;
    diffusive_flux_into<Parallel>(field, config.params.p, delta, flux, nullptr);
    if (velocity && config.params.lambda != 0.0)
        aggregation_flux_into<Parallel>(field, *velocity, config.params.lambda, flux, true);
    DensityField out = field;
    apply_update<Parallel>(out, flux, dt);
    return out;
}

double boundary_ring_mass(const DensityField& field) {
    const Grid& g = field.grid;
    const int n = g.n;
    double s = 0.0;
    if (g.d == 1) {
        s = field.v[0] + field.v[static_cast<std::size_t>(n - 1)];
    } else {
        for (int j = 0; j < n; ++j) s += field.v[g.index(0, j)] + field.v[g.index(n - 1, j)];
        for (int i = 1; i < n - 1; ++i) s += field.v[g.index(i, 0)] + field.v[g.index(i, n - 1)];
    }
    return s * std::pow(g.dx(), g.d);
}

double max_speed(const VectorField& v) {
    double m = 0.0;
    for (int a = 0; a < v.grid.d; ++a) {
        const auto& c = v.comp[static_cast<std::size_t>(a)];
        m = std::max(m, max_reduce(c.size(), [&](std::size_t i) { return std::abs(c[i]); }));
    }
    return m;
}

double dt_from_bounds(const SolverConfig& config, double maxphi, double maxv) {
    const Grid& g = config.grid;
    const double dx = g.dx();
    const double p = config.params.p;
    double bound = dx * dx / (2.0 * g.d * maxphi * std::max(1.0, p - 1.0));  // inf when maxphi = 0
    if (config.params.lambda > 0.0 && maxv > 0.0)
        bound = std::min(bound, dx / (config.params.lambda * maxv + std::numeric_limits<double>::min()));
    return std::min(config.cfl * bound, config.dt_cap);
}

void check_config(const DensityField& initial, const SolverConfig& config) {
    if (!(initial.grid == config.grid)) fail(ErrorCode::BadArgument, "initial field grid != config grid");
    if (config.params.d != config.grid.d) fail(ErrorCode::BadArgument, "params dimension != grid dimension");
    if (!(config.t_end > 0.0)) fail(ErrorCode::BadArgument, "t_end must be positive");
    if (!(config.cfl > 0.0 && config.cfl <= 1.0)) fail(ErrorCode::BadArgument, "cfl must be in (0, 1]");
    if (!(config.dt_min > 0.0)) fail(ErrorCode::BadArgument, "dt_min must be positive");
    if (!(config.dt_cap > 0.0)) fail(ErrorCode::BadArgument, "dt_cap must be positive");
    if (config.diag_every < 1) fail(ErrorCode::BadArgument, "diag_every must be >= 1");
    if (!(config.rho_max > max_value(initial)))
        fail(ErrorCode::BadArgument, "rho_max must exceed the initial maximum density");
    if (config.params.lambda < 0.0) fail(ErrorCode::NonpositiveLambda, "lambda must be >= 0 for the solver");
}

}  // namespace

const char* run_status_name(RunStatus s) {
    switch (s) {
        case RunStatus::ReachedTEnd: return "ReachedTEnd";
        case RunStatus::BlowUpIndicator: return "BlowUpIndicator";
        case RunStatus::DtCollapse: return "DtCollapse";
    }
    return "?";
}

FaceFlux diffusive_flux(const DensityField& field, double p, double delta) {
    FaceFlux out;
    diffusive_flux_into<true>(field, p, delta, out, nullptr);
    return out;
}

FaceFlux aggregation_flux(const DensityField& field, const VectorField& velocity, double lambda) {
    FaceFlux out;
    aggregation_flux_into<true>(field, velocity, lambda, out, false);
    return out;
}

double cfl_dt(const DensityField& field, const SolverConfig& config, double delta, const VectorField* velocity) {
    const Grid& g = field.grid;
    const PhiDelta phi(config.params.p, delta);
    double maxphi = 0.0;
    for (int a = 0; a < g.d; ++a) {
        maxphi = std::max(maxphi, max_reduce(faces::count(g, a), [&](std::size_t f) {
                              const double g2 = faces::gradient_at(field.v, g, a, f).magnitude2();
                              return g2 == 0.0 && delta == 0.0 ? 0.0 : phi(g2);
                          }));
    }
    const double maxv = velocity ? max_speed(*velocity) : 0.0;
    return dt_from_bounds(config, maxphi, maxv);
}

DensityField step(const DensityField& field, const SolverConfig& config, double dt, const VectorField* velocity,
                  double delta) {
    return step_impl<true>(field, config, dt, velocity, delta);
}

Trajectory run(const DensityField& initial, const SolverConfig& config) {
    check_config(initial, config);
    const Grid& g = config.grid;
    const double lambda = config.params.lambda;
    const double p = config.params.p;

    Trajectory traj;
    traj.eps_used = config.kernel_eps > 0.0 ? config.kernel_eps : 2.0 * g.dx();
    traj.delta_used =
        config.delta >= 0.0 ? config.delta : (p < 2.0 ? 1e-8 * max_value(initial) / g.dx() : 0.0);
    traj.k_used = config.moment_k > 0.0 ? config.moment_k : 0.5 * (config.params.k_lo + config.params.k_hi);

    std::unique_ptr<ConvolutionEngine> engine;
    if (lambda > 0.0) engine = std::make_unique<ConvolutionEngine>(g, KernelSpec{config.params.alpha, traj.eps_used});

    DensityField field = initial;
    const double m0 = mass(field);
    if (!(m0 > 0.0)) fail(ErrorCode::BadArgument, "initial mass must be positive");

    auto make_row = [&](const DensityField& f, double t, double dt, double resid) {
        StepDiagnostics row;
        row.t = t;
        row.dt = dt;
        row.mass = mass(f);
        row.min_density = min_value(f);
        row.max_density = max_value(f);
        row.entropy = entropy(f);
        row.p_fisher = p_fisher(f, p);
        row.moment_k = moment(f, traj.k_used);
        row.interaction = engine ? interaction_energy(f, *engine) : 0.0;
        row.dissipation_residual = resid;
        return row;
    };
    traj.rows.push_back(make_row(field, 0.0, 0.0, 0.0));

    std::vector<double> snap_times = config.snapshot_times;
    std::sort(snap_times.begin(), snap_times.end());
    std::size_t snap_idx = 0;
    auto capture_snapshots = [&](double now) {
        while (snap_idx < snap_times.size() && now >= snap_times[snap_idx] * (1.0 - 1e-12)) {
            traj.snapshots.emplace_back(now, field);
            ++snap_idx;
        }
    };
    capture_snapshots(0.0);

    const double t_goal = config.t_end;
    const double t_close = t_goal * (1.0 - 1e-12);
    double t = 0.0;
    long long step_idx = 0;
    FaceFlux flux;
    while (t < t_close) {
        if (max_value(field) > config.rho_max) {
            traj.status = RunStatus::BlowUpIndicator;
            break;
        }
        std::optional<VectorField> vel;
        if (engine) vel = engine->velocity(field);

        // One gradient pass serves both the CFL bound and the flux.
        double maxphi = 0.0;
        diffusive_flux_into<true>(field, p, traj.delta_used, flux, &maxphi);
        double dt = dt_from_bounds(config, maxphi, vel ? max_speed(*vel) : 0.0);
        dt = std::min(dt, t_goal - t);
        if (dt < config.dt_min) {
            traj.status = RunStatus::DtCollapse;
            break;
        }
        if (vel) aggregation_flux_into<true>(field, *vel, lambda, flux, true);

        const bool record = (step_idx + 1) % config.diag_every == 0 || t + dt >= t_close;
        if (record) {
            const double s_pre = entropy(field);
            DensityField pre = field;
            apply_update<true>(field, flux, dt);
            DensityField half = make_field(g);
#pragma omp parallel for schedule(static)
            for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(half.v.size()); ++i)
                half.v[static_cast<std::size_t>(i)] =
                    0.5 * (pre.v[static_cast<std::size_t>(i)] + field.v[static_cast<std::size_t>(i)]);
            const double inter_half = engine ? interaction_energy(half, *engine) : 0.0;
            const double balance = -p_fisher(half, p) + lambda * (g.d - config.params.alpha) * inter_half;
            const double resid = std::abs((entropy(field) - s_pre) / dt - balance);
            t += dt;
            ++step_idx;
            traj.rows.push_back(make_row(field, t, dt, resid));
        } else {
            apply_update<true>(field, flux, dt);
            t += dt;
            ++step_idx;
        }

        capture_snapshots(t);
        const double bm = boundary_ring_mass(field) / m0;
        traj.boundary_mass_peak = std::max(traj.boundary_mass_peak, bm);
        if (bm >= 1e-6) traj.boundary_mass_flagged = true;
    }

    if (traj.rows.back().t != t) traj.rows.push_back(make_row(field, t, 0.0, 0.0));
    traj.t_final = t;
    traj.steps = step_idx;
    traj.final_field = std::move(field);
    return traj;
}

std::vector<SweepRow> sweep_masses(const DensityField& initial, const SolverConfig& config,
                                   const std::vector<double>& multipliers) {
    if (multipliers.empty()) fail(ErrorCode::BadArgument, "mass sweep needs at least one multiplier");
    const CriticalConstants cc = critical_mass(config.params);
    std::vector<SweepRow> rows;
    for (double mult : multipliers) {
        if (!(mult > 0.0)) fail(ErrorCode::BadArgument, "mass multipliers must be positive");
        DensityField f = initial;
        rescale_to_mass(f, mult * cc.m_c);
        const Trajectory tr = run(f, config);
        SweepRow row;
        row.multiplier = mult;
        row.m0 = mass(f);
        row.m0_over_mc = row.m0 / cc.m_c;
        row.status = tr.status;
        for (const auto& r : tr.rows) {
            row.max_entropy = std::max(row.max_entropy, r.entropy);
            row.max_density = std::max(row.max_density, r.max_density);
        }
        row.t_final = tr.t_final;
        row.boundary_mass_flagged = tr.boundary_mass_flagged;
        rows.push_back(row);
    }
    return rows;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj, const std::string& config_hash) {
    CsvWriter csv(path);
    csv.row({"t", "dt", "mass", "min_density", "max_density", "entropy", "p_fisher", "moment_k", "interaction",
             "residual", "status"});
    for (std::size_t i = 0; i < traj.rows.size(); ++i) {
        const auto& r = traj.rows[i];
        const char* status = i + 1 == traj.rows.size() ? run_status_name(traj.status) : "Running";
        csv.row({g17(r.t), g17(r.dt), g17(r.mass), g17(r.min_density), g17(r.max_density), g17(r.entropy),
                 g17(r.p_fisher), g17(r.moment_k), g17(r.interaction), g17(r.dissipation_residual), status});
    }
    csv.comment("config_hash=" + config_hash + " status=" + run_status_name(traj.status) +
                " steps=" + std::to_string(traj.steps) + " delta=" + g17(traj.delta_used) +
                " eps=" + g17(traj.eps_used) + " k=" + g17(traj.k_used) +
                " boundary_mass_peak=" + g17(traj.boundary_mass_peak));
    csv.close(path);
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows, const std::string& config_hash) {
    CsvWriter csv(path);
    csv.row({"multiplier", "m0", "m0_over_mc", "status", "max_entropy", "max_density", "t_final",
             "boundary_mass_flagged"});
    for (const auto& r : rows)
        csv.row({g17(r.multiplier), g17(r.m0), g17(r.m0_over_mc), run_status_name(r.status), g17(r.max_entropy),
                 g17(r.max_density), g17(r.t_final), r.boundary_mass_flagged ? "1" : "0"});
    csv.comment("config_hash=" + config_hash);
    csv.close(path);
}

namespace ref {

FaceFlux diffusive_flux(const DensityField& field, double p, double delta) {
    FaceFlux out;
    diffusive_flux_into<false>(field, p, delta, out, nullptr);
    return out;
}

FaceFlux aggregation_flux(const DensityField& field, const VectorField& velocity, double lambda) {
    FaceFlux out;
    aggregation_flux_into<false>(field, velocity, lambda, out, false);
    return out;
}

DensityField step(const DensityField& field, const SolverConfig& config, double dt, const VectorField* velocity,
                  double delta) {
    return step_impl<false>(field, config, dt, velocity, delta);
}

}  // namespace ref
}  // namespace plad
