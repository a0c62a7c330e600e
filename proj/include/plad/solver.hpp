#pragma once

#include <array>
#include <limits>
#include <string>
#include <vector>

#include "plad/convolution.hpp"
#include "plad/field.hpp"
#include "plad/regime.hpp"

namespace plad {

enum class RunStatus {
    ReachedTEnd,      // integrated to t_end
    BlowUpIndicator,  // density crossed rho_max (indicator only, not a proof)
    DtCollapse        // CFL time step fell below dt_min
};
const char* run_status_name(RunStatus s);

struct SolverConfig {
    RegimeParams params;  // validated admissible exponents
    Grid grid;
    double kernel_eps = -1.0;  // <= 0: default 2 dx
    double t_end = 0.0;
    double cfl = 0.45;    // in (0, 1]
    double delta = -1.0;  // gradient regularization; < 0: default 1e-8 max(rho0)/dx for p < 2, else 0
    double dt_min = 1e-12;
    double dt_cap = 1e-2;
    double rho_max = std::numeric_limits<double>::infinity();  // blow-up indicator threshold
    int diag_every = 100;    // steps between diagnostic rows
    double moment_k = -1.0;  // <= 0: midpoint of the admissible k-window
    // sorted times at which the state is captured into Trajectory::snapshots
    // (the first state at or past each time)
    std::vector<double> snapshot_times;
};

struct StepDiagnostics {
    double t = 0, dt = 0;
    double mass = 0, min_density = 0, max_density = 0;
    double entropy = 0, p_fisher = 0, moment_k = 0, interaction = 0;
    // | (S(t+dt) - S(t))/dt - ( -I_p + lambda (d - alpha) * interaction ) |
    // with the right side evaluated on the half-step average state; 0 when
    // the row is not a recorded step (t = 0 row).
    double dissipation_residual = 0;
};

struct Trajectory {
    std::vector<StepDiagnostics> rows;  // strictly increasing t
    RunStatus status = RunStatus::ReachedTEnd;
    double t_final = 0;
    long long steps = 0;
    // resolved run parameters, recorded for reproducibility
    double delta_used = 0, eps_used = 0, k_used = 0;
    // >= 1e-6 of the mass reached the outermost cell ring at some step: the
    // box truncation is no longer a faithful whole-space surrogate.
    bool boundary_mass_flagged = false;
    double boundary_mass_peak = 0;
    DensityField final_field;
    std::vector<std::pair<double, DensityField>> snapshots;  // (t, state)
};

// One flux value per interior face, one family per axis (see plad::faces).
struct FaceFlux {
    std::array<std::vector<double>, 2> axis;
};

// phi_delta(|G|) * (G . n) with G the face gradient of rho and
// phi_delta(s) = (s^2 + delta^2)^{(p-2)/2}; delta > 0 lifts the p < 2
// singularity at G = 0, delta = 0 is allowed for p >= 2.
FaceFlux diffusive_flux(const DensityField& field, double p, double delta);

// lambda * (v . n at face) * rho_upwind. The conservation-law velocity of
// the transport term is -lambda v, so the donor cell is the left cell when
// v_face < 0. Verified by the two-bump attraction test.
FaceFlux aggregation_flux(const DensityField& field, const VectorField& velocity, double lambda);

// cfl * min( dx^2 / (2 d max_face phi * max(1, p-1)),  dx / (lambda max|v|),
// dt_cap ). Pass velocity = nullptr for lambda = 0.
double cfl_dt(const DensityField& field, const SolverConfig& config, double delta, const VectorField* velocity);

// Conservative explicit update rho += dt * div(flux), zero-flux boundary.
// Clips negative cells only below 1e-13 * max(rho); a larger undershoot
// throws NonPositivityViolation (a CFL/flux defect, not data).
DensityField step(const DensityField& field, const SolverConfig& config, double dt, const VectorField* velocity,
                  double delta);

Trajectory run(const DensityField& initial, const SolverConfig& config);

// One run per multiplier with the initial field rescaled to
// multiplier * M_c(params); rows ordered as given.
struct SweepRow {
    double multiplier = 0, m0 = 0, m0_over_mc = 0;
    RunStatus status = RunStatus::ReachedTEnd;
    double max_entropy = -std::numeric_limits<double>::infinity();
    double max_density = 0;
    double t_final = 0;
    bool boundary_mass_flagged = false;
};
std::vector<SweepRow> sweep_masses(const DensityField& initial, const SolverConfig& config,
                                   const std::vector<double>& multipliers);

void write_trajectory_csv(const std::string& path, const Trajectory& traj, const std::string& config_hash);
void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows, const std::string& config_hash);

namespace ref {
FaceFlux diffusive_flux(const DensityField& field, double p, double delta);
FaceFlux aggregation_flux(const DensityField& field, const VectorField& velocity, double lambda);
DensityField step(const DensityField& field, const SolverConfig& config, double dt, const VectorField* velocity,
                  double delta);
}  // namespace ref

}  // namespace plad
