// Command-line front end: regime classification, single runs, mass sweeps
// across the critical threshold, and the verification suites.
//
// Exit codes: 0 success, 2 validation/usage error, 3 runtime failure
// (I/O, scheme defect, or a verification suite with failing rows).
// PLAD_THREADS caps the OpenMP thread count for all kernels.

#include <omp.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "plad/csv.hpp"
#include "plad/errors.hpp"
#include "plad/field_io.hpp"
#include "plad/regime.hpp"
#include "plad/run_config.hpp"
#include "plad/solver.hpp"
#include "plad/verify.hpp"

namespace {

using nlohmann::json;

void apply_thread_env() {
    if (const char* env = std::getenv("PLAD_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) omp_set_num_threads(n);
    }
}

int exit_code_for(plad::ErrorCode code) {
    switch (code) {
        case plad::ErrorCode::InvalidDimension:
        case plad::ErrorCode::POutOfWindow:
        case plad::ErrorCode::AlphaOutOfRange:
        case plad::ErrorCode::NonpositiveLambda:
        case plad::ErrorCode::CriticalityGapTooSmall:
        case plad::ErrorCode::EmptyKWindow:
        case plad::ErrorCode::BadArgument:
        case plad::ErrorCode::ConfigError:
            return 2;
        case plad::ErrorCode::IoError:
        case plad::ErrorCode::NonPositivityViolation:
        case plad::ErrorCode::InternalError:
            return 3;
    }
    return 3;
}

void write_json_file(const std::string& path, const json& doc) {
    std::ofstream out(path);
    if (!out) plad::fail(plad::ErrorCode::IoError, "cannot open for writing: " + path);
    out << doc.dump(2) << "\n";
    if (!out) plad::fail(plad::ErrorCode::IoError, "write failed: " + path);
}

int cmd_classify(int d, double p, double alpha, double lambda) {
    const plad::RegimeParams rp = plad::validate(d, p, alpha, lambda);
    json out;
    out["d"] = rp.d;
    out["p"] = rp.p;
    out["alpha"] = rp.alpha;
    out["lambda"] = rp.lambda;
    out["p_conjugate"] = rp.p_conj;
    out["alpha_p"] = rp.alpha_p;
    out["regime"] = plad::regime_name(plad::classify(rp));
    out["k_window"] = {rp.k_lo, rp.k_hi};
    out["keller_segel_point"] = plad::is_keller_segel_point(d, p, alpha);
    if (rp.p_star) {
        out["p_star"] = *rp.p_star;
        out["r"] = *rp.r;
    }
    if (rp.p < rp.d) {
        const plad::CriticalConstants c = plad::critical_mass(rp);
        out["critical_mass"] = {
            {"m_c", c.m_c}, {"c_dp", c.c_dp}, {"sobolev_constant", c.sobolev}, {"hls_constant", c.hls}};
    }
    if (!rp.warnings.empty()) out["warnings"] = rp.warnings;
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_simulate(const std::string& config_path) {
    const plad::RunSetup setup = plad::load_run_config(config_path);
    const plad::Trajectory traj = plad::run(setup.initial, setup.config);

    if (!setup.trajectory_csv.empty()) plad::write_trajectory_csv(setup.trajectory_csv, traj, setup.config_hash);

    json snaps = json::array();
    if (!setup.snapshot_prefix.empty()) {
        for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
            const std::string file = setup.snapshot_prefix + "_" + std::to_string(i) + ".plad";
            plad::write_snapshot(file, traj.snapshots[i].second);
            snaps.push_back({{"t", traj.snapshots[i].first}, {"path", file}});
        }
    }

    double max_density = 0.0, max_entropy = -std::numeric_limits<double>::infinity();
    for (const plad::StepDiagnostics& row : traj.rows) {
        max_density = std::max(max_density, row.max_density);
        max_entropy = std::max(max_entropy, row.entropy);
    }

    if (!setup.summary_json.empty()) {
        json out;
        out["config_hash"] = setup.config_hash;
        out["status"] = plad::run_status_name(traj.status);
        out["t_final"] = traj.t_final;
        out["steps"] = traj.steps;
        out["mass_initial"] = traj.rows.front().mass;
        out["mass_final"] = traj.rows.back().mass;
        out["max_density"] = max_density;
        out["max_entropy"] = max_entropy;
        out["boundary_mass_flagged"] = traj.boundary_mass_flagged;
        out["boundary_mass_peak"] = traj.boundary_mass_peak;
        out["delta_used"] = traj.delta_used;
        out["eps_used"] = traj.eps_used;
        out["moment_k_used"] = traj.k_used;
        out["snapshots"] = snaps;
        write_json_file(setup.summary_json, out);
    }

    std::cout << "status=" << plad::run_status_name(traj.status) << " t_final=" << plad::g17(traj.t_final)
              << " steps=" << traj.steps << "\n";
    // A blow-up indicator or dt collapse is a reported observation, not a
    // tool failure: the run still exits 0 with the status in the summary.
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::vector<double>& multipliers, const std::string& out_csv) {
    const plad::RunSetup setup = plad::load_run_config(config_path);
    const std::vector<plad::SweepRow> rows = plad::sweep_masses(setup.initial, setup.config, multipliers);
    plad::write_sweep_csv(out_csv, rows, setup.config_hash);
    for (const plad::SweepRow& r : rows)
        std::cout << "multiplier=" << plad::g17(r.multiplier) << " m0=" << plad::g17(r.m0)
                  << " status=" << plad::run_status_name(r.status) << " max_density=" << plad::g17(r.max_density)
                  << "\n";
    std::cout << "wrote " << out_csv << "\n";
    return 0;
}

int cmd_verify(const std::string& suite, int samples, std::uint64_t seed, std::string out_csv, double tol) {
    plad::VerifyResult result;
    if (suite == "constants")
        result = plad::verify_constants(tol);
    else if (suite == "gns")
        result = plad::verify_gns(samples, seed);
    else if (suite == "moment")
        result = plad::verify_moment(samples, seed);
    else if (suite == "entropy-bound")
        result = plad::verify_entropy_bound(samples, seed);
    else if (suite == "dissipation")
        result = plad::verify_dissipation();
    else
        plad::fail(plad::ErrorCode::BadArgument,
                   "unknown suite \"" + suite + "\" (expected constants|gns|moment|entropy-bound|dissipation)");

    if (out_csv.empty()) out_csv = "verify_" + suite + ".csv";
    const json stamp = {{"command", "verify"}, {"suite", suite}, {"samples", samples}, {"seed", seed}, {"tol", tol}};
    plad::write_verify_csv(out_csv, result, plad::config_hash(stamp));

    int failures = 0;
    for (const plad::VerifyRow& r : result.rows)
        if (!r.pass) ++failures;
    std::cout << "suite=" << suite << " rows=" << result.rows.size() << " failures=" << failures << " wrote "
              << out_csv << "\n";
    if (failures) {
        for (const plad::VerifyRow& r : result.rows)
            if (!r.pass)
                std::cerr << "FAIL " << r.field_id << " " << r.check << " lhs=" << plad::g17(r.lhs)
                          << " rhs=" << plad::g17(r.rhs) << " ratio=" << plad::g17(r.ratio) << "\n";
        return 3;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    apply_thread_env();

    CLI::App app{"numerical laboratory for the p-Laplacian aggregation-diffusion equation"};
    app.require_subcommand(1);

    int d = 0;
    double p = 0, alpha = 0, lambda = 0;
    CLI::App* classify = app.add_subcommand("classify", "report the regime and critical constants for (d, p, alpha, lambda)");
    classify->add_option("--d", d, "spatial dimension")->required();
    classify->add_option("--p", p, "diffusion exponent")->required();
    classify->add_option("--alpha", alpha, "kernel homogeneity")->required();
    classify->add_option("--lambda", lambda, "interaction strength")->required();

    std::string sim_config;
    CLI::App* simulate = app.add_subcommand("simulate", "integrate one configured run; writes trajectory CSV, snapshots, summary JSON");
    simulate->add_option("config,--config", sim_config, "run configuration JSON")->required();

    std::string sweep_config, sweep_out = "sweep.csv";
    std::vector<double> multipliers;
    CLI::App* sweep = app.add_subcommand("sweep", "rerun one configuration at several multiples of the critical mass");
    sweep->add_option("config,--config", sweep_config, "base run configuration JSON")->required();
    sweep->add_option("--multipliers", multipliers, "mass multipliers m, initial data rescaled to m * M_c")
        ->required()
        ->delimiter(',');
    sweep->add_option("--out", sweep_out, "output CSV path");

    std::string suite, verify_out;
    int samples = 100;
    std::uint64_t seed = 7;
    double tol = 1e-5;
    CLI::App* verify = app.add_subcommand("verify", "run a verification suite and write its report CSV");
    verify->add_option("--suite", suite, "constants|gns|moment|entropy-bound|dissipation")->required();
    verify->add_option("--samples", samples, "random fields per suite (default 100)");
    verify->add_option("--seed", seed, "RNG seed (default 7)");
    verify->add_option("--out", verify_out, "output CSV path (default verify_<suite>.csv)");
    verify->add_option("--tol", tol, "relative tolerance for the constants suite (default 1e-5)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(classify)) return cmd_classify(d, p, alpha, lambda);
        if (app.got_subcommand(simulate)) return cmd_simulate(sim_config);
        if (app.got_subcommand(sweep)) return cmd_sweep(sweep_config, multipliers, sweep_out);
        if (app.got_subcommand(verify)) return cmd_verify(suite, samples, seed, verify_out, tol);
    } catch (const plad::Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return exit_code_for(err.code());
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 3;
    }
    return 2;
}
