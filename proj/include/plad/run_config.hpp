#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "plad/solver.hpp"

namespace plad {

// A run configuration file is a single JSON object:
//
//   {
//     "params":  {"d": 2, "p": 1.6666666666666667, "alpha": 1.0, "lambda": 1.0},
//     "grid":    {"n": 128, "half_width": 8.0},
//     "kernel":  {"eps": 0.25},                                    (optional)
//     "initial": {"type": "gaussian", "center": [0,0], "sigma": 1.0, "mass": 1.0}
//              | {"type": "mixture", "components": [ {gaussian fields...}, ... ]}
//              | {"type": "indicator", "lo": [...], "hi": [...], "mass": 1.0}
//              | {"type": "ring", "radius": 1.0, "width": 0.25, "mass": 1.0}
//              | {"type": "random_mixture"}                        (uses "seed")
//     "rescale_mass": 1.5 | {"multiplier_of_critical": 0.5},       (optional)
//     "time":    {"t_end": 0.2, "cfl": 0.45, "dt_min": 1e-12, "dt_cap": 0.01},
//     "solver":  {"delta": ..., "rho_max": ..., "diag_every": ..., "moment_k": ...},  (optional)
//     "output":  {"trajectory_csv": "...", "summary_json": "...",
//                 "snapshot_times": [...], "snapshot_prefix": "..."},  (optional)
//     "seed": 7                                                    (optional)
//   }
//
// lambda = 0 selects the pure-diffusion equation (alpha is then ignored and
// may be omitted). Unknown keys anywhere are rejected. In "time" only t_end
// is required.
struct RunSetup {
    SolverConfig config;
    DensityField initial;  // discretized and rescaled
    std::uint64_t seed = 0;
    std::string trajectory_csv;  // empty: not written
    std::string summary_json;    // empty: not written
    std::string snapshot_prefix;
    std::string config_hash;
};

RunSetup parse_run_config(const nlohmann::json& doc);
RunSetup load_run_config(const std::string& path);

// FNV-1a 64-bit over the canonical (key-sorted) dump, as a 16-digit hex
// string; stamped into every CSV the run produces.
std::string config_hash(const nlohmann::json& doc);

}  // namespace plad
