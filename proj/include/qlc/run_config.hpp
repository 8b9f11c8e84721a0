// Config-file driven run description: a sectioned key = value file fixes the
// material, the elastic or Frank constants (exactly one group), the grid, the
// boundary scenario, the relaxation parameters, and the sampling controls.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qlc/densities.hpp"
#include "qlc/solver.hpp"

namespace qlc {

struct RunConfig {
    // material
    MaterialConstants material;

    // exactly one of the two groups appears in the file; the other is derived
    bool elastic_given = false;
    ElasticConstants elastic;
    FrankConstants frank;

    DensityKind density_kind = DensityKind::NewPlus;

    // grid + boundary scenario
    GridDims dims{9, 9, 9};
    double h = 0.45;
    std::string scenario = "hedgehog";  // hedgehog | constant

    // relaxation
    std::vector<double> L_list{0.1};
    int max_iters = 200000;
    double grad_tol = 0.0;  // 0: derived as 2e-4 h^3
    double cutoff_M = 0.0;  // 0: derived as 2 s_plus (modified_cutoff only)
    std::string resume_from;
    bool allow_noncoercive = false;

    // sampling
    std::uint64_t seed = 42;
    int samples = 10000;
    double identity_tol = 1e-9;  // relative tolerance for the identity suites
    bool negative_control = false;

    std::string out_dir = ".";

    // raw sections as parsed, echoed into result records
    std::map<std::string, std::map<std::string, std::string>> raw;

    double resolved_grad_tol() const {
        return grad_tol > 0.0 ? grad_tol : 2e-4 * h * h * h;
    }
    double resolved_cutoff_M() const {
        return cutoff_M > 0.0 ? cutoff_M : 2.0 * material.s_plus;
    }
};

// Parse and validate; errors carry file:line context.
RunConfig parse_run_config(const std::string& path);

// Parse from an in-memory string (used for config echo round trips).
RunConfig parse_run_config_text(const std::string& text, const std::string& name);

// Serialize the raw section map back to config-file text.
std::string config_to_text(const RunConfig& cfg);

// Build solver parameters from the run config (computes the coercive leading
// constant for the cutoff density deterministically from the seed).
SolverConfig make_solver_config(const RunConfig& cfg);

// Starting field for the configured boundary scenario.
QField make_scenario_field(const RunConfig& cfg);

}  // namespace qlc
