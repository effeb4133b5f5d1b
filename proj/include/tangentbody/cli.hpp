#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json_fwd.hpp>

namespace tangentbody::cli {

// Exit codes shared by all subcommands.
inline constexpr int kOk = 0;
inline constexpr int kConfigError = 2;
inline constexpr int kChartExit = 3;
inline constexpr int kValidationFailure = 4;
inline constexpr int kNumericalFailure = 5;

struct Options {
    int jobs = 1;
    std::string out_dir = ".";
    double tol_scale = 1.0;
};

/// Evaluate structure-equation residuals, curvature antisymmetries, the first
/// Bianchi identity and the constant-curvature oracle on a chart grid. One
/// report line per check; nonzero exit iff a tolerance is exceeded.
int run_geometry_check(const nlohmann::json& config, const Options& options, std::ostream& report);

/// Integrate one trajectory and write the trajectory CSV and diagnostics JSON.
int run_simulate(const nlohmann::json& config, const Options& options, std::ostream& report);

/// Run a grid of simulations (at most two swept parameters) and write one
/// summary row per grid point. A failed point becomes a failed row, not an
/// aborted sweep.
int run_sweep(const nlohmann::json& config, const Options& options, std::ostream& report);

}  // namespace tangentbody::cli
