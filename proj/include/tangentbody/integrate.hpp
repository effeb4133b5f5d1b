#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tangentbody/dynamics.hpp"

namespace tangentbody {

enum class Method { Rk4, ImplicitMidpoint };

struct StepperConfig {
    Method method = Method::Rk4;
    double step = 1e-3;
    double t_end = 1.0;
    int monitor_every = 1;
    /// Fixed-point iteration control for the implicit midpoint rule.
    double fixed_point_tol = 1e-13;
    int max_fixed_point_iterations = 50;
};

enum class TerminationReason { Completed, ChartExit, NonConvergence };

std::string to_string(TerminationReason reason);

struct Sample {
    double t = 0.0;
    BodyState state;
    double hamiltonian = 0.0;
    double casimir = 0.0;         ///< 1/2 sum S_ab S_ab
    double spin_projection = 0.0; ///< max antisymmetry correction since the previous sample
};

struct TrajectoryRecord {
    std::vector<Sample> samples;
    TerminationReason reason = TerminationReason::Completed;
    std::string message;
};

using StateField = std::function<StateDerivative(const BodyState&)>;

struct StepResult {
    BodyState state;
    /// Magnitude of the antisymmetric-projection correction applied to the
    /// spin update. The exact field preserves antisymmetry, so this measures
    /// roundoff only.
    double spin_projection = 0.0;
    int iterations = 0;  ///< fixed-point iterations (implicit midpoint)
};

/// One explicit RK4 step or one fixed-point-solved implicit-midpoint step.
StepResult step(const BodyState& state, const StateField& field, double h, Method method,
                double fixed_point_tol = 1e-13, int max_fixed_point_iterations = 50);

/// March the dynamics to t_end, recording every monitor_every-th state plus
/// the initial and final ones. Leaving the chart domain or a non-converging
/// implicit solve ends the run early; the partial trajectory is always
/// returned with the termination reason set.
TrajectoryRecord integrate(const BodyState& initial, const FrameField& frame,
                           const BodyParams& params, const StepperConfig& config,
                           const DiffOptions& opts = {});

}  // namespace tangentbody
