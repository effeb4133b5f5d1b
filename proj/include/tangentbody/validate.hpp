#pragma once

#include <optional>

#include "tangentbody/integrate.hpp"

namespace tangentbody {

// Post-hoc checks of the transport law and the curvature force along a
// recorded trajectory. Derivatives along the trajectory are taken by central
// differences at interior samples; endpoints are excluded from all max norms.

/// Max norm of the covariant time derivative of the spin along the
/// trajectory. The spin is converted to coordinate components
/// S^ij = e^i_a e^j_b S_ab and transported with the metric Christoffels,
/// which keeps the check free of frame-orientation conventions and
/// non-degenerate on two-dimensional charts.
double covariant_spin_residual(const TrajectoryRecord& traj, const FrameField& frame,
                               const BodyParams& params, const DiffOptions& opts = {});

/// Max norm of m D xdot^a / dt - R_cda^b S^cd xdot_b along the trajectory.
/// The covariant acceleration uses the frame transport
/// D v^a/dt = vdot^a + xdot^c gamma_cab v^b; the force contraction is the one
/// calibrated by the constant-curvature oracle.
double papapetrou_residual(const TrajectoryRecord& traj, const FrameField& frame,
                           const BodyParams& params, const DiffOptions& opts = {});

/// Signed geodesic curvature of the center-of-mass path at interior samples.
/// Only defined on two-dimensional charts. The sign is taken with respect to
/// the left normal of the frame-component velocity.
std::vector<double> geodesic_curvature_profile(const TrajectoryRecord& traj,
                                               const FrameField& frame,
                                               const BodyParams& params,
                                               const DiffOptions& opts = {});

struct TrajectoryDiagnostics {
    double energy_drift_rel = 0.0;
    double spin_norm_drift_rel = 0.0;
    std::optional<double> covariant_spin_residual;
    std::optional<double> papapetrou_residual;
    std::optional<double> geodesic_curvature_mean;  ///< 2-D charts only
    std::optional<double> geodesic_curvature_std;
    std::optional<double> spin_energy_term;
    std::string termination_reason;
};

TrajectoryDiagnostics compute_diagnostics(const TrajectoryRecord& traj, const FrameField& frame,
                                          const BodyParams& params, const DiffOptions& opts = {});

}  // namespace tangentbody
