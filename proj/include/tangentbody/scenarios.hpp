#pragma once

#include <optional>
#include <string>

#include "tangentbody/dynamics.hpp"

namespace tangentbody {

/// Built-in frame field with analytic derivatives plus the closed-form
/// oracles the tests and the CLI rely on.
struct Scenario {
    std::string name;
    FrameField frame;
    /// Constant sectional curvature when the space has one.
    std::optional<double> constant_curvature;
    /// Closed-form geodesic map (x0, coordinate velocity, t) -> chart point.
    std::function<ChartPoint(const ChartPoint&, const Vector&, double)> geodesic_map;
    /// Geometry-aware distance between two chart points, safe under periodic
    /// coordinates. Used to compare trajectories against oracles.
    std::function<double(const ChartPoint&, const ChartPoint&)> point_distance;
    /// Box of chart points well inside the domain, for grids and random draws.
    Vector sample_lower, sample_upper;
};

Scenario make_flat_cartesian(int dim);
Scenario make_flat_polar(double chart_margin = 1e-6);
Scenario make_sphere(double radius, double chart_margin = 1e-6);
Scenario make_hyperbolic_upper_half(double chart_margin = 1e-6);
/// Product of a round sphere and a flat line, chart (theta, phi, z). Gives a
/// three-dimensional space with nontrivial spin transport.
Scenario make_sphere_cylinder(double radius, double chart_margin = 1e-6);

/// Look up a built-in by name: flat_cartesian_2d, flat_polar_2d, sphere,
/// hyperbolic_upper_half, flat_cartesian_3d. `radius` applies to the sphere.
Scenario builtin(const std::string& name, double radius = 1.0);

/// Exact geodesic position at time t for a zero-spin state. Throws
/// OracleUnavailableError when the scenario has no closed form or the state
/// carries spin.
ChartPoint geodesic_oracle(const Scenario& scenario, const BodyState& start,
                           const BodyParams& params, double t);

}  // namespace tangentbody
