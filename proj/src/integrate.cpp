#include "tangentbody/integrate.hpp"

#include <cmath>

namespace tangentbody {

namespace {

struct Packed {
    Vector y;
    int dim = 0;
};

Vector pack_state(const BodyState& s) {
    const int n = s.dim();
    Vector y(2 * n + s.spin_upper.size());
    y << s.position, s.momentum, s.spin_upper;
    return y;
}

BodyState unpack_state(const Vector& y, int n) {
    BodyState s;
    s.position = y.segment(0, n);
    s.momentum = y.segment(n, n);
    s.spin_upper = y.segment(2 * n, spin_components(n));
    return s;
}

// Evaluate the field on the packed representation. The spin-rate matrix is
// projected onto its antisymmetric part before packing; the projection size
// is accumulated into `projection`.
Vector eval_packed(const StateField& field, const Vector& y, int n, double& projection) {
    const StateDerivative d = field(unpack_state(y, n));
    projection = std::max(projection, symmetric_part_norm(d.spin_rate));
    Vector dy(y.size());
    dy << d.position_rate, d.momentum_rate,
        pack_antisymmetric_upper(antisymmetric_part(d.spin_rate));
    return dy;
}

}  // namespace

std::string to_string(TerminationReason reason) {
    switch (reason) {
        case TerminationReason::Completed: return "completed";
        case TerminationReason::ChartExit: return "chart_exit";
        case TerminationReason::NonConvergence: return "non_convergence";
    }
    return "unknown";
}

StepResult step(const BodyState& state, const StateField& field, double h, Method method,
                double fixed_point_tol, int max_fixed_point_iterations) {
    if (!(h > 0.0)) throw Error("step size must be positive");
    const int n = state.dim();
    const Vector y = pack_state(state);
    StepResult result;

    if (method == Method::Rk4) {
        const Vector k1 = eval_packed(field, y, n, result.spin_projection);
        const Vector k2 = eval_packed(field, y + 0.5 * h * k1, n, result.spin_projection);
        const Vector k3 = eval_packed(field, y + 0.5 * h * k2, n, result.spin_projection);
        const Vector k4 = eval_packed(field, y + h * k3, n, result.spin_projection);
        result.state = unpack_state(y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4), n);
        return result;
    }

    // Implicit midpoint by fixed-point iteration, explicit-Euler predictor.
    Vector z = y + h * eval_packed(field, y, n, result.spin_projection);
    bool converged = false;
    for (int it = 0; it < max_fixed_point_iterations; ++it) {
        const Vector mid = 0.5 * (y + z);
        const Vector znext = y + h * eval_packed(field, mid, n, result.spin_projection);
        result.iterations = it + 1;
        if (!znext.allFinite()) break;
        const double delta = (znext - z).cwiseAbs().maxCoeff();
        z = znext;
        if (delta <= fixed_point_tol * (1.0 + z.cwiseAbs().maxCoeff())) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        throw NonConvergenceError("implicit midpoint fixed-point iteration did not converge in " +
                                  std::to_string(max_fixed_point_iterations) + " iterations");
    }
    result.state = unpack_state(z, n);
    return result;
}

TrajectoryRecord integrate(const BodyState& initial, const FrameField& frame,
                           const BodyParams& params, const StepperConfig& config,
                           const DiffOptions& opts) {
    if (!(config.step > 0.0)) throw Error("stepper step must be positive");
    if (!(config.t_end > 0.0)) throw Error("stepper t_end must be positive");
    if (config.monitor_every < 1) throw Error("monitor_every must be at least 1");
    frame.require_in_domain(initial.position);

    const StateField field = [&](const BodyState& s) {
        return state_derivative(s, frame, params, opts);
    };

    const long n_steps =
        std::max<long>(1, static_cast<long>(std::ceil(config.t_end / config.step - 1e-9)));

    TrajectoryRecord record;
    auto push_sample = [&](double t, const BodyState& s, double projection) {
        Sample sample;
        sample.t = t;
        sample.state = s;
        const ConnectionCoeffs conn = connection_from_frame(frame, s.position, opts);
        sample.hamiltonian = hamiltonian(s, frame, conn, params);
        sample.casimir = spin_casimir(s.spin_matrix());
        sample.spin_projection = projection;
        record.samples.push_back(std::move(sample));
    };

    BodyState state = initial;
    push_sample(0.0, state, 0.0);
    double projection_acc = 0.0;
    double t = 0.0;

    for (long i = 0; i < n_steps; ++i) {
        const double t_next = (i + 1 == n_steps) ? config.t_end : (i + 1) * config.step;
        const double h = t_next - t;
        try {
            const StepResult r = step(state, field, h, config.method, config.fixed_point_tol,
                                      config.max_fixed_point_iterations);
            if (!frame.in_domain(r.state.position)) {
                throw OutOfChartError("trajectory left the chart domain");
            }
            state = r.state;
            t = t_next;
            projection_acc = std::max(projection_acc, r.spin_projection);
        } catch (const OutOfChartError& err) {
            record.reason = TerminationReason::ChartExit;
            record.message = err.what();
            break;
        } catch (const NonConvergenceError& err) {
            record.reason = TerminationReason::NonConvergence;
            record.message = err.what();
            break;
        }
        if ((i + 1) % config.monitor_every == 0 && i + 1 < n_steps) {
            push_sample(t, state, projection_acc);
            projection_acc = 0.0;
        }
    }

    if (record.samples.back().t < t) push_sample(t, state, projection_acc);
    return record;
}

}  // namespace tangentbody
