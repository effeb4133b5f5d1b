#include "tangentbody/dynamics.hpp"

#include <cmath>
#include <sstream>

namespace tangentbody {

namespace {

// q_a = gamma_acd S^cd (full contraction over both antisymmetric pairs)
Vector gamma_spin_contraction(const Tensor3& gamma, const Matrix& spin) {
    const int n = static_cast<int>(spin.rows());
    Vector q = Vector::Zero(n);
    for (int a = 0; a < n; ++a) {
        double sum = 0.0;
        for (int c = 0; c < n; ++c)
            for (int d = 0; d < n; ++d) sum += gamma(a, c, d) * spin(c, d);
        q(a) = sum;
    }
    return q;
}

Vector velocity_core(const Matrix& inverse, const Tensor3& gamma, const BodyState& state,
                     const BodyParams& params) {
    const Vector p_frame = inverse.transpose() * state.momentum;
    return (p_frame - gamma_spin_contraction(gamma, state.spin_matrix())) / params.mass;
}

double hamiltonian_core(const Matrix& inverse, const Tensor3& gamma, const BodyState& state,
                        const BodyParams& params) {
    const Vector pi = inverse.transpose() * state.momentum -
                      gamma_spin_contraction(gamma, state.spin_matrix());
    return 0.5 * pi.squaredNorm() / params.mass;
}

// S Gamma - Gamma S with structurally exact antisymmetry.
Matrix spin_rate_core(const Matrix& spin, const Matrix& transport) {
    const int n = static_cast<int>(spin.rows());
    Matrix rate = Matrix::Zero(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            double sum = 0.0;
            for (int c = 0; c < n; ++c)
                sum += spin(a, c) * transport(c, b) - transport(a, c) * spin(c, b);
            rate(a, b) = sum;
            rate(b, a) = -sum;
        }
    return rate;
}

double hamiltonian_nocheck(const FrameField& frame, const ChartPoint& x, const Vector& p,
                           const Matrix& spin, const BodyParams& params,
                           const DiffOptions& opts) {
    const FramePointData data = frame_data_at(frame, x, opts);
    const ConnectionCoeffs conn = connection_from_frame(frame, x, opts);
    const Vector pi =
        data.inverse.transpose() * p - gamma_spin_contraction(conn.gamma, spin);
    return 0.5 * pi.squaredNorm() / params.mass;
}

}  // namespace

BodyParams make_body_params(const BodyModel& body, double iso_tol) {
    const IsotropyResult iso =
        is_isotropic(body, iso_tol * std::max(1.0, std::abs(body.inertia.trace())));
    if (!iso.isotropic) {
        std::ostringstream os;
        os << "body inertia tensor is not isotropic (I^ab != I delta^ab); "
              "the dynamics only supports isotropic bodies";
        throw AnisotropicBodyError(os.str());
    }
    return BodyParams{body.total_mass, iso.scalar_inertia};
}

BodyState BodyState::make(ChartPoint x, Vector p, const Matrix& spin) {
    BodyState s;
    s.position = std::move(x);
    s.momentum = std::move(p);
    s.spin_upper = pack_antisymmetric_upper(antisymmetric_part(spin));
    return s;
}

Vector frame_momentum(const BodyState& state, const FrameField& frame) {
    frame.require_in_domain(state.position);
    const Matrix inverse = invert_coframe(frame.coframe(state.position));
    return inverse.transpose() * state.momentum;
}

Vector material_velocity(const Matrix& eta, const Vector& xdot_frame,
                         const ConnectionCoeffs& conn, const Vector& r) {
    const int n = static_cast<int>(r.size());
    const Matrix transport = connection_matrix(conn, xdot_frame);
    Vector rdot = Vector::Zero(n);
    for (int a = 0; a < n; ++a) {
        double sum = 0.0;
        for (int b = 0; b < n; ++b) sum += (eta(b, a) + transport(b, a)) * r(b);
        rdot(a) = sum;
    }
    return rdot;
}

double lagrangian(const Vector& xdot_frame, const Matrix& eta, const ConnectionCoeffs& conn,
                  const BodyParams& params) {
    const Matrix omega = eta + connection_matrix(conn, xdot_frame);
    return 0.5 * params.mass * xdot_frame.squaredNorm() +
           0.5 * params.inertia * omega.squaredNorm();
}

Momenta momenta_from_velocities(const Vector& xdot_frame, const Matrix& eta,
                                const FrameField& frame, const ChartPoint& x,
                                const ConnectionCoeffs& conn, const BodyParams& params) {
    frame.require_in_domain(x);
    const int n = frame.dim;
    const Matrix transport = connection_matrix(conn, xdot_frame);
    Matrix spin = Matrix::Zero(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            spin(a, b) = params.inertia * (eta(a, b) + transport(a, b));
            spin(b, a) = -spin(a, b);
        }
    const Vector p_frame =
        params.mass * xdot_frame + gamma_spin_contraction(conn.gamma, spin);
    const Matrix coframe = frame.coframe(x);
    return Momenta{coframe.transpose() * p_frame, spin};
}

Vector velocity_from_momenta(const BodyState& state, const FrameField& frame,
                             const ConnectionCoeffs& conn, const BodyParams& params) {
    const Matrix inverse = invert_coframe(frame.coframe(state.position));
    return velocity_core(inverse, conn.gamma, state, params);
}

double hamiltonian(const BodyState& state, const FrameField& frame,
                   const ConnectionCoeffs& conn, const BodyParams& params) {
    frame.require_in_domain(state.position);
    const Matrix inverse = invert_coframe(frame.coframe(state.position));
    return hamiltonian_core(inverse, conn.gamma, state, params);
}

std::optional<double> spin_energy_term(const BodyState& state, const BodyParams& params) {
    const double s2 = state.spin_upper.squaredNorm() * 2.0;  // sum over both triangles
    if (params.inertia > 0.0) return s2 / (2.0 * params.inertia);
    if (s2 == 0.0) return 0.0;
    return std::nullopt;  // I = 0 with S != 0: no finite value
}

double spin_casimir(const Matrix& spin) { return 0.5 * spin.squaredNorm(); }

Matrix spin_basis_coefficient(int a, int b, int n) {
    Matrix m = Matrix::Zero(n, n);
    m(a, b) = 0.5;
    m(b, a) = -0.5;
    return m;
}

Matrix spin_bracket(const Matrix& a, const Matrix& b) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
        throw ShapeMismatchError("spin_bracket needs square matrices of equal size");
    }
    return b * a - a * b;
}

Matrix spin_rate(const BodyState& state, const FrameField& frame, const ConnectionCoeffs& conn,
                 const BodyParams& params) {
    frame.require_in_domain(state.position);
    const Vector v = velocity_from_momenta(state, frame, conn, params);
    return spin_rate_core(state.spin_matrix(), connection_matrix(conn, v));
}

Vector momentum_rate(const BodyState& state, const FrameField& frame, const BodyParams& params,
                     const DiffOptions& opts) {
    frame.require_in_domain(state.position);
    const int n = frame.dim;
    const ChartPoint& x = state.position;
    const Matrix spin = state.spin_matrix();

    const bool analytic =
        opts.mode != DerivativeMode::FiniteDifference && frame.coframe_derivatives;
    if (opts.mode == DerivativeMode::Analytic && !frame.coframe_derivatives) {
        throw DerivativeUnavailableError("analytic momentum rate needs coframe derivatives");
    }

    if (!analytic) {
        Vector rate(n);
        for (int i = 0; i < n; ++i) {
            const double h = fd_step_for(opts, x(i));
            ChartPoint xp = x, xm = x;
            xp(i) += h;
            xm(i) -= h;
            const double hp = hamiltonian_nocheck(frame, xp, state.momentum, spin, params, opts);
            const double hm = hamiltonian_nocheck(frame, xm, state.momentum, spin, params, opts);
            rate(i) = -(hp - hm) / (xp(i) - xm(i));
        }
        return rate;
    }

    const FramePointData data = frame_data_at(frame, x, opts);
    const ConnectionCoeffs conn = connection_from_frame(frame, x, opts);
    const Tensor4 dgamma = connection_coordinate_derivatives(frame, x, opts);
    const Vector pi = data.inverse.transpose() * state.momentum -
                      gamma_spin_contraction(conn.gamma, spin);

    Vector rate(n);
    for (int i = 0; i < n; ++i) {
        // d_i F = -F (d_i E) F
        Matrix dei(n, n);
        for (int a = 0; a < n; ++a)
            for (int k = 0; k < n; ++k) dei(a, k) = data.derivatives(i, a, k);
        const Matrix dfi = -data.inverse * dei * data.inverse;

        double dh = 0.0;
        for (int a = 0; a < n; ++a) {
            double dpi = 0.0;
            for (int j = 0; j < n; ++j) dpi += dfi(j, a) * state.momentum(j);
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) dpi -= dgamma(i, a, c, d) * spin(c, d);
            dh += pi(a) * dpi;
        }
        rate(i) = -dh / params.mass;
    }
    return rate;
}

StateDerivative state_derivative(const BodyState& state, const FrameField& frame,
                                 const BodyParams& params, const DiffOptions& opts) {
    frame.require_in_domain(state.position);
    const FramePointData data = frame_data_at(frame, state.position, opts);
    const ConnectionCoeffs conn = connection_from_frame(frame, state.position, opts);
    const Vector v = velocity_core(data.inverse, conn.gamma, state, params);

    StateDerivative d;
    d.position_rate = data.inverse * v;  // dx^i/dt = e^i_a xdot^a
    d.momentum_rate = momentum_rate(state, frame, params, opts);
    d.spin_rate = spin_rate_core(state.spin_matrix(), connection_matrix(conn, v));
    return d;
}

BodyState state_from_velocity(const FrameField& frame, const ChartPoint& x,
                              const Vector& coord_velocity, const Matrix& spin,
                              const BodyParams& params, const DiffOptions& opts) {
    frame.require_in_domain(x);
    const Matrix coframe = frame.coframe(x);
    const ConnectionCoeffs conn = connection_from_frame(frame, x, opts);
    const Vector v_frame = coframe * coord_velocity;
    const Matrix spin_a = antisymmetric_part(spin);
    const Vector p_frame =
        params.mass * v_frame + gamma_spin_contraction(conn.gamma, spin_a);
    return BodyState::make(x, coframe.transpose() * p_frame, spin_a);
}

}  // namespace tangentbody
