#pragma once

#include <optional>

#include "tangentbody/body.hpp"
#include "tangentbody/geometry.hpp"

namespace tangentbody {

/// Scalar parameters of an isotropic body.
struct BodyParams {
    double mass = 1.0;     ///< m > 0
    double inertia = 0.0;  ///< I >= 0
};

/// Reduce a BodyModel to (m, I). Anisotropic bodies are rejected here with
/// AnisotropicBodyError: the dynamics below is only valid for I^ab = I delta^ab.
BodyParams make_body_params(const BodyModel& body, double iso_tol = 1e-9);

/// Phase-space state (x^i, p_i, S_ab). Momenta are coordinate momenta
/// (canonical conjugates of x^i); the spin carries frame labels and is stored
/// as its strict upper triangle so antisymmetry holds exactly.
struct BodyState {
    ChartPoint position;
    Vector momentum;
    Vector spin_upper;

    int dim() const { return static_cast<int>(position.size()); }
    Matrix spin_matrix() const { return unpack_antisymmetric(spin_upper, dim()); }

    /// Build a state from a full spin matrix; the antisymmetric part is kept.
    static BodyState make(ChartPoint x, Vector p, const Matrix& spin);
};

struct StateDerivative {
    Vector position_rate;  ///< dx^i/dt
    Vector momentum_rate;  ///< dp_i/dt
    Matrix spin_rate;      ///< dS_ab/dt, antisymmetric
};

/// Frame components p_a = e^i_a p_i of the coordinate momentum.
Vector frame_momentum(const BodyState& state, const FrameField& frame);

/// Covariant material velocity rdot^a = (eta_b^a + xdot^c gamma_cb^a) r^b of a
/// point at offset r, for frame-component center velocity xdot.
Vector material_velocity(const Matrix& eta, const Vector& xdot_frame,
                         const ConnectionCoeffs& conn, const Vector& r);

/// Kinetic energy L = m/2 (xdot, xdot) + I/2 sum_ab (eta_ab + gamma_cab xdot^c)^2
/// for frame-component velocity and angular velocity eta.
double lagrangian(const Vector& xdot_frame, const Matrix& eta,
                  const ConnectionCoeffs& conn, const BodyParams& params);

struct Momenta {
    Vector momentum;  ///< coordinate momenta p_i
    Matrix spin;      ///< S_ab, antisymmetric
};

/// Legendre map: S_ab = I (eta_ab + gamma_cab xdot^c),
/// p_i = e^a_i (m xdot_a + gamma_acd S^cd).
Momenta momenta_from_velocities(const Vector& xdot_frame, const Matrix& eta,
                                const FrameField& frame, const ChartPoint& x,
                                const ConnectionCoeffs& conn, const BodyParams& params);

/// Inverse Legendre map: xdot^a = (p_a - gamma_acd S^cd) / m.
Vector velocity_from_momenta(const BodyState& state, const FrameField& frame,
                             const ConnectionCoeffs& conn, const BodyParams& params);

/// Evolved Hamiltonian H = (p_a - gamma_acd S^cd)(p_a - gamma_acd S^cd) / 2m.
/// The constant spin term is reported separately by spin_energy_term().
double hamiltonian(const BodyState& state, const FrameField& frame,
                   const ConnectionCoeffs& conn, const BodyParams& params);

/// Constant term sum_ab S_ab^2 / (2 I). Defined for I > 0, and zero when the
/// spin vanishes; otherwise (I = 0, S != 0) there is no finite value and
/// nullopt is returned.
std::optional<double> spin_energy_term(const BodyState& state, const BodyParams& params);

/// Conserved quadratic 1/2 sum_ab S_ab S_ab.
double spin_casimir(const Matrix& spin);
inline double spin_norm(const Matrix& spin) { return std::sqrt(spin_casimir(spin)); }

/// Coefficient matrix of the rotation-algebra basis element S_ab under the
/// full-contraction pairing A:S = A^ab S_ab.
Matrix spin_basis_coefficient(int a, int b, int n);

/// Poisson bracket [A:S, B:S] of two linear spin functions, returned as the
/// coefficient matrix of the result in the same pairing. Bilinear extension of
/// [S_ab, S_cd] = 1/2 (delta_ac S_bd + delta_bd S_ac - delta_ad S_bc - delta_bc S_ad),
/// which works out to the matrix expression B A - A B.
Matrix spin_bracket(const Matrix& a, const Matrix& b);

/// dS_ab/dt = -xdot^c (gamma_ca^d S_db + gamma_cb^d S_ad) with xdot from
/// velocity_from_momenta; exactly antisymmetric.
Matrix spin_rate(const BodyState& state, const FrameField& frame,
                 const ConnectionCoeffs& conn, const BodyParams& params);

/// dp_i/dt = -dH/dx^i. Analytic frame derivatives are used when available,
/// otherwise central differences of the Hamiltonian.
Vector momentum_rate(const BodyState& state, const FrameField& frame,
                     const BodyParams& params, const DiffOptions& opts = {});

/// Full phase-space vector field (dx/dt, dp/dt, dS/dt).
StateDerivative state_derivative(const BodyState& state, const FrameField& frame,
                                 const BodyParams& params, const DiffOptions& opts = {});

/// Convenience: build a state from a coordinate velocity dx^i/dt and a spin
/// matrix, using the Legendre map at the given point.
BodyState state_from_velocity(const FrameField& frame, const ChartPoint& x,
                              const Vector& coord_velocity, const Matrix& spin,
                              const BodyParams& params, const DiffOptions& opts = {});

}  // namespace tangentbody
