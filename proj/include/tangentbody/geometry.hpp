#pragma once

#include "tangentbody/frame_field.hpp"

namespace tangentbody {

// Conventions used throughout (fixed once, validated by the curvature oracles):
//   commutation   d theta^a = 1/2 C^a_bc theta^b ^ theta^c,
//                 C^a_bc = e^i_b e^j_c (d_i e^a_j - d_j e^a_i)
//   connection    d theta^a + omega^a_b ^ theta^b = 0,  omega_ab + omega_ba = 0,
//                 omega_bc = gamma_abc theta^a,
//                 gamma_abc = 1/2 (C_bca + C_cab - C_abc)
//   curvature     Omega_a^b = d omega_a^b + omega_a^c ^ omega_c^b
//                           = 1/2 R_cda^b theta^c ^ theta^d
// With these choices the round sphere of radius R gives the sectional
// curvature K = R_1212 = +1/R^2 and the hyperbolic plane gives K = -1.

/// Connection coefficients gamma_abc at a point. All indices are orthonormal
/// frame labels; antisymmetric in the last two by construction.
struct ConnectionCoeffs {
    Tensor3 gamma;  ///< (a, b, c) -> gamma_abc
    int dim() const { return static_cast<int>(gamma.dimension(0)); }
};

/// Orthonormal-frame Riemann components at a point.
struct CurvatureTensor {
    Tensor4 riemann;  ///< (c, d, a, b) -> R_cda^b
    int dim() const { return static_cast<int>(riemann.dimension(0)); }
};

struct StructureResiduals {
    /// Max-norm residual of the first structure equation, evaluated with the
    /// computed gamma. Checks the algebraic solve.
    double first_structure = 0.0;
    /// Max-norm difference between the curvature assembled from frame-label
    /// data and the curvature assembled by exterior differentiation of the
    /// coordinate components of omega. The two paths share only the frame
    /// inputs, so this bounds the consistency of the whole pipeline.
    double curvature_consistency = 0.0;
};

/// C^a_bc with the convention above; antisymmetric in (b, c) by construction.
Tensor3 commutation_coefficients(const FrameField& frame, const ChartPoint& x,
                                 const DiffOptions& opts = {});

ConnectionCoeffs connection_from_frame(const FrameField& frame, const ChartPoint& x,
                                       const DiffOptions& opts = {});

/// Coordinate derivatives (i, a, b, c) -> d_i gamma_abc. Analytic when the
/// frame carries second derivatives, otherwise central differences of
/// connection_from_frame.
Tensor4 connection_coordinate_derivatives(const FrameField& frame, const ChartPoint& x,
                                          const DiffOptions& opts = {});

CurvatureTensor curvature_from_connection(const FrameField& frame, const ChartPoint& x,
                                          const DiffOptions& opts = {});

StructureResiduals verify_structure_equations(const FrameField& frame, const ChartPoint& x,
                                              const DiffOptions& opts = {});

/// Sectional curvature of the coordinate 2-plane spanned by frame directions
/// (c, d): K = R_cdc^d (no sum).
double sectional_curvature(const CurvatureTensor& curv, int c, int d);

/// Coordinate Christoffel symbols (i, j, k) -> Gamma^i_jk of the metric
/// g = E^T E, from the frame data alone.
Tensor3 christoffels_at(const FrameField& frame, const ChartPoint& x,
                        const DiffOptions& opts = {});

/// Gamma_ab = xdot^c gamma_cab for a frame-component velocity. Antisymmetric.
Matrix connection_matrix(const ConnectionCoeffs& conn, const Vector& xdot_frame);

}  // namespace tangentbody
