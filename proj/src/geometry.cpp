#include "tangentbody/geometry.hpp"

#include <cmath>

namespace tangentbody {

namespace {

// d_i e^a_j - d_j e^a_i
inline double antisym_derivative(const Tensor3& de, int a, int i, int j) {
    return de(i, a, j) - de(j, a, i);
}

Tensor3 commutation_from_data(const FramePointData& data) {
    const int n = static_cast<int>(data.coframe.rows());
    Tensor3 c(n, n, n);
    c.setZero();
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            for (int cc = b + 1; cc < n; ++cc) {
                double sum = 0.0;
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        sum += data.inverse(i, b) * data.inverse(j, cc) *
                               antisym_derivative(data.derivatives, a, i, j);
                c(a, b, cc) = sum;
                c(a, cc, b) = -sum;  // antisymmetry in the last pair is structural
            }
        }
    }
    return c;
}

Tensor3 gamma_from_commutation(const Tensor3& c) {
    const int n = static_cast<int>(c.dimension(0));
    Tensor3 g(n, n, n);
    g.setZero();
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            for (int cc = b + 1; cc < n; ++cc) {
                const double val = 0.5 * (c(b, cc, a) + c(cc, a, b) - c(a, b, cc));
                g(a, b, cc) = val;
                g(a, cc, b) = -val;
            }
        }
    }
    return g;
}

Tensor3 connection_at_nocheck(const FrameField& frame, const ChartPoint& x,
                              const DiffOptions& opts) {
    return gamma_from_commutation(commutation_from_data(frame_data_at(frame, x, opts)));
}

bool analytic_gamma_derivatives_available(const FrameField& frame, const DiffOptions& opts) {
    return opts.mode != DerivativeMode::FiniteDifference && frame.coframe_derivatives &&
           frame.coframe_second_derivatives;
}

// d_k gamma_abc from the analytic first and second coframe derivatives.
Tensor4 gamma_derivatives_analytic(const FrameField& frame, const ChartPoint& x) {
    const int n = frame.dim;
    const Matrix e = frame.coframe(x);
    const Matrix f = invert_coframe(e);
    const Tensor3 de = frame.coframe_derivatives(x);
    const Tensor4 d2e = frame.coframe_second_derivatives(x);

    // d_k F = -F (d_k E) F
    std::vector<Matrix> df(n);
    for (int k = 0; k < n; ++k) {
        Matrix dek(n, n);
        for (int a = 0; a < n; ++a)
            for (int i = 0; i < n; ++i) dek(a, i) = de(k, a, i);
        df[k] = -f * dek * f;
    }

    Tensor4 dc(n, n, n, n);
    dc.setZero();
    for (int k = 0; k < n; ++k) {
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                for (int cc = b + 1; cc < n; ++cc) {
                    double sum = 0.0;
                    for (int i = 0; i < n; ++i) {
                        for (int j = 0; j < n; ++j) {
                            const double delta = antisym_derivative(de, a, i, j);
                            const double ddelta =
                                (d2e(k, i, a, j) - d2e(k, j, a, i));
                            sum += df[k](i, b) * f(j, cc) * delta +
                                   f(i, b) * df[k](j, cc) * delta +
                                   f(i, b) * f(j, cc) * ddelta;
                        }
                    }
                    dc(k, a, b, cc) = sum;
                    dc(k, a, cc, b) = -sum;
                }
            }
        }
    }

    Tensor4 dg(n, n, n, n);
    dg.setZero();
    for (int k = 0; k < n; ++k)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int cc = b + 1; cc < n; ++cc) {
                    const double val =
                        0.5 * (dc(k, b, cc, a) + dc(k, cc, a, b) - dc(k, a, b, cc));
                    dg(k, a, b, cc) = val;
                    dg(k, a, cc, b) = -val;
                }
    return dg;
}

Tensor4 gamma_derivatives_fd(const FrameField& frame, const ChartPoint& x,
                             const DiffOptions& opts) {
    const int n = frame.dim;
    Tensor4 dg(n, n, n, n);
    for (int k = 0; k < n; ++k) {
        const double h = fd_step_for(opts, x(k));
        ChartPoint xp = x, xm = x;
        xp(k) += h;
        xm(k) -= h;
        const double width = xp(k) - xm(k);
        const Tensor3 gp = connection_at_nocheck(frame, xp, opts);
        const Tensor3 gm = connection_at_nocheck(frame, xm, opts);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int cc = 0; cc < n; ++cc)
                    dg(k, a, b, cc) = (gp(a, b, cc) - gm(a, b, cc)) / width;
    }
    return dg;
}

// Curvature components assembled from frame-label data.
Tensor4 riemann_from_pieces(const Tensor3& gamma, const Tensor3& comm, const Tensor4& dgamma,
                            const Matrix& inverse) {
    const int n = static_cast<int>(gamma.dimension(0));
    // frame-direction derivatives dhat_c gamma = e^i_c d_i gamma
    Tensor4 fd(n, n, n, n);
    fd.setZero();
    for (int c = 0; c < n; ++c)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int d = 0; d < n; ++d) {
                    double sum = 0.0;
                    for (int i = 0; i < n; ++i) sum += inverse(i, c) * dgamma(i, a, b, d);
                    fd(c, a, b, d) = sum;
                }

    Tensor4 r(n, n, n, n);
    r.setZero();
    for (int c = 0; c < n; ++c) {
        for (int d = c + 1; d < n; ++d) {
            for (int a = 0; a < n; ++a) {
                for (int b = a + 1; b < n; ++b) {
                    double val = fd(c, d, a, b) - fd(d, c, a, b);
                    for (int e = 0; e < n; ++e) {
                        val += gamma(e, a, b) * comm(e, c, d);
                        val += gamma(c, a, e) * gamma(d, e, b) -
                               gamma(d, a, e) * gamma(c, e, b);
                    }
                    r(c, d, a, b) = val;
                    r(d, c, a, b) = -val;
                    r(c, d, b, a) = -val;
                    r(d, c, b, a) = val;
                }
            }
        }
    }
    return r;
}

}  // namespace

Tensor3 commutation_coefficients(const FrameField& frame, const ChartPoint& x,
                                 const DiffOptions& opts) {
    frame.require_in_domain(x);
    return commutation_from_data(frame_data_at(frame, x, opts));
}

ConnectionCoeffs connection_from_frame(const FrameField& frame, const ChartPoint& x,
                                       const DiffOptions& opts) {
    frame.require_in_domain(x);
    return {connection_at_nocheck(frame, x, opts)};
}

Tensor4 connection_coordinate_derivatives(const FrameField& frame, const ChartPoint& x,
                                          const DiffOptions& opts) {
    frame.require_in_domain(x);
    if (analytic_gamma_derivatives_available(frame, opts)) {
        return gamma_derivatives_analytic(frame, x);
    }
    if (opts.mode == DerivativeMode::Analytic) {
        throw DerivativeUnavailableError(
            "analytic connection derivatives need coframe second derivatives");
    }
    return gamma_derivatives_fd(frame, x, opts);
}

CurvatureTensor curvature_from_connection(const FrameField& frame, const ChartPoint& x,
                                          const DiffOptions& opts) {
    frame.require_in_domain(x);
    const FramePointData data = frame_data_at(frame, x, opts);
    const Tensor3 comm = commutation_from_data(data);
    const Tensor3 gamma = gamma_from_commutation(comm);
    const Tensor4 dgamma = connection_coordinate_derivatives(frame, x, opts);
    return {riemann_from_pieces(gamma, comm, dgamma, data.inverse)};
}

StructureResiduals verify_structure_equations(const FrameField& frame, const ChartPoint& x,
                                              const DiffOptions& opts) {
    frame.require_in_domain(x);
    const int n = frame.dim;
    const FramePointData data = frame_data_at(frame, x, opts);
    const Tensor3 comm = commutation_from_data(data);
    const Tensor3 gamma = gamma_from_commutation(comm);

    StructureResiduals res;
    // First structure equation in frame components:
    // C^a_bc = gamma_cab - gamma_bac.
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = b + 1; c < n; ++c)
                res.first_structure = std::max(
                    res.first_structure,
                    std::abs(comm(a, b, c) - gamma(c, a, b) + gamma(b, a, c)));

    // Second structure equation, two routes. Route one works entirely in
    // frame labels; route two differentiates the coordinate components of
    // omega and converts the resulting 2-form back to the frame basis.
    const Tensor4 dgamma = connection_coordinate_derivatives(frame, x, opts);
    const Tensor4 riem = riemann_from_pieces(gamma, comm, dgamma, data.inverse);

    const bool analytic = analytic_gamma_derivatives_available(frame, opts);
    // omega coordinate components w(i, a, b) = gamma_cab e^c_i and their
    // coordinate derivatives dw(k, i, a, b) = d_k w(i, a, b).
    auto omega_at = [&](const ChartPoint& p) {
        const Matrix e = frame.coframe(p);
        const Tensor3 g = connection_at_nocheck(frame, p, opts);
        Tensor3 w(n, n, n);
        w.setZero();
        for (int i = 0; i < n; ++i)
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    double sum = 0.0;
                    for (int c = 0; c < n; ++c) sum += g(c, a, b) * e(c, i);
                    w(i, a, b) = sum;
                }
        return w;
    };
    const Tensor3 w = omega_at(x);
    Tensor4 dw(n, n, n, n);
    if (analytic) {
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b) {
                        double sum = 0.0;
                        for (int c = 0; c < n; ++c)
                            sum += dgamma(k, c, a, b) * data.coframe(c, i) +
                                   gamma(c, a, b) * data.derivatives(k, c, i);
                        dw(k, i, a, b) = sum;
                    }
    } else {
        for (int k = 0; k < n; ++k) {
            const double h = fd_step_for(opts, x(k));
            ChartPoint xp = x, xm = x;
            xp(k) += h;
            xm(k) -= h;
            const double width = xp(k) - xm(k);
            const Tensor3 wp = omega_at(xp);
            const Tensor3 wm = omega_at(xm);
            for (int i = 0; i < n; ++i)
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b)
                        dw(k, i, a, b) = (wp(i, a, b) - wm(i, a, b)) / width;
        }
    }

    for (int c = 0; c < n; ++c) {
        for (int d = c + 1; d < n; ++d) {
            for (int a = 0; a < n; ++a) {
                for (int b = a + 1; b < n; ++b) {
                    double coord = 0.0;  // e^i_c e^j_d Omega_ij,ab
                    for (int i = 0; i < n; ++i) {
                        for (int j = 0; j < n; ++j) {
                            double omega_ij = dw(i, j, a, b) - dw(j, i, a, b);
                            for (int e = 0; e < n; ++e)
                                omega_ij += w(i, a, e) * w(j, e, b) -
                                            w(j, a, e) * w(i, e, b);
                            coord += data.inverse(i, c) * data.inverse(j, d) * omega_ij;
                        }
                    }
                    res.curvature_consistency =
                        std::max(res.curvature_consistency,
                                 std::abs(riem(c, d, a, b) - coord));
                }
            }
        }
    }
    return res;
}

double sectional_curvature(const CurvatureTensor& curv, int c, int d) {
    return curv.riemann(c, d, c, d);
}

Tensor3 christoffels_at(const FrameField& frame, const ChartPoint& x, const DiffOptions& opts) {
    frame.require_in_domain(x);
    const int n = frame.dim;
    const FramePointData data = frame_data_at(frame, x, opts);
    const Matrix g = data.coframe.transpose() * data.coframe;
    const Matrix ginv = g.inverse();

    Tensor3 dg(n, n, n);  // (k, i, j) -> d_k g_ij
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double sum = 0.0;
                for (int a = 0; a < n; ++a)
                    sum += data.derivatives(k, a, i) * data.coframe(a, j) +
                           data.coframe(a, i) * data.derivatives(k, a, j);
                dg(k, i, j) = sum;
            }

    Tensor3 chr(n, n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double sum = 0.0;
                for (int l = 0; l < n; ++l)
                    sum += ginv(i, l) * (dg(j, l, k) + dg(k, j, l) - dg(l, j, k));
                chr(i, j, k) = 0.5 * sum;
            }
    return chr;
}

Matrix connection_matrix(const ConnectionCoeffs& conn, const Vector& xdot_frame) {
    const int n = conn.dim();
    Matrix m = Matrix::Zero(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            double sum = 0.0;
            for (int c = 0; c < n; ++c) sum += xdot_frame(c) * conn.gamma(c, a, b);
            m(a, b) = sum;
            m(b, a) = -sum;
        }
    return m;
}

}  // namespace tangentbody
