#pragma once

#include <functional>

#include "tangentbody/errors.hpp"
#include "tangentbody/types.hpp"

namespace tangentbody {

enum class DerivativeMode {
    Auto,             ///< analytic closures when present, central differences otherwise
    Analytic,         ///< require analytic closures, throw DerivativeUnavailableError if absent
    FiniteDifference  ///< force central differences even when closures exist
};

struct DiffOptions {
    DerivativeMode mode = DerivativeMode::Auto;
    /// Absolute central-difference step. Zero selects the default
    /// h_i = max(|x_i|, 1) * eps^(1/3) per coordinate.
    double fd_step = 0.0;
};

/// Central-difference step for coordinate value xi under the given options.
double fd_step_for(const DiffOptions& opts, double xi);

/// Orthonormal frame field on a single chart.
///
/// `coframe` returns the matrix e^a_i (row a = frame label, column i =
/// coordinate label) of the coframe 1-forms theta^a = e^a_i dx^i. The metric
/// is g_ij = delta_ab e^a_i e^b_j. Derivative closures are optional; when
/// absent they are replaced by central differences of `coframe`.
struct FrameField {
    int dim = 0;
    std::function<Matrix(const ChartPoint&)> coframe;
    /// (j, a, i) -> d_j e^a_i
    std::function<Tensor3(const ChartPoint&)> coframe_derivatives;
    /// (k, j, a, i) -> d_k d_j e^a_i (symmetric in k, j)
    std::function<Tensor4(const ChartPoint&)> coframe_second_derivatives;
    /// Valid-chart predicate; empty means the whole coordinate space.
    std::function<bool(const ChartPoint&)> chart_domain;

    bool in_domain(const ChartPoint& x) const {
        if (x.size() != dim || !x.allFinite()) return false;
        return !chart_domain || chart_domain(x);
    }

    void require_in_domain(const ChartPoint& x) const;
};

/// Coframe, its inverse and first derivatives at one point.
struct FramePointData {
    Matrix coframe;      ///< e^a_i
    Matrix inverse;      ///< e^i_a, coframe * inverse = identity
    Tensor3 derivatives; ///< (j, a, i) -> d_j e^a_i
};

/// Invert a coframe matrix, throwing SingularFrameError when it is singular
/// or numerically near-singular.
Matrix invert_coframe(const Matrix& coframe);

Matrix coframe_at(const FrameField& frame, const ChartPoint& x);

/// d_j e^a_i, analytic or by central differences of the coframe closure.
Tensor3 coframe_derivatives_at(const FrameField& frame, const ChartPoint& x,
                               const DiffOptions& opts = {});

FramePointData frame_data_at(const FrameField& frame, const ChartPoint& x,
                             const DiffOptions& opts = {});

/// Metric g_ij = delta_ab e^a_i e^b_j. Symmetric positive definite on the
/// chart domain.
Matrix metric_at(const FrameField& frame, const ChartPoint& x);

}  // namespace tangentbody
