#include "tangentbody/frame_field.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace tangentbody {

namespace {

constexpr double kConditionLimit = 1e12;

std::string point_to_string(const ChartPoint& x) {
    std::ostringstream os;
    os << "(";
    for (int i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x(i);
    os << ")";
    return os.str();
}

}  // namespace

double fd_step_for(const DiffOptions& opts, double xi) {
    if (opts.fd_step > 0.0) return opts.fd_step;
    static const double cbrt_eps = std::cbrt(std::numeric_limits<double>::epsilon());
    return std::max(std::abs(xi), 1.0) * cbrt_eps;
}

void FrameField::require_in_domain(const ChartPoint& x) const {
    if (!in_domain(x)) {
        throw OutOfChartError("point " + point_to_string(x) + " is outside the chart domain");
    }
}

Matrix invert_coframe(const Matrix& coframe) {
    Eigen::JacobiSVD<Matrix> svd(coframe, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    if (smin <= 0.0 || sv(0) / smin > kConditionLimit) {
        throw SingularFrameError("coframe matrix is singular or badly conditioned (cond = " +
                                 std::to_string(smin > 0.0 ? sv(0) / smin
                                                           : std::numeric_limits<double>::infinity()) +
                                 ")");
    }
    return svd.solve(Matrix::Identity(coframe.rows(), coframe.cols()));
}

Matrix coframe_at(const FrameField& frame, const ChartPoint& x) { return frame.coframe(x); }

Tensor3 coframe_derivatives_at(const FrameField& frame, const ChartPoint& x,
                               const DiffOptions& opts) {
    const int n = frame.dim;
    const bool want_analytic = opts.mode != DerivativeMode::FiniteDifference;
    if (want_analytic && frame.coframe_derivatives) return frame.coframe_derivatives(x);
    if (opts.mode == DerivativeMode::Analytic) {
        throw DerivativeUnavailableError("frame field carries no analytic coframe derivatives");
    }
    Tensor3 d(n, n, n);
    for (int j = 0; j < n; ++j) {
        const double h = fd_step_for(opts, x(j));
        ChartPoint xp = x, xm = x;
        xp(j) += h;
        xm(j) -= h;
        // divide by the realized spacing, not 2h: the step-representation
        // error otherwise dominates nested differences
        const Matrix diff = (frame.coframe(xp) - frame.coframe(xm)) / (xp(j) - xm(j));
        for (int a = 0; a < n; ++a)
            for (int i = 0; i < n; ++i) d(j, a, i) = diff(a, i);
    }
    return d;
}

FramePointData frame_data_at(const FrameField& frame, const ChartPoint& x,
                             const DiffOptions& opts) {
    FramePointData data;
    data.coframe = frame.coframe(x);
    data.inverse = invert_coframe(data.coframe);
    data.derivatives = coframe_derivatives_at(frame, x, opts);
    return data;
}

Matrix metric_at(const FrameField& frame, const ChartPoint& x) {
    frame.require_in_domain(x);
    const Matrix e = frame.coframe(x);
    invert_coframe(e);  // surface SingularFrameError at degenerate points
    return e.transpose() * e;
}

}  // namespace tangentbody
