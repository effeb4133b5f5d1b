#include "tangentbody/validate.hpp"

#include <cmath>

namespace tangentbody {

namespace {

// Three-point derivative at the middle sample, second order also when the
// two intervals differ (the final integration step may be shorter).
template <typename T>
T central_rate(const T& fm, const T& f0, const T& fp, double dm, double dp) {
    return (fp * (dm * dm) - fm * (dp * dp) - f0 * (dm * dm - dp * dp)) /
           (dm * dp * (dm + dp));
}

void require_samples(const TrajectoryRecord& traj, int count) {
    if (static_cast<int>(traj.samples.size()) < count) {
        throw TooFewSamplesError("trajectory holds " + std::to_string(traj.samples.size()) +
                                 " samples, need at least " + std::to_string(count));
    }
}

struct SampleData {
    Matrix inverse;        // e^i_a
    Vector v_frame;        // xdot^a
    Vector v_coord;        // dx^i/dt
    Matrix spin;           // S_ab
    ConnectionCoeffs conn;
};

std::vector<SampleData> sample_data(const TrajectoryRecord& traj, const FrameField& frame,
                                    const BodyParams& params, const DiffOptions& opts) {
    std::vector<SampleData> out;
    out.reserve(traj.samples.size());
    for (const auto& s : traj.samples) {
        SampleData d;
        d.inverse = invert_coframe(frame.coframe(s.state.position));
        d.conn = connection_from_frame(frame, s.state.position, opts);
        d.v_frame = velocity_from_momenta(s.state, frame, d.conn, params);
        d.v_coord = d.inverse * d.v_frame;
        d.spin = s.state.spin_matrix();
        out.push_back(std::move(d));
    }
    return out;
}

}  // namespace

double covariant_spin_residual(const TrajectoryRecord& traj, const FrameField& frame,
                               const BodyParams& params, const DiffOptions& opts) {
    require_samples(traj, 3);
    const int n = frame.dim;
    const auto data = sample_data(traj, frame, params, opts);

    // Spin in coordinate components S^ij = e^i_a e^j_b S_ab; the transport
    // uses the metric Christoffels, so the check carries no frame-orientation
    // convention.
    std::vector<Matrix> s_coord(traj.samples.size());
    for (size_t k = 0; k < traj.samples.size(); ++k) {
        s_coord[k] = data[k].inverse * data[k].spin * data[k].inverse.transpose();
    }

    double residual = 0.0;
    for (size_t k = 1; k + 1 < traj.samples.size(); ++k) {
        const double dm = traj.samples[k].t - traj.samples[k - 1].t;
        const double dp = traj.samples[k + 1].t - traj.samples[k].t;
        const Matrix rate = central_rate(s_coord[k - 1], s_coord[k], s_coord[k + 1], dm, dp);
        const Tensor3 chr = christoffels_at(frame, traj.samples[k].state.position, opts);
        Matrix transport = Matrix::Zero(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double sum = 0.0;
                for (int kk = 0; kk < n; ++kk)
                    for (int l = 0; l < n; ++l)
                        sum += chr(i, kk, l) * data[k].v_coord(kk) * s_coord[k](l, j) +
                               chr(j, kk, l) * data[k].v_coord(kk) * s_coord[k](i, l);
                transport(i, j) = sum;
            }
        residual = std::max(residual, (rate + transport).cwiseAbs().maxCoeff());
    }
    return residual;
}

double papapetrou_residual(const TrajectoryRecord& traj, const FrameField& frame,
                           const BodyParams& params, const DiffOptions& opts) {
    require_samples(traj, 3);
    const int n = frame.dim;
    const auto data = sample_data(traj, frame, params, opts);

    double residual = 0.0;
    for (size_t k = 1; k + 1 < traj.samples.size(); ++k) {
        const double dm = traj.samples[k].t - traj.samples[k - 1].t;
        const double dp = traj.samples[k + 1].t - traj.samples[k].t;
        const Vector vrate =
            central_rate(data[k - 1].v_frame, data[k].v_frame, data[k + 1].v_frame, dm, dp);
        const Matrix transport = connection_matrix(data[k].conn, data[k].v_frame);
        const Vector accel = vrate + transport * data[k].v_frame;

        const CurvatureTensor curv =
            curvature_from_connection(frame, traj.samples[k].state.position, opts);
        Vector force = Vector::Zero(n);
        for (int a = 0; a < n; ++a) {
            double sum = 0.0;
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    for (int d = 0; d < n; ++d)
                        sum += curv.riemann(c, d, a, b) * data[k].spin(c, d) * data[k].v_frame(b);
            force(a) = sum;
        }
        residual = std::max(residual, (params.mass * accel - force).cwiseAbs().maxCoeff());
    }
    return residual;
}

std::vector<double> geodesic_curvature_profile(const TrajectoryRecord& traj,
                                               const FrameField& frame, const BodyParams& params,
                                               const DiffOptions& opts) {
    if (frame.dim != 2) {
        throw DimensionMismatchError("geodesic curvature is only defined on 2-d charts");
    }
    require_samples(traj, 5);
    const auto data = sample_data(traj, frame, params, opts);

    std::vector<double> profile;
    profile.reserve(traj.samples.size() - 2);
    for (size_t k = 1; k + 1 < traj.samples.size(); ++k) {
        const double dm = traj.samples[k].t - traj.samples[k - 1].t;
        const double dp = traj.samples[k + 1].t - traj.samples[k].t;
        const Vector vrate =
            central_rate(data[k - 1].v_frame, data[k].v_frame, data[k + 1].v_frame, dm, dp);
        const Matrix transport = connection_matrix(data[k].conn, data[k].v_frame);
        const Vector accel = vrate + transport * data[k].v_frame;
        const double speed = data[k].v_frame.norm();
        if (speed < 1e-14) {
            profile.push_back(0.0);
            continue;
        }
        const Vector unit = data[k].v_frame / speed;
        Vector normal(2);
        normal << -unit(1), unit(0);  // left normal in the frame orientation
        profile.push_back(accel.dot(normal) / (speed * speed));
    }
    return profile;
}

TrajectoryDiagnostics compute_diagnostics(const TrajectoryRecord& traj, const FrameField& frame,
                                          const BodyParams& params, const DiffOptions& opts) {
    TrajectoryDiagnostics d;
    d.termination_reason = to_string(traj.reason);
    if (traj.samples.empty()) return d;

    const double h0 = traj.samples.front().hamiltonian;
    const double nu0 = std::sqrt(traj.samples.front().casimir);
    double dh = 0.0, dnu = 0.0;
    for (const auto& s : traj.samples) {
        dh = std::max(dh, std::abs(s.hamiltonian - h0));
        dnu = std::max(dnu, std::abs(std::sqrt(s.casimir) - nu0));
    }
    d.energy_drift_rel = std::abs(h0) > 1e-14 ? dh / std::abs(h0) : dh;
    d.spin_norm_drift_rel = nu0 > 1e-14 ? dnu / nu0 : dnu;

    if (traj.samples.size() >= 3) {
        d.covariant_spin_residual = covariant_spin_residual(traj, frame, params, opts);
        d.papapetrou_residual = papapetrou_residual(traj, frame, params, opts);
    }
    if (frame.dim == 2 && traj.samples.size() >= 5) {
        const auto profile = geodesic_curvature_profile(traj, frame, params, opts);
        double mean = 0.0;
        for (double v : profile) mean += v;
        mean /= static_cast<double>(profile.size());
        double var = 0.0;
        for (double v : profile) var += (v - mean) * (v - mean);
        var /= static_cast<double>(profile.size());
        d.geodesic_curvature_mean = mean;
        d.geodesic_curvature_std = std::sqrt(var);
    }
    d.spin_energy_term = spin_energy_term(traj.samples.front().state, params);
    return d;
}

}  // namespace tangentbody
