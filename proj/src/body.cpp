#include "tangentbody/body.hpp"

#include <sstream>

namespace tangentbody {

BodyModel build_body(const std::vector<MassPoint>& points, double center_tol) {
    if (points.empty()) throw EmptyBodyError("body needs at least one mass point");
    const int n = static_cast<int>(points.front().offset.size());
    for (const auto& p : points) {
        if (!(p.mass > 0.0)) throw Error("mass points must have positive mass");
        if (p.offset.size() != n || !p.offset.allFinite())
            throw ShapeMismatchError("mass-point offsets must share one finite dimension");
    }

    BodyModel body;
    body.points = points;
    Vector center = Vector::Zero(n);
    double scale = 0.0;
    for (const auto& p : points) {
        body.total_mass += p.mass;
        center += p.mass * p.offset;
        scale += p.mass * p.offset.norm();
    }
    const double limit = center_tol * std::max(scale, 1e-300);
    if (center.cwiseAbs().maxCoeff() > limit) {
        std::ostringstream os;
        os << "center of mass is offset by " << center.norm()
           << " (limit " << limit << "); offsets must sum to zero";
        throw CenterOffsetError(os.str(), center);
    }

    body.inertia = Matrix::Zero(n, n);
    for (const auto& p : points) body.inertia += p.mass * p.offset * p.offset.transpose();
    return body;
}

IsotropyResult is_isotropic(const BodyModel& body, double tol) {
    const int n = static_cast<int>(body.inertia.rows());
    IsotropyResult result;
    result.scalar_inertia = body.inertia.trace() / n;
    const Matrix deviation =
        body.inertia - result.scalar_inertia * Matrix::Identity(n, n);
    result.isotropic = deviation.cwiseAbs().maxCoeff() <= tol;
    return result;
}

}  // namespace tangentbody
