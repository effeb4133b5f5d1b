#include "tangentbody/scenarios.hpp"

#include <cmath>

namespace tangentbody {

namespace {

Tensor3 zeros3(int n) {
    Tensor3 t(n, n, n);
    t.setZero();
    return t;
}

Tensor4 zeros4(int n) {
    Tensor4 t(n, n, n, n);
    t.setZero();
    return t;
}

Eigen::Vector3d sphere_embed(double radius, double theta, double phi) {
    return radius * Eigen::Vector3d(std::sin(theta) * std::cos(phi),
                                    std::sin(theta) * std::sin(phi), std::cos(theta));
}

double sphere_distance(double radius, const ChartPoint& p, const ChartPoint& q) {
    const Eigen::Vector3d a = sphere_embed(radius, p(0), p(1)).normalized();
    const Eigen::Vector3d b = sphere_embed(radius, q(0), q(1)).normalized();
    return radius * std::atan2(a.cross(b).norm(), a.dot(b));
}

// Great-circle flow on the round sphere, via the embedding.
ChartPoint sphere_geodesic(double radius, const ChartPoint& x0, const Vector& v, double t) {
    const double theta = x0(0), phi = x0(1);
    const Eigen::Vector3d p = sphere_embed(radius, theta, phi);
    const Eigen::Vector3d dp =
        radius * Eigen::Vector3d(
                     std::cos(theta) * std::cos(phi) * v(0) - std::sin(theta) * std::sin(phi) * v(1),
                     std::cos(theta) * std::sin(phi) * v(0) + std::sin(theta) * std::cos(phi) * v(1),
                     -std::sin(theta) * v(0));
    const double speed = dp.norm();
    if (speed < 1e-300) return x0;
    const double angle = speed * t / radius;
    const Eigen::Vector3d xt =
        std::cos(angle) * p + std::sin(angle) * (radius / speed) * dp;
    ChartPoint out(2);
    out << std::acos(std::clamp(xt(2) / radius, -1.0, 1.0)), std::atan2(xt(1), xt(0));
    return out;
}

// Upper-half-plane geodesics through the hyperboloid model of H^2.
ChartPoint hyperbolic_geodesic(const ChartPoint& x0, const Vector& v, double t) {
    const double x = x0(0), y = x0(1);
    const double q = x * x + y * y;
    Eigen::Vector3d point((q + 1.0) / (2.0 * y), (q - 1.0) / (2.0 * y), x / y);
    Eigen::Vector3d dx(x / y, x / y, 1.0 / y);
    Eigen::Vector3d dy((y * y - x * x - 1.0) / (2.0 * y * y),
                       (y * y - x * x + 1.0) / (2.0 * y * y), -x / (y * y));
    Eigen::Vector3d u = dx * v(0) + dy * v(1);
    const double norm2 = -u(0) * u(0) + u(1) * u(1) + u(2) * u(2);
    if (norm2 < 1e-300) return x0;
    const double speed = std::sqrt(norm2);
    const Eigen::Vector3d xt = std::cosh(speed * t) * point + std::sinh(speed * t) * u / speed;
    const double yt = 1.0 / (xt(0) - xt(1));
    ChartPoint out(2);
    out << xt(2) * yt, yt;
    return out;
}

double hyperbolic_distance(const ChartPoint& p, const ChartPoint& q) {
    // 2 asinh(|dz| / (2 sqrt(y1 y2))): same value as acosh(1 + |dz|^2/(2 y1 y2))
    // but does not lose small separations to rounding
    const double d = (p - q).norm();
    return 2.0 * std::asinh(d / (2.0 * std::sqrt(p(1) * q(1))));
}

ChartPoint polar_geodesic(const ChartPoint& x0, const Vector& v, double t) {
    const double r = x0(0), phi = x0(1);
    const Eigen::Vector2d c0(r * std::cos(phi), r * std::sin(phi));
    const Eigen::Vector2d cv(v(0) * std::cos(phi) - r * std::sin(phi) * v(1),
                             v(0) * std::sin(phi) + r * std::cos(phi) * v(1));
    const Eigen::Vector2d ct = c0 + t * cv;
    ChartPoint out(2);
    out << ct.norm(), std::atan2(ct(1), ct(0));
    return out;
}

Vector make_box(std::initializer_list<double> values) {
    Vector v(static_cast<int>(values.size()));
    int i = 0;
    for (double x : values) v(i++) = x;
    return v;
}

}  // namespace

Scenario make_flat_cartesian(int dim) {
    Scenario s;
    s.name = dim == 3 ? "flat_cartesian_3d" : "flat_cartesian_2d";
    s.frame.dim = dim;
    s.frame.coframe = [dim](const ChartPoint&) { return Matrix::Identity(dim, dim); };
    s.frame.coframe_derivatives = [dim](const ChartPoint&) { return zeros3(dim); };
    s.frame.coframe_second_derivatives = [dim](const ChartPoint&) { return zeros4(dim); };
    s.constant_curvature = 0.0;
    s.geodesic_map = [](const ChartPoint& x0, const Vector& v, double t) -> ChartPoint {
        return x0 + t * v;
    };
    s.point_distance = [](const ChartPoint& p, const ChartPoint& q) { return (p - q).norm(); };
    s.sample_lower = Vector::Constant(dim, -2.0);
    s.sample_upper = Vector::Constant(dim, 2.0);
    return s;
}

Scenario make_flat_polar(double chart_margin) {
    Scenario s;
    s.name = "flat_polar_2d";
    s.frame.dim = 2;
    s.frame.coframe = [](const ChartPoint& x) {
        Matrix e = Matrix::Identity(2, 2);
        e(1, 1) = x(0);
        return e;
    };
    s.frame.coframe_derivatives = [](const ChartPoint&) {
        Tensor3 d = zeros3(2);
        d(0, 1, 1) = 1.0;
        return d;
    };
    s.frame.coframe_second_derivatives = [](const ChartPoint&) { return zeros4(2); };
    s.frame.chart_domain = [chart_margin](const ChartPoint& x) { return x(0) > chart_margin; };
    s.constant_curvature = 0.0;
    s.geodesic_map = polar_geodesic;
    s.point_distance = [](const ChartPoint& p, const ChartPoint& q) {
        const Eigen::Vector2d a(p(0) * std::cos(p(1)), p(0) * std::sin(p(1)));
        const Eigen::Vector2d b(q(0) * std::cos(q(1)), q(0) * std::sin(q(1)));
        return (a - b).norm();
    };
    s.sample_lower = make_box({0.5, 0.0});
    s.sample_upper = make_box({3.0, 6.2});
    return s;
}

Scenario make_sphere(double radius, double chart_margin) {
    Scenario s;
    s.name = "sphere";
    s.frame.dim = 2;
    s.frame.coframe = [radius](const ChartPoint& x) {
        Matrix e = Matrix::Zero(2, 2);
        e(0, 0) = radius;
        e(1, 1) = radius * std::sin(x(0));
        return e;
    };
    s.frame.coframe_derivatives = [radius](const ChartPoint& x) {
        Tensor3 d = zeros3(2);
        d(0, 1, 1) = radius * std::cos(x(0));
        return d;
    };
    s.frame.coframe_second_derivatives = [radius](const ChartPoint& x) {
        Tensor4 d = zeros4(2);
        d(0, 0, 1, 1) = -radius * std::sin(x(0));
        return d;
    };
    s.frame.chart_domain = [chart_margin](const ChartPoint& x) {
        return x(0) > chart_margin && x(0) < M_PI - chart_margin;
    };
    s.constant_curvature = 1.0 / (radius * radius);
    s.geodesic_map = [radius](const ChartPoint& x0, const Vector& v, double t) {
        return sphere_geodesic(radius, x0, v, t);
    };
    s.point_distance = [radius](const ChartPoint& p, const ChartPoint& q) {
        return sphere_distance(radius, p, q);
    };
    s.sample_lower = make_box({0.4, 0.0});
    s.sample_upper = make_box({M_PI - 0.4, 6.2});
    return s;
}

Scenario make_hyperbolic_upper_half(double chart_margin) {
    Scenario s;
    s.name = "hyperbolic_upper_half";
    s.frame.dim = 2;
    s.frame.coframe = [](const ChartPoint& x) {
        return Matrix::Identity(2, 2) / x(1);
    };
    s.frame.coframe_derivatives = [](const ChartPoint& x) {
        Tensor3 d = zeros3(2);
        const double inv2 = -1.0 / (x(1) * x(1));
        d(1, 0, 0) = inv2;
        d(1, 1, 1) = inv2;
        return d;
    };
    s.frame.coframe_second_derivatives = [](const ChartPoint& x) {
        Tensor4 d = zeros4(2);
        const double inv3 = 2.0 / (x(1) * x(1) * x(1));
        d(1, 1, 0, 0) = inv3;
        d(1, 1, 1, 1) = inv3;
        return d;
    };
    s.frame.chart_domain = [chart_margin](const ChartPoint& x) { return x(1) > chart_margin; };
    s.constant_curvature = -1.0;
    s.geodesic_map = hyperbolic_geodesic;
    s.point_distance = hyperbolic_distance;
    s.sample_lower = make_box({-1.5, 0.5});
    s.sample_upper = make_box({1.5, 3.0});
    return s;
}

Scenario make_sphere_cylinder(double radius, double chart_margin) {
    Scenario s;
    s.name = "sphere_cylinder";
    s.frame.dim = 3;
    s.frame.coframe = [radius](const ChartPoint& x) {
        Matrix e = Matrix::Zero(3, 3);
        e(0, 0) = radius;
        e(1, 1) = radius * std::sin(x(0));
        e(2, 2) = 1.0;
        return e;
    };
    s.frame.coframe_derivatives = [radius](const ChartPoint& x) {
        Tensor3 d = zeros3(3);
        d(0, 1, 1) = radius * std::cos(x(0));
        return d;
    };
    s.frame.coframe_second_derivatives = [radius](const ChartPoint& x) {
        Tensor4 d = zeros4(3);
        d(0, 0, 1, 1) = -radius * std::sin(x(0));
        return d;
    };
    s.frame.chart_domain = [chart_margin](const ChartPoint& x) {
        return x(0) > chart_margin && x(0) < M_PI - chart_margin;
    };
    s.geodesic_map = [radius](const ChartPoint& x0, const Vector& v, double t) {
        const ChartPoint sp = sphere_geodesic(radius, x0.head(2), v.head(2), t);
        ChartPoint out(3);
        out << sp(0), sp(1), x0(2) + t * v(2);
        return out;
    };
    s.point_distance = [radius](const ChartPoint& p, const ChartPoint& q) {
        const double ds = sphere_distance(radius, p.head(2), q.head(2));
        const double dz = p(2) - q(2);
        return std::sqrt(ds * ds + dz * dz);
    };
    s.sample_lower = make_box({0.4, 0.0, -2.0});
    s.sample_upper = make_box({M_PI - 0.4, 6.2, 2.0});
    return s;
}

Scenario builtin(const std::string& name, double radius) {
    if (name == "flat_cartesian_2d") return make_flat_cartesian(2);
    if (name == "flat_cartesian_3d") return make_flat_cartesian(3);
    if (name == "flat_polar_2d") return make_flat_polar();
    if (name == "sphere") return make_sphere(radius);
    if (name == "hyperbolic_upper_half") return make_hyperbolic_upper_half();
    throw UnknownScenarioError("unknown scenario '" + name + "'");
}

ChartPoint geodesic_oracle(const Scenario& scenario, const BodyState& start,
                           const BodyParams& params, double t) {
    if (!scenario.geodesic_map) {
        throw OracleUnavailableError("scenario '" + scenario.name +
                                     "' has no closed-form geodesic map");
    }
    if (start.spin_upper.size() > 0 && start.spin_upper.cwiseAbs().maxCoeff() > 0.0) {
        throw OracleUnavailableError("geodesic oracle requires a zero-spin state");
    }
    const ConnectionCoeffs conn = connection_from_frame(scenario.frame, start.position);
    const Vector v_frame = velocity_from_momenta(start, scenario.frame, conn, params);
    const Matrix inverse = invert_coframe(scenario.frame.coframe(start.position));
    return scenario.geodesic_map(start.position, inverse * v_frame, t);
}

}  // namespace tangentbody
