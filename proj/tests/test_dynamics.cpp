#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support/test_helpers.hpp"
#include "tangentbody/dynamics.hpp"

using namespace tangentbody;
using namespace tangentbody::testing;

namespace {

ChartPoint point2(double a, double b) {
    ChartPoint x(2);
    x << a, b;
    return x;
}

Vector vec2(double a, double b) {
    Vector v(2);
    v << a, b;
    return v;
}

std::vector<Scenario> all_scenarios() {
    return {make_flat_cartesian(2), make_flat_cartesian(3), make_flat_polar(),
            make_sphere(1.0),       make_hyperbolic_upper_half(), make_sphere_cylinder(1.5)};
}

}  // namespace

TEST_CASE("frame momentum examples") {
    const Scenario flat = make_flat_cartesian(2);
    const BodyState s1 = BodyState::make(point2(0.1, 0.2), vec2(0.3, -0.7), Matrix::Zero(2, 2));
    CHECK((frame_momentum(s1, flat.frame) - s1.momentum).norm() == 0.0);

    const Scenario polar = make_flat_polar();
    const BodyState s2 = BodyState::make(point2(2.0, 0.4), vec2(0, 1), Matrix::Zero(2, 2));
    const Vector p2 = frame_momentum(s2, polar.frame);
    CHECK(p2(0) == 0.0);
    CHECK(p2(1) == doctest::Approx(0.5).epsilon(1e-14));

    const Scenario sphere = make_sphere(1.0);
    const BodyState s3 = BodyState::make(point2(M_PI / 2, 0.0), vec2(0, 1), Matrix::Zero(2, 2));
    const Vector p3 = frame_momentum(s3, sphere.frame);
    CHECK(p3(1) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("material velocity") {
    const int n = 2;
    ConnectionCoeffs flat_conn{Tensor3(n, n, n)};
    flat_conn.gamma.setZero();

    SUBCASE("no rotation, no connection") {
        CHECK(material_velocity(Matrix::Zero(2, 2), vec2(0, 0), flat_conn, vec2(1, 2)).norm() ==
              0.0);
    }
    SUBCASE("pure rotation") {
        Matrix eta = Matrix::Zero(2, 2);
        const double omega = 0.8;
        eta(0, 1) = omega;
        eta(1, 0) = -omega;
        const Vector rdot = material_velocity(eta, vec2(0, 0), flat_conn, vec2(1, 0));
        CHECK(rdot(0) == 0.0);
        CHECK(rdot(1) == omega);
    }
    SUBCASE("parallel transport drift along a sphere meridian") {
        const Scenario s = make_sphere(1.3);
        const double theta0 = 0.7, phi0 = 1.1, theta_rate = 0.4;
        auto curve = [&](double t) { return point2(theta0 + theta_rate * t, phi0); };
        auto curve_velocity = [&](double) { return vec2(theta_rate, 0.0); };
        // transport a generic coordinate vector for a while, then compare the
        // oracle's frame-component rate with material_velocity at eta = 0
        const Vector v0 = vec2(0.3, 0.9);
        const double t = 0.5, dt = 1e-4;
        auto frame_components = [&](double tt) {
            const Vector vi = parallel_transport_oracle(s.frame, curve, curve_velocity, v0, tt,
                                                         2000);
            return Vector(s.frame.coframe(curve(tt)) * vi);
        };
        const Vector rate_oracle = (frame_components(t + dt) - frame_components(t - dt)) / (2 * dt);
        const ChartPoint xt = curve(t);
        const ConnectionCoeffs conn = connection_from_frame(s.frame, xt);
        const Vector xdot_frame = s.frame.coframe(xt) * curve_velocity(t);
        const Vector rate = material_velocity(Matrix::Zero(2, 2), xdot_frame, conn,
                                              frame_components(t));
        CHECK((rate - rate_oracle).norm() < 1e-6);
    }
}

TEST_CASE("lagrangian examples") {
    const int n = 2;
    ConnectionCoeffs flat_conn{Tensor3(n, n, n)};
    flat_conn.gamma.setZero();
    const BodyParams params{2.0, 0.7};

    CHECK(lagrangian(vec2(0, 0), Matrix::Zero(2, 2), flat_conn, params) == 0.0);

    auto gen = rng(3);
    const Vector v = random_vector(2, gen);
    const Matrix eta = random_antisymmetric(2, gen);
    const double expected =
        0.5 * params.mass * v.squaredNorm() + 0.5 * params.inertia * eta.squaredNorm();
    CHECK(lagrangian(v, eta, flat_conn, params) == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("legendre round trip and kinetic identity on all scenarios") {
    auto gen = rng(17);
    for (const auto& s : all_scenarios()) {
        const int n = s.frame.dim;
        const BodyParams params{1.0 + 0.5 * std::abs(random_vector(1, gen)(0)), 0.6};
        for (int trial = 0; trial < 100; ++trial) {
            const ChartPoint x = random_point(s, gen);
            const Vector v = random_vector(n, gen);
            const Matrix eta = random_antisymmetric(n, gen);
            const ConnectionCoeffs conn = connection_from_frame(s.frame, x);

            const Momenta momenta = momenta_from_velocities(v, eta, s.frame, x, conn, params);
            CHECK(symmetric_part_norm(momenta.spin) == 0.0);
            const BodyState state = BodyState::make(x, momenta.momentum, momenta.spin);

            const Vector v_back = velocity_from_momenta(state, s.frame, conn, params);
            CHECK((v_back - v).cwiseAbs().maxCoeff() < 1e-12);

            // eta recovery through S = I (eta + Gamma(v))
            const Matrix eta_back =
                momenta.spin / params.inertia - connection_matrix(conn, v_back);
            CHECK((eta_back - eta).cwiseAbs().maxCoeff() < 1e-11);

            // kinetic identity: evolved H plus the constant spin term is the
            // full kinetic energy
            const double h = hamiltonian(state, s.frame, conn, params);
            const auto spin_term = spin_energy_term(state, params);
            REQUIRE(spin_term.has_value());
            const double l = lagrangian(v, eta, conn, params);
            CHECK(h + *spin_term == doctest::Approx(l).epsilon(1e-10));
        }
    }
}

TEST_CASE("velocity and hamiltonian special cases") {
    const Scenario sphere = make_sphere(1.0);
    const ChartPoint x = point2(0.9, 0.3);
    const ConnectionCoeffs conn = connection_from_frame(sphere.frame, x);
    const BodyParams params{1.7, 0.4};

    SUBCASE("momentum equal to the spin coupling gives zero velocity") {
        Matrix spin = Matrix::Zero(2, 2);
        spin(0, 1) = 0.8;
        spin(1, 0) = -0.8;
        Vector q(2);
        for (int a = 0; a < 2; ++a) {
            q(a) = 0.0;
            for (int c = 0; c < 2; ++c)
                for (int d = 0; d < 2; ++d) q(a) += conn.gamma(a, c, d) * spin(c, d);
        }
        const Matrix coframe = sphere.frame.coframe(x);
        const BodyState state = BodyState::make(x, coframe.transpose() * q, spin);
        CHECK(velocity_from_momenta(state, sphere.frame, conn, params).cwiseAbs().maxCoeff() <
              1e-15);
    }

    SUBCASE("flat space: spin does not couple") {
        const Scenario flat = make_flat_cartesian(2);
        auto gen = rng(5);
        const Matrix spin = random_antisymmetric(2, gen);
        const BodyState state = BodyState::make(point2(0.2, 0.4), vec2(0.3, -1.1), spin);
        const ConnectionCoeffs fc = connection_from_frame(flat.frame, state.position);
        CHECK(hamiltonian(state, flat.frame, fc, params) ==
              doctest::Approx(state.momentum.squaredNorm() / (2 * params.mass)).epsilon(1e-15));
    }

    SUBCASE("zero spin reduces to the metric hamiltonian") {
        const BodyState state = BodyState::make(x, vec2(0.4, 1.2), Matrix::Zero(2, 2));
        const Matrix ginv = metric_at(sphere.frame, x).inverse();
        CHECK(hamiltonian(state, sphere.frame, conn, params) ==
              doctest::Approx(state.momentum.dot(ginv * state.momentum) / (2 * params.mass))
                  .epsilon(1e-13));
    }

    SUBCASE("spin term undefined for I = 0 with spin") {
        Matrix spin = Matrix::Zero(2, 2);
        spin(0, 1) = 1.0;
        spin(1, 0) = -1.0;
        const BodyState state = BodyState::make(x, vec2(0, 0), spin);
        CHECK_FALSE(spin_energy_term(state, BodyParams{1.0, 0.0}).has_value());
        const BodyState no_spin = BodyState::make(x, vec2(0, 0), Matrix::Zero(2, 2));
        CHECK(spin_energy_term(no_spin, BodyParams{1.0, 0.0}).value() == 0.0);
    }
}

TEST_CASE("spin bracket algebra") {
    SUBCASE("basis examples") {
        const Matrix s12 = spin_basis_coefficient(0, 1, 3);
        const Matrix s23 = spin_basis_coefficient(1, 2, 3);
        CHECK(spin_bracket(s12, s12).cwiseAbs().maxCoeff() == 0.0);
        // [S_12, S_23] = -1/2 S_13
        const Matrix expected = -0.5 * spin_basis_coefficient(0, 2, 3);
        CHECK((spin_bracket(s12, s23) - expected).cwiseAbs().maxCoeff() < 1e-15);
    }

    SUBCASE("antisymmetry, bilinearity, Jacobi on random triples") {
        auto gen = rng(23);
        for (int trial = 0; trial < 100; ++trial) {
            const Matrix a = random_antisymmetric(3, gen);
            const Matrix b = random_antisymmetric(3, gen);
            const Matrix c = random_antisymmetric(3, gen);
            CHECK((spin_bracket(a, b) + spin_bracket(b, a)).cwiseAbs().maxCoeff() < 1e-12);
            const Matrix lin =
                spin_bracket(2.0 * a + 0.5 * c, b) -
                (2.0 * spin_bracket(a, b) + 0.5 * spin_bracket(c, b));
            CHECK(lin.cwiseAbs().maxCoeff() < 1e-12);
            const Matrix jacobi = spin_bracket(a, spin_bracket(b, c)) +
                                  spin_bracket(b, spin_bracket(c, a)) +
                                  spin_bracket(c, spin_bracket(a, b));
            CHECK(jacobi.cwiseAbs().maxCoeff() < 1e-12);
        }
    }

    SUBCASE("half the squared spin is a casimir") {
        // [1/2 sum S_ab S_ab, S_cd] = sum_ab S_ab [S_ab, S_cd], evaluated at
        // numeric spin values through the structure constants
        auto gen = rng(29);
        for (int trial = 0; trial < 100; ++trial) {
            const Matrix spin = random_antisymmetric(3, gen);
            for (int c = 0; c < 3; ++c)
                for (int d = 0; d < 3; ++d) {
                    double bracket = 0.0;
                    for (int a = 0; a < 3; ++a)
                        for (int b = 0; b < 3; ++b)
                            bracket += spin(a, b) * so_bracket_at(spin, a, b, c, d);
                    CHECK(std::abs(bracket) < 1e-12);
                }
        }
    }

    SUBCASE("shape errors") {
        CHECK_THROWS_AS(spin_bracket(Matrix::Zero(2, 2), Matrix::Zero(3, 3)),
                        ShapeMismatchError);
    }
}

TEST_CASE("spin rate") {
    const BodyParams params{1.0, 0.5};

    SUBCASE("flat space freezes the spin") {
        const Scenario flat = make_flat_cartesian(3);
        auto gen = rng(31);
        ChartPoint x = random_point(flat, gen);
        const BodyState state = BodyState::make(x, random_vector(3, gen),
                                                random_antisymmetric(3, gen));
        const ConnectionCoeffs conn = connection_from_frame(flat.frame, x);
        CHECK(spin_rate(state, flat.frame, conn, params).cwiseAbs().maxCoeff() == 0.0);
    }

    SUBCASE("resting body keeps its spin") {
        const Scenario s = make_sphere_cylinder(1.2);
        ChartPoint x(3);
        x << 0.9, 0.4, 0.0;
        const ConnectionCoeffs conn = connection_from_frame(s.frame, x);
        auto gen = rng(37);
        const Matrix spin = random_antisymmetric(3, gen);
        // momentum exactly cancelling the coupling term leaves xdot = 0
        Vector q(3);
        for (int a = 0; a < 3; ++a) {
            q(a) = 0.0;
            for (int c = 0; c < 3; ++c)
                for (int d = 0; d < 3; ++d) q(a) += conn.gamma(a, c, d) * spin(c, d);
        }
        const BodyState state =
            BodyState::make(x, s.frame.coframe(x).transpose() * q, spin);
        CHECK(spin_rate(state, s.frame, conn, params).cwiseAbs().maxCoeff() < 1e-15);
    }

    SUBCASE("matches the bracket evaluation and conserves the casimir") {
        auto gen = rng(41);
        for (const auto& s : {make_sphere(1.0), make_sphere_cylinder(1.5)}) {
            const int n = s.frame.dim;
            for (int trial = 0; trial < 50; ++trial) {
                const ChartPoint x = random_point(s, gen);
                const BodyState state = BodyState::make(x, random_vector(n, gen),
                                                        random_antisymmetric(n, gen));
                const ConnectionCoeffs conn = connection_from_frame(s.frame, x);
                const Matrix rate = spin_rate(state, s.frame, conn, params);

                // exact antisymmetry of the returned matrix
                CHECK(symmetric_part_norm(rate) == 0.0);
                // instantaneous casimir conservation: sum S_ab dS_ab/dt = 0
                CHECK(std::abs((state.spin_matrix().array() * rate.array()).sum()) < 1e-12);

                // independent route: dS_ab/dt = -Gamma^cd [S_cd, S_ab]
                const Vector v = velocity_from_momenta(state, s.frame, conn, params);
                const Matrix transport = connection_matrix(conn, v);
                const Matrix spin = state.spin_matrix();
                Matrix bracket_rate = Matrix::Zero(n, n);
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b)
                        for (int c = 0; c < n; ++c)
                            for (int d = 0; d < n; ++d)
                                bracket_rate(a, b) -=
                                    transport(c, d) * so_bracket_at(spin, c, d, a, b);
                CHECK((rate - bracket_rate).cwiseAbs().maxCoeff() < 1e-10);
            }
        }
    }
}

TEST_CASE("momentum rate") {
    const BodyParams params{1.3, 0.4};

    SUBCASE("flat space has no force") {
        const Scenario flat = make_flat_cartesian(2);
        auto gen = rng(43);
        const BodyState state = BodyState::make(point2(0.3, 0.8), random_vector(2, gen),
                                                random_antisymmetric(2, gen));
        CHECK(momentum_rate(state, flat.frame, params).cwiseAbs().maxCoeff() == 0.0);
    }

    SUBCASE("zero spin matches the metric-only geodesic field") {
        auto gen = rng(47);
        for (const auto& s : {make_sphere(1.0), make_hyperbolic_upper_half(), make_flat_polar()}) {
            const GeodesicFieldOracle oracle{&s.frame, params.mass};
            for (int trial = 0; trial < 20; ++trial) {
                const BodyState state = BodyState::make(random_point(s, gen),
                                                        random_vector(2, gen),
                                                        Matrix::Zero(2, 2));
                const Vector rate = momentum_rate(state, s.frame, params);
                const Vector expected = oracle(state).momentum_rate;
                CHECK((rate - expected).cwiseAbs().maxCoeff() < 1e-11);
            }
        }
    }

    SUBCASE("analytic path agrees with central differences at second order") {
        const Scenario s = make_sphere(1.0);
        auto gen = rng(53);
        const BodyState state = BodyState::make(point2(1.0, 0.7), random_vector(2, gen),
                                                random_antisymmetric(2, gen));
        const Vector exact = momentum_rate(state, s.frame, params);
        auto fd_err = [&](double h) {
            DiffOptions opts{DerivativeMode::FiniteDifference, h};
            return (momentum_rate(state, s.frame, params, opts) - exact).cwiseAbs().maxCoeff();
        };
        CHECK(fd_err(1e-2) / fd_err(5e-3) == doctest::Approx(4.0).epsilon(0.3));
    }
}

TEST_CASE("point particle limit I = 0") {
    const Scenario s = make_sphere(1.0);
    const ChartPoint x = point2(1.0, 0.5);
    const ConnectionCoeffs conn = connection_from_frame(s.frame, x);
    const BodyParams params{1.8, 0.0};
    auto gen = rng(67);
    const Vector v = random_vector(2, gen);
    const Matrix eta = random_antisymmetric(2, gen);
    const Momenta mom = momenta_from_velocities(v, eta, s.frame, x, conn, params);
    CHECK(mom.spin.cwiseAbs().maxCoeff() == 0.0);
    // p_i = m g_ij xdot^j for the coordinate velocity
    const Vector v_coord = invert_coframe(s.frame.coframe(x)) * v;
    const Vector expected = params.mass * metric_at(s.frame, x) * v_coord;
    CHECK((mom.momentum - expected).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("domain errors propagate") {
    const Scenario s = make_sphere(1.0);
    const BodyParams params{1.0, 0.5};
    ChartPoint outside(2);
    outside << -0.5, 0.0;
    const BodyState state = BodyState::make(outside, vec2(0, 1), Matrix::Zero(2, 2));
    ConnectionCoeffs conn{Tensor3(2, 2, 2)};
    conn.gamma.setZero();
    CHECK_THROWS_AS(hamiltonian(state, s.frame, conn, params), OutOfChartError);
    CHECK_THROWS_AS(frame_momentum(state, s.frame), OutOfChartError);
    CHECK_THROWS_AS(state_derivative(state, s.frame, params), OutOfChartError);
}

TEST_CASE("trajectories are invariant under frame rotations") {
    // Rotating the frame field and the spin components together is a gauge
    // change. Positions, energies, the casimir and the coordinate velocity
    // are invariant. The canonical momentum is invariant only under constant
    // rotations: a point-dependent rotation shifts the coupling term
    // e^a_i gamma_acd S^cd the way a gauge change shifts a vector potential.
    const Scenario base = make_sphere(1.3);
    const BodyParams params{1.0, 0.5};
    const ChartPoint x0 = point2(1.0, 0.2);
    auto gen = rng(71);
    const Matrix spin = random_antisymmetric(2, gen);
    const Vector v_coord = vec2(0.3, 0.6);

    auto compare = [&](double lambda, double angle0, bool expect_momentum_equal) {
        const FrameField rotated = rotated_frame(base.frame, lambda, angle0);
        const double psi0 = angle0 + lambda * x0(0);
        Matrix q0(2, 2);
        q0 << std::cos(psi0), -std::sin(psi0), std::sin(psi0), std::cos(psi0);

        const BodyState start_base = state_from_velocity(base.frame, x0, v_coord, spin, params);
        const BodyState start_rot =
            state_from_velocity(rotated, x0, v_coord, q0 * spin * q0.transpose(), params);

        StepperConfig cfg;
        cfg.step = 1e-3;
        cfg.t_end = 1.5;
        cfg.monitor_every = 100;
        const TrajectoryRecord rec_base = integrate(start_base, base.frame, params, cfg);
        const TrajectoryRecord rec_rot = integrate(start_rot, rotated, params, cfg);
        REQUIRE(rec_base.samples.size() == rec_rot.samples.size());
        for (size_t k = 0; k < rec_base.samples.size(); ++k) {
            const auto& a = rec_base.samples[k];
            const auto& b = rec_rot.samples[k];
            CHECK((a.state.position - b.state.position).cwiseAbs().maxCoeff() < 1e-10);
            CHECK(a.hamiltonian == doctest::Approx(b.hamiltonian).epsilon(1e-12));
            CHECK(a.casimir == doctest::Approx(b.casimir).epsilon(1e-11));
            const Vector va =
                invert_coframe(base.frame.coframe(a.state.position)) *
                velocity_from_momenta(a.state, base.frame,
                                      connection_from_frame(base.frame, a.state.position),
                                      params);
            const Vector vb =
                invert_coframe(rotated.coframe(b.state.position)) *
                velocity_from_momenta(b.state, rotated,
                                      connection_from_frame(rotated, b.state.position),
                                      params);
            CHECK((va - vb).cwiseAbs().maxCoeff() < 1e-10);
            if (expect_momentum_equal) {
                CHECK((a.state.momentum - b.state.momentum).cwiseAbs().maxCoeff() < 1e-10);
            }
        }
    };
    compare(0.0, 0.9, true);   // constant rotation
    compare(0.4, 0.3, false);  // point-dependent rotation
}

TEST_CASE("state derivative") {
    SUBCASE("flat space: straight-line field, spin decouples") {
        const Scenario flat = make_flat_cartesian(2);
        const BodyParams params{2.0, 0.5};
        auto gen = rng(59);
        const Vector p = random_vector(2, gen);
        const BodyState no_spin = BodyState::make(point2(0.1, -0.3), p, Matrix::Zero(2, 2));
        const BodyState with_spin =
            BodyState::make(point2(0.1, -0.3), p, random_antisymmetric(2, gen));
        for (const auto& state : {no_spin, with_spin}) {
            const StateDerivative d = state_derivative(state, flat.frame, params);
            CHECK((d.position_rate - p / params.mass).cwiseAbs().maxCoeff() < 1e-15);
            CHECK(d.momentum_rate.cwiseAbs().maxCoeff() == 0.0);
            CHECK(d.spin_rate.cwiseAbs().maxCoeff() == 0.0);
        }
    }

    SUBCASE("sphere equator with zero spin moves along the great circle") {
        const Scenario s = make_sphere(1.0);
        const BodyParams params{1.0, 0.0};
        const BodyState state =
            state_from_velocity(s.frame, point2(M_PI / 2, 0.2), vec2(0.0, 0.9),
                                Matrix::Zero(2, 2), params);
        const StateDerivative d = state_derivative(state, s.frame, params);
        CHECK(std::abs(d.position_rate(0)) < 1e-15);
        CHECK(d.position_rate(1) == doctest::Approx(0.9).epsilon(1e-13));
        CHECK(d.momentum_rate.cwiseAbs().maxCoeff() < 1e-12);
    }

    SUBCASE("zero-spin field equals the geodesic field pointwise") {
        auto gen = rng(61);
        for (const auto& s : all_scenarios()) {
            const int n = s.frame.dim;
            const BodyParams params{1.4, 0.8};
            const GeodesicFieldOracle oracle{&s.frame, params.mass};
            for (int trial = 0; trial < 20; ++trial) {
                const BodyState state = BodyState::make(random_point(s, gen),
                                                        random_vector(n, gen),
                                                        Matrix::Zero(n, n));
                const StateDerivative d = state_derivative(state, s.frame, params);
                const StateDerivative g = oracle(state);
                CHECK((d.position_rate - g.position_rate).cwiseAbs().maxCoeff() < 1e-12);
                CHECK((d.momentum_rate - g.momentum_rate).cwiseAbs().maxCoeff() < 1e-11);
                CHECK(d.spin_rate.cwiseAbs().maxCoeff() == 0.0);
            }
        }
    }
}
