#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "helioseis/ray_kinematics.hpp"

using namespace helioseis;

namespace {

RadialModel constant(double R) { return RadialModel::create(R, 3, make_constant(1.0)); }
RadialModel two_minus_r(double R) { return RadialModel::create(R, 3, make_polynomial({2.0, -1.0})); }

// Closed-form phase integral of beta for unit speed from the turning point p to 1.
double unit_phase(double p) { return std::sqrt(1.0 - p * p) - p * std::acos(p); }

} // namespace

TEST(Beta, ClosedForms) {
    const auto m = constant(0.0);
    EXPECT_NEAR(beta(m, 1.0, 0.5).value, std::sqrt(0.75), 1e-15);
    EXPECT_TRUE(beta(m, 1.0, 0.5).real);
    EXPECT_EQ(beta(m, 0.5, 0.5).value, 0.0);
    EXPECT_FALSE(beta(m, 0.4, 0.5).real);
    EXPECT_THROW(beta(constant(0.2), 0.1, 0.5), DomainError);
}

TEST(TurningRadius, InvertsHerglotzCoordinate) {
    EXPECT_NEAR(turning_radius(constant(0.0), 0.5), 0.5, 1e-15);
    const auto m = two_minus_r(0.2);
    EXPECT_NEAR(turning_radius(m, 0.6 / 1.4), 0.6, 1e-14);
    EXPECT_THROW(turning_radius(constant(0.2), 0.1), RegimeError);
    EXPECT_THROW(turning_radius(constant(0.2), 1.0), RegimeError);
}

TEST(GeodesicSummary, ConstantSpeedClosedForms) {
    const auto m = constant(0.0);
    const auto g = geodesic_summary(m, 0.5);
    EXPECT_NEAR(g.alpha, std::acos(0.5), 1e-12);
    EXPECT_NEAR(g.L, std::sqrt(0.75), 1e-12);
    EXPECT_EQ(g.p, 0.5);
    const auto h = geodesic_summary(m, 0.6);
    EXPECT_NEAR(h.L, 0.8, 1e-13);
    EXPECT_NEAR(h.alpha_prime, -1.25, 1e-9);
}

TEST(GeodesicSummary, DiameterLimit) {
    const auto m = constant(0.0);
    const auto g = geodesic_summary(m, 1e-6);
    EXPECT_NEAR(g.alpha, std::numbers::pi / 2.0, 2e-6);
    EXPECT_NEAR(g.L, 1.0, 1e-9);
    const auto d = diameter_limit(m);
    EXPECT_NEAR(d.L, 1.0, 1e-14);
}

TEST(GeodesicSummary, RejectsTipOutsideAnnulus) {
    EXPECT_THROW(geodesic_summary(constant(0.2), 0.2), DomainError);
    EXPECT_THROW(geodesic_summary(constant(0.2), 1.0), DomainError);
}

TEST(GeodesicSummary, NearSurfaceAndNearInnerBoundary) {
    const auto m = constant(0.0);
    for (double r : {0.01, 0.3, 0.9, 0.99, 0.999}) {
        const auto g = geodesic_summary(m, r, {default_ray_quadrature(), false});
        EXPECT_NEAR(g.alpha / std::acos(r), 1.0, 1e-11) << r;
        EXPECT_NEAR(g.L / std::sqrt(1.0 - r * r), 1.0, 1e-11) << r;
    }
}

TEST(GeodesicSummary, AlphaPrimeMatchesFiniteDifferences) {
    const auto m = two_minus_r(0.2);
    for (double r : {0.3, 0.5, 0.8}) {
        const double h = 1e-4;
        const double fd = (half_angle(m, r + h) - half_angle(m, r - h)) / (2.0 * h);
        EXPECT_NEAR(half_angle_derivative(m, r) / fd, 1.0, 1e-6) << r;
    }
}

TEST(ReflectingAngle, ClosedForm) {
    const auto m = constant(0.5);
    const auto b = reflecting_angle(m, 0.3);
    EXPECT_NEAR(b.B, std::acos(0.3) - std::acos(0.6), 1e-12);
    // dB/dz = 1/sqrt(R^2 - z^2) - 1/sqrt(1 - z^2).
    EXPECT_NEAR(b.dB_dz, 1.0 / std::sqrt(0.25 - 0.09) - 1.0 / std::sqrt(1.0 - 0.09), 1e-10);
    EXPECT_GT(reflecting_angle(m, 0.49).B, b.B);
    EXPECT_NEAR(reflecting_angle(m, 1e-9).B, 0.0, 1e-8);
    EXPECT_THROW(reflecting_angle(m, 0.6), RegimeError);
    EXPECT_THROW(reflecting_angle(constant(0.0), 0.1), DomainError);
}

TEST(PhaseIntegral, ConstantSpeedClosedForms) {
    const auto m = constant(0.0);
    for (double p : {0.0, 0.2, 0.5, 0.9}) {
        EXPECT_NEAR(phase_integral(m, Regime::diving, p), unit_phase(p), 1e-13) << p;
        EXPECT_NEAR(travel_time_integral(m, Regime::diving, p), std::sqrt(1.0 - p * p), 1e-12) << p;
    }
    const auto r = constant(0.2);
    EXPECT_NEAR(phase_integral(r, Regime::reflecting, 0.0), 0.8, 1e-14);
    EXPECT_NEAR(travel_time_integral(r, Regime::reflecting, 0.0), 0.8, 1e-14);
}

TEST(DebyeDelay, ClosedFormsAndIndices) {
    const auto m = constant(0.0);
    EXPECT_EQ(debye_delay(m, Regime::diving, 1, 0.7, 0.7, 0.4).tau, 0.0);
    EXPECT_NEAR(debye_delay(m, Regime::diving, 2, 1.0, 1.0, 0.3).tau, 2.0 * unit_phase(0.3), 1e-12);
    EXPECT_NEAR(debye_delay(m, Regime::diving, 2, 1.0, 1.0, 0.0).tau, 2.0, 1e-12);
    const int expected[] = {0, 1, 0, 1, 1, 2, 1, 2};
    for (int i = 1; i <= 8; ++i) EXPECT_EQ(debye_caustic_count(Regime::diving, i), expected[i - 1]);
    for (int i = 1; i <= 8; ++i) EXPECT_EQ(debye_caustic_count(Regime::reflecting, i), 0);
    EXPECT_THROW(debye_delay(constant(0.2), Regime::diving, 1, 0.9, 0.9, 0.1), RegimeError);
}

TEST(DebyeDelay, RecursionAddsTwoPhaseIntegrals) {
    const auto m = two_minus_r(0.2);
    const double p = 0.35;
    const double phi = phase_integral(m, Regime::diving, p);
    for (int i = 1; i <= 4; ++i) {
        const double a = debye_delay(m, Regime::diving, i, 0.8, 0.95, p).tau;
        const double b = debye_delay(m, Regime::diving, i + 4, 0.8, 0.95, p).tau;
        EXPECT_NEAR(b - a, 2.0 * phi, 1e-12);
    }
}

TEST(DebyeDelay, MomentumDerivativeIsMinusAngle) {
    // For unit speed the surface-to-surface delay is 2(sqrt(1-p^2) - p acos p) with derivative -2 acos p.
    const auto m = constant(0.0);
    const double p = 0.4;
    const double h = 1e-5;
    const double d = (debye_delay(m, Regime::diving, 2, 1.0, 1.0, p + h).tau -
                      debye_delay(m, Regime::diving, 2, 1.0, 1.0, p - h).tau) /
                     (2.0 * h);
    EXPECT_NEAR(d, -2.0 * std::acos(p), 1e-8);
}

TEST(RayPath, ChordForUnitSpeed) {
    const auto m = constant(0.0);
    const auto path = ray_path(m, RayKind::diving, 0.5, 201);
    ASSERT_EQ(path.size(), 201u);
    EXPECT_NEAR(path[100].t, 0.0, 1e-15);
    EXPECT_NEAR(path[100].r, 0.5, 1e-12);
    EXPECT_NEAR(path.back().theta, std::acos(0.5), 1e-8);
    EXPECT_NEAR(path.back().t, std::sqrt(0.75), 1e-9);
    for (const auto& s : path) {
        EXPECT_NEAR(s.r_dot * s.r_dot + s.r * s.r * s.theta_dot * s.theta_dot, 1.0, 1e-8);
        EXPECT_NEAR(s.r * s.r * s.theta_dot, 0.5, 1e-10);
        // A chord at distance 0.5 from the origin: r cos(theta) = 0.5.
        EXPECT_NEAR(s.r * std::cos(s.theta), 0.5, 1e-9);
    }
}

TEST(RayPath, AgreesWithQuadratureForVariableSpeed) {
    const auto m = two_minus_r(0.2);
    const auto path = ray_path(m, RayKind::diving, 0.45, 100);
    const auto g = geodesic_summary(m, 0.45, {default_ray_quadrature(), false});
    EXPECT_NEAR(path.back().theta, g.alpha, 1e-8);
    EXPECT_NEAR(path.back().t, g.L, 1e-8);
    EXPECT_NEAR(path.front().theta, -g.alpha, 1e-8);
    for (const auto& s : path) {
        const double c = m.c(s.r);
        EXPECT_NEAR((s.r_dot * s.r_dot + s.r * s.r * s.theta_dot * s.theta_dot) / (c * c), 1.0, 1e-8);
        EXPECT_NEAR(s.r * s.r * s.theta_dot / (c * c), g.p, 1e-10);
    }
}

TEST(RayPath, RadialReflectingSegment) {
    const auto m = constant(0.2);
    const auto path = ray_path(m, RayKind::reflecting, 0.0, 50);
    EXPECT_NEAR(path.back().t, 0.8, 1e-12);
    for (const auto& s : path) EXPECT_EQ(s.theta, 0.0);
}
