#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "helioseis/rigidity_lab.hpp"

using namespace helioseis;

namespace {

RadialModel constant(double R) { return RadialModel::create(R, 3, make_constant(1.0)); }

// h(r) = (r - 0.2)(1 - r)
ProfilePtr bump() { return make_polynomial({-0.2, 1.2, -1.0}); }

double one(double) { return 1.0; }

PeriodicOrbit triangle(const RadialModel& m) { return diving_orbit(m, 1, 3, 0.5); }

} // namespace

TEST(AbelForward, UnitSpeedClosedForm) {
    const auto m = constant(0.0);
    EXPECT_NEAR(abel_forward(m, one, 0.6), 0.8, 1e-12);
    for (double r : {0.05, 0.3, 0.9, 0.999}) EXPECT_NEAR(abel_forward(m, one, r), std::sqrt(1.0 - r * r), 1e-11);
    EXPECT_EQ(abel_forward(m, [](double) { return 0.0; }, 0.4), 0.0);
    EXPECT_EQ(abel_forward(m, one, 1.0), 0.0);
}

TEST(AbelForward, Linear) {
    const auto m = RadialModel::create(0.1, 3, make_polynomial({2.0, -1.0}));
    auto f = [](double r) { return std::cos(3.0 * r); };
    auto g = [](double r) { return r * r - 0.5; };
    for (double r : {0.2, 0.55, 0.8}) {
        const double lhs = abel_forward(m, [&](double s) { return f(s) + 2.0 * g(s); }, r);
        EXPECT_NEAR(lhs, abel_forward(m, f, r) + 2.0 * abel_forward(m, g, r), 1e-12);
    }
}

TEST(AbelForward, RejectsRadiiOutsideDomain) {
    const auto m = constant(0.3);
    EXPECT_THROW(abel_forward(m, one, 0.3), DomainError);
    EXPECT_THROW(abel_forward(m, one, 1.1), DomainError);
}

TEST(PbrtIntegral, UnitBallTriangleIsItsPeriod) {
    const auto m = constant(0.0);
    const auto tri = triangle(m);
    EXPECT_NEAR(pbrt_integral(m, tri, one), 5.1961524227, 1e-9);
    EXPECT_NEAR(pbrt_integral(m, tri, [](double) { return 2.5; }), 2.5 * tri.primitive_length, 1e-10);
}

TEST(PbrtIntegral, AgreesWithPathQuadrature) {
    const auto m = RadialModel::create(0.0, 3, make_polynomial({1.5, 0.0, -0.5}));
    const auto orbits = enumerate_lsp(m, 5);
    auto f = [](double r) { return 1.0 + r * r * std::sin(r); };
    int checked = 0;
    for (const auto& o : orbits) {
        if (o.limit_case) continue;
        EXPECT_NEAR(path_integral(m, o, f), pbrt_integral(m, o, f), 1e-7 * o.primitive_length);
        ++checked;
    }
    EXPECT_GE(checked, 3);
}

TEST(PbrtIntegral, ReflectingOrbitsNeedThePathFallback) {
    const auto m = constant(0.5);
    const auto o = reflecting_orbit(m, 1, 3, 0.3);
    EXPECT_THROW(pbrt_integral(m, o, one), DomainError);
    EXPECT_NEAR(path_integral(m, o, one), o.primitive_length, 1e-8);
}

TEST(AbelInvert, RecoversConstantFromClosedForm) {
    const auto m = constant(0.0);
    const auto grid = make_abel_grid(m, 1000);
    std::vector<double> g(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) g[i] = std::sqrt(std::max(0.0, 1.0 - grid.r[i] * grid.r[i]));
    const auto inv = abel_invert(grid, g);
    for (std::size_t i = 5; i + 5 < grid.size(); ++i) EXPECT_NEAR(inv.f[i], 1.0, 1e-3);
    EXPECT_EQ(inv.effective_rank, grid.size() - 1);
}

TEST(AbelInvert, ZeroDataGivesZero) {
    const auto grid = make_abel_grid(constant(0.2), 64);
    const auto inv = abel_invert(grid, std::vector<double>(grid.size(), 0.0));
    for (double v : inv.f) EXPECT_EQ(v, 0.0);
}

TEST(AbelInvert, RoundTrip) {
    for (double R : {0.0, 0.25}) {
        const auto m = RadialModel::create(R, 3, make_polynomial({2.0, -1.0 + (R == 0.0 ? 1.0 : 0.0)}));
        const auto grid = make_abel_grid(m, 1000);
        auto f = [R](double r) { return (r - R) * (1.0 - r); };
        const auto inv = abel_invert(grid, abel_sample(m, grid, f));
        double num = 0.0;
        double den = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            num += std::pow(inv.f[i] - f(grid.r[i]), 2);
            den += f(grid.r[i]) * f(grid.r[i]);
        }
        EXPECT_LT(std::sqrt(num / den), 1e-3) << "R = " << R;
        EXPECT_LT(inv.forward_residual, 1e-3);
    }
}

TEST(AbelInvert, RejectsIncompatibleData) {
    const auto grid = make_abel_grid(constant(0.0), 16);
    EXPECT_THROW(abel_invert(grid, std::vector<double>(16, 1.0)), DomainError);
    EXPECT_THROW(abel_invert(grid, std::vector<double>(15, 0.0)), DomainError);
    EXPECT_THROW(make_abel_grid(constant(0.0), 3), DomainError);
    EXPECT_THROW(make_abel_grid(constant(0.0), kAbelGridLimit + 1), DomainError);
}

TEST(AbelGrid, WeightsAreNonnegativeAndTriangular) {
    const auto grid = make_abel_grid(RadialModel::create(0.1, 3, make_polynomial({2.0, -1.0})), 200);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        ASSERT_EQ(grid.weights[i].size(), grid.size() - i);
        for (double w : grid.weights[i]) EXPECT_GE(w, 0.0);
    }
}

TEST(DeformationFamily, ValidatesEveryCheckedMember) {
    EXPECT_NO_THROW(DeformationFamily::create(constant(0.2), bump(), 0.01));
    // c = 1 + tau r^2 breaks the Herglotz condition once tau > 1.
    EXPECT_THROW(DeformationFamily::create(constant(0.2), make_polynomial({0.0, 0.0, 1.0}), 2.0), ValidationError);
    // A ball needs c'(0) = 0, which h'(0) = 1.2 breaks.
    EXPECT_THROW(DeformationFamily::create(constant(0.0), bump(), 0.01), ValidationError);
    const auto fam = DeformationFamily::create(constant(0.2), bump(), 0.01);
    EXPECT_THROW(fam.model(0.02), DomainError);
    EXPECT_NEAR(fam.variation(0.5), -2.0 * 0.3 * 0.5, 1e-15);
}

TEST(TrackOrbit, TrivialDeformationStaysPut) {
    const auto fam = DeformationFamily::create(constant(0.2), make_constant(0.0), 0.01);
    for (const auto& pt : track_orbit(fam, 0.5, {-0.01, 0.005, 0.01})) EXPECT_EQ(pt.phi, 0.5);
}

TEST(TrackOrbit, SlopeMatchesImplicitFunctionPrediction) {
    const auto fam = DeformationFamily::create(constant(0.2), bump(), 0.01);
    const auto pts = track_orbit(fam, 0.5, {1e-3, -1e-3});
    for (const auto& pt : pts) {
        EXPECT_LT(std::abs(half_angle(fam.model(pt.tau), pt.phi) - std::numbers::pi / 3.0), 1e-10);
        EXPECT_EQ(pt.m, 1);
        EXPECT_EQ(pt.n, 3);
    }
    const double fd = (pts[0].phi - pts[1].phi) / 2e-3;
    const double d = 1e-5;
    const double dalpha_dtau = (half_angle(fam.model(d), 0.5) - half_angle(fam.model(-d), 0.5)) / (2.0 * d);
    const double predicted = -dalpha_dtau / half_angle_derivative(fam.base(), 0.5);
    EXPECT_NEAR(fd, predicted, 1e-4 * std::abs(predicted));
}

TEST(TrackOrbit, RejectsBadTipRadius) {
    const auto fam = DeformationFamily::create(constant(0.2), bump(), 0.01);
    EXPECT_THROW(track_orbit(fam, 0.1, {0.0}), DomainError);
    EXPECT_THROW(track_orbit(fam, 1.0, {0.0}), DomainError);
}

TEST(LengthDerivative, TrivialDeformation) {
    const auto fam = DeformationFamily::create(constant(0.2), make_constant(0.0), 0.01);
    const auto d = length_derivative_check(fam, triangle(fam.base()));
    EXPECT_EQ(d.lhs, 0.0);
    EXPECT_EQ(d.rhs, 0.0);
}

TEST(LengthDerivative, TriangleIdentity) {
    const auto fam = DeformationFamily::create(constant(0.2), bump(), 0.01);
    const auto d = length_derivative_check(fam, triangle(fam.base()));
    EXPECT_LT(d.residual, 1e-6);
    EXPECT_NE(d.rhs, 0.0);
}

TEST(LengthDerivative, LinearInThePerturbation) {
    const auto base = constant(0.2);
    const auto once = length_derivative_check(DeformationFamily::create(base, bump(), 0.01), triangle(base));
    const auto twice =
        length_derivative_check(DeformationFamily::create(base, make_polynomial({-0.4, 2.4, -2.0}), 0.01), triangle(base));
    EXPECT_NEAR(twice.lhs, 2.0 * once.lhs, 1e-7 * std::abs(once.lhs));
    EXPECT_NEAR(twice.rhs, 2.0 * once.rhs, 1e-12 * std::abs(once.rhs));
}

TEST(LengthDerivative, SpeedWeightMattersForNonconstantSpeed) {
    const auto base = RadialModel::create(0.2, 3, make_polynomial({2.0, -1.0}));
    const auto fam = DeformationFamily::create(base, bump(), 0.01);
    const auto o = enumerate_lsp(base, 5).front();
    const auto d = length_derivative_check(fam, o);
    EXPECT_LT(d.residual, 1e-6);
    EXPECT_GT(d.literal_residual, 1e-2);
}

TEST(RigidityExperiment, TrivialFamily) {
    const auto fam = DeformationFamily::create(constant(0.2), make_constant(0.0), 0.01);
    const auto rep = rigidity_experiment(fam, 6);
    EXPECT_TRUE(rep.all_vanish);
    EXPECT_FALSE(rep.rows.empty());
    for (double v : rep.reconstruction.f) EXPECT_EQ(v, 0.0);
}

TEST(RigidityExperiment, DetectsAndReconstructsDeformation) {
    const auto fam = DeformationFamily::create(constant(0.2), bump(), 0.01);
    const auto rep = rigidity_experiment(fam, 6);
    EXPECT_FALSE(rep.all_vanish);
    EXPECT_GT(rep.max_abs_derivative, 0.0);
    EXPECT_EQ(rep.moved.size(), rep.rows.size());
    EXPECT_LT(rep.reconstruction_error, 5e-3);
    EXPECT_EQ(rep.conjugacy_flags, 0u);
}
