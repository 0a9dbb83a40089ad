#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "helioseis/trace_engine.hpp"

using namespace helioseis;

namespace {

constexpr double kPi = std::numbers::pi;

ModeSet single(int l, double omega) {
    ModeSet s;
    s.terms = {{l, omega}};
    return s;
}

const SingularityPrediction& find_prediction(const std::vector<SingularityPrediction>& preds, int m, int n, int q) {
    for (const auto& p : preds)
        if (p.orbit.m == m && p.orbit.n == n && p.q == q) return p;
    throw std::runtime_error("prediction not found");
}

// Unit-speed ball: tau_leg(p) = 2 (sqrt(1 - p^2) - p acos p), tau_leg'' = 2 / sqrt(1 - p^2).
double ball_amplitude(int m, int n) {
    const double p = std::cos(kPi * m / n);
    const double chord = 2.0 * std::sin(kPi * m / n);
    const double tau_pp = n * 2.0 / std::sqrt(1.0 - p * p);
    return chord / std::sqrt(tau_pp / p);
}

} // namespace

TEST(SynthTrace, SingleModeWithoutWindowIsCosine) {
    const auto t = uniform_grid(0.0, 4.0, 81);
    const auto tr = synth_trace(single(0, kPi), t, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < t.size(); ++i) EXPECT_NEAR(tr.values[i], std::cos(kPi * t[i]), 1e-14);
}

TEST(SynthTrace, WeightsByDegeneracyAndWindow) {
    const auto t = uniform_grid(0.0, 1.0, 5);
    const auto tr = synth_trace(single(3, 2.0), t, 4.0);
    const double w = 7.0 * std::exp(-0.25);
    for (std::size_t i = 0; i < t.size(); ++i) EXPECT_NEAR(tr.values[i], w * std::cos(2.0 * t[i]), 1e-13);
}

TEST(SynthTrace, LinearInTheModeSet) {
    const auto t = uniform_grid(0.1, 3.0, 57);
    ModeSet a = single(1, 3.7);
    ModeSet b = single(4, 9.1);
    ModeSet ab;
    ab.terms = {a.terms[0], b.terms[0]};
    const auto ta = synth_trace(a, t, 10.0);
    const auto tb = synth_trace(b, t, 10.0);
    const auto tab = synth_trace(ab, t, 10.0);
    for (std::size_t i = 0; i < t.size(); ++i) EXPECT_NEAR(tab.values[i], ta.values[i] + tb.values[i], 1e-12);
}

TEST(SynthTrace, EnvelopeIsPhaseIndependent) {
    const auto t = uniform_grid(0.0, 2.0, 41);
    const auto tr = synth_trace(single(0, 5.0), t, std::numeric_limits<double>::infinity(), {true});
    for (std::size_t i = 0; i < t.size(); ++i) EXPECT_NEAR(tr.envelope(i), 1.0, 1e-14);
}

TEST(SynthTrace, RejectsBadInput) {
    const auto t = uniform_grid(0.0, 1.0, 3);
    EXPECT_THROW(synth_trace(ModeSet{}, t, 1.0), DomainError);
    EXPECT_THROW(synth_trace(single(0, 1.0), t, 0.0), DomainError);
    EXPECT_THROW(synth_trace(single(0, 1.0), {0.0, 0.0}, 1.0), DomainError);
}

TEST(SynthTrace, Deterministic) {
    const auto m = RadialModel::create(0.2, 3, make_polynomial({2.0, -1.0}));
    const auto modes = build_mode_set(m, 40, 60.0);
    const auto t = uniform_grid(0.5, 4.0, 301);
    const auto a = synth_trace(modes, t, 30.0);
    const auto b = synth_trace(modes, t, 30.0);
    EXPECT_EQ(a.values, b.values);
}

TEST(BuildModeSet, RespectsLimitsAndRegimes) {
    const auto ball = RadialModel::create(0.0, 3, make_constant(1.0));
    const auto annulus = RadialModel::create(0.3, 3, make_constant(1.0));
    const auto a = build_mode_set(ball, 20, 30.0);
    const auto b = build_mode_set(annulus, 20, 30.0);
    ASSERT_FALSE(a.terms.empty());
    for (const auto& term : a.terms) {
        EXPECT_LE(term.l, 20);
        EXPECT_LE(term.omega, 30.0);
        // Diving modes of the unit ball need k < omega.
        EXPECT_GT(term.omega, term.l + 0.5);
    }
    EXPECT_GT(b.terms.size(), 0u);
    EXPECT_THROW(build_mode_set(ball, -1, 10.0), DomainError);
    EXPECT_THROW(build_mode_set(ball, 5001, 10.0), DomainError);
    EXPECT_THROW(build_mode_set(ball, 10, 0.0), DomainError);
}

TEST(DetectPeaks, CosinePeaksAtIntegers) {
    const auto t = uniform_grid(0.3, 3.7, 341);
    const auto tr = synth_trace(single(0, kPi), t, std::numeric_limits<double>::infinity());
    const auto peaks = detect_peaks(tr, 0.5);
    ASSERT_EQ(peaks.size(), 3u);
    for (int k = 0; k < 3; ++k) {
        EXPECT_NEAR(peaks[k].t, k + 1.0, 1e-4);
        EXPECT_NEAR(peaks[k].height, 1.0, 1e-4);
    }
    EXPECT_TRUE(detect_peaks(tr, 1.0).empty());
}

TEST(PredictSingularities, UnitBallTriangle) {
    const auto m = RadialModel::create(0.0, 3, make_constant(1.0));
    const auto orbits = enumerate_lsp(m, 5);
    const auto preds = predict_singularities(m, orbits, 11.0);
    const auto& tri = find_prediction(preds, 1, 3, 1);
    EXPECT_NEAR(tri.period, 3.0 * std::sqrt(3.0), 1e-10);
    EXPECT_NEAR(tri.tau_pp, 3.0 * 2.0 / std::sqrt(0.75), 1e-6);
    EXPECT_NEAR(tri.amplitude, ball_amplitude(1, 3), 1e-6);
    EXPECT_EQ(tri.maslov_leg, 1);
    EXPECT_FALSE(tri.degenerate);
    const auto& tri2 = find_prediction(preds, 1, 3, 2);
    EXPECT_NEAR(tri2.period, 6.0 * std::sqrt(3.0), 1e-9);
    EXPECT_EQ(tri2.caustics, 2 * tri.caustics);
}

TEST(PredictSingularities, TriangleToPentagramRatio) {
    const auto m = RadialModel::create(0.0, 3, make_constant(1.0));
    const auto orbits = enumerate_lsp(m, 5);
    const auto preds = predict_singularities(m, orbits, 10.0);
    const double ratio = find_prediction(preds, 1, 3, 1).amplitude / find_prediction(preds, 2, 5, 1).amplitude;
    EXPECT_NEAR(ratio, ball_amplitude(1, 3) / ball_amplitude(2, 5), 1e-6);
}

TEST(PredictSingularities, DiameterHasNoAmplitude) {
    const auto m = RadialModel::create(0.0, 3, make_constant(1.0));
    const auto orbits = enumerate_lsp(m, 3);
    const auto preds = predict_singularities(m, orbits, 9.0);
    int diameters = 0;
    for (const auto& p : preds) {
        if (!p.orbit.limit_case) continue;
        ++diameters;
        EXPECT_TRUE(std::isnan(p.amplitude));
        EXPECT_NEAR(p.period, 4.0 * p.q, 1e-9);
    }
    EXPECT_EQ(diameters, 2);
    for (std::size_t i = 1; i < preds.size(); ++i) EXPECT_LE(preds[i - 1].period, preds[i].period);
}

TEST(MatchReport, EmptyPredictionsLeaveEveryPeakUnexplained) {
    const std::vector<Peak> peaks = {{1.0, 2.0}, {2.0, 1.0}};
    const auto rep = match_report({}, peaks, 0.1);
    EXPECT_EQ(rep.unexplained_peaks.size(), 2u);
    EXPECT_EQ(rep.missing, 0u);
    EXPECT_TRUE(std::isnan(rep.scale));
    EXPECT_THROW(match_report({}, peaks, -1.0), DomainError);
}

TEST(MatchReport, MatchesAndCalibrates) {
    SingularityPrediction a;
    a.period = 1.0;
    a.amplitude = 2.0;
    SingularityPrediction b;
    b.period = 3.0;
    b.amplitude = 1.0;
    SingularityPrediction c;
    c.period = 5.0;
    const std::vector<Peak> peaks = {{1.01, 4.0}, {3.0, 2.0}, {4.0, 1.0}};
    const auto rep = match_report({a, b, c}, peaks, 0.05);
    ASSERT_EQ(rep.matches.size(), 3u);
    EXPECT_EQ(rep.matches[0].peak.value(), 0u);
    EXPECT_NEAR(rep.matches[0].offset, 0.01, 1e-12);
    EXPECT_FALSE(rep.matches[2].peak.has_value());
    EXPECT_EQ(rep.missing, 1u);
    ASSERT_EQ(rep.unexplained_peaks.size(), 1u);
    EXPECT_EQ(rep.unexplained_peaks[0], 2u);
    EXPECT_NEAR(rep.scale, 2.0, 1e-12);
    ASSERT_EQ(rep.amplitudes.size(), 2u);
    for (const auto& row : rep.amplitudes) EXPECT_NEAR(row.ratio, 1.0, 1e-12);

    const auto exact = match_report({b}, peaks, 0.0);
    EXPECT_TRUE(exact.matches[0].peak.has_value());
}

TEST(MatchReport, CrowdedPredictionsAreNotIsolated) {
    SingularityPrediction a;
    a.period = 1.0;
    SingularityPrediction b;
    b.period = 1.05;
    const auto rep = match_report({a, b}, {{1.0, 1.0}}, 0.05);
    EXPECT_FALSE(rep.matches[0].isolated);
    EXPECT_FALSE(rep.matches[1].isolated);
}
