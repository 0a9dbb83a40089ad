#pragma once

// Invariant checks over randomized admissible models. Each check runs a number
// of generated cases from a seed and reports failures with the worst deviation.

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "generators.hpp"
#include "helioseis/length_spectrum.hpp"
#include "helioseis/rigidity_lab.hpp"
#include "helioseis/ray_kinematics.hpp"

namespace helioseis::testing {

struct PropertyOutcome {
    std::string name;
    int cases = 0;
    int failures = 0;
    double worst = 0.0;
    std::string first_failure;

    explicit PropertyOutcome(std::string n) : name(std::move(n)) {}

    bool passed() const { return cases > 0 && failures == 0; }

    void record(bool ok, double deviation, const std::string& what) {
        ++cases;
        worst = std::max(worst, deviation);
        if (!ok) {
            if (failures == 0) first_failure = what;
            ++failures;
        }
    }
};

inline std::string describe(const ModelCase& m) {
    std::ostringstream s;
    s << "R=" << m.R << " c=[";
    for (std::size_t i = 0; i < m.coeffs.size(); ++i) s << (i ? "," : "") << m.coeffs[i];
    s << "]";
    return s.str();
}

/// rho_H = r / c strictly increasing with rho_H' above the certified margin,
/// and turning radii increasing in p.
inline PropertyOutcome herglotz_monotonicity(std::uint64_t seed, int cases) {
    PropertyOutcome out{"Herglotz monotonicity"};
    Gen g(seed);
    for (int k = 0; k < cases; ++k) {
        const ModelCase mc = random_model(g);
        const RadialModel m = mc.model();
        bool ok = m.herglotz_margin() >= mc.certified_margin * (1.0 - 1e-12);
        double worst = 0.0;
        double prev = m.rho(m.inner_radius());
        for (int i = 1; i <= 2000; ++i) {
            const double r = m.inner_radius() + (1.0 - m.inner_radius()) * i / 2000.0;
            const double rho = m.rho(r);
            if (!(rho > prev)) ok = false;
            worst = std::max(worst, mc.certified_margin - m.rho_prime(r));
            prev = rho;
        }
        const MomentumWindow w = momentum_window(m, Regime::diving);
        double prev_tip = -1.0;
        for (int i = 1; i < 50; ++i) {
            const double tip = turning_radius(m, w.lo + (w.hi - w.lo) * i / 50.0);
            if (!(tip > prev_tip)) ok = false;
            prev_tip = tip;
        }
        out.record(ok && worst <= 1e-12, std::max(worst, 0.0), describe(mc));
    }
    return out;
}

/// beta vanishes at the turning radius, is real above it and evanescent below.
inline PropertyOutcome turning_point_zero(std::uint64_t seed, int cases) {
    PropertyOutcome out{"beta turning-point zero"};
    Gen g(seed);
    for (int k = 0; k < cases; ++k) {
        const ModelCase mc = random_model(g);
        const RadialModel m = mc.model();
        const MomentumWindow w = momentum_window(m, Regime::diving);
        const double p = w.lo + (w.hi - w.lo) * g.uniform(0.02, 0.98);
        const double tip = turning_radius(m, p);
        const BetaSample at = beta(m, tip, p);
        bool ok = at.value <= 1e-7;
        if (tip + 1e-3 < 1.0) ok = ok && beta(m, tip + 1e-3, p).real && beta(m, tip + 1e-3, p).value > 0.0;
        if (tip - 1e-3 > m.inner_radius()) ok = ok && !beta(m, tip - 1e-3, p).real;
        out.record(ok, at.value, describe(mc) + " p=" + std::to_string(p));
    }
    return out;
}

/// tau_{i+4} - tau_i = 2 int beta, with the integral computed independently as
/// L - p alpha at the turning radius, and N_{i+4} = N_i + 1.
inline PropertyOutcome debye_recursion(std::uint64_t seed, int cases) {
    PropertyOutcome out{"Debye recursion"};
    Gen g(seed);
    for (int k = 0; k < cases; ++k) {
        const ModelCase mc = random_model(g);
        const RadialModel m = mc.model();
        const MomentumWindow w = momentum_window(m, Regime::diving);
        const double p = w.lo + (w.hi - w.lo) * g.uniform(0.05, 0.95);
        const double tip = turning_radius(m, p);
        const double phase = half_length(m, tip) - p * half_angle(m, tip);
        const double r = g.uniform(tip, 1.0);
        const double r0 = g.uniform(tip, 1.0);
        const int i = g.integer(1, 8);
        const DebyeDelay a = debye_delay(m, Regime::diving, i, r, r0, p);
        const DebyeDelay b = debye_delay(m, Regime::diving, i + 4, r, r0, p);
        const double dev = std::abs(b.tau - a.tau - 2.0 * phase);
        out.record(dev < 1e-9 && b.N == a.N + 1, dev, describe(mc) + " i=" + std::to_string(i));
    }
    return out;
}

/// Continuation in tau keeps the winding data (m, n) of a stable orbit.
inline PropertyOutcome continuation_preserves_orbit(std::uint64_t seed, int cases) {
    PropertyOutcome out{"orbit (m,n) preservation under continuation"};
    Gen g(seed);
    const std::vector<double> taus = {2e-3, -2e-3, 5e-3, -5e-3, 1e-2, -1e-2};
    int attempts = 0;
    while (out.cases < cases && attempts < 4 * cases) {
        ++attempts;
        const ModelCase mc = random_model(g);
        const RadialModel m = mc.model();
        std::vector<PeriodicOrbit> stable;
        for (const auto& o : enumerate_lsp(m, 6))
            if (!o.limit_case && o.stability == Stability::stable && o.parameter > m.inner_radius() + 0.02 &&
                o.parameter < 0.98)
                stable.push_back(o);
        if (stable.empty()) continue;
        const PeriodicOrbit& o = stable[static_cast<std::size_t>(g.integer(0, static_cast<int>(stable.size()) - 1))];
        const auto family =
            DeformationFamily::create(m, make_polynomial(random_perturbation(g, mc.R)), 1e-2);
        bool ok = true;
        double worst = 0.0;
        for (const auto& pt : track_orbit(family, o.parameter, taus)) {
            ok = ok && pt.m == o.m && pt.n == o.n;
            worst = std::max(worst, pt.alpha_error);
        }
        std::ostringstream what;
        what << describe(mc) << " orbit (" << o.m << "," << o.n << ")";
        out.record(ok, worst, what.str());
    }
    return out;
}

/// Product-integration weights are nonnegative and f >= 0 gives A f >= 0.
inline PropertyOutcome abel_kernel_nonnegative(std::uint64_t seed, int cases) {
    PropertyOutcome out{"Abel kernel nonnegativity"};
    Gen g(seed);
    for (int k = 0; k < cases; ++k) {
        const ModelCase mc = random_model(g);
        const RadialModel m = mc.model();
        const AbelGrid grid = make_abel_grid(m, static_cast<std::size_t>(g.integer(16, 300)));
        double most_negative = 0.0;
        for (const auto& row : grid.weights)
            for (double w : row) most_negative = std::min(most_negative, w);
        const double a = g.uniform(-1.0, 1.0);
        const double b = g.uniform(-1.0, 1.0);
        auto f = [a, b](double r) { return std::pow(a + b * r, 2); };
        for (int j = 0; j < 5; ++j) {
            const double r = m.inner_radius() + (1.0 - m.inner_radius()) * g.uniform(0.01, 0.99);
            most_negative = std::min(most_negative, abel_forward(m, f, r));
        }
        out.record(most_negative >= 0.0, -most_negative, describe(mc));
    }
    return out;
}

inline std::vector<PropertyOutcome> invariant_suites(std::uint64_t seed, int cases) {
    return {herglotz_monotonicity(seed, cases), turning_point_zero(seed + 1, cases), debye_recursion(seed + 2, cases),
            continuation_preserves_orbit(seed + 3, cases), abel_kernel_nonnegative(seed + 4, cases)};
}

} // namespace helioseis::testing
