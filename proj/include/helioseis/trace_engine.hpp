#pragma once

// Smoothed spectral trace sum_{n,l} (2l+1) cos(t omega_nl) exp(-(omega/W)^2),
// its peaks, and the singularities predicted by the periodic orbits.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "helioseis/errors.hpp"
#include "helioseis/length_spectrum.hpp"
#include "helioseis/mode_spectrum.hpp"
#include "helioseis/numerics/parallel.hpp"
#include "helioseis/radial_model.hpp"
#include "helioseis/ray_kinematics.hpp"

namespace helioseis {

/// One eigenfrequency with angular order l (degeneracy 2l + 1).
struct TraceTerm {
    int l;
    double omega;
};

struct ModeSet {
    std::vector<TraceTerm> terms;
    int l_max = 0;
    double omega_max = 0.0;
    std::string provenance;
};

/// All WKB modes with l <= l_max and omega <= omega_max, using k = l + 1/2,
/// from every regime the model has. Ordered by l, regime, overtone.
inline ModeSet build_mode_set(const RadialModel& model, int l_max, double omega_max, const ModeOptions& opt = {}) {
    if (l_max < 0) throw DomainError("l_max must be non-negative");
    if (l_max > 5000) throw DomainError("l_max exceeds the supported limit of 5000");
    if (!(omega_max > 0.0)) throw DomainError("omega_max must be positive");
    std::vector<std::vector<TraceTerm>> per_l(static_cast<std::size_t>(l_max) + 1);
    std::vector<Regime> regimes = {Regime::diving};
    if (model.inner_radius() > 0.0) regimes.push_back(Regime::reflecting);
    numerics::parallel_for(per_l.size(), [&](std::size_t l) {
        const double k = static_cast<double>(l) + 0.5;
        for (Regime regime : regimes)
            for (const Mode& m : modes_below(model, regime, k, omega_max, opt))
                per_l[l].push_back({static_cast<int>(l), m.omega});
    });
    ModeSet set;
    for (auto& v : per_l) set.terms.insert(set.terms.end(), v.begin(), v.end());
    set.l_max = l_max;
    set.omega_max = omega_max;
    std::ostringstream prov;
    prov << "wkb modes, k = l + 1/2, l <= " << l_max << ", omega <= " << omega_max;
    set.provenance = prov.str();
    return set;
}

struct TraceSeries {
    std::vector<double> t;
    std::vector<double> values;
    /// sum (2l+1) sin(t omega) window; empty unless requested. Together with
    /// `values` it gives a phase-independent envelope.
    std::vector<double> quadrature;
    double window = std::numeric_limits<double>::infinity();
    int l_max = 0;
    double omega_max = 0.0;
    std::size_t mode_count = 0;
    std::string provenance;

    double envelope(std::size_t i) const {
        return quadrature.empty() ? std::abs(values[i]) : std::hypot(values[i], quadrature[i]);
    }
};

inline std::vector<double> uniform_grid(double t0, double t1, std::size_t count) {
    if (count < 2 || !(t1 > t0)) throw DomainError("uniform grid needs t1 > t0 and at least two points");
    std::vector<double> t(count);
    for (std::size_t i = 0; i < count; ++i) t[i] = t0 + (t1 - t0) * static_cast<double>(i) / (count - 1);
    return t;
}

struct SynthOptions {
    bool with_quadrature = false;
};

/// Exact windowed mode sum on the given t grid. Deterministic: each sample is
/// summed in mode order by a single thread.
inline TraceSeries synth_trace(const ModeSet& modes, const std::vector<double>& t_grid, double window,
                               const SynthOptions& opt = {}) {
    if (modes.terms.empty()) throw DomainError("trace needs at least one mode");
    if (!(window > 0.0)) throw DomainError("smoothing width must be positive");
    if (t_grid.empty()) throw DomainError("trace needs a non-empty t grid");
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i - 1])) throw DomainError("t grid must be strictly increasing");
    const std::size_t M = modes.terms.size();
    std::vector<double> weight(M), omega(M);
    for (std::size_t j = 0; j < M; ++j) {
        const double w = std::isinf(window) ? 1.0 : std::exp(-std::pow(modes.terms[j].omega / window, 2));
        weight[j] = (2.0 * modes.terms[j].l + 1.0) * w;
        omega[j] = modes.terms[j].omega;
    }
    TraceSeries out;
    out.t = t_grid;
    out.values.assign(t_grid.size(), 0.0);
    if (opt.with_quadrature) out.quadrature.assign(t_grid.size(), 0.0);
    numerics::parallel_for(t_grid.size(), [&](std::size_t i) {
        const double t = t_grid[i];
        double c = 0.0;
        double s = 0.0;
        for (std::size_t j = 0; j < M; ++j) {
            const double phase = t * omega[j];
            c += weight[j] * std::cos(phase);
            if (opt.with_quadrature) s += weight[j] * std::sin(phase);
        }
        out.values[i] = c;
        if (opt.with_quadrature) out.quadrature[i] = s;
    });
    out.window = window;
    out.l_max = modes.l_max;
    out.omega_max = modes.omega_max;
    out.mode_count = M;
    out.provenance = modes.provenance;
    return out;
}

struct Peak {
    double t;
    double height;
};

enum class PeakSource { magnitude, envelope };

/// Local maxima of |values| (or of the envelope) whose sample height exceeds
/// threshold * max, refined by a parabola through the three samples.
inline std::vector<Peak> detect_peaks(const TraceSeries& trace, double threshold,
                                      PeakSource source = PeakSource::magnitude) {
    const std::size_t N = trace.t.size();
    std::vector<double> h(N);
    for (std::size_t i = 0; i < N; ++i)
        h[i] = source == PeakSource::envelope ? trace.envelope(i) : std::abs(trace.values[i]);
    std::vector<Peak> out;
    if (N < 3) return out;
    const double top = *std::max_element(h.begin(), h.end());
    const double cut = threshold * top;
    for (std::size_t i = 1; i + 1 < N; ++i) {
        if (!(h[i] > cut) || h[i] < h[i - 1] || h[i] <= h[i + 1]) continue;
        const double denom = h[i - 1] - 2.0 * h[i] + h[i + 1];
        double shift = 0.0;
        double height = h[i];
        if (denom < 0.0) {
            shift = 0.5 * (h[i - 1] - h[i + 1]) / denom;
            height = h[i] - 0.25 * (h[i - 1] - h[i + 1]) * shift;
        }
        const double step = shift >= 0.0 ? trace.t[i + 1] - trace.t[i] : trace.t[i] - trace.t[i - 1];
        out.push_back({trace.t[i] + shift * step, height});
    }
    return out;
}

struct SingularityPrediction {
    std::size_t orbit_index = 0;
    PeriodicOrbit orbit;
    int q = 1;
    double period = 0.0;
    /// Second momentum derivative of the primitive-orbit delay n * 2 Phi(p).
    double tau_pp = std::numeric_limits<double>::quiet_NaN();
    /// Caustics crossed along the q-fold orbit.
    int caustics = 0;
    /// Per-leg index N - (1 - sgn tau_pp) / 2.
    int maslov_leg = 0;
    /// (T# / N) |p^-1 tau_pp|^(-1/2); NaN when not predicted.
    double amplitude = std::numeric_limits<double>::quiet_NaN();
    bool degenerate = false;
    std::string note;
};

struct PredictOptions {
    numerics::QuadratureOptions quadrature = default_ray_quadrature();
    /// |tau_pp| below this marks the orbit as degenerate.
    double degenerate_tol = 1e-8;
};

/// Per-leg delay 2 Phi(p) (surface to turning point or inner boundary and back).
inline double leg_delay(const RadialModel& model, Regime regime, double p,
                        const numerics::QuadratureOptions& quad = default_ray_quadrature()) {
    return debye_delay(model, regime, 2, 1.0, 1.0, p, quad).tau;
}

/// Centered second difference of the per-leg delay at p.
inline double leg_delay_second_derivative(const RadialModel& model, Regime regime, double p,
                                          const numerics::QuadratureOptions& quad = default_ray_quadrature()) {
    const MomentumWindow w = momentum_window(model, regime);
    const double room = std::min(p - w.lo, w.hi - p);
    if (!(room > 0.0)) throw DomainError("momentum at the edge of its window");
    const double h = std::min(2e-3, 0.25 * room);
    const double f0 = leg_delay(model, regime, p, quad);
    const double fp = leg_delay(model, regime, p + h, quad);
    const double fm = leg_delay(model, regime, p - h, quad);
    const double fp2 = leg_delay(model, regime, p + 2.0 * h, quad);
    const double fm2 = leg_delay(model, regime, p - 2.0 * h, quad);
    // Fourth-order stencil.
    return (-fp2 + 16.0 * fp - 30.0 * f0 + 16.0 * fm - fm2) / (12.0 * h * h);
}

/// Predicted singularities q T# <= t_max for every orbit.
inline std::vector<SingularityPrediction> predict_singularities(const RadialModel& model,
                                                                const std::vector<PeriodicOrbit>& orbits, double t_max,
                                                                const PredictOptions& opt = {}) {
    std::vector<SingularityPrediction> out;
    for (std::size_t i = 0; i < orbits.size(); ++i) {
        const PeriodicOrbit& o = orbits[i];
        if (!(o.primitive_length > 0.0) || o.primitive_length > t_max) continue;
        SingularityPrediction base;
        base.orbit_index = i;
        base.orbit = o;
        const int legs_caustics = o.kind == Regime::diving ? debye_caustic_count(Regime::diving, 2) : 0;
        if (o.limit_case) {
            base.note = "limit orbit (p = 0): amplitude not predicted";
        } else if (o.stability != Stability::stable) {
            base.degenerate = true;
            base.note = "orbit not stable";
        } else {
            base.tau_pp = o.n * leg_delay_second_derivative(model, o.kind, o.p, opt.quadrature);
            if (std::abs(base.tau_pp) < opt.degenerate_tol) {
                base.degenerate = true;
                base.note = "vanishing tau''";
            } else {
                base.amplitude = (o.primitive_length / o.n) * std::pow(std::abs(base.tau_pp / o.p), -0.5);
            }
        }
        const int sign = std::isnan(base.tau_pp) ? 1 : (base.tau_pp > 0.0 ? 1 : -1);
        base.maslov_leg = legs_caustics - (1 - sign) / 2;
        for (int q = 1; o.length(q) <= t_max; ++q) {
            SingularityPrediction s = base;
            s.q = q;
            s.period = o.length(q);
            s.caustics = q * o.n * legs_caustics;
            out.push_back(s);
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.period < b.period; });
    return out;
}

struct PredictionMatch {
    std::size_t prediction;
    std::optional<std::size_t> peak;
    double offset = std::numeric_limits<double>::quiet_NaN();
    /// No other prediction lies within 2 tol_t.
    bool isolated = false;
};

struct AmplitudeRow {
    std::size_t prediction;
    double measured;
    double predicted;
    /// measured / (scale * predicted) with the fitted scale.
    double ratio;
};

struct MatchReport {
    std::vector<PredictionMatch> matches;
    std::vector<std::size_t> unexplained_peaks;
    std::vector<AmplitudeRow> amplitudes;
    double scale = std::numeric_limits<double>::quiet_NaN();
    std::size_t missing = 0;
};

/// Matches each prediction to the nearest peak within tol_t and lists peaks no
/// prediction explains. Amplitude rows cover matched, isolated, q = 1
/// predictions with an amplitude; a single least-squares scale calibrates them.
inline MatchReport match_report(const std::vector<SingularityPrediction>& predictions, const std::vector<Peak>& peaks,
                                double tol_t) {
    if (tol_t < 0.0) throw DomainError("match tolerance must be non-negative");
    MatchReport rep;
    std::vector<bool> used(peaks.size(), false);
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        PredictionMatch m{i, std::nullopt};
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < peaks.size(); ++j) {
            const double d = std::abs(peaks[j].t - predictions[i].period);
            if (d <= tol_t && d < best) {
                best = d;
                m.peak = j;
                m.offset = peaks[j].t - predictions[i].period;
            }
        }
        m.isolated = true;
        for (std::size_t k = 0; k < predictions.size(); ++k)
            if (k != i && std::abs(predictions[k].period - predictions[i].period) <= 2.0 * tol_t) m.isolated = false;
        if (m.peak) {
            used[*m.peak] = true;
        } else {
            ++rep.missing;
        }
        rep.matches.push_back(m);
    }
    for (std::size_t j = 0; j < peaks.size(); ++j) {
        bool explained = used[j];
        for (const auto& p : predictions)
            if (std::abs(peaks[j].t - p.period) <= tol_t) explained = true;
        if (!explained) rep.unexplained_peaks.push_back(j);
    }
    double num = 0.0;
    double den = 0.0;
    for (const auto& m : rep.matches) {
        const auto& p = predictions[m.prediction];
        if (!m.peak || !m.isolated || p.q != 1 || std::isnan(p.amplitude)) continue;
        rep.amplitudes.push_back({m.prediction, peaks[*m.peak].height, p.amplitude, 0.0});
        num += peaks[*m.peak].height * p.amplitude;
        den += p.amplitude * p.amplitude;
    }
    if (den > 0.0) {
        rep.scale = num / den;
        for (auto& row : rep.amplitudes) row.ratio = row.measured / (rep.scale * row.predicted);
    }
    return rep;
}

} // namespace helioseis
