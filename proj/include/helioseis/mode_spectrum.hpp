#pragma once

// WKB eigenfrequencies of a radial medium.
//
// For wavenumber k and frequency omega the ray parameter is p = k / omega and
// the radial phase is omega * Phi(p), Phi(p) = int beta(r; p) dr from the
// turning point (diving) or the inner boundary (reflecting) to the surface.
// Quantization fixes omega * Phi(k / omega) = (n + 5/4) pi for diving modes
// and (n + 1) pi for modes reflecting at r = R. The omega-derivative of the
// left side is the travel-time integral int dr / (c^2 beta) > 0, so each
// condition has at most one root per (n, k).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include <boost/math/special_functions/airy.hpp>

#include "helioseis/errors.hpp"
#include "helioseis/numerics/parallel.hpp"
#include "helioseis/numerics/quadrature.hpp"
#include "helioseis/radial_model.hpp"
#include "helioseis/ray_kinematics.hpp"

namespace helioseis {

struct Mode {
    Regime regime = Regime::diving;
    int n = 0;
    double k = 0.0;
    double omega = 0.0;
    double p = 0.0;
    double norm_constant = 0.0;
    /// |omega Phi - target| / pi at the solution.
    double residual = 0.0;
};

inline json to_json(const Mode& m) {
    return {{"regime", to_string(m.regime)}, {"n", m.n},       {"k", m.k},
            {"omega", m.omega},              {"p", m.p},       {"norm", m.norm_constant},
            {"residual", m.residual}};
}

/// Right-hand side of the quantization condition for overtone n.
inline double quantization_target(Regime regime, int n) {
    return regime == Regime::diving ? (n + 1.25) * std::numbers::pi : (n + 1.0) * std::numbers::pi;
}

struct ModeOptions {
    numerics::QuadratureOptions quadrature = default_ray_quadrature();
    /// Bracket tolerance on omega, scaled by omega + 1.
    double omega_tol = 1e-15;
    int max_iter = 100;
};

/// Normalization constant (2 int dr / (c^2 beta))^(-1/2) of the regime, for
/// which 2 B^2 int beta^-1 c^-2 dr = 1. With mu = rho_d c^2 the density drops
/// out of the measure rho_d U^2 r^2 dr once rU = mu^(-1/2) V.
inline double normalization_constant(const RadialModel& model, Regime regime, double p,
                                     const numerics::QuadratureOptions& quad = default_ray_quadrature()) {
    return 1.0 / std::sqrt(2.0 * travel_time_integral(model, regime, p, quad));
}

inline double normalization_constant(const RadialModel& model, const Mode& mode,
                                     const numerics::QuadratureOptions& quad = default_ray_quadrature()) {
    return normalization_constant(model, mode.regime, mode.p, quad);
}

namespace detail {

inline bool window_admits_zero(const RadialModel& model, Regime regime) {
    const MomentumWindow w = momentum_window(model, regime);
    return w.lo == 0.0 && w.hi > 0.0;
}

} // namespace detail

/// Residual of the quantization condition in units of pi.
inline double quantization_residual(const RadialModel& model, const Mode& mode,
                                    const numerics::QuadratureOptions& quad = default_ray_quadrature()) {
    const double phi = phase_integral(model, mode.regime, mode.p, quad);
    return std::abs(mode.omega * phi - quantization_target(mode.regime, mode.n)) / std::numbers::pi;
}

/// Solves the quantization condition for (n, k). Throws RootNotFound when the
/// root would leave the regime's momentum window.
inline Mode solve_omega(const RadialModel& model, Regime regime, int n, double k, const ModeOptions& opt = {}) {
    if (n < 0) throw DomainError("overtone index must be non-negative");
    if (!(k >= 0.0)) throw DomainError("wavenumber must be non-negative");
    const MomentumWindow w = momentum_window(model, regime);
    if (!(w.hi > w.lo)) throw RegimeError(std::string("model has no ") + to_string(regime) + " regime");
    const double target = quantization_target(regime, n);
    Mode mode;
    mode.regime = regime;
    mode.n = n;
    mode.k = k;

    if (k == 0.0) {
        if (!detail::window_admits_zero(model, regime))
            throw RootNotFound(std::string("k = 0 has no ") + to_string(regime) + " mode in this model");
        mode.omega = target / phase_integral(model, regime, 0.0, opt.quadrature);
        mode.p = 0.0;
    } else {
        auto F = [&](double omega) {
            const double p = std::clamp(k / omega, w.lo, w.hi);
            return omega * phase_integral(model, regime, p, opt.quadrature) - target;
        };
        const double lo = k / w.hi;
        if (F(lo) > 0.0) {
            std::ostringstream msg;
            msg << "no " << to_string(regime) << " root for n = " << n << ", k = " << k
                << ": the mode would be evanescent";
            throw RootNotFound(msg.str());
        }
        double hi;
        if (w.lo > 0.0) {
            hi = k / w.lo;
            if (F(hi) < 0.0) {
                std::ostringstream msg;
                msg << "no " << to_string(regime) << " root for n = " << n << ", k = " << k
                    << ": the mode lies in the other regime";
                throw RootNotFound(msg.str());
            }
        } else {
            hi = 2.0 * lo;
            while (F(hi) < 0.0) {
                hi *= 2.0;
                if (hi > 1e12 * lo) throw RootNotFound("quantization root could not be bracketed");
            }
        }
        const double x = numerics::brent(F, lo, hi, {opt.omega_tol, opt.max_iter});
        mode.omega = x;
        mode.p = std::clamp(k / x, w.lo, w.hi);
    }
    mode.norm_constant = normalization_constant(model, regime, mode.p, opt.quadrature);
    mode.residual = quantization_residual(model, mode, opt.quadrature);
    return mode;
}

/// Range of overtones n whose (n, k) mode has omega <= omega_max, or an empty
/// range (first > second).
inline std::pair<int, int> overtone_range(const RadialModel& model, Regime regime, double k, double omega_max,
                                          const numerics::QuadratureOptions& quad = default_ray_quadrature()) {
    const MomentumWindow w = momentum_window(model, regime);
    if (!(w.hi > w.lo) || !(omega_max > 0.0)) return {0, -1};
    const double offset = regime == Regime::diving ? 1.25 : 1.0;
    if (k == 0.0) {
        if (!detail::window_admits_zero(model, regime)) return {0, -1};
        const double top = omega_max * phase_integral(model, regime, 0.0, quad) / std::numbers::pi - offset;
        return {0, static_cast<int>(std::floor(top))};
    }
    const double omega_lo = k / w.hi;
    if (omega_lo >= omega_max) return {0, -1};
    const double omega_hi = w.lo > 0.0 ? std::min(omega_max, k / w.lo) : omega_max;
    const double phase_lo = omega_lo * phase_integral(model, regime, w.hi, quad) / std::numbers::pi - offset;
    const double p_hi = std::clamp(k / omega_hi, w.lo, w.hi);
    const double phase_hi = omega_hi * phase_integral(model, regime, p_hi, quad) / std::numbers::pi - offset;
    const int first = std::max(0, static_cast<int>(std::ceil(phase_lo)));
    const int last = static_cast<int>(std::floor(phase_hi));
    return {first, last};
}

/// All modes of one regime with the given k and omega <= omega_max.
inline std::vector<Mode> modes_below(const RadialModel& model, Regime regime, double k, double omega_max,
                                     const ModeOptions& opt = {}) {
    std::vector<Mode> out;
    const auto [first, last] = overtone_range(model, regime, k, omega_max, opt.quadrature);
    for (int n = first; n <= last; ++n) {
        try {
            Mode m = solve_omega(model, regime, n, k, opt);
            if (m.omega <= omega_max) out.push_back(m);
        } catch (const RootNotFound&) {
            // Overtones at the window edges can fall just outside it.
        }
    }
    return out;
}

struct DispersionCell {
    int n;
    double k;
    std::optional<Mode> mode;
};

/// Modes on the (n, k) grid; cells without a root in the regime stay empty.
inline std::vector<DispersionCell> dispersion_table(const RadialModel& model, Regime regime,
                                                    const std::vector<int>& n_list, const std::vector<double>& k_list,
                                                    const ModeOptions& opt = {}) {
    if (n_list.empty() || k_list.empty()) throw DomainError("dispersion table needs non-empty n and k lists");
    std::vector<DispersionCell> cells;
    cells.reserve(n_list.size() * k_list.size());
    for (int n : n_list)
        for (double k : k_list) cells.push_back({n, k, std::nullopt});
    numerics::parallel_for(cells.size(), [&](std::size_t i) {
        try {
            cells[i].mode = solve_omega(model, regime, cells[i].n, cells[i].k, opt);
        } catch (const RootNotFound&) {
        } catch (const RegimeError&) {
        }
    });
    return cells;
}

struct PhaseGroup {
    double phase_speed;  // c_n = omega / k
    double group_speed;  // C_n = d omega / d k
    double p;            // 1 / c_n
};

/// Phase and group speed at k from a sampled dispersion curve omega_n(k),
/// using the quadratic through the three samples nearest k.
inline PhaseGroup phase_group(const std::vector<std::pair<double, double>>& curve, double k) {
    if (k == 0.0) throw DomainError("phase speed is undefined at k = 0");
    if (curve.size() < 3) throw DomainError("phase_group needs at least three curve samples");
    for (std::size_t i = 1; i < curve.size(); ++i)
        if (!(curve[i].first > curve[i - 1].first)) throw SchemaError("curve wavenumbers must be increasing");
    if (!(k > curve.front().first && k < curve.back().first))
        throw DomainError("k must lie strictly inside the sampled curve");
    // Centre the stencil on the sample nearest to k.
    std::size_t j = 1;
    for (std::size_t i = 1; i + 1 < curve.size(); ++i)
        if (std::abs(curve[i].first - k) < std::abs(curve[j].first - k)) j = i;
    const auto [x0, y0] = curve[j - 1];
    const auto [x1, y1] = curve[j];
    const auto [x2, y2] = curve[j + 1];
    const double l0 = (k - x1) * (k - x2) / ((x0 - x1) * (x0 - x2));
    const double l1 = (k - x0) * (k - x2) / ((x1 - x0) * (x1 - x2));
    const double l2 = (k - x0) * (k - x1) / ((x2 - x0) * (x2 - x1));
    const double d0 = ((k - x1) + (k - x2)) / ((x0 - x1) * (x0 - x2));
    const double d1 = ((k - x0) + (k - x2)) / ((x1 - x0) * (x1 - x2));
    const double d2 = ((k - x0) + (k - x1)) / ((x2 - x0) * (x2 - x1));
    const double omega = l0 * y0 + l1 * y1 + l2 * y2;
    const double c = omega / k;
    return {c, d0 * y0 + d1 * y1 + d2 * y2, 1.0 / c};
}

struct EigenSample {
    double V;
    double dV;
};

/// Leading-order WKB eigenfunction V(r) and its r-derivative. Diving modes use
/// the Langer form 2 sqrt(pi) B zeta^(1/4) beta^(-1/2) Ai(-zeta),
/// zeta = (3 S / 2)^(2/3), S = omega int_{R*}^r beta, which continues through
/// the turning point; reflecting modes use 2 C beta^(-1/2) cos S,
/// S = omega int_R^r beta.
inline EigenSample wkb_eigenfunction(const RadialModel& model, const Mode& mode, double r,
                                     const numerics::QuadratureOptions& quad = default_ray_quadrature()) {
    model.check_domain(r);
    r = std::clamp(r, model.inner_radius(), 1.0);
    const double omega = mode.omega;
    const double p = mode.p;
    const double norm = mode.norm_constant;
    if (mode.regime == Regime::reflecting) {
        const double S = omega * phase_integral_to(model, Regime::reflecting, p, r, quad);
        const double b = beta(model, r, p).value;
        return {2.0 * norm * std::cos(S) / std::sqrt(b), -2.0 * norm * omega * std::sqrt(b) * std::sin(S)};
    }
    using boost::math::airy_ai;
    using boost::math::airy_ai_prime;
    const double scale = 2.0 * std::sqrt(std::numbers::pi) * norm;
    const double r_star = turning_radius(model, p);
    if (p > 0.0 && std::abs(r - r_star) < 1e-9 * std::max(r_star, 1e-300)) {
        // Limits at the turning point: beta^2 ~ g (r - R*), g = 2 p rho'(R*) / R*^2.
        const double g = 2.0 * p * model.rho_prime(r_star) / (r_star * r_star);
        const double ratio = std::cbrt(g / omega);  // (g / omega)^(1/3)
        return {scale * airy_ai(0.0) / std::sqrt(ratio), -scale * omega * std::sqrt(ratio) * airy_ai_prime(0.0)};
    }
    if (r >= r_star) {
        const double b = beta(model, r, p).value;
        const double S = omega * phase_integral_to(model, Regime::diving, p, r, quad);
        if (S == 0.0 || b == 0.0) return {0.0, 0.0};
        const double zeta = std::pow(1.5 * S, 2.0 / 3.0);
        const double q = std::pow(zeta, 0.25);
        return {scale * q / std::sqrt(b) * airy_ai(-zeta), -scale * omega * std::sqrt(b) / q * airy_ai_prime(-zeta)};
    }
    // Evanescent side: S = omega int_r^{R*} |beta|, which diverges at r = 0.
    if (r == 0.0) return {0.0, 0.0};
    const double depth = numerics::quad(
        [&](double s) {
            const double rho = model.rho(s);
            return std::sqrt(std::max(0.0, (p - rho) * (p + rho))) / s;
        },
        r, r_star, {1e-11, 1e-15, 4000});
    const double S = omega * depth;
    const double b = beta(model, r, p).value;
    const double zeta = std::pow(1.5 * S, 2.0 / 3.0);
    const double q = std::pow(zeta, 0.25);
    return {scale * q / std::sqrt(b) * airy_ai(zeta), -scale * omega * std::sqrt(b) / q * airy_ai_prime(zeta)};
}

} // namespace helioseis
