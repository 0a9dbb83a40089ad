#pragma once

// Per-ray quantities of a radial medium: the radial slowness beta, turning
// radii, the half epicentral angle alpha and half travel time L of diving
// rays, the angle B(z) swept by rays joining the two boundaries, Debye delay
// times, and ray paths.
//
// Integrands carrying (rho(s)^2 - p^2)^(-1/2), rho = r/c, are regularized by
// the substitution s = a + (b - a) w^2: by the Herglotz condition
// rho(s) - rho(a) is comparable to s - a, so w / sqrt(rho(s)^2 - p^2) stays
// bounded and the adaptive Gauss-Kronrod rule sees a smooth integrand.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "helioseis/errors.hpp"
#include "helioseis/numerics/interpolation.hpp"
#include "helioseis/numerics/ode.hpp"
#include "helioseis/numerics/quadrature.hpp"
#include "helioseis/numerics/roots.hpp"
#include "helioseis/radial_model.hpp"

namespace helioseis {

enum class Regime { diving, reflecting };

inline const char* to_string(Regime regime) { return regime == Regime::diving ? "diving" : "reflecting"; }

inline Regime regime_from_string(const std::string& s) {
    if (s == "diving") return Regime::diving;
    if (s == "reflecting") return Regime::reflecting;
    throw SchemaError("unknown regime '" + s + "' (expected diving or reflecting)");
}

/// Momenta closer than this to p = R/c(R) or p = 1/c(1) are rejected.
inline constexpr double kRegimeMargin = 1e-9;

struct MomentumWindow {
    double lo;
    double hi;
    bool contains(double p) const { return p >= lo && p <= hi; }
};

/// Admissible momenta of a regime. Diving: R/c(R) < p < 1/c(1), with p = 0
/// admitted when R = 0. Reflecting: 0 <= p < R/c(R).
inline MomentumWindow momentum_window(const RadialModel& model, Regime regime) {
    const double inner = model.p_inner();
    if (regime == Regime::diving) {
        const double lo = model.inner_radius() > 0.0 ? inner + kRegimeMargin : 0.0;
        return {lo, model.p_outer() - kRegimeMargin};
    }
    if (model.inner_radius() == 0.0) return {1.0, 0.0};  // empty
    return {0.0, inner - kRegimeMargin};
}

inline void require_window(const RadialModel& model, Regime regime, double p) {
    const MomentumWindow w = momentum_window(model, regime);
    if (!w.contains(p)) {
        std::ostringstream msg;
        msg << "momentum p = " << p << " outside the " << to_string(regime) << " window [" << w.lo << ", "
            << w.hi << "]";
        throw RegimeError(msg.str());
    }
}

/// beta(r; p) = sqrt(c^-2 - p^2 / r^2). `real` is false in the evanescent
/// region, where `value` holds |beta|.
struct BetaSample {
    double value;
    bool real;
};

inline BetaSample beta(const RadialModel& model, double r, double p) {
    model.check_domain(r);
    if (r == 0.0) return {1.0 / model.c(0.0), p == 0.0};
    const double rho = model.rho(r);
    const double sq = (rho - p) * (rho + p) / (r * r);
    return {std::sqrt(std::abs(sq)), sq >= 0.0};
}

/// Radius R* of the turning point, rho(R*) = p, for p in the diving window.
inline double turning_radius(const RadialModel& model, double p) {
    require_window(model, Regime::diving, p);
    const double R = model.inner_radius();
    if (p == 0.0) return 0.0;
    numerics::RootOptions opt;
    opt.x_tol = 1e-17;
    return numerics::brent([&](double r) { return model.rho(r) - p; }, R, 1.0, opt);
}

namespace detail {

/// Integrates kernel(s, c, rho, root) over s in [a, b], root = sqrt(rho^2 - p^2),
/// with s = a + (b - a) w^2. `p` must satisfy p <= rho(a).
/// rho(a + ds) - rho(a). Short steps integrate rho' by 5-point Gauss-Legendre
/// because the direct difference loses digits as ds -> 0.
inline double herglotz_increment(const RadialModel& model, double a, double ds) {
    if (ds >= 1e-2) return model.rho(a + ds) - model.rho(a);
    static constexpr std::array<double, 5> x = {0.0, 0.5384693101056831, -0.5384693101056831, 0.9061798459386640,
                                                -0.9061798459386640};
    static constexpr std::array<double, 5> w = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                                0.2369268850561891, 0.2369268850561891};
    double sum = 0.0;
    for (std::size_t i = 0; i < 5; ++i) sum += w[i] * model.rho_prime(a + 0.5 * ds * (1.0 + x[i]));
    return 0.5 * ds * sum;
}

/// Integrates kernel(s, c, rho, root) over s in [a, b], root = sqrt(rho^2 - p^2),
/// with s = a + (b - a) w^2. `p` must satisfy p <= rho(a).
template <typename Kernel>
double regularized_integral(const RadialModel& model, double a, double b, double p, Kernel&& kernel,
                            const numerics::QuadratureOptions& opt) {
    if (b <= a) return 0.0;
    const double span = b - a;
    const double offset = model.rho(a) - p;
    auto integrand = [&](double w) {
        const double ds = span * w * w;
        const double s = a + ds;
        const double c = model.c(s);
        const double rho = s / c;
        const double gap = offset + herglotz_increment(model, a, ds);
        const double root = std::sqrt(std::max(gap, 0.0) * (rho + p));
        return kernel(s, c, rho, root) * 2.0 * span * w;
    };
    return numerics::quad(integrand, 0.0, 1.0, opt);
}

} // namespace detail

inline numerics::QuadratureOptions default_ray_quadrature() { return {1e-13, 1e-15, 4000}; }

/// Half epicentral angle alpha(r) of the diving ray with tip radius r.
inline double half_angle(const RadialModel& model, double r_tip,
                         const numerics::QuadratureOptions& opt = default_ray_quadrature()) {
    const double p = model.rho(r_tip);
    if (p == 0.0) return std::numbers::pi / 2.0;
    return detail::regularized_integral(
        model, r_tip, 1.0, p, [p](double s, double, double, double root) { return p / (s * root); }, opt);
}

/// Half length (travel time) L(r) of the diving ray with tip radius r.
inline double half_length(const RadialModel& model, double r_tip,
                          const numerics::QuadratureOptions& opt = default_ray_quadrature()) {
    const double p = model.rho(r_tip);
    return detail::regularized_integral(
        model, r_tip, 1.0, p,
        [p](double s, double c, double rho, double root) {
            if (p == 0.0) return 1.0 / c;
            (void)rho;
            return s / (c * c * root);
        },
        opt);
}

/// d alpha / dr at the tip radius, from a local Chebyshev interpolant of alpha.
inline double half_angle_derivative(const RadialModel& model, double r_tip,
                                    const numerics::QuadratureOptions& opt = default_ray_quadrature()) {
    const double R = model.inner_radius();
    const double h = std::min({0.02, 0.45 * (r_tip - R), 0.45 * (1.0 - r_tip)});
    if (!(h > 0.0)) throw DomainError("alpha' needs a tip radius strictly inside (R, 1)");
    return numerics::chebyshev_derivative([&](double r) { return half_angle(model, r, opt); }, r_tip - h,
                                          r_tip + h, r_tip, 14);
}

struct GeodesicSummary {
    double r_tip;
    double p;
    double R_star;
    double alpha;
    double L;
    double alpha_prime;
};

struct GeodesicOptions {
    numerics::QuadratureOptions quadrature = default_ray_quadrature();
    bool with_derivative = true;
};

inline GeodesicSummary geodesic_summary(const RadialModel& model, double r_tip, const GeodesicOptions& opt = {}) {
    const double R = model.inner_radius();
    if (!(r_tip > R && r_tip < 1.0)) {
        std::ostringstream msg;
        msg << "tip radius " << r_tip << " outside (" << R << ", 1)";
        throw DomainError(msg.str());
    }
    GeodesicSummary g{};
    g.r_tip = r_tip;
    g.p = model.rho(r_tip);
    g.R_star = r_tip;
    g.alpha = half_angle(model, r_tip, opt.quadrature);
    g.L = half_length(model, r_tip, opt.quadrature);
    g.alpha_prime = opt.with_derivative ? half_angle_derivative(model, r_tip, opt.quadrature)
                                        : std::numeric_limits<double>::quiet_NaN();
    return g;
}

/// Limits of alpha and L as the tip radius tends to zero in a model with R = 0:
/// the ray degenerates to a diameter.
inline GeodesicSummary diameter_limit(const RadialModel& model,
                                      const numerics::QuadratureOptions& opt = default_ray_quadrature()) {
    if (model.inner_radius() != 0.0) throw DomainError("diameter limit requires R = 0");
    const double L = numerics::quad([&](double s) { return 1.0 / model.c(s); }, 0.0, 1.0, opt);
    return {0.0, 0.0, 0.0, std::numbers::pi / 2.0, L, std::numeric_limits<double>::quiet_NaN()};
}

/// Angle B(z) swept between the inner and outer boundary by a ray of angular
/// momentum z, and dB/dz.
struct ReflectingAngle {
    double B;
    double dB_dz;
};

inline ReflectingAngle reflecting_angle(const RadialModel& model, double z,
                                        const numerics::QuadratureOptions& opt = default_ray_quadrature()) {
    if (model.inner_radius() == 0.0) throw DomainError("reflecting rays require R > 0");
    if (!(z >= 0.0)) throw RegimeError("reflecting momentum must be non-negative");
    require_window(model, Regime::reflecting, z);
    const double R = model.inner_radius();
    ReflectingAngle out{};
    out.B = z == 0.0 ? 0.0
                     : detail::regularized_integral(
                           model, R, 1.0, z, [z](double s, double, double, double root) { return z / (s * root); },
                           opt);
    out.dB_dz = detail::regularized_integral(
        model, R, 1.0, z,
        [](double, double c, double rho, double root) { return rho / (c * root * root * root); }, opt);
    return out;
}

/// Travel time of one boundary-to-boundary segment of a reflecting ray.
inline double reflecting_segment_time(const RadialModel& model, double z,
                                      const numerics::QuadratureOptions& opt = default_ray_quadrature()) {
    require_window(model, Regime::reflecting, z);
    return detail::regularized_integral(
        model, model.inner_radius(), 1.0, z,
        [](double s, double c, double, double root) { return s / (c * c * root); }, opt);
}

// ---------------------------------------------------------------------------
// Radial phase integrals used by the Debye expansion and the quantization
// conditions. The lower limit is R* (diving) or R (reflecting).

inline double lower_limit(const RadialModel& model, Regime regime, double p) {
    return regime == Regime::diving ? turning_radius(model, p) : model.inner_radius();
}

/// int_{base}^{r} beta(s; p) ds.
inline double phase_integral_to(const RadialModel& model, Regime regime, double p, double r,
                                const numerics::QuadratureOptions& opt = default_ray_quadrature()) {
    require_window(model, regime, p);
    const double base = lower_limit(model, regime, p);
    if (r < base - 1e-13) throw DomainError("phase integral upper limit below the turning point");
    return detail::regularized_integral(
        model, base, std::max(r, base), p, [](double s, double c, double, double root) {
            return s == 0.0 ? 1.0 / c : root / s;
        },
        opt);
}

/// Radial phase integral int_{base}^{1} beta(s; p) ds.
inline double phase_integral(const RadialModel& model, Regime regime, double p,
                             const numerics::QuadratureOptions& opt = default_ray_quadrature()) {
    return phase_integral_to(model, regime, p, 1.0, opt);
}

/// int_{base}^{1} ds / (c^2 beta): half the one-return travel time, and the
/// derivative of omega * phase_integral(k / omega) with respect to omega.
inline double travel_time_integral(const RadialModel& model, Regime regime, double p,
                                   const numerics::QuadratureOptions& opt = default_ray_quadrature()) {
    require_window(model, regime, p);
    const double base = lower_limit(model, regime, p);
    return detail::regularized_integral(
        model, base, 1.0, p,
        [p](double s, double c, double, double root) { return p == 0.0 ? 1.0 / c : s / (c * c * root); }, opt);
}

struct DebyeDelay {
    Regime regime;
    int branch;
    double tau;
    int N;
};

/// Caustic count N_i: 0,1,0,1 repeating with +1 every four branches (diving),
/// identically 0 (reflecting).
inline int debye_caustic_count(Regime regime, int i) {
    if (i < 1) throw DomainError("Debye branch index starts at 1");
    if (regime == Regime::reflecting) return 0;
    static constexpr std::array<int, 4> base = {0, 1, 0, 1};
    return base[static_cast<std::size_t>((i - 1) % 4)] + (i - 1) / 4;
}

/// Delay tau_i(r, r0; p) of the i-th Debye branch.
inline DebyeDelay debye_delay(const RadialModel& model, Regime regime, int i, double r, double r0, double p,
                              const numerics::QuadratureOptions& opt = default_ray_quadrature()) {
    if (i < 1) throw DomainError("Debye branch index starts at 1");
    require_window(model, regime, p);
    const double base = lower_limit(model, regime, p);
    const double lo = std::max(model.inner_radius(), base);
    if (r < lo - 1e-13 || r0 < lo - 1e-13 || r > 1.0 + 1e-13 || r0 > 1.0 + 1e-13)
        throw DomainError("Debye delay endpoints must lie between the turning point and the surface");
    const double total = phase_integral(model, regime, p, opt);
    const double to_r = phase_integral_to(model, regime, p, r, opt);
    const double to_r0 = r0 == r ? to_r : phase_integral_to(model, regime, p, r0, opt);
    const double direct = std::abs(to_r - to_r0);
    const int j = (i - 1) % 4;
    const int loops = (i - 1) / 4;
    double tau = 0.0;
    switch (j) {
        case 0: tau = direct; break;
        case 1: tau = to_r0 + to_r; break;
        case 2: tau = (total - to_r0) + (total - to_r); break;
        default: tau = 2.0 * total - direct; break;
    }
    tau += 2.0 * total * loops;
    return {regime, i, tau, debye_caustic_count(regime, i)};
}

// ---------------------------------------------------------------------------
// Ray paths from the Hamiltonian H = c(x)^2 |xi|^2 / 2 in the plane of the ray.

enum class RayKind { diving, reflecting };

struct PathSample {
    double t;
    double r;
    double theta;
    double r_dot;
    double theta_dot;
};

namespace detail {

using RayState = std::array<double, 4>;  // x, y, xi_x, xi_y

inline RayState ray_rhs(const RadialModel& model, const RayState& u) {
    const double r = std::hypot(u[0], u[1]);
    const SpeedSample s = model.speed_profile()->eval(std::clamp(r, model.inner_radius(), 1.0));
    const double c2 = s.c * s.c;
    const double g = r > 0.0 ? s.dc_dr / (s.c * r) : 0.0;
    return {c2 * u[2], c2 * u[3], -g * u[0], -g * u[1]};
}

inline PathSample to_sample(const RadialModel& model, double t, const RayState& u, double theta) {
    const RayState du = ray_rhs(model, u);
    const double r = std::hypot(u[0], u[1]);
    const double r_dot = (u[0] * du[0] + u[1] * du[1]) / r;
    const double theta_dot = (u[0] * du[1] - u[1] * du[0]) / (r * r);
    return {t, r, theta, r_dot, theta_dot};
}

} // namespace detail

/// Samples a maximal ray. Diving rays are parameterized by their tip radius
/// and sampled on t in [-L, L] with the tip at t = 0, theta(0) = 0. Reflecting
/// rays are parameterized by angular momentum z and sampled on [0, T] from the
/// inner boundary outwards.
inline std::vector<PathSample> ray_path(const RadialModel& model, RayKind kind, double parameter,
                                        std::size_t samples, const numerics::OdeOptions& ode = {}) {
    if (samples < 2) throw DomainError("ray_path needs at least two samples");
    const double R = model.inner_radius();
    detail::RayState start{};
    if (kind == RayKind::diving) {
        if (!(parameter > R && parameter < 1.0)) throw RegimeError("diving ray tip must lie in (R, 1)");
        start = {parameter, 0.0, 0.0, 1.0 / model.c(parameter)};
    } else {
        if (R == 0.0) throw DomainError("reflecting rays require R > 0");
        require_window(model, Regime::reflecting, parameter);
        const double cR = model.c(R);
        const double xi_t = parameter / R;
        start = {R, 0.0, std::sqrt(1.0 / (cR * cR) - xi_t * xi_t), xi_t};
    }
    auto rhs = [&](double, const detail::RayState& u) { return detail::ray_rhs(model, u); };

    // Locate the exit time at r = 1 by marching and then bisecting.
    numerics::DormandPrince<4> stepper(ode);
    double t = 0.0;
    detail::RayState u = start;
    const double dt = 0.01;
    detail::RayState prev = u;
    double t_prev = t;
    while (std::hypot(u[0], u[1]) < 1.0) {
        prev = u;
        t_prev = t;
        stepper.advance(rhs, t, u, t + dt);
        if (t > 1e3) throw NumericalError("ray_path: ray does not reach the surface");
    }
    double lo = t_prev;
    double hi = t;
    for (int k = 0; k < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++k) {
        const double mid = 0.5 * (lo + hi);
        numerics::DormandPrince<4> sub(ode);
        double tm = t_prev;
        detail::RayState um = prev;
        sub.advance(rhs, tm, um, mid);
        (std::hypot(um[0], um[1]) < 1.0 ? lo : hi) = mid;
    }
    const double t_exit = 0.5 * (lo + hi);

    // Resample on a uniform grid of [0, t_exit], unwrapping theta.
    const std::size_t forward = kind == RayKind::diving ? (samples + 1) / 2 : samples;
    std::vector<PathSample> half;
    half.reserve(forward);
    numerics::DormandPrince<4> sampler(ode);
    t = 0.0;
    u = start;
    double theta = 0.0;
    double last_angle = std::atan2(u[1], u[0]);
    for (std::size_t k = 0; k < forward; ++k) {
        const double target = t_exit * static_cast<double>(k) / static_cast<double>(forward - 1);
        sampler.advance(rhs, t, u, target);
        const double angle = std::atan2(u[1], u[0]);
        double delta = angle - last_angle;
        if (delta > std::numbers::pi) delta -= 2.0 * std::numbers::pi;
        if (delta < -std::numbers::pi) delta += 2.0 * std::numbers::pi;
        theta += delta;
        last_angle = angle;
        half.push_back(detail::to_sample(model, target, u, theta));
    }
    if (kind == RayKind::reflecting) return half;

    // Mirror the outgoing half about the tip.
    std::vector<PathSample> path;
    path.reserve(samples);
    const std::size_t skip = samples % 2 == 1 ? 1 : 0;
    for (std::size_t k = half.size(); k-- > skip;) {
        const PathSample& s = half[k];
        path.push_back({-s.t, s.r, -s.theta, -s.r_dot, s.theta_dot});
    }
    for (const PathSample& s : half) path.push_back(s);
    if (samples % 2 == 0) path.erase(path.begin() + static_cast<std::ptrdiff_t>(half.size()));
    return path;
}

} // namespace helioseis
