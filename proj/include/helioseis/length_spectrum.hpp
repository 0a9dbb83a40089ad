#pragma once

// Periodic broken rays of a radial medium and their lengths.
//
// A diving ray with tip radius r closes after n boundary reflections when
// alpha(r) = pi m / n; its primitive length is 2 n L(r). A ray reflecting at
// r = R with momentum z closes when B(z) = pi m / n, with primitive length
// 2 n times the one-segment travel time.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "helioseis/errors.hpp"
#include "helioseis/numerics/parallel.hpp"
#include "helioseis/numerics/roots.hpp"
#include "helioseis/radial_model.hpp"
#include "helioseis/ray_kinematics.hpp"

namespace helioseis {

enum class Stability { stable, indeterminate, conjugate_degenerate };

inline const char* to_string(Stability s) {
    switch (s) {
        case Stability::stable: return "stable";
        case Stability::indeterminate: return "indeterminate";
        default: return "conjugate-degenerate";
    }
}

/// |alpha'| above this is stable.
inline constexpr double kStableSlope = 1e-6;
/// |alpha'| below this is treated as a conjugate point.
inline constexpr double kDegenerateSlope = 1e-9;

inline Stability classify_slope(double slope) {
    const double a = std::abs(slope);
    if (a > kStableSlope) return Stability::stable;
    if (a > kDegenerateSlope) return Stability::indeterminate;
    return Stability::conjugate_degenerate;
}

struct PeriodicOrbit {
    Regime kind = Regime::diving;
    int m = 0;
    int n = 0;
    double parameter = 0.0;   // tip radius (diving) or momentum z (reflecting)
    double p = 0.0;           // angular momentum
    double primitive_length = 0.0;
    double slope = 0.0;       // alpha'(r) or dB/dz
    Stability stability = Stability::stable;
    bool limit_case = false;  // diameter (R = 0) or radial bounce

    /// Length of the q-fold traversal.
    double length(int q = 1) const { return q * primitive_length; }
};

inline json to_json(const PeriodicOrbit& o) {
    return {{"kind", to_string(o.kind)},
            {"m", o.m},
            {"n", o.n},
            {"parameter", o.parameter},
            {"p", o.p},
            {"primitive_length", o.primitive_length},
            {"slope", o.slope},
            {"stability", to_string(o.stability)},
            {"limit_case", o.limit_case}};
}

inline PeriodicOrbit orbit_from_json(const json& doc) {
    try {
        PeriodicOrbit o;
        o.kind = regime_from_string(doc.at("kind").get<std::string>());
        o.m = doc.at("m").get<int>();
        o.n = doc.at("n").get<int>();
        o.parameter = doc.at("parameter").get<double>();
        o.p = doc.value("p", 0.0);
        o.primitive_length = doc.at("primitive_length").get<double>();
        o.slope = doc.value("slope", 0.0);
        const std::string st = doc.value("stability", std::string("stable"));
        o.stability = st == "stable"          ? Stability::stable
                      : st == "indeterminate" ? Stability::indeterminate
                                              : Stability::conjugate_degenerate;
        o.limit_case = doc.value("limit_case", false);
        return o;
    } catch (const json::exception& e) {
        throw SchemaError(std::string("orbit document: ") + e.what());
    }
}

struct SpectrumOptions {
    /// Scan points for bracketing roots of alpha(r) - pi m / n.
    std::size_t scan_points = 512;
    /// Residual bound on |alpha(r) - pi m / n| at accepted roots.
    double residual_tol = 1e-10;
    numerics::QuadratureOptions quadrature = default_ray_quadrature();
};

/// alpha sampled on a grid of tip radii, reused across (m, n).
class AlphaScan {
public:
    AlphaScan(const RadialModel& model, const SpectrumOptions& opt) : model_(&model), opt_(opt) {
        if (opt.scan_points < 8) throw DomainError("scan needs at least 8 points");
        const double R = model.inner_radius();
        const std::size_t N = opt.scan_points;
        // r = 1 - (1 - R) w^2 spreads alpha ~ sqrt(1 - r) evenly near the surface.
        r_.resize(N);
        alpha_.resize(N);
        for (std::size_t i = 0; i < N; ++i) {
            const double w = (static_cast<double>(i) + 0.5) / static_cast<double>(N);
            r_[i] = 1.0 - (1.0 - R) * w * w;
        }
        std::reverse(r_.begin(), r_.end());
        numerics::parallel_for(N, [&](std::size_t i) { alpha_[i] = half_angle(model, r_[i], opt.quadrature); });
        alpha_max_ = *std::max_element(alpha_.begin(), alpha_.end());
    }

    const std::vector<double>& radii() const noexcept { return r_; }
    const std::vector<double>& alpha() const noexcept { return alpha_; }
    double alpha_max() const noexcept { return alpha_max_; }

    /// All roots of alpha(r) = target on the scanned range, ascending.
    std::vector<double> roots(double target) const {
        std::vector<double> out;
        auto f = [&](double r) { return half_angle(*model_, r, opt_.quadrature) - target; };
        numerics::RootOptions ropt;
        ropt.x_tol = 1e-15;
        for (std::size_t i = 0; i + 1 < r_.size(); ++i) {
            const double fa = alpha_[i] - target;
            const double fb = alpha_[i + 1] - target;
            if (fa == 0.0) {
                out.push_back(r_[i]);
                continue;
            }
            if (fa * fb < 0.0) out.push_back(numerics::brent(f, r_[i], r_[i + 1], ropt));
        }
        if (!r_.empty() && alpha_.back() == target) out.push_back(r_.back());
        // Roots between the outermost scan point and r = 1, where alpha -> 0.
        if (alpha_.back() > target && target > 0.0) {
            const double hi = std::nextafter(1.0, 0.0);
            if (f(hi) < 0.0) out.push_back(numerics::brent(f, r_.back(), hi, ropt));
        }
        // Between r = R and the innermost scan point.
        const double R = model_->inner_radius();
        const double lo = R + 1e-12;
        if (lo < r_.front()) {
            const double flo = f(lo);
            if (flo * (alpha_.front() - target) < 0.0) out.push_back(numerics::brent(f, lo, r_.front(), ropt));
        }
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    const RadialModel* model_;
    SpectrumOptions opt_;
    std::vector<double> r_;
    std::vector<double> alpha_;
    double alpha_max_ = 0.0;
};

namespace detail {

inline void require_coprime(int m, int n) {
    if (n < 2) throw DomainError("segment count n must be at least 2");
    if (m < 1) throw DomainError("winding number m must be at least 1");
    if (std::gcd(m, n) != 1) throw DomainError("m and n must be coprime");
}

inline std::vector<double> checked_roots(const RadialModel& model, const AlphaScan& scan, int m, int n,
                                         const SpectrumOptions& opt) {
    const double target = std::numbers::pi * m / n;
    std::vector<double> out;
    for (double r : scan.roots(target)) {
        const double res = std::abs(half_angle(model, r, opt.quadrature) - target);
        if (res < opt.residual_tol) out.push_back(r);
    }
    return out;
}

} // namespace detail

/// All tip radii in (R, 1) with alpha(r) = pi m / n.
inline std::vector<double> find_periodic_radii(const RadialModel& model, int m, int n,
                                               const SpectrumOptions& opt = {}) {
    detail::require_coprime(m, n);
    const AlphaScan scan(model, opt);
    return detail::checked_roots(model, scan, m, n, opt);
}

inline PeriodicOrbit diving_orbit(const RadialModel& model, int m, int n, double r_tip,
                                  const SpectrumOptions& opt = {}) {
    const GeodesicSummary g = geodesic_summary(model, r_tip, {opt.quadrature, true});
    PeriodicOrbit o;
    o.kind = Regime::diving;
    o.m = m;
    o.n = n;
    o.parameter = r_tip;
    o.p = g.p;
    o.primitive_length = 2.0 * n * g.L;
    o.slope = g.alpha_prime;
    o.stability = classify_slope(g.alpha_prime);
    return o;
}

/// The (1, 2) orbit through the centre of a ball (R = 0): r_tip = 0,
/// length 4 int_0^1 1/c.
inline PeriodicOrbit diameter_orbit(const RadialModel& model, const SpectrumOptions& opt = {}) {
    const GeodesicSummary d = diameter_limit(model, opt.quadrature);
    PeriodicOrbit o;
    o.kind = Regime::diving;
    o.m = 1;
    o.n = 2;
    o.parameter = 0.0;
    o.p = 0.0;
    o.primitive_length = 4.0 * d.L;
    const double h = 0.01;
    o.slope = numerics::chebyshev_derivative([&](double r) { return half_angle(model, r, opt.quadrature); }, 0.0,
                                             2.0 * h, 0.0, 14);
    o.stability = classify_slope(o.slope);
    o.limit_case = true;
    return o;
}

namespace detail {

inline void sort_orbits(std::vector<PeriodicOrbit>& orbits) {
    std::sort(orbits.begin(), orbits.end(), [](const PeriodicOrbit& a, const PeriodicOrbit& b) {
        if (a.primitive_length != b.primitive_length) return a.primitive_length < b.primitive_length;
        if (a.n != b.n) return a.n < b.n;
        if (a.m != b.m) return a.m < b.m;
        return a.parameter < b.parameter;
    });
}

} // namespace detail

/// Primitive periodic diving orbits with 2 <= n <= n_max, sorted by length.
inline std::vector<PeriodicOrbit> enumerate_lsp(const RadialModel& model, int n_max, const SpectrumOptions& opt = {}) {
    if (n_max < 2) throw DomainError("n_max must be at least 2");
    const AlphaScan scan(model, opt);
    const bool ball = model.inner_radius() == 0.0;
    // alpha tends to pi/2 at the centre of a ball, so the scan maximum may sit
    // just below an attainable target.
    const double sup = ball ? std::max(scan.alpha_max(), std::numbers::pi / 2.0) : scan.alpha_max();
    std::vector<std::pair<int, int>> pairs;
    for (int n = 2; n <= n_max; ++n) {
        for (int m = 1; std::numbers::pi * m / n <= sup; ++m) {
            if (std::gcd(m, n) == 1) pairs.emplace_back(m, n);
        }
    }
    std::vector<std::vector<PeriodicOrbit>> found(pairs.size());
    numerics::parallel_for(pairs.size(), [&](std::size_t i) {
        const auto [m, n] = pairs[i];
        for (double r : detail::checked_roots(model, scan, m, n, opt)) found[i].push_back(diving_orbit(model, m, n, r, opt));
    });
    std::vector<PeriodicOrbit> out;
    for (auto& v : found) out.insert(out.end(), v.begin(), v.end());
    if (ball) {
        const bool have_diameter = std::any_of(out.begin(), out.end(), [](const PeriodicOrbit& o) {
            return o.m == 1 && o.n == 2;
        });
        if (!have_diameter) out.push_back(diameter_orbit(model, opt));
    }
    detail::sort_orbits(out);
    return out;
}

struct ReflectingOptions {
    bool include_radial = true;
    numerics::QuadratureOptions quadrature = default_ray_quadrature();
};

/// The momentum z with B(z) = target, if target lies in the range of B.
inline std::optional<double> solve_reflecting_momentum(const RadialModel& model, double target,
                                                       const numerics::QuadratureOptions& quad = default_ray_quadrature()) {
    const double z_max = momentum_window(model, Regime::reflecting).hi;
    if (!(target > 0.0)) return std::nullopt;
    if (reflecting_angle(model, z_max, quad).B <= target) return std::nullopt;
    numerics::RootOptions ropt;
    ropt.x_tol = 1e-16;
    return numerics::brent([&](double z) { return z == 0.0 ? -target : reflecting_angle(model, z, quad).B - target; },
                           0.0, z_max, ropt);
}

inline PeriodicOrbit reflecting_orbit(const RadialModel& model, int m, int n, double z,
                                      const numerics::QuadratureOptions& quad = default_ray_quadrature()) {
    PeriodicOrbit o;
    o.kind = Regime::reflecting;
    o.m = m;
    o.n = n;
    o.parameter = z;
    o.p = z;
    o.primitive_length = 2.0 * n * reflecting_segment_time(model, z, quad);
    o.slope = reflecting_angle(model, z, quad).dB_dz;
    o.stability = classify_slope(o.slope);
    o.limit_case = z == 0.0;
    return o;
}

/// Primitive periodic orbits reflecting at r = R, 2 <= n <= n_max, plus the
/// radial bouncing orbit (m = 0, n = 1) when requested.
inline std::vector<PeriodicOrbit> enumerate_lsp_reflecting(const RadialModel& model, int n_max,
                                                           const ReflectingOptions& opt = {}) {
    if (model.inner_radius() == 0.0)
        throw DomainError("reflecting spectrum needs R > 0; for a ball it coincides with the diving spectrum");
    if (n_max < 2) throw DomainError("n_max must be at least 2");
    const double z_max = momentum_window(model, Regime::reflecting).hi;
    const double B_max = reflecting_angle(model, z_max, opt.quadrature).B;
    std::vector<std::pair<int, int>> pairs;
    for (int n = 2; n <= n_max; ++n) {
        for (int m = 1; std::numbers::pi * m / n < B_max; ++m) {
            if (std::gcd(m, n) == 1) pairs.emplace_back(m, n);
        }
    }
    std::vector<std::optional<PeriodicOrbit>> found(pairs.size());
    numerics::parallel_for(pairs.size(), [&](std::size_t i) {
        const auto [m, n] = pairs[i];
        if (auto z = solve_reflecting_momentum(model, std::numbers::pi * m / n, opt.quadrature))
            found[i] = reflecting_orbit(model, m, n, *z, opt.quadrature);
    });
    std::vector<PeriodicOrbit> out;
    for (auto& o : found)
        if (o) out.push_back(*o);
    if (opt.include_radial) out.push_back(reflecting_orbit(model, 0, 1, 0.0, opt.quadrature));
    detail::sort_orbits(out);
    return out;
}

struct SlopeInterval {
    double r_lo;
    double r_hi;
    double min_abs_slope;
};

/// Intervals of tip radius where alpha' changes sign or |alpha'| < kStableSlope.
/// An empty result certifies the countable conjugacy condition at this grid
/// resolution.
inline std::vector<SlopeInterval> conjugacy_scan(const RadialModel& model, std::size_t grid_size,
                                                 const numerics::QuadratureOptions& quad = default_ray_quadrature()) {
    if (grid_size < 64) throw DomainError("conjugacy scan needs at least 64 grid points");
    const double R = model.inner_radius();
    std::vector<double> r(grid_size), slope(grid_size);
    for (std::size_t i = 0; i < grid_size; ++i) {
        const double w = (static_cast<double>(i) + 0.5) / static_cast<double>(grid_size);
        r[i] = R + (1.0 - R) * w;
    }
    numerics::parallel_for(grid_size, [&](std::size_t i) { slope[i] = half_angle_derivative(model, r[i], quad); });
    std::vector<SlopeInterval> out;
    auto flag = [&](std::size_t i, std::size_t j) {
        const double lo = r[i];
        const double hi = r[j];
        const double mn = std::min(std::abs(slope[i]), std::abs(slope[j]));
        if (!out.empty() && out.back().r_hi >= lo) {
            out.back().r_hi = std::max(out.back().r_hi, hi);
            out.back().min_abs_slope = std::min(out.back().min_abs_slope, mn);
        } else {
            out.push_back({lo, hi, mn});
        }
    };
    for (std::size_t i = 0; i < grid_size; ++i) {
        if (std::abs(slope[i]) < kStableSlope) flag(i == 0 ? 0 : i - 1, std::min(i + 1, grid_size - 1));
        if (i + 1 < grid_size && slope[i] * slope[i + 1] < 0.0) flag(i, i + 1);
    }
    return out;
}

struct LengthCollision {
    std::size_t first;
    std::size_t second;
    double difference;
};

/// Pairs of orbits whose primitive lengths agree to within tol.
inline std::vector<LengthCollision> nondegeneracy_report(const std::vector<PeriodicOrbit>& orbits, double tol) {
    if (!(tol > 0.0)) throw DomainError("collision tolerance must be positive");
    std::vector<LengthCollision> out;
    for (std::size_t i = 0; i < orbits.size(); ++i) {
        for (std::size_t j = i + 1; j < orbits.size(); ++j) {
            const double d = std::abs(orbits[i].primitive_length - orbits[j].primitive_length);
            if (d < tol) out.push_back({i, j, d});
        }
    }
    return out;
}

/// Multiples q T# <= t_max of every orbit, as (orbit index, q, length).
struct OrbitRepetition {
    std::size_t orbit;
    int q;
    double length;
};

inline std::vector<OrbitRepetition> repetitions(const std::vector<PeriodicOrbit>& orbits, double t_max) {
    std::vector<OrbitRepetition> out;
    for (std::size_t i = 0; i < orbits.size(); ++i) {
        if (!(orbits[i].primitive_length > 0.0)) continue;
        for (int q = 1; orbits[i].length(q) <= t_max; ++q) out.push_back({i, q, orbits[i].length(q)});
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.length < b.length; });
    return out;
}

} // namespace helioseis
