#pragma once

// Length-spectral rigidity as numerical experiments: the Abel-type transform
// along diving rays and its inversion, deformation families c_tau, continuation
// of periodic orbits in tau, and the first variation of their lengths.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <numeric>
#include <sstream>
#include <utility>
#include <vector>

#include "helioseis/errors.hpp"
#include "helioseis/length_spectrum.hpp"
#include "helioseis/numerics/parallel.hpp"
#include "helioseis/numerics/quadrature.hpp"
#include "helioseis/radial_model.hpp"
#include "helioseis/ray_kinematics.hpp"

namespace helioseis {

using RadialFunction = std::function<double(double)>;

enum class DeformationKind { multiplicative, additive };

inline const char* to_string(DeformationKind k) {
    return k == DeformationKind::multiplicative ? "multiplicative" : "additive";
}

/// c_tau = c0 (1 + tau h) (multiplicative) or c0 + tau h (additive), |tau| <= epsilon.
class DeformationFamily {
public:
    /// Validates `checks` evenly spaced members of the family, endpoints included.
    static DeformationFamily create(RadialModel base, ProfilePtr h, double epsilon,
                                    DeformationKind kind = DeformationKind::multiplicative, int checks = 5) {
        if (!h) throw SchemaError("deformation needs a perturbation profile");
        if (!(epsilon > 0.0)) throw DomainError("deformation range must be positive");
        if (checks < 2) throw DomainError("deformation check needs at least two members");
        DeformationFamily family(std::move(base), std::move(h), epsilon, kind);
        for (int i = 0; i < checks; ++i) {
            const double tau = -epsilon + 2.0 * epsilon * static_cast<double>(i) / (checks - 1);
            try {
                (void)family.model(tau);
            } catch (const ValidationError& e) {
                std::ostringstream msg;
                msg << "deformation leaves the admissible models at tau = " << tau << ": " << e.what();
                throw ValidationError(msg.str());
            }
        }
        return family;
    }

    const RadialModel& base() const noexcept { return base_; }
    const ProfilePtr& perturbation() const noexcept { return h_; }
    double epsilon() const noexcept { return epsilon_; }
    DeformationKind kind() const noexcept { return kind_; }

    RadialModel model(double tau) const {
        if (std::abs(tau) > epsilon_ * (1.0 + 1e-12)) {
            std::ostringstream msg;
            msg << "tau = " << tau << " outside the family range (-" << epsilon_ << ", " << epsilon_ << ")";
            throw DomainError(msg.str());
        }
        if (tau == 0.0) return base_;
        ProfilePtr speed;
        if (kind_ == DeformationKind::multiplicative)
            speed = std::make_shared<ScaledProfile>(base_.speed_profile(), h_, tau);
        else
            speed = std::make_shared<ShiftedProfile>(base_.speed_profile(), h_, tau);
        return RadialModel::create(base_.inner_radius(), base_.dim(), speed, base_.density_profile());
    }

    /// d/dtau c_tau^-2 at tau = 0.
    double variation(double r) const {
        const double c0 = base_.c(r);
        const double h = h_->eval(r).c;
        return kind_ == DeformationKind::multiplicative ? -2.0 * h / (c0 * c0) : -2.0 * h / (c0 * c0 * c0);
    }

    json to_json() const {
        return {{"base", base_.to_json()}, {"perturbation", h_->to_json()}, {"epsilon", epsilon_},
                {"kind", helioseis::to_string(kind_)}};
    }

private:
    DeformationFamily(RadialModel base, ProfilePtr h, double epsilon, DeformationKind kind)
        : base_(std::move(base)), h_(std::move(h)), epsilon_(epsilon), kind_(kind) {}

    RadialModel base_;
    ProfilePtr h_;
    double epsilon_;
    DeformationKind kind_;
};

/// int_r^1 f(s) / c(s) (1 - (r c(s) / (s c(r)))^2)^(-1/2) ds: the integral of f
/// over the half ray with tip r, in travel time.
inline double abel_forward(const RadialModel& model, const RadialFunction& f, double r,
                           const numerics::QuadratureOptions& opt = default_ray_quadrature()) {
    const double R = model.inner_radius();
    if (!(r > R || (R == 0.0 && r == 0.0)) || r > 1.0) {
        std::ostringstream msg;
        msg << "Abel transform radius " << r << " outside (" << R << ", 1]";
        throw DomainError(msg.str());
    }
    if (r == 1.0) return 0.0;
    const double p = model.rho(r);
    return detail::regularized_integral(
        model, r, 1.0, p,
        [&](double s, double c, double rho, double root) {
            if (p == 0.0) return f(s) / c;
            (void)rho;
            return f(s) * s / (c * c * root);
        },
        opt);
}

/// Integral of f over the whole periodic diving orbit: 2 n A f(r_tip).
inline double pbrt_integral(const RadialModel& model, const PeriodicOrbit& orbit, const RadialFunction& f,
                            const numerics::QuadratureOptions& opt = default_ray_quadrature()) {
    if (orbit.kind != Regime::diving)
        throw DomainError("pbrt_integral covers diving orbits; use path_integral for reflecting orbits");
    return 2.0 * orbit.n * abel_forward(model, f, orbit.parameter, opt);
}

/// Integral of f over a periodic orbit by Simpson's rule on ray_path samples.
inline double path_integral(const RadialModel& model, const PeriodicOrbit& orbit, const RadialFunction& f,
                            std::size_t samples = 4001, const numerics::OdeOptions& ode = {}) {
    if (orbit.limit_case) throw DomainError("path integral needs a non-radial orbit");
    if (samples < 3) throw DomainError("path integral needs at least three samples");
    if (samples % 2 == 0) ++samples;
    const bool diving = orbit.kind == Regime::diving;
    const auto path = ray_path(model, diving ? RayKind::diving : RayKind::reflecting, orbit.parameter, samples, ode);
    const double h = (path.back().t - path.front().t) / static_cast<double>(path.size() - 1);
    double sum = f(path.front().r) + f(path.back().r);
    for (std::size_t i = 1; i + 1 < path.size(); ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * f(path[i].r);
    // A diving path is one full leg; a reflecting path is half of one.
    const double pieces = diving ? orbit.n : 2.0 * orbit.n;
    return pieces * sum * h / 3.0;
}

/// Radii r_0 < ... < r_{N-1} = 1 on (R, 1] with the product-integration
/// weights of the Abel transform in the Herglotz coordinate u = rho_H(r):
/// A f(r_i) = int_{u_i}^{u_N-1} F(u) u / sqrt(u^2 - u_i^2) du, F = f / (c rho_H').
/// F is piecewise linear in u, so each cell is integrated exactly.
struct AbelGrid {
    std::vector<double> r;
    std::vector<double> u;
    /// (c rho_H')(r_j), converting F to f.
    std::vector<double> jacobian;
    /// weights[i][j - i] multiplies F_j in row i; upper triangular.
    std::vector<std::vector<double>> weights;

    std::size_t size() const noexcept { return r.size(); }
};

inline constexpr std::size_t kAbelGridLimit = 4096;

/// Grid on the given radii, strictly increasing in (R, 1] and ending at 1.
inline AbelGrid make_abel_grid(const RadialModel& model, std::vector<double> radii) {
    const std::size_t size = radii.size();
    if (size < 4 || size > kAbelGridLimit) {
        std::ostringstream msg;
        msg << "Abel grid size must lie in [4, " << kAbelGridLimit << "]";
        throw DomainError(msg.str());
    }
    const double R = model.inner_radius();
    if (!(radii.front() > R) || std::abs(radii.back() - 1.0) > 1e-12)
        throw DomainError("Abel grid radii must lie in (R, 1] and end at 1");
    for (std::size_t i = 1; i < size; ++i)
        if (!(radii[i] > radii[i - 1])) throw DomainError("Abel grid radii must be strictly increasing");
    AbelGrid g;
    g.r = std::move(radii);
    g.r.back() = 1.0;
    g.u.resize(size);
    g.jacobian.resize(size);
    for (std::size_t i = 0; i < size; ++i) {
        g.u[i] = model.rho(g.r[i]);
        g.jacobian[i] = model.c(g.r[i]) * model.rho_prime(g.r[i]);
    }
    g.weights.resize(size);
    numerics::parallel_for(size, [&](std::size_t i) {
        std::vector<double>& w = g.weights[i];
        w.assign(size - i, 0.0);
        const double v = g.u[i];
        auto root = [&](double u) { return std::sqrt(std::max((u - v) * (u + v), 0.0)); };
        for (std::size_t j = i; j + 1 < size; ++j) {
            const double a = g.u[j];
            const double b = g.u[j + 1];
            const double sa = root(a);
            const double sb = root(b);
            // int u / S du and int u^2 / S du over [a, b], S = sqrt(u^2 - v^2).
            const double i0 = sb - sa;
            const double i1 = 0.5 * (b * sb - a * sa + v * v * std::log((b + sb) / (a + sa)));
            const double width = b - a;
            w[j - i] += (b * i0 - i1) / width;
            w[j + 1 - i] += (i1 - a * i0) / width;
        }
    });
    return g;
}

/// Uniform grid r_i = R + (1 - R)(i + 1) / size.
inline AbelGrid make_abel_grid(const RadialModel& model, std::size_t size) {
    if (size < 4 || size > kAbelGridLimit) {
        std::ostringstream msg;
        msg << "Abel grid size must lie in [4, " << kAbelGridLimit << "]";
        throw DomainError(msg.str());
    }
    const double R = model.inner_radius();
    std::vector<double> r(size);
    for (std::size_t i = 0; i < size; ++i)
        r[i] = R + (1.0 - R) * static_cast<double>(i + 1) / static_cast<double>(size);
    return make_abel_grid(model, std::move(r));
}

/// Discrete forward transform of f sampled on the grid.
inline std::vector<double> abel_apply(const AbelGrid& grid, const std::vector<double>& f) {
    if (f.size() != grid.size()) throw DomainError("sample count does not match the Abel grid");
    std::vector<double> out(grid.size(), 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double sum = 0.0;
        for (std::size_t j = i; j < grid.size(); ++j) sum += grid.weights[i][j - i] * f[j] / grid.jacobian[j];
        out[i] = sum;
    }
    return out;
}

/// Sampled transform of f on the grid radii by adaptive quadrature.
inline std::vector<double> abel_sample(const RadialModel& model, const AbelGrid& grid, const RadialFunction& f,
                                       const numerics::QuadratureOptions& opt = default_ray_quadrature()) {
    std::vector<double> g(grid.size());
    numerics::parallel_for(grid.size(), [&](std::size_t i) { g[i] = abel_forward(model, f, grid.r[i], opt); });
    return g;
}

struct AbelInversion {
    std::vector<double> r;
    std::vector<double> f;
    /// Rows whose diagonal weight is resolvable relative to the largest one.
    std::size_t effective_rank = 0;
    /// ||A f - g||_inf / ||g||_inf for the discrete operator; 0 when g = 0.
    double forward_residual = 0.0;
};

/// Solves A f = g on the grid by back substitution from r = 1 inwards. The
/// last row carries no information (A f(1) = 0), so F is extrapolated
/// linearly into the last node and the two outermost rows are solved together.
inline AbelInversion abel_invert(const AbelGrid& grid, const std::vector<double>& g) {
    const std::size_t N = grid.size();
    if (g.size() != N) throw DomainError("sample count does not match the Abel grid");
    double g_max = 0.0;
    for (double v : g) g_max = std::max(g_max, std::abs(v));
    if (std::abs(g.back()) > 1e-8 * std::max(g_max, 1e-300) && g.back() != 0.0)
        throw DomainError("Abel data must vanish at r = 1");

    double diag_max = 0.0;
    for (std::size_t i = 0; i + 1 < N; ++i) diag_max = std::max(diag_max, grid.weights[i][0]);
    AbelInversion out;
    for (std::size_t i = 0; i + 1 < N; ++i)
        if (grid.weights[i][0] > 1e-12 * diag_max) ++out.effective_rank;
    if (out.effective_rank + 1 < N) {
        std::ostringstream msg;
        msg << "Abel system is rank deficient near r = 1: effective rank " << out.effective_rank << " of " << N - 1;
        throw NumericalError(msg.str());
    }

    std::vector<double> F(N, 0.0);
    {
        const auto& w2 = grid.weights[N - 2];  // F_{N-2}, F_{N-1}
        const auto& w3 = grid.weights[N - 3];  // F_{N-3}, F_{N-2}, F_{N-1}
        // Substitute F_{N-1} = 2 F_{N-2} - F_{N-3}.
        const double a11 = -w2[1];
        const double a12 = w2[0] + 2.0 * w2[1];
        const double a21 = w3[0] - w3[2];
        const double a22 = w3[1] + 2.0 * w3[2];
        const double det = a11 * a22 - a12 * a21;
        if (det == 0.0) throw NumericalError("Abel system is singular in the outermost cell");
        F[N - 3] = (g[N - 2] * a22 - a12 * g[N - 3]) / det;
        F[N - 2] = (a11 * g[N - 3] - a21 * g[N - 2]) / det;
        F[N - 1] = 2.0 * F[N - 2] - F[N - 3];
    }
    for (std::size_t i = N - 3; i-- > 0;) {
        const auto& w = grid.weights[i];
        double sum = g[i];
        for (std::size_t j = i + 1; j < N; ++j) sum -= w[j - i] * F[j];
        F[i] = sum / w[0];
    }
    out.r = grid.r;
    out.f.resize(N);
    for (std::size_t j = 0; j < N; ++j) out.f[j] = F[j] * grid.jacobian[j];
    if (g_max > 0.0) {
        const auto back = abel_apply(grid, out.f);
        double worst = 0.0;
        for (std::size_t i = 0; i < N; ++i) worst = std::max(worst, std::abs(back[i] - g[i]));
        out.forward_residual = worst / g_max;
    }
    return out;
}

/// Best p / q with q <= max_denominator and |x - p/q| <= tol, or {0, 0}.
inline std::pair<int, int> rational_approximation(double x, int max_denominator, double tol = 1e-9) {
    for (int q = 1; q <= max_denominator; ++q) {
        const double p = std::round(x * q);
        if (std::abs(x - p / q) <= tol) {
            const int pi = static_cast<int>(p);
            if (std::gcd(pi, q) == 1) return {pi, q};
        }
    }
    return {0, 0};
}

struct TrackPoint {
    double tau;
    double phi;
    /// |alpha_tau(phi) - alpha_0(r_star)|.
    double alpha_error;
    /// alpha_tau(phi) / pi as a reduced fraction m / n; {0, 0} if not rational.
    int m;
    int n;
};

struct TrackOptions {
    numerics::QuadratureOptions quadrature = default_ray_quadrature();
    double alpha_tol = 1e-10;
    int max_iter = 60;
    int max_denominator = 1000;
};

/// Continues the diving ray with tip r_star through the family, holding its
/// half angle fixed: alpha_tau(phi(tau)) = alpha_0(r_star). The tau values are
/// visited outwards from 0 on each side so every solve is warm-started.
inline std::vector<TrackPoint> track_orbit(const DeformationFamily& family, double r_star,
                                           const std::vector<double>& taus, const TrackOptions& opt = {}) {
    const RadialModel& base = family.base();
    const double R = base.inner_radius();
    if (!(r_star > R && r_star < 1.0)) throw DomainError("tracked tip radius must lie in (R, 1)");
    const double target = half_angle(base, r_star, opt.quadrature);
    const double slope0 = half_angle_derivative(base, r_star, opt.quadrature);
    if (classify_slope(slope0) != Stability::stable) {
        std::ostringstream msg;
        msg << "orbit at r = " << r_star << " is not stable (alpha' = " << slope0 << ")";
        throw DomainError(msg.str());
    }

    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < taus.size(); ++i) (taus[i] >= 0.0 ? pos : neg).push_back(i);
    std::sort(pos.begin(), pos.end(), [&](auto a, auto b) { return taus[a] < taus[b]; });
    std::sort(neg.begin(), neg.end(), [&](auto a, auto b) { return taus[a] > taus[b]; });

    std::vector<TrackPoint> out(taus.size());
    for (const auto* side : {&pos, &neg}) {
        double tau_prev = 0.0;
        double phi_prev = r_star;
        double rate = 0.0;  // d phi / d tau from the last two points
        for (std::size_t idx : *side) {
            const double tau = taus[idx];
            const RadialModel model = family.model(tau);
            double r = std::clamp(phi_prev + rate * (tau - tau_prev), R + 0.5 * (phi_prev - R),
                                  1.0 - 0.5 * (1.0 - phi_prev));
            double slope = slope0;
            double err = half_angle(model, r, opt.quadrature) - target;
            int iter = 0;
            while (std::abs(err) > 1e-15 * std::max(1.0, target) && iter < opt.max_iter) {
                if (iter > 0 && iter % 8 == 0) slope = half_angle_derivative(model, r, opt.quadrature);
                double step = -err / slope;
                while (!(r + step > R && r + step < 1.0)) step *= 0.5;
                r += step;
                err = half_angle(model, r, opt.quadrature) - target;
                ++iter;
                if (std::abs(step) < 1e-16) break;
            }
            if (!(std::abs(err) <= opt.alpha_tol)) {
                std::ostringstream msg;
                msg << "orbit continuation diverged at tau = " << tau << " (alpha residual " << err << ")";
                throw TrackingError(msg.str(), tau_prev);
            }
            const auto [m, n] = rational_approximation((target + err) / std::numbers::pi, opt.max_denominator);
            out[idx] = {tau, r, std::abs(err), m, n};
            if (tau != tau_prev) rate = (r - phi_prev) / (tau - tau_prev);
            tau_prev = tau;
            phi_prev = r;
        }
    }
    return out;
}

struct LengthDerivative {
    PeriodicOrbit orbit;
    /// 2 d ell / d tau at 0, by Richardson-extrapolated centered differences.
    double lhs = 0.0;
    /// Integral of c0^2 d/dtau c^-2 over the orbit in travel time.
    double rhs = 0.0;
    double residual = 0.0;
    /// Integral of d/dtau c^-2 alone; agrees with rhs only where c0 = 1.
    double literal_rhs = 0.0;
    double literal_residual = 0.0;

    double dl_dtau() const { return 0.5 * lhs; }
};

inline constexpr std::array<double, 3> kLengthSteps = {1e-3, 5e-4, 2.5e-4};

namespace detail {

inline double relative_gap(double a, double b) { return b != 0.0 ? std::abs(a - b) / std::abs(b) : std::abs(a - b); }

} // namespace detail

/// Compares 2 d ell / d tau with the integral of the speed variation over the
/// orbit. First variation of the travel time gives 2 ell' = int c0^2 (d/dtau
/// c^-2) dt; `literal_rhs` drops the c0^2 weight.
inline LengthDerivative length_derivative_check(const DeformationFamily& family, const PeriodicOrbit& orbit,
                                                const TrackOptions& opt = {}) {
    if (orbit.kind != Regime::diving || orbit.limit_case)
        throw DomainError("length derivative check needs a non-degenerate diving orbit");
    if (orbit.stability != Stability::stable) throw DomainError("length derivative check needs a stable orbit");
    if (family.epsilon() < kLengthSteps[0]) throw DomainError("family range is smaller than the difference steps");
    std::vector<double> taus;
    for (double h : kLengthSteps) {
        taus.push_back(h);
        taus.push_back(-h);
    }
    const auto track = track_orbit(family, orbit.parameter, taus, opt);
    std::array<double, 3> d{};
    for (std::size_t k = 0; k < kLengthSteps.size(); ++k) {
        const double h = kLengthSteps[k];
        const double plus = 2.0 * orbit.n * half_length(family.model(h), track[2 * k].phi, opt.quadrature);
        const double minus = 2.0 * orbit.n * half_length(family.model(-h), track[2 * k + 1].phi, opt.quadrature);
        d[k] = (plus - minus) / (2.0 * h);
    }
    // Halving steps: eliminate the h^2 then the h^4 error term.
    const double r1 = (4.0 * d[1] - d[0]) / 3.0;
    const double r2 = (4.0 * d[2] - d[1]) / 3.0;
    const double derivative = (16.0 * r2 - r1) / 15.0;

    const RadialModel& base = family.base();
    LengthDerivative out;
    out.orbit = orbit;
    out.lhs = 2.0 * derivative;
    out.rhs = pbrt_integral(
        base, orbit,
        [&](double r) {
            const double c0 = base.c(r);
            return c0 * c0 * family.variation(r);
        },
        opt.quadrature);
    out.literal_rhs = pbrt_integral(base, orbit, [&](double r) { return family.variation(r); }, opt.quadrature);
    out.residual = detail::relative_gap(out.lhs, out.rhs);
    out.literal_residual = detail::relative_gap(out.lhs, out.literal_rhs);
    return out;
}

inline json to_json(const LengthDerivative& d) {
    return {{"orbit", to_json(d.orbit)},       {"dl_dtau", d.dl_dtau()},
            {"lhs", d.lhs},                    {"pbrt_value", d.rhs},
            {"residual", d.residual},          {"literal_pbrt_value", d.literal_rhs},
            {"literal_residual", d.literal_residual}};
}

struct RigidityOptions {
    TrackOptions track;
    /// |d ell / d tau| at or below this counts as unchanged.
    double vanish_tol = 1e-9;
    std::size_t grid_size = 400;
    std::size_t conjugacy_grid = 256;
};

struct RigidityReport {
    std::vector<LengthDerivative> rows;
    double max_abs_derivative = 0.0;
    /// No stable orbit length moves to first order.
    bool all_vanish = true;
    /// Rows whose length moves; a witness that the length spectrum sees the deformation.
    std::vector<std::size_t> moved;
    std::size_t conjugacy_flags = 0;
    /// d/dtau c^-2 reconstructed on the grid by Abel inversion of the
    /// derivative data (1/2n) 2 ell'(r) = A(c0^2 d/dtau c^-2)(r).
    AbelInversion reconstruction;
    std::vector<double> expected;
    /// Relative L2 error of the reconstruction; absolute when expected = 0.
    double reconstruction_error = 0.0;
};

/// First variation of every stable diving orbit length with n <= n_max, and
/// the speed variation recovered from Abel data on a grid.
inline RigidityReport rigidity_experiment(const DeformationFamily& family, int n_max, const RigidityOptions& opt = {}) {
    const RadialModel& base = family.base();
    RigidityReport rep;
    rep.conjugacy_flags = conjugacy_scan(base, opt.conjugacy_grid, opt.track.quadrature).size();

    std::vector<PeriodicOrbit> orbits;
    for (const auto& o : enumerate_lsp(base, n_max, {512, 1e-10, opt.track.quadrature}))
        if (o.kind == Regime::diving && !o.limit_case && o.stability == Stability::stable) orbits.push_back(o);
    rep.rows.resize(orbits.size());
    numerics::parallel_for(orbits.size(),
                           [&](std::size_t i) { rep.rows[i] = length_derivative_check(family, orbits[i], opt.track); });
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const double d = std::abs(rep.rows[i].dl_dtau());
        rep.max_abs_derivative = std::max(rep.max_abs_derivative, d);
        if (d > opt.vanish_tol) rep.moved.push_back(i);
    }
    rep.all_vanish = rep.moved.empty();

    const AbelGrid grid = make_abel_grid(base, opt.grid_size);
    auto weighted = [&](double r) {
        const double c0 = base.c(r);
        return c0 * c0 * family.variation(r);
    };
    std::vector<double> data(grid.size(), 0.0);
    if (!rep.all_vanish) data = abel_sample(base, grid, weighted, opt.track.quadrature);
    rep.reconstruction = abel_invert(grid, data);
    rep.expected.resize(grid.size());
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double c0 = base.c(grid.r[i]);
        rep.reconstruction.f[i] /= c0 * c0;
        rep.expected[i] = family.variation(grid.r[i]);
        num += std::pow(rep.reconstruction.f[i] - rep.expected[i], 2);
        den += rep.expected[i] * rep.expected[i];
    }
    rep.reconstruction_error = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num / grid.size());
    return rep;
}

inline json to_json(const RigidityReport& rep) {
    json rows = json::array();
    for (const auto& r : rep.rows) rows.push_back(to_json(r));
    return {{"orbits", rows},
            {"max_abs_dl_dtau", rep.max_abs_derivative},
            {"all_vanish", rep.all_vanish},
            {"moved", rep.moved},
            {"conjugacy_flags", rep.conjugacy_flags},
            {"reconstruction_error", rep.reconstruction_error}};
}

} // namespace helioseis
