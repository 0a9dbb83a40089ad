#pragma once

// Radial wave-speed models on the annulus R <= r <= 1.
//
// A RadialModel owns an immutable speed profile c(r) (and optionally a
// density profile) and is validated on construction: c > 0, the Herglotz
// condition d/dr (r/c) > 0 on a check grid, and c'(0) = 0 when R = 0.
// All evaluation is const and thread-safe.

#include <cmath>
#include <cstddef>
#include <fstream>
#include <memory>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "helioseis/errors.hpp"
#include "helioseis/numerics/interpolation.hpp"
#include "helioseis/numerics/quadrature.hpp"

namespace helioseis {

using json = nlohmann::json;

/// A value together with its radial derivative.
struct SpeedSample {
    double c;
    double dc_dr;
};

/// Evaluable radial profile with derivative.
class Profile {
public:
    virtual ~Profile() = default;
    virtual SpeedSample eval(double r) const = 0;
    virtual json to_json() const = 0;
    double operator()(double r) const { return eval(r).c; }
};

using ProfilePtr = std::shared_ptr<const Profile>;

class ConstantProfile final : public Profile {
public:
    explicit ConstantProfile(double value) : value_(value) {}
    SpeedSample eval(double) const override { return {value_, 0.0}; }
    json to_json() const override { return {{"kind", "constant"}, {"value", value_}}; }

private:
    double value_;
};

/// c(r) = sum_i coeffs[i] r^i.
class PolynomialProfile final : public Profile {
public:
    explicit PolynomialProfile(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) throw SchemaError("polynomial profile needs at least one coefficient");
    }
    SpeedSample eval(double r) const override {
        double value = 0.0;
        double deriv = 0.0;
        for (std::size_t i = coeffs_.size(); i-- > 0;) {
            deriv = deriv * r + value;
            value = value * r + coeffs_[i];
        }
        return {value, deriv};
    }
    json to_json() const override { return {{"kind", "polynomial"}, {"coeffs", coeffs_}}; }
    const std::vector<double>& coeffs() const noexcept { return coeffs_; }

private:
    std::vector<double> coeffs_;
};

/// Monotone-cubic interpolated table.
class TableProfile final : public Profile {
public:
    TableProfile(std::vector<double> r, std::vector<double> c) : interp_(r, c) {
        for (double v : c) {
            if (!(v > 0.0)) throw ValidationError("table profile values must be strictly positive");
        }
    }
    SpeedSample eval(double r) const override {
        auto [v, d] = interp_.eval(r);
        return {v, d};
    }
    json to_json() const override {
        return {{"kind", "table"}, {"r", interp_.knots()}, {"c", interp_.values()}};
    }
    const std::vector<double>& knots() const noexcept { return interp_.knots(); }

private:
    numerics::MonotoneCubic interp_;
};

/// c_tau(r) = base(r) * (1 + tau * h(r)); the multiplicative deformation.
class ScaledProfile final : public Profile {
public:
    ScaledProfile(ProfilePtr base, ProfilePtr perturbation, double tau)
        : base_(std::move(base)), pert_(std::move(perturbation)), tau_(tau) {}
    SpeedSample eval(double r) const override {
        const SpeedSample b = base_->eval(r);
        const SpeedSample h = pert_->eval(r);
        const double factor = 1.0 + tau_ * h.c;
        return {b.c * factor, b.dc_dr * factor + b.c * tau_ * h.dc_dr};
    }
    json to_json() const override {
        return {{"kind", "scaled"}, {"base", base_->to_json()}, {"perturbation", pert_->to_json()},
                {"tau", tau_}};
    }

private:
    ProfilePtr base_;
    ProfilePtr pert_;
    double tau_;
};

/// c_tau(r) = base(r) + tau * h(r); the additive deformation.
class ShiftedProfile final : public Profile {
public:
    ShiftedProfile(ProfilePtr base, ProfilePtr perturbation, double tau)
        : base_(std::move(base)), pert_(std::move(perturbation)), tau_(tau) {}
    SpeedSample eval(double r) const override {
        const SpeedSample b = base_->eval(r);
        const SpeedSample h = pert_->eval(r);
        return {b.c + tau_ * h.c, b.dc_dr + tau_ * h.dc_dr};
    }
    json to_json() const override {
        return {{"kind", "shifted"}, {"base", base_->to_json()}, {"perturbation", pert_->to_json()},
                {"tau", tau_}};
    }

private:
    ProfilePtr base_;
    ProfilePtr pert_;
    double tau_;
};

inline ProfilePtr make_constant(double v) { return std::make_shared<ConstantProfile>(v); }
inline ProfilePtr make_polynomial(std::vector<double> coeffs) {
    return std::make_shared<PolynomialProfile>(std::move(coeffs));
}
inline ProfilePtr make_table(std::vector<double> r, std::vector<double> c) {
    return std::make_shared<TableProfile>(std::move(r), std::move(c));
}

/// Parses {"kind": "constant"|"polynomial"|"table", ...}.
inline ProfilePtr profile_from_json(const json& doc) {
    if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string())
        throw SchemaError("profile must be an object with a string 'kind'");
    const std::string kind = doc["kind"].get<std::string>();
    try {
        if (kind == "constant") {
            if (!doc.contains("value") || !doc["value"].is_number())
                throw SchemaError("constant profile requires numeric 'value'");
            return make_constant(doc["value"].get<double>());
        }
        if (kind == "polynomial") {
            if (!doc.contains("coeffs") || !doc["coeffs"].is_array())
                throw SchemaError("polynomial profile requires array 'coeffs'");
            return make_polynomial(doc["coeffs"].get<std::vector<double>>());
        }
        if (kind == "table") {
            if (!doc.contains("r") || !doc.contains("c") || !doc["r"].is_array() || !doc["c"].is_array())
                throw SchemaError("table profile requires arrays 'r' and 'c'");
            return make_table(doc["r"].get<std::vector<double>>(), doc["c"].get<std::vector<double>>());
        }
    } catch (const json::exception& e) {
        throw SchemaError(std::string("profile: ") + e.what());
    }
    throw SchemaError("unknown profile kind '" + kind + "'");
}

struct ModelOptions {
    std::size_t herglotz_grid = 4096;
    double origin_slope_tol = 1e-8;
};

class RadialModel {
public:
    /// Builds and validates a model. Throws ValidationError subclasses.
    static RadialModel create(double inner_radius, int dim, ProfilePtr speed, ProfilePtr density = nullptr,
                              const ModelOptions& opt = {}) {
        RadialModel m(inner_radius, dim, std::move(speed), std::move(density));
        m.validate(opt);
        return m;
    }

    double inner_radius() const noexcept { return R_; }
    int dim() const noexcept { return dim_; }
    const ProfilePtr& speed_profile() const noexcept { return speed_; }
    const ProfilePtr& density_profile() const noexcept { return density_; }
    double herglotz_margin() const noexcept { return margin_; }
    double herglotz_argmin() const noexcept { return argmin_; }

    /// c(r) and c'(r). Throws DomainError outside [R, 1].
    SpeedSample speed(double r) const {
        check_domain(r);
        return speed_->eval(r);
    }
    double c(double r) const { return speed_->eval(r).c; }

    double density(double r) const { return density_ ? density_->eval(r).c : 1.0; }

    /// Herglotz coordinate rho_H(r) = r / c(r).
    double rho(double r) const { return r / speed_->eval(r).c; }

    /// d/dr (r / c(r)) = (c - r c') / c^2.
    double rho_prime(double r) const {
        const SpeedSample s = speed_->eval(r);
        return (s.c - r * s.dc_dr) / (s.c * s.c);
    }

    /// Momentum at the inner boundary, R / c(R); zero when R = 0.
    double p_inner() const { return R_ > 0.0 ? rho(R_) : 0.0; }
    /// Momentum at the surface, 1 / c(1).
    double p_outer() const { return rho(1.0); }

    json to_json() const {
        json doc = {{"R", R_}, {"dim", dim_}, {"speed", speed_->to_json()}};
        if (density_) doc["density"] = density_->to_json();
        return doc;
    }

    void check_domain(double r) const {
        constexpr double slack = 1e-13;
        if (!(r >= R_ - slack && r <= 1.0 + slack)) {
            std::ostringstream msg;
            msg << "radius " << r << " outside model domain [" << R_ << ", 1]";
            throw DomainError(msg.str());
        }
    }

private:
    RadialModel(double R, int dim, ProfilePtr speed, ProfilePtr density)
        : R_(R), dim_(dim), speed_(std::move(speed)), density_(std::move(density)) {}

    void validate(const ModelOptions& opt) {
        if (!speed_) throw SchemaError("model has no speed profile");
        if (!(R_ >= 0.0 && R_ < 1.0)) throw SchemaError("inner radius must lie in [0, 1)");
        if (dim_ < 2) throw SchemaError("dimension must be at least 2");
        if (opt.herglotz_grid < 2) throw SchemaError("Herglotz grid needs at least two points");
        if (const auto* table = dynamic_cast<const TableProfile*>(speed_.get())) {
            if (table->knots().front() > R_ + 1e-12 || table->knots().back() < 1.0 - 1e-12)
                throw SchemaError("speed table must cover [R, 1]");
        }
        margin_ = std::numeric_limits<double>::infinity();
        argmin_ = R_;
        const std::size_t n = opt.herglotz_grid;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = R_ + (1.0 - R_) * static_cast<double>(i) / static_cast<double>(n - 1);
            const SpeedSample s = speed_->eval(r);
            if (!(s.c > 0.0) || !std::isfinite(s.c)) {
                std::ostringstream msg;
                msg << "speed is not positive at r = " << r << " (c = " << s.c << ")";
                throw ValidationError(msg.str());
            }
            if (density_ && !(density_->eval(r).c > 0.0))
                throw ValidationError("density is not positive at r = " + std::to_string(r));
            const double d = (s.c - r * s.dc_dr) / (s.c * s.c);
            if (d < margin_) {
                margin_ = d;
                argmin_ = r;
            }
        }
        if (!(margin_ > 0.0)) {
            std::ostringstream msg;
            msg << "Herglotz condition violated: min d/dr(r/c) = " << margin_ << " at r = " << argmin_;
            throw HerglotzViolation(msg.str(), argmin_, margin_);
        }
        if (R_ == 0.0) {
            const double slope = speed_->eval(0.0).dc_dr;
            if (std::abs(slope) > opt.origin_slope_tol) {
                std::ostringstream msg;
                msg << "R = 0 requires c'(0) = 0, found " << slope;
                throw ValidationError(msg.str());
            }
        }
    }

    double R_;
    int dim_;
    ProfilePtr speed_;
    ProfilePtr density_;
    double margin_ = 0.0;
    double argmin_ = 0.0;
};

/// (c, dc/dr) at r.
inline SpeedSample eval_speed(const RadialModel& model, double r) { return model.speed(r); }

/// Parses and validates a model document.
inline RadialModel load_model(const json& doc, const ModelOptions& opt = {}) {
    if (!doc.is_object()) throw SchemaError("model document must be a JSON object");
    if (!doc.contains("R") || !doc["R"].is_number()) throw SchemaError("model requires numeric 'R'");
    if (!doc.contains("speed")) throw SchemaError("model requires 'speed'");
    int dim = 3;
    if (doc.contains("dim")) {
        if (!doc["dim"].is_number_integer()) throw SchemaError("'dim' must be an integer");
        dim = doc["dim"].get<int>();
    }
    ProfilePtr density;
    if (doc.contains("density") && !doc["density"].is_null()) density = profile_from_json(doc["density"]);
    return RadialModel::create(doc["R"].get<double>(), dim, profile_from_json(doc["speed"]), density, opt);
}

inline RadialModel load_model_file(const std::string& path, const ModelOptions& opt = {}) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open model file '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw SchemaError("model file '" + path + "' is not valid JSON: " + e.what());
    }
    return load_model(doc, opt);
}

// ---------------------------------------------------------------------------
// Conformal normalization of rotationally symmetric metrics.

/// Samples of a rotationally symmetric metric written at (r, 0, ..., 0) as
/// [[a, b^T], [b, C I]] with scalar b (2D) and scalar C.
struct MetricTable {
    std::vector<double> r;
    std::vector<double> a;
    std::vector<double> b;
    std::vector<double> C;
};

struct NormalizedMetric {
    RadialModel model;
    std::vector<double> source_radius;   // s_i
    std::vector<double> mapped_radius;   // rho(s_i)
    std::vector<double> twist;           // phi(s_i) removing the cross term (2D), phi(1) = 0
};

struct NormalizeOptions {
    numerics::QuadratureOptions quadrature{1e-12, 1e-15, 4000};
    ModelOptions model{};
};

/// Maps a rotationally symmetric metric onto a conformally Euclidean annulus.
///
/// In 2D the cross term b is removed first by the twist r phi' = -b/C, which
/// replaces a by a - b^2/C. The radius map rho(s) = exp(int_1^s sqrt(a/C)/t dt)
/// then makes the metric conformal with speed c(rho(s)) = rho(s)/(s sqrt(C(s))).
inline NormalizedMetric normalize_metric(const MetricTable& raw, int dim, const NormalizeOptions& opt = {}) {
    const std::size_t n = raw.r.size();
    if (n < 2 || raw.a.size() != n || raw.C.size() != n || (!raw.b.empty() && raw.b.size() != n))
        throw SchemaError("metric table columns must have equal length >= 2");
    if (dim < 2) throw SchemaError("dimension must be at least 2");
    if (!(raw.r.front() > 0.0)) throw SchemaError("metric table must start at a positive radius");
    if (std::abs(raw.r.back() - 1.0) > 1e-12) throw SchemaError("metric table must end at r = 1");
    std::vector<double> b = raw.b.empty() ? std::vector<double>(n, 0.0) : raw.b;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(raw.a[i] > 0.0 && raw.C[i] > 0.0 && b[i] * b[i] < raw.a[i] * raw.C[i])) {
            std::ostringstream msg;
            msg << "metric is not positive definite at r = " << raw.r[i];
            throw ValidationError(msg.str());
        }
        if (dim >= 3 && b[i] != 0.0)
            throw ValidationError("rotational symmetry in dim >= 3 forces a vanishing cross term");
    }

    std::vector<double> ratio(n), cross(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a_eff = raw.a[i] - b[i] * b[i] / raw.C[i];
        ratio[i] = std::sqrt(a_eff / raw.C[i]);
        cross[i] = b[i] / raw.C[i];
    }
    const numerics::MonotoneCubic ratio_fn(raw.r, ratio);
    const numerics::MonotoneCubic cross_fn(raw.r, cross);

    // Cumulative integrals from the outer radius inward.
    std::vector<double> log_rho(n, 0.0), twist(n, 0.0);
    for (std::size_t i = n - 1; i-- > 0;) {
        const double lo = raw.r[i];
        const double hi = raw.r[i + 1];
        log_rho[i] = log_rho[i + 1] -
                     numerics::quad([&](double t) { return ratio_fn(t) / t; }, lo, hi, opt.quadrature);
        twist[i] = twist[i + 1] +
                   numerics::quad([&](double t) { return cross_fn(t) / t; }, lo, hi, opt.quadrature);
    }
    std::vector<double> mapped(n), speed(n);
    for (std::size_t i = 0; i < n; ++i) {
        mapped[i] = std::exp(log_rho[i]);
        speed[i] = mapped[i] / (raw.r[i] * std::sqrt(raw.C[i]));
    }
    mapped.back() = 1.0;
    auto model = RadialModel::create(mapped.front(), dim, make_table(mapped, speed), nullptr, opt.model);
    return {std::move(model), raw.r, std::move(mapped), std::move(twist)};
}

inline MetricTable metric_from_json(const json& doc) {
    try {
        MetricTable t;
        t.r = doc.at("r").get<std::vector<double>>();
        t.a = doc.at("a").get<std::vector<double>>();
        t.C = doc.at("C").get<std::vector<double>>();
        if (doc.contains("b")) t.b = doc.at("b").get<std::vector<double>>();
        return t;
    } catch (const json::exception& e) {
        throw SchemaError(std::string("metric document: ") + e.what());
    }
}

} // namespace helioseis
