#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "helioseis/errors.hpp"

namespace helioseis::numerics {

namespace detail {

inline std::size_t locate(const std::vector<double>& x, double t) {
    if (t <= x.front()) return 0;
    if (t >= x.back()) return x.size() - 2;
    auto it = std::upper_bound(x.begin(), x.end(), t);
    return static_cast<std::size_t>(it - x.begin()) - 1;
}

inline void check_knots(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw SchemaError("interpolation: abscissa and ordinate sizes differ");
    if (x.size() < 2) throw SchemaError("interpolation: at least two knots are required");
    for (std::size_t i = 1; i < x.size(); ++i) {
        if (!(x[i] > x[i - 1])) throw SchemaError("interpolation: knots must be strictly increasing");
    }
}

} // namespace detail

/// Shape-preserving piecewise cubic Hermite interpolant (Fritsch-Butland
/// slopes). C1 across knots; monotone data yields a monotone interpolant.
/// Outside the knot range the end cubics are extended.
class MonotoneCubic {
public:
    MonotoneCubic() = default;

    MonotoneCubic(std::span<const double> x, std::span<const double> y)
        : x_(x.begin(), x.end()), y_(y.begin(), y.end()), d_(x.size(), 0.0) {
        detail::check_knots(x, y);
        const std::size_t n = x_.size();
        std::vector<double> h(n - 1), delta(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            h[i] = x_[i + 1] - x_[i];
            delta[i] = (y_[i + 1] - y_[i]) / h[i];
        }
        if (n == 2) {
            d_[0] = d_[1] = delta[0];
            return;
        }
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (delta[i - 1] * delta[i] <= 0.0) {
                d_[i] = 0.0;
            } else {
                const double w1 = 2.0 * h[i] + h[i - 1];
                const double w2 = h[i] + 2.0 * h[i - 1];
                d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
            }
        }
        d_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
        d_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    }

    /// Value and first derivative at t.
    std::pair<double, double> eval(double t) const {
        const std::size_t i = detail::locate(x_, t);
        const double h = x_[i + 1] - x_[i];
        const double s = (t - x_[i]) / h;
        const double s2 = s * s;
        const double s3 = s2 * s;
        const double h00 = 2 * s3 - 3 * s2 + 1;
        const double h10 = s3 - 2 * s2 + s;
        const double h01 = -2 * s3 + 3 * s2;
        const double h11 = s3 - s2;
        const double value = h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
        const double dh00 = (6 * s2 - 6 * s) / h;
        const double dh10 = 3 * s2 - 4 * s + 1;
        const double dh01 = (-6 * s2 + 6 * s) / h;
        const double dh11 = 3 * s2 - 2 * s;
        const double deriv = dh00 * y_[i] + dh10 * d_[i] + dh01 * y_[i + 1] + dh11 * d_[i + 1];
        return {value, deriv};
    }

    double operator()(double t) const { return eval(t).first; }

    const std::vector<double>& knots() const noexcept { return x_; }
    const std::vector<double>& values() const noexcept { return y_; }

private:
    // Three-point end formula, limited so the end interval stays monotone.
    static double end_slope(double h0, double h1, double del0, double del1) {
        double d = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
        if (d * del0 <= 0.0) {
            d = 0.0;
        } else if (del0 * del1 <= 0.0 && std::abs(d) > std::abs(3.0 * del0)) {
            d = 3.0 * del0;
        }
        return d;
    }

    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> d_;
};

/// Natural cubic spline. Used where the data are smooth and shape
/// preservation is not a concern.
class CubicSpline {
public:
    CubicSpline() = default;

    CubicSpline(std::span<const double> x, std::span<const double> y)
        : x_(x.begin(), x.end()), y_(y.begin(), y.end()), m_(x.size(), 0.0) {
        detail::check_knots(x, y);
        const std::size_t n = x_.size();
        if (n < 3) return;
        std::vector<double> a(n, 0.0), b(n, 1.0), c(n, 0.0), r(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double h0 = x_[i] - x_[i - 1];
            const double h1 = x_[i + 1] - x_[i];
            a[i] = h0 / 6.0;
            b[i] = (h0 + h1) / 3.0;
            c[i] = h1 / 6.0;
            r[i] = (y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0;
        }
        // Thomas algorithm; rows 0 and n-1 enforce zero curvature.
        for (std::size_t i = 1; i < n; ++i) {
            const double w = a[i] / b[i - 1];
            b[i] -= w * c[i - 1];
            r[i] -= w * r[i - 1];
        }
        m_[n - 1] = r[n - 1] / b[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) m_[i] = (r[i] - c[i] * m_[i + 1]) / b[i];
    }

    double operator()(double t) const {
        const std::size_t i = detail::locate(x_, t);
        const double h = x_[i + 1] - x_[i];
        const double A = (x_[i + 1] - t) / h;
        const double B = (t - x_[i]) / h;
        return A * y_[i] + B * y_[i + 1] +
               ((A * A * A - A) * m_[i] + (B * B * B - B) * m_[i + 1]) * h * h / 6.0;
    }

private:
    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> m_;
};

/// Derivative at `x0` of the Chebyshev interpolant of f on [a, b] using
/// `degree + 1` Chebyshev-Lobatto nodes.
template <typename F>
double chebyshev_derivative(F&& f, double a, double b, double x0, int degree = 14) {
    const int n = degree;
    std::vector<double> nodes(n + 1), values(n + 1);
    for (int j = 0; j <= n; ++j) {
        nodes[j] = std::cos(std::numbers::pi * j / n);
        values[j] = f(0.5 * (a + b) + 0.5 * (b - a) * nodes[j]);
    }
    // Chebyshev coefficients by direct cosine transform on Lobatto nodes.
    std::vector<double> coeff(n + 1, 0.0);
    for (int k = 0; k <= n; ++k) {
        double sum = 0.0;
        for (int j = 0; j <= n; ++j) {
            const double w = (j == 0 || j == n) ? 0.5 : 1.0;
            sum += w * values[j] * std::cos(std::numbers::pi * k * j / n);
        }
        coeff[k] = 2.0 * sum / n;
    }
    coeff[0] *= 0.5;
    coeff[n] *= 0.5;
    // Derivative coefficients via the standard backward recurrence.
    std::vector<double> dcoeff(n + 2, 0.0);
    for (int k = n - 1; k >= 0; --k) dcoeff[k] = dcoeff[k + 2] + 2.0 * (k + 1) * coeff[k + 1];
    dcoeff[0] *= 0.5;
    // Clenshaw evaluation at the mapped point.
    const double t = (2.0 * x0 - (a + b)) / (b - a);
    double b1 = 0.0;
    double b2 = 0.0;
    for (int k = n - 1; k >= 1; --k) {
        const double tmp = 2.0 * t * b1 - b2 + dcoeff[k];
        b2 = b1;
        b1 = tmp;
    }
    const double deriv = t * b1 - b2 + dcoeff[0];
    return deriv * 2.0 / (b - a);
}

} // namespace helioseis::numerics
