#pragma once

// Globally adaptive Gauss-Kronrod (G10/K21) quadrature through GSL's QUADPACK
// port. Failure to converge throws rather than returning a truncated value;
// a round-off stall is accepted when the reported error is within a factor
// 1000 of the requested tolerance.

#include <cmath>
#include <cstddef>
#include <exception>
#include <memory>
#include <type_traits>
#include <sstream>
#include <utility>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include "helioseis/errors.hpp"

namespace helioseis::numerics {

struct QuadratureOptions {
    double rel_tol = 1e-13;
    double abs_tol = 1e-15;
    std::size_t max_intervals = 4000;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    std::size_t intervals = 0;
};

namespace detail {

/// GSL reports failures through return codes here, never by aborting.
inline void silence_gsl() {
    static const bool done = [] {
        gsl_set_error_handler_off();
        return true;
    }();
    (void)done;
}

struct WorkspaceDeleter {
    void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
};

template <typename F>
struct Trampoline {
    F* f;
    std::exception_ptr error;

    static double call(double x, void* self) {
        auto* t = static_cast<Trampoline*>(self);
        if (t->error) return 0.0;
        try {
            return (*t->f)(x);
        } catch (...) {
            t->error = std::current_exception();
            return 0.0;
        }
    }
};

} // namespace detail

/// Integrates f over [a, b]. f must be finite at the Kronrod nodes (which
/// never include the endpoints).
template <typename F>
QuadratureResult integrate(F&& f, double a, double b, const QuadratureOptions& opt = {}) {
    QuadratureResult out;
    if (a == b) return out;
    detail::silence_gsl();
    using Fn = std::remove_reference_t<F>;
    detail::Trampoline<Fn> tramp{&f, nullptr};
    gsl_function fn{&detail::Trampoline<Fn>::call, &tramp};
    std::unique_ptr<gsl_integration_workspace, detail::WorkspaceDeleter> ws(
        gsl_integration_workspace_alloc(opt.max_intervals));
    if (!ws) throw QuadratureError("cannot allocate the quadrature workspace");
    const int status = gsl_integration_qag(&fn, a, b, opt.abs_tol, opt.rel_tol, opt.max_intervals,
                                           GSL_INTEG_GAUSS21, ws.get(), &out.value, &out.error);
    if (tramp.error) std::rethrow_exception(tramp.error);
    out.intervals = ws->size;
    if (!std::isfinite(out.value)) throw QuadratureError("adaptive quadrature produced a non-finite value");
    const double relaxed = 1e3 * std::max(opt.abs_tol, opt.rel_tol * std::abs(out.value));
    const bool stalled_at_roundoff = status == GSL_EROUND && out.error <= relaxed;
    if (status != GSL_SUCCESS && !stalled_at_roundoff) {
        std::ostringstream msg;
        msg << "adaptive quadrature did not converge on [" << a << ", " << b << "]: " << gsl_strerror(status)
            << ", estimate " << out.value << " error " << out.error << " after " << out.intervals << " intervals";
        throw QuadratureError(msg.str());
    }
    return out;
}

/// Convenience wrapper returning only the value.
template <typename F>
double quad(F&& f, double a, double b, const QuadratureOptions& opt = {}) {
    return integrate(std::forward<F>(f), a, b, opt).value;
}

} // namespace helioseis::numerics
