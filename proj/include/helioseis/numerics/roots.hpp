#pragma once

// Bracketed root finding with GSL's Brent solver.

#include <algorithm>
#include <cmath>
#include <exception>
#include <memory>
#include <sstream>
#include <string>
#include <type_traits>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_roots.h>

#include "helioseis/errors.hpp"
#include "helioseis/numerics/quadrature.hpp"

namespace helioseis::numerics {

struct RootOptions {
    double x_tol = 1e-15;     // absolute tolerance in x (scaled by |x| + 1)
    int max_iter = 200;
};

namespace detail {

struct SolverDeleter {
    void operator()(gsl_root_fsolver* s) const { gsl_root_fsolver_free(s); }
};

} // namespace detail

/// Brent's method on a sign-changing bracket [a, b]. Stops when the bracket
/// is below x_tol (|x| + 1) or can no longer shrink in double precision.
///
/// Throws RootNotFound when f(a) and f(b) share a sign or the iteration
/// budget runs out.
template <typename F>
double brent(F&& f, double a, double b, const RootOptions& opt = {}) {
    const double fa = f(a);
    const double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0)) {
        std::ostringstream msg;
        msg << "brent: no sign change on [" << a << ", " << b << "] (f = " << fa << ", " << fb << ")";
        throw RootNotFound(msg.str());
    }
    detail::silence_gsl();
    using Fn = std::remove_reference_t<F>;
    detail::Trampoline<Fn> tramp{&f, nullptr};
    gsl_function fn{&detail::Trampoline<Fn>::call, &tramp};
    std::unique_ptr<gsl_root_fsolver, detail::SolverDeleter> solver(gsl_root_fsolver_alloc(gsl_root_fsolver_brent));
    if (!solver) throw RootNotFound("cannot allocate the root solver");
    if (gsl_root_fsolver_set(solver.get(), &fn, std::min(a, b), std::max(a, b)) != GSL_SUCCESS) {
        if (tramp.error) std::rethrow_exception(tramp.error);
        throw RootNotFound("brent: invalid bracket");
    }
    for (int iter = 0; iter < opt.max_iter; ++iter) {
        const double width = gsl_root_fsolver_x_upper(solver.get()) - gsl_root_fsolver_x_lower(solver.get());
        const int status = gsl_root_fsolver_iterate(solver.get());
        if (tramp.error) std::rethrow_exception(tramp.error);
        if (status != GSL_SUCCESS) throw RootNotFound(std::string("brent: ") + gsl_strerror(status));
        const double x = gsl_root_fsolver_root(solver.get());
        const double lo = gsl_root_fsolver_x_lower(solver.get());
        const double hi = gsl_root_fsolver_x_upper(solver.get());
        // GSL returns immediately with a zero-width bracket when f(x) == 0.
        if (hi - lo <= opt.x_tol * (std::abs(x) + 1.0) || !(hi - lo < width)) return x;
    }
    throw RootNotFound("brent: iteration budget exhausted");
}

} // namespace helioseis::numerics
