#pragma once

// Adaptive Dormand-Prince 5(4) stepping through Boost.Odeint.

#include <algorithm>
#include <array>
#include <cstddef>

#include <boost/numeric/odeint.hpp>

#include "helioseis/errors.hpp"

namespace helioseis::numerics {

struct OdeOptions {
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;
    double initial_step = 1e-3;
    double max_step = 0.05;
    std::size_t max_steps = 1000000;
};

/// Controlled Dormand-Prince integrator that remembers its step size between
/// calls. `rhs(t, y)` returns dy/dt as std::array<double, N>.
template <std::size_t N>
class DormandPrince {
public:
    using State = std::array<double, N>;

    explicit DormandPrince(OdeOptions opt = {})
        : opt_(opt),
          h_(opt.initial_step),
          stepper_(boost::numeric::odeint::make_controlled(opt.abs_tol, opt.rel_tol, opt.max_step,
                                                           boost::numeric::odeint::runge_kutta_dopri5<State>())) {}

    /// Advances (t, y) to exactly t_end.
    template <typename Rhs>
    void advance(Rhs&& rhs, double& t, State& y, double t_end) {
        auto system = [&rhs](const State& x, State& dxdt, double s) { dxdt = rhs(s, x); };
        std::size_t steps = 0;
        while (t < t_end) {
            if (++steps > opt_.max_steps) throw NumericalError("ode: step budget exhausted");
            const bool clipped = h_ >= t_end - t;
            double h = clipped ? t_end - t : h_;
            const auto result = stepper_.try_step(system, y, t, h);
            if (result == boost::numeric::odeint::success) {
                if (clipped) t = t_end;
                // A step clipped by t_end should not shrink the proposal.
                h_ = std::max(h, clipped ? h_ : 0.0);
            } else {
                h_ = h;
                if (h_ < 1e-16) throw NumericalError("ode: step size underflow");
            }
        }
    }

private:
    using Controlled = decltype(boost::numeric::odeint::make_controlled(
        0.0, 0.0, 0.0, boost::numeric::odeint::runge_kutta_dopri5<std::array<double, N>>()));

    OdeOptions opt_;
    double h_;
    Controlled stepper_;
};

} // namespace helioseis::numerics
