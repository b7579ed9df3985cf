#ifndef SQUIDFAN_ODE_HPP
#define SQUIDFAN_ODE_HPP

#include "squidfan/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>

namespace squidfan::ode
{

template < std::size_t N >
using State = std::array< double, N >;

struct StepControl
{
    double max_step  = 0.01;
    double min_step  = 1e-10;
    double rel_tol   = 1e-9;
    double abs_tol   = 1e-12;
    double init_step = 0.01;
};

// Dormand-Prince 5(4) with first-same-as-last evaluation reuse. The step never
// exceeds StepControl::max_step; a rejected step below min_step is reported as
// an integration failure.
template < std::size_t N, typename Rhs >
class DormandPrince
{
public:
    DormandPrince(Rhs rhs, State< N > y0, double t0, StepControl control)
        : rhs_{std::move(rhs)}, y_{y0}, t_{t0}, h_{std::min(control.init_step, control.max_step)}, control_{control}
    {
        dydt_ = rhs_(t_, y_);
    }

    [[nodiscard]] double time() const { return t_; }
    [[nodiscard]] const State< N >& state() const { return y_; }
    [[nodiscard]] const State< N >& derivative() const { return dydt_; }

    // Advance by one accepted step, never past t_limit.
    void step(double t_limit)
    {
        constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
        constexpr double a21 = 1.0 / 5;
        constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
        constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                         a65 = -5103.0 / 18656;
        constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
        constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                         e6 = 22.0 / 525, e7 = -1.0 / 40;

        for (;;)
        {
            const double h = std::min(h_, t_limit - t_);
            if (h < control_.min_step && h < t_limit - t_)
                throw IntegrationError("step size underflow at t = " + std::to_string(t_));

            const auto& k1 = dydt_;
            State< N > tmp;
            for (std::size_t i = 0; i < N; ++i)
                tmp[i] = y_[i] + h * a21 * k1[i];
            const auto k2 = rhs_(t_ + c2 * h, tmp);
            for (std::size_t i = 0; i < N; ++i)
                tmp[i] = y_[i] + h * (a31 * k1[i] + a32 * k2[i]);
            const auto k3 = rhs_(t_ + c3 * h, tmp);
            for (std::size_t i = 0; i < N; ++i)
                tmp[i] = y_[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
            const auto k4 = rhs_(t_ + c4 * h, tmp);
            for (std::size_t i = 0; i < N; ++i)
                tmp[i] = y_[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
            const auto k5 = rhs_(t_ + c5 * h, tmp);
            for (std::size_t i = 0; i < N; ++i)
                tmp[i] = y_[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
            const auto k6 = rhs_(t_ + h, tmp);
            State< N > y_new;
            for (std::size_t i = 0; i < N; ++i)
                y_new[i] = y_[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
            const auto k7 = rhs_(t_ + h, y_new);

            double err = 0.0;
            for (std::size_t i = 0; i < N; ++i)
            {
                const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
                const double scale =
                    control_.abs_tol + control_.rel_tol * std::max(std::abs(y_[i]), std::abs(y_new[i]));
                err = std::max(err, std::abs(e) / scale);
            }

            if (!std::isfinite(err))
                throw IntegrationError("non-finite state at t = " + std::to_string(t_));

            if (err <= 1.0)
            {
                t_ += h;
                y_    = y_new;
                dydt_ = k7;
                const double grow = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
                h_                = std::min(control_.max_step, h * grow);
                return;
            }
            h_ = h * std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
            if (h_ < control_.min_step)
                throw IntegrationError("step size underflow at t = " + std::to_string(t_));
        }
    }

private:
    Rhs rhs_;
    State< N > y_;
    State< N > dydt_;
    double t_;
    double h_;
    StepControl control_;
};

} // namespace squidfan::ode

#endif
