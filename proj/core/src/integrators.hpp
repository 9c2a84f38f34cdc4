#pragma once

// Explicit Runge-Kutta steppers over Eigen vectors/matrices. Both advance a
// state across [t_begin, t_end] exactly, landing on t_end.

#include "squidqed/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace squidqed::dynamics::detail {

template <class State>
double rms_error(const State& err, const State& y0, const State& y1, double rtol, double atol)
{
    const auto scale = (atol + rtol * y0.cwiseAbs().cwiseMax(y1.cwiseAbs()).array()).eval();
    const double sum = (err.cwiseAbs().array() / scale).square().sum();
    return std::sqrt(sum / static_cast<double>(err.size()));
}

/// Classic fourth-order Runge-Kutta with the largest uniform step ≤ max_step.
template <class State, class Rhs, class AfterStep>
void rk4_advance(State& y, double t_begin, double t_end, double max_step, Rhs&& rhs, AfterStep&& after_step)
{
    const double span = t_end - t_begin;
    if (span <= 0.0) {
        return;
    }
    const auto n = static_cast<long>(std::ceil(span / max_step - 1e-9));
    const double h = span / static_cast<double>(n);
    State k1, k2, k3, k4;
    for (long i = 0; i < n; ++i) {
        const double t = t_begin + static_cast<double>(i) * h;
        rhs(t, y, k1);
        rhs(t + 0.5 * h, (y + (0.5 * h) * k1).eval(), k2);
        rhs(t + 0.5 * h, (y + (0.5 * h) * k2).eval(), k3);
        rhs(t + h, (y + h * k3).eval(), k4);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        after_step(y);
    }
}

/// Dormand-Prince 5(4) with step-size control. The last accepted step size
/// is remembered across calls so segment boundaries do not reset it.
class DormandPrince {
public:
    DormandPrince(double rtol, double atol, double initial_step)
        : rtol_(rtol), atol_(atol), step_(initial_step) {}

    template <class State, class Rhs, class AfterStep>
    void advance(State& y, double t_begin, double t_end, Rhs&& rhs, AfterStep&& after_step)
    {
        constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
        constexpr double a21 = 1.0 / 5;
        constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
        constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                         a65 = -5103.0 / 18656;
        constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                         b6 = 11.0 / 84;
        constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                         e6 = 22.0 / 525, e7 = -1.0 / 40;

        double t = t_begin;
        State k1, k2, k3, k4, k5, k6, k7, y_new, err;
        rhs(t, y, k1);
        while (t < t_end) {
            const double remaining = t_end - t;
            const bool last = step_ >= remaining * (1.0 - 1e-12);
            const double h = last ? remaining : step_;
            if (h < 1e-12 * std::max(1.0, std::abs(t))) {
                throw IntegratorError("adaptive step size underflow", t);
            }
            rhs(t + c2 * h, (y + h * (a21 * k1)).eval(), k2);
            rhs(t + c3 * h, (y + h * (a31 * k1 + a32 * k2)).eval(), k3);
            rhs(t + c4 * h, (y + h * (a41 * k1 + a42 * k2 + a43 * k3)).eval(), k4);
            rhs(t + c5 * h, (y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)).eval(), k5);
            rhs(t + h, (y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)).eval(), k6);
            y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            rhs(t + h, y_new, k7);
            err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

            const double norm = rms_error(err, y, y_new, rtol_, atol_);
            const double factor = norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 5.0);
            if (norm <= 1.0) {
                t = last ? t_end : t + h;
                y = y_new;
                after_step(y);
                k1 = k7;
                ++accepted_;
                // A clipped final step says nothing about the natural step size.
                if (!last || factor < 1.0) {
                    step_ = h * factor;
                }
            } else {
                step_ = h * std::min(factor, 1.0);
                ++rejected_;
            }
        }
    }

    long accepted() const { return accepted_; }
    long rejected() const { return rejected_; }

private:
    double rtol_;
    double atol_;
    double step_;
    long accepted_ = 0;
    long rejected_ = 0;
};

}  // namespace squidqed::dynamics::detail
