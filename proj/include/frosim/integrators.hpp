#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "frosim/types.hpp"

namespace frosim {

/// The six supported integrators. A and B are tuned to be exact for signals
/// at a selected angular frequency (and at DC); C and D are their slow-signal
/// counterparts; the last two are the classical one-derivative rules.
/// A and C are two-step, B, D and the backward Euler rule are single-step.
enum class IntegratorKind { A, B, C, D, Trapezoidal, BackwardEuler };

/// Discretization coefficients of
///   x_t = x_{t-h} + b0*xd_t + b_m1*xd_{t-h} + c0*xdd_t + c_m1*xdd_{t-h}.
/// One-derivative rules carry c0 = c_m1 = 0.
struct Coefficients4 {
    double b0 = 0.0;   // s
    double b_m1 = 0.0; // s
    double c0 = 0.0;   // s^2
    double c_m1 = 0.0; // s^2

    bool uses_second_derivative() const { return c0 != 0.0 || c_m1 != 0.0; }
};

/// Fixed-step solver settings shared by a simulation run.
struct SolverConfig {
    double h = 500e-6;                 // step size (s)
    double omega_select = omega_base;  // tuning frequency of integrators A/B (rad/s)
    double newton_tol = 1e-8;          // max-norm convergence tolerance
    int max_iter = 50;
};

namespace detail {

// c0 of integrator A by series, used when omega_select*h is so small that
// the closed form loses all significant digits to cancellation.
inline double integrator_a_c0_series(double h, double omega) {
    const double th = omega * h;
    const double th2 = th * th;
    return -h * h * (1.0 / 12.0 + th2 / 720.0 + th2 * th2 / 30240.0);
}

} // namespace detail

/// Closed-form discretization coefficients for an integrator at step size h.
/// omega_select is only read for kinds A and B, which require
/// omega_select*h in (0, pi).
inline Coefficients4 coefficients(IntegratorKind kind, double h,
                                  double omega_select = omega_base) {
    if (!(h > 0.0)) {
        throw std::domain_error("coefficients: step size must be positive");
    }
    const bool tuned = kind == IntegratorKind::A || kind == IntegratorKind::B;
    if (tuned) {
        if (!(omega_select > 0.0)) {
            throw std::domain_error("coefficients: omega_select must be positive");
        }
        if (!(omega_select * h < std::numbers::pi)) {
            throw std::domain_error(
                "coefficients: omega_select*h must be below pi for integrators A/B");
        }
    }

    const double w = omega_select;
    Coefficients4 k;
    switch (kind) {
    case IntegratorKind::A:
        k.b0 = h / 2.0;
        k.b_m1 = h / 2.0;
        if (w * h < 1e-6) {
            k.c0 = detail::integrator_a_c0_series(h, w);
        } else {
            k.c0 = -1.0 / (w * w) + h / (2.0 * w) * (std::cos(w * h / 2.0) / std::sin(w * h / 2.0));
        }
        k.c_m1 = -k.c0;
        break;
    case IntegratorKind::B:
        k.b0 = std::sin(w * h) / w;
        k.c0 = (std::cos(w * h) - 1.0) / (w * w);
        break;
    case IntegratorKind::C:
        k.b0 = h / 2.0;
        k.b_m1 = h / 2.0;
        k.c0 = -h * h / 12.0;
        k.c_m1 = h * h / 12.0;
        break;
    case IntegratorKind::D:
        k.b0 = h;
        k.c0 = -h * h / 2.0;
        break;
    case IntegratorKind::Trapezoidal:
        k.b0 = h / 2.0;
        k.b_m1 = h / 2.0;
        break;
    case IntegratorKind::BackwardEuler:
        k.b0 = h;
        break;
    }
    return k;
}

/// Residual of the discretized equation; zero iff the step equation is
/// satisfied. Generic so the Newton assembly can evaluate it on forward-mode
/// scalars as well as on plain doubles.
template <class T>
T residual(const Coefficients4& k, const T& x_t, const T& x_prev, const T& xd_t,
           const T& xd_prev, const T& xdd_t, const T& xdd_prev) {
    return x_t - x_prev - k.b0 * xd_t - k.b_m1 * xd_prev - k.c0 * xdd_t -
           k.c_m1 * xdd_prev;
}

} // namespace frosim
