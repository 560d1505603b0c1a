#pragma once

#include <cmath>
#include <numbers>

#include "frosim/types.hpp"

namespace frosim {

/// Dynamic parameters of the grid-feeding converter system. Key names match
/// the scenario-file schema.
struct ConverterParams {
    double l_f = 4.2441e-4; // filter inductance (p.u.*s)
    double p_ref = 1.0;     // real power reference (p.u.)
    double q_ref = 0.0;     // reactive power reference (p.u.)

    // power controller: reference lags + PI gains on the measured-power error
    double t_pcon = 0.1;
    double t_qcon = 0.1;
    double k_p_iod = 1.3;
    double k_i_iod = 10.0;
    double k_p_ioq = 1.3;
    double k_i_ioq = 10.0;

    // current controller PI gains
    double k_p_vid = 0.25;
    double k_i_vid = 0.01;
    double k_p_viq = 0.25;
    double k_i_viq = 0.01;

    // PLL PI gains
    double k_p_pll = 150.0;
    double k_i_pll = 9000.0;

    // measurement low-pass time constants
    double t_p = 0.02;
    double t_q = 0.02;
    double t_v = 0.02;
};

/// In-phase / quadrature signal pair produced by the Clarke transformation.
template <class T>
struct TwoAxisT {
    T in{};
    T qu{};
};

/// Clarke transformation: for a balanced sinusoidal set the in-phase signal
/// equals the phase-A component and the quadrature signal lags it by pi/2.
template <class T>
TwoAxisT<T> clarke(const ThreePhaseT<T>& x) {
    constexpr double k = 2.0 / 3.0;
    constexpr double s = std::numbers::sqrt3 / 2.0;
    return {k * (x.a - 0.5 * x.b - 0.5 * x.c), k * s * (x.b - x.c)};
}

/// Rotate an in-phase/quadrature pair by -delta_bar into the device frame:
/// (d, q) = Re/Im of e^{-j delta_bar} (x_in + j x_qu).
template <class T>
PhasorT<T> phase_shift(const T& x_in, const T& x_qu, const T& delta_bar) {
    using std::cos;
    using std::sin;
    const T c = cos(delta_bar);
    const T s = sin(delta_bar);
    return {c * x_in + s * x_qu, c * x_qu - s * x_in};
}

/// Balanced positive-sequence waveforms of the VSC for a given voltage order
/// phasor: v_A = |v_ord| cos(delta_bar + arg v_ord), with -2pi/3 and +2pi/3
/// added to the cosine argument for phases B and C. Evaluated in rotated
/// rectangular form, which is identical and well-defined at v_ord = 0.
template <class T>
ThreePhaseT<T> vsc_waveforms(const PhasorT<T>& v_ord, const T& delta_bar) {
    using std::cos;
    using std::sin;
    constexpr double r = std::numbers::sqrt3 / 2.0;
    const T c = cos(delta_bar);
    const T s = sin(delta_bar);
    const T cb = -0.5 * c + r * s; // cos(delta_bar - 2pi/3)
    const T sb = -0.5 * s - r * c; // sin(delta_bar - 2pi/3)
    const T cc = -0.5 * c - r * s; // cos(delta_bar + 2pi/3)
    const T sc = -0.5 * s + r * c; // sin(delta_bar + 2pi/3)
    return {v_ord.d * c - v_ord.q * s, v_ord.d * cb - v_ord.q * sb,
            v_ord.d * cc - v_ord.q * sc};
}

// ---------------------------------------------------------------------------
// Controller blocks. Each *_step function is purely algebraic: it maps the
// current values of its inputs and internal states to outputs plus the time
// derivatives of those states. Discretization happens in the engine.
// ---------------------------------------------------------------------------

template <class T>
struct PowerControllerState {
    T p_lag{}; // lagged real power reference
    T p_int{}; // d-axis PI integrator
    T q_lag{};
    T q_int{};
};

template <class T>
struct PowerControllerOut {
    PhasorT<T> i_ord;
    PowerControllerState<T> rates;
};

/// Reference lag plus PI per axis. The q-axis sign is chosen so that a
/// positive reactive reference orders a negative q-axis current, matching the
/// sign convention of the power pre-calculation.
template <class T>
PowerControllerOut<T> power_controller_step(const ConverterParams& p, const T& p_meas,
                                            const T& q_meas,
                                            const PowerControllerState<T>& s) {
    const T e_d = s.p_lag - p_meas;
    const T e_q = s.q_lag - q_meas;
    PowerControllerOut<T> out;
    out.i_ord.d = p.k_p_iod * e_d + p.k_i_iod * s.p_int;
    out.i_ord.q = -(p.k_p_ioq * e_q + p.k_i_ioq * s.q_int);
    out.rates.p_lag = (p.p_ref - s.p_lag) / p.t_pcon;
    out.rates.p_int = e_d;
    out.rates.q_lag = (p.q_ref - s.q_lag) / p.t_qcon;
    out.rates.q_int = e_q;
    return out;
}

template <class T>
struct CurrentControllerState {
    T d_int{};
    T q_int{};
};

template <class T>
struct CurrentControllerOut {
    PhasorT<T> v_ord;
    CurrentControllerState<T> rates;
};

/// PI on the current error plus terminal-voltage feed-forward and omega*L_f
/// cross-coupling decoupling.
template <class T>
CurrentControllerOut<T> current_controller_step(const ConverterParams& p,
                                                const PhasorT<T>& i_ord,
                                                const PhasorT<T>& i_meas,
                                                const PhasorT<T>& v_term,
                                                const CurrentControllerState<T>& s) {
    const double xf = omega_base * p.l_f;
    const T e_d = i_ord.d - i_meas.d;
    const T e_q = i_ord.q - i_meas.q;
    CurrentControllerOut<T> out;
    out.v_ord.d = v_term.d - xf * i_meas.q + p.k_p_vid * e_d + p.k_i_vid * s.d_int;
    out.v_ord.q = v_term.q + xf * i_meas.d + p.k_p_viq * e_q + p.k_i_viq * s.q_int;
    out.rates.d_int = e_d;
    out.rates.q_int = e_q;
    return out;
}

template <class T>
struct PllState {
    T integrator{}; // PI integral term (rad/s)
    T delta{};      // phasor angle regarding the synchronous frame (rad)
};

template <class T>
struct PllOut {
    T delta_bar;
    PllState<T> rates;
};

/// PI on the imaginary part of the terminal-voltage phasor drives the phasor
/// angle; the cumulative angle is delta_bar = omega_syn*t + delta.
template <class T>
PllOut<T> pll_step(const ConverterParams& p, const T& v_oq, const PllState<T>& s,
                   double t, double omega_syn = omega_base) {
    PllOut<T> out;
    out.delta_bar = omega_syn * t + s.delta;
    out.rates.integrator = p.k_i_pll * v_oq;
    out.rates.delta = s.integrator + p.k_p_pll * v_oq;
    return out;
}

template <class T>
struct MeasurementState {
    T p{};
    T q{};
    T v_om{};
};

template <class T>
struct MeasurementOut {
    T p_pre;
    T q_pre;
    T v_pre;
    MeasurementState<T> rates;
};

/// Instantaneous pre-calculated power/voltage values followed by first-order
/// low-pass filters.
template <class T>
MeasurementOut<T> measurement_step(const ConverterParams& prm, const PhasorT<T>& v_o,
                                   const PhasorT<T>& i_o, const MeasurementState<T>& s) {
    using std::sqrt;
    MeasurementOut<T> out;
    out.p_pre = v_o.d * i_o.d + v_o.q * i_o.q;
    out.q_pre = -(v_o.d * i_o.q) + v_o.q * i_o.d;
    out.v_pre = sqrt(v_o.d * v_o.d + v_o.q * v_o.q);
    out.rates.p = (out.p_pre - s.p) / prm.t_p;
    out.rates.q = (out.q_pre - s.q) / prm.t_q;
    out.rates.v_om = (out.v_pre - s.v_om) / prm.t_v;
    return out;
}

/// Per-phase current derivative of the L filter. Also computes the second
/// derivative when called on voltage derivatives instead of voltages.
template <class T>
ThreePhaseT<T> l_filter_dynamics(double l_f, const ThreePhaseT<T>& v_vsc,
                                 const ThreePhaseT<T>& v_term) {
    return {(v_vsc.a - v_term.a) / l_f, (v_vsc.b - v_term.b) / l_f,
            (v_vsc.c - v_term.c) / l_f};
}

// ---------------------------------------------------------------------------
// Complete converter: state pack and one-shot evaluation of the algebraic
// chain plus every state derivative.
// ---------------------------------------------------------------------------

/// All integrated states of one converter, in engine storage order.
template <class T>
struct ConverterStateT {
    ThreePhaseT<T> i_f; // filter currents (utility-frequency states)
    PllState<T> pll;
    PowerControllerState<T> pc;
    CurrentControllerState<T> cc;
    MeasurementState<T> meas;
};

using ConverterState = ConverterStateT<double>;

inline constexpr int converter_state_count = 14;

/// Algebraic quantities of one iterate that other equations or the recorder
/// consume.
template <class T>
struct ConverterAlgebra {
    T delta_bar{};
    PhasorT<T> v_o;   // terminal voltage phasor
    PhasorT<T> i_o;   // filter current phasor
    T p_pre{}, q_pre{}, v_pre{};
    PhasorT<T> i_ord;
    PhasorT<T> v_ord;
    ThreePhaseT<T> v_vsc;
};

/// Evaluate measurement & synchronization, both controllers, the VSC and the
/// filter derivative at one iterate.
template <class T>
void evaluate_converter(const ConverterParams& p, double t,
                        const ThreePhaseT<T>& v_term, const ConverterStateT<T>& x,
                        ConverterAlgebra<T>& alg, ConverterStateT<T>& rates) {
    const TwoAxisT<T> v_ax = clarke(v_term);
    const TwoAxisT<T> i_ax = clarke(x.i_f);

    alg.delta_bar = omega_base * t + x.pll.delta;
    alg.v_o = phase_shift(v_ax.in, v_ax.qu, alg.delta_bar);
    alg.i_o = phase_shift(i_ax.in, i_ax.qu, alg.delta_bar);

    const PllOut<T> pll = pll_step(p, alg.v_o.q, x.pll, t);
    const MeasurementOut<T> ms = measurement_step(p, alg.v_o, alg.i_o, x.meas);
    const PowerControllerOut<T> pc = power_controller_step(p, x.meas.p, x.meas.q, x.pc);
    const CurrentControllerOut<T> cc =
        current_controller_step(p, pc.i_ord, alg.i_o, alg.v_o, x.cc);

    alg.p_pre = ms.p_pre;
    alg.q_pre = ms.q_pre;
    alg.v_pre = ms.v_pre;
    alg.i_ord = pc.i_ord;
    alg.v_ord = cc.v_ord;
    alg.v_vsc = vsc_waveforms(cc.v_ord, alg.delta_bar);

    rates.i_f = l_filter_dynamics(p.l_f, alg.v_vsc, v_term);
    rates.pll = pll.rates;
    rates.pc = pc.rates;
    rates.cc = cc.rates;
    rates.meas = ms.rates;
}

/// Second derivative of the filter currents: same linear map applied to the
/// voltage derivatives.
template <class T>
ThreePhaseT<T> filter_second_derivative(double l_f, const ThreePhaseT<T>& vdot_vsc,
                                        const ThreePhaseT<T>& vdot_term) {
    return l_filter_dynamics(l_f, vdot_vsc, vdot_term);
}

/// Chain-rule second derivatives of the controller and measurement states.
/// Inputs that are themselves states differentiate exactly through their own
/// rate functions; derivatives of algebraic signals (vdot_oq through vdot_pre)
/// are supplied by the caller, backward-differenced across the step.
template <class T>
void controller_second_derivatives(const ConverterParams& p,
                                   const ConverterStateT<T>& rates, const T& vdot_oq,
                                   const T& idot_od, const T& idot_oq,
                                   const T& pdot_pre, const T& qdot_pre,
                                   const T& vdot_pre, ConverterStateT<T>& xdd) {
    xdd.pll.integrator = p.k_i_pll * vdot_oq;
    xdd.pll.delta = rates.pll.integrator + p.k_p_pll * vdot_oq;

    xdd.pc.p_lag = -(rates.pc.p_lag) / p.t_pcon;
    xdd.pc.p_int = rates.pc.p_lag - rates.meas.p;
    xdd.pc.q_lag = -(rates.pc.q_lag) / p.t_qcon;
    xdd.pc.q_int = rates.pc.q_lag - rates.meas.q;

    const T idot_ord_d =
        p.k_p_iod * (rates.pc.p_lag - rates.meas.p) + p.k_i_iod * rates.pc.p_int;
    const T idot_ord_q =
        -(p.k_p_ioq * (rates.pc.q_lag - rates.meas.q) + p.k_i_ioq * rates.pc.q_int);
    xdd.cc.d_int = idot_ord_d - idot_od;
    xdd.cc.q_int = idot_ord_q - idot_oq;

    xdd.meas.p = (pdot_pre - rates.meas.p) / p.t_p;
    xdd.meas.q = (qdot_pre - rates.meas.q) / p.t_q;
    xdd.meas.v_om = (vdot_pre - rates.meas.v_om) / p.t_v;
}

} // namespace frosim
