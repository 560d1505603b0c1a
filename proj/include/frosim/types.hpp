#pragma once

#include <numbers>

namespace frosim {

/// Nominal utility angular frequency (rad/s). Scenario reactances and source
/// waveforms are interpreted at this frequency; it is also the default
/// omega_select of the tuned integrators.
inline constexpr double omega_base = 2.0 * std::numbers::pi * 60.0;

/// Instantaneous per-phase values of a three-phase quantity.
template <class T>
struct ThreePhaseT {
    T a{};
    T b{};
    T c{};
};

using ThreePhase = ThreePhaseT<double>;

/// Complex quantity in the device (PLL) reference frame, stored as d/q parts.
template <class T>
struct PhasorT {
    T d{};
    T q{};
};

using Phasor = PhasorT<double>;

enum class PhaseId { A = 0, B = 1, C = 2 };

} // namespace frosim
