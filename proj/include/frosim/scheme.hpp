#pragma once

#include <string>
#include <string_view>

#include "frosim/integrators.hpp"
#include "frosim/network.hpp"

namespace frosim {

/// Integrator selection policy of a run. Scheme1 is the two-derivative
/// scheme (A for utility-frequency states, C for slow states), Scheme2 keeps
/// A but handles slow states with the implicit trapezoidal rule, and
/// EMTReference uses the trapezoidal rule throughout. Each scheme carries the
/// single-step replacements used for a few steps after a discontinuity.
enum class SchemeId { Scheme1, Scheme2, EMTReference };

/// State classification that drives integrator assignment.
enum class StateClass { UtilityFrequency = 0, Slow = 1 };

struct SchemePolicy {
    IntegratorKind utility;
    IntegratorKind slow;
    IntegratorKind utility_post; // post-discontinuity replacement
    IntegratorKind slow_post;
};

inline SchemePolicy scheme_policy(SchemeId id) {
    switch (id) {
    case SchemeId::Scheme1:
        return {IntegratorKind::A, IntegratorKind::C, IntegratorKind::B,
                IntegratorKind::D};
    case SchemeId::Scheme2:
        return {IntegratorKind::A, IntegratorKind::Trapezoidal, IntegratorKind::B,
                IntegratorKind::BackwardEuler};
    case SchemeId::EMTReference:
    default:
        return {IntegratorKind::Trapezoidal, IntegratorKind::Trapezoidal,
                IntegratorKind::BackwardEuler, IntegratorKind::BackwardEuler};
    }
}

inline std::string scheme_name(SchemeId id) {
    switch (id) {
    case SchemeId::Scheme1: return "scheme1";
    case SchemeId::Scheme2: return "scheme2";
    case SchemeId::EMTReference:
    default: return "emt";
    }
}

inline SchemeId parse_scheme(std::string_view name) {
    if (name == "scheme1") return SchemeId::Scheme1;
    if (name == "scheme2") return SchemeId::Scheme2;
    if (name == "emt") return SchemeId::EMTReference;
    throw ScenarioError("unknown scheme '" + std::string(name) +
                        "' (expected scheme1, scheme2 or emt)");
}

enum class EventAction { FaultApply, FaultClear };

/// Timed topology change. Event times snap to the step grid; the change takes
/// effect in the equations of the first step after the event time.
struct Event {
    double time = 0.0;
    EventAction action = EventAction::FaultApply;
    BusId bus;
    PhaseId phase = PhaseId::A;
    double r_fault = 0.0; // FaultApply only
};

} // namespace frosim
