#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "frosim/types.hpp"

namespace frosim {

/// Scenario-file or model-validation failure.
class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using BusId = std::string;

struct Bus {
    BusId id;
};

/// Series R-L branch with identical per-phase impedance; x is the reactance
/// at omega_base.
struct Branch {
    BusId from_bus;
    BusId to_bus;
    double r = 0.0;
    double x = 0.0;
    ThreePhase state; // branch current, from -> to

    bool has_inductance() const { return x > 0.0; }
    double inductance() const { return x / omega_base; }
};

/// Per-phase series R-L realization of a constant-impedance load, derived
/// once from the per-phase powers at nominal voltage magnitude 1.0 p.u.:
/// Z = |V|^2 / (P - jQ).
struct ConstantImpedanceLoad {
    BusId bus;
    ThreePhase p_phase;
    ThreePhase q_phase;
    ThreePhase state; // inductor current for phases with l > 0

    struct PhaseImpedance {
        double r = 0.0;
        double l = 0.0;    // p.u.*s
        bool present = false;
    };

    PhaseImpedance impedance(PhaseId phase) const {
        const double p = phase == PhaseId::A ? p_phase.a
                       : phase == PhaseId::B ? p_phase.b
                                             : p_phase.c;
        const double q = phase == PhaseId::A ? q_phase.a
                       : phase == PhaseId::B ? q_phase.b
                                             : q_phase.c;
        const double s2 = p * p + q * q;
        if (s2 == 0.0) return {};
        return {p / s2, (q / s2) / omega_base, true};
    }
};

/// Ideal AC source imposing v(t) = mag * cos(omega_base*t + angle) per phase.
struct IdealSource {
    BusId bus;
    ThreePhase magnitude;
    ThreePhase angle_deg;

    ThreePhase voltage(double t) const {
        constexpr double d2r = std::numbers::pi / 180.0;
        const double wt = omega_base * t;
        return {magnitude.a * std::cos(wt + angle_deg.a * d2r),
                magnitude.b * std::cos(wt + angle_deg.b * d2r),
                magnitude.c * std::cos(wt + angle_deg.c * d2r)};
    }
};

/// Switchable phase-to-ground fault resistance.
struct FaultElement {
    BusId bus;
    PhaseId phase = PhaseId::A;
    double r_fault = 0.0;
    bool active = false;
};

struct NetworkModel {
    std::vector<Bus> buses;
    std::vector<Branch> branches;
    std::vector<ConstantImpedanceLoad> loads;
    std::vector<IdealSource> sources;
    std::vector<FaultElement> faults;

    int bus_index(const BusId& id) const {
        for (std::size_t i = 0; i < buses.size(); ++i) {
            if (buses[i].id == id) return static_cast<int>(i);
        }
        throw ScenarioError("unknown bus id '" + id + "'");
    }

    /// Node index of (bus, phase); nodes are laid out bus-major.
    int node_index(const BusId& id, PhaseId phase) const {
        return 3 * bus_index(id) + static_cast<int>(phase);
    }

    int node_count() const { return 3 * static_cast<int>(buses.size()); }
};

/// First and second per-phase current derivatives of a series R-L branch.
/// The second derivative follows the chain rule with externally supplied
/// voltage derivatives.
struct BranchRates {
    ThreePhase di_dt;
    ThreePhase d2i_dt2;
};

inline BranchRates branch_dynamics(const Branch& br, const ThreePhase& v_from,
                                   const ThreePhase& v_to, const ThreePhase& vdot_from,
                                   const ThreePhase& vdot_to) {
    const double l = br.inductance();
    BranchRates out;
    out.di_dt = {(v_from.a - v_to.a - br.r * br.state.a) / l,
                 (v_from.b - v_to.b - br.r * br.state.b) / l,
                 (v_from.c - v_to.c - br.r * br.state.c) / l};
    out.d2i_dt2 = {(vdot_from.a - vdot_to.a - br.r * out.di_dt.a) / l,
                   (vdot_from.b - vdot_to.b - br.r * out.di_dt.b) / l,
                   (vdot_from.c - vdot_to.c - br.r * out.di_dt.c) / l};
    return out;
}

/// KCL residuals (current into each unconstrained node sums to zero) plus the
/// voltage-constraint residuals of source nodes. Element currents are read
/// from the element states stored in the model; converter or other external
/// injections enter through extra_injections (current into the node).
/// Exactly one residual per node.
inline std::vector<double> assemble_network_equations(
    const NetworkModel& net, std::span<const double> node_voltages,
    std::span<const double> extra_injections, double t) {
    const int n = net.node_count();
    if (static_cast<int>(node_voltages.size()) != n) {
        throw std::invalid_argument("assemble_network_equations: bad voltage size");
    }
    std::vector<double> res(static_cast<std::size_t>(n), 0.0);
    std::vector<bool> constrained(static_cast<std::size_t>(n), false);

    for (const IdealSource& src : net.sources) {
        const int n0 = net.node_index(src.bus, PhaseId::A);
        const ThreePhase v = src.voltage(t);
        res[n0 + 0] = node_voltages[n0 + 0] - v.a;
        res[n0 + 1] = node_voltages[n0 + 1] - v.b;
        res[n0 + 2] = node_voltages[n0 + 2] - v.c;
        constrained[n0 + 0] = constrained[n0 + 1] = constrained[n0 + 2] = true;
    }

    auto inject = [&](int node, double current) {
        if (!constrained[static_cast<std::size_t>(node)]) res[node] += current;
    };

    if (!extra_injections.empty()) {
        if (static_cast<int>(extra_injections.size()) != n) {
            throw std::invalid_argument("assemble_network_equations: bad injection size");
        }
        for (int k = 0; k < n; ++k) inject(k, extra_injections[k]);
    }

    for (const Branch& br : net.branches) {
        const int nf = net.node_index(br.from_bus, PhaseId::A);
        const int nt = net.node_index(br.to_bus, PhaseId::A);
        if (br.has_inductance()) {
            const double i[3] = {br.state.a, br.state.b, br.state.c};
            for (int ph = 0; ph < 3; ++ph) {
                inject(nf + ph, -i[ph]);
                inject(nt + ph, +i[ph]);
            }
        } else {
            for (int ph = 0; ph < 3; ++ph) {
                const double i = (node_voltages[nf + ph] - node_voltages[nt + ph]) / br.r;
                inject(nf + ph, -i);
                inject(nt + ph, +i);
            }
        }
    }

    for (const ConstantImpedanceLoad& ld : net.loads) {
        const int n0 = net.node_index(ld.bus, PhaseId::A);
        const double i[3] = {ld.state.a, ld.state.b, ld.state.c};
        for (int ph = 0; ph < 3; ++ph) {
            const auto z = ld.impedance(static_cast<PhaseId>(ph));
            if (!z.present) continue;
            if (z.l > 0.0) {
                inject(n0 + ph, -i[ph]);
            } else {
                inject(n0 + ph, -node_voltages[n0 + ph] / z.r);
            }
        }
    }

    for (const FaultElement& f : net.faults) {
        if (!f.active) continue;
        const int node = net.node_index(f.bus, f.phase);
        inject(node, -node_voltages[node] / f.r_fault);
    }

    return res;
}

/// Structural validation: unique ids, resolvable references, element
/// parameter ranges, and no floating island (every connected bus group must
/// contain a source, a converter terminal, or a shunt path to ground).
/// Converter terminal buses are passed in by the caller.
inline void validate_network(const NetworkModel& net,
                             const std::vector<BusId>& converter_buses) {
    std::unordered_set<std::string> seen;
    for (const Bus& b : net.buses) {
        if (b.id.empty()) throw ScenarioError("bus with empty id");
        if (!seen.insert(b.id).second) {
            throw ScenarioError("duplicate bus id '" + b.id + "'");
        }
    }

    std::unordered_set<std::string> source_buses;
    for (const IdealSource& s : net.sources) {
        net.bus_index(s.bus);
        if (!source_buses.insert(s.bus).second) {
            throw ScenarioError("bus '" + s.bus + "' carries more than one ideal source");
        }
        if (s.magnitude.a < 0.0 || s.magnitude.b < 0.0 || s.magnitude.c < 0.0) {
            throw ScenarioError("source at bus '" + s.bus + "' has negative magnitude");
        }
    }

    for (const Branch& br : net.branches) {
        net.bus_index(br.from_bus);
        net.bus_index(br.to_bus);
        if (br.from_bus == br.to_bus) {
            throw ScenarioError("branch connects bus '" + br.from_bus + "' to itself");
        }
        if (br.r < 0.0 || br.x < 0.0 || (br.r == 0.0 && br.x == 0.0)) {
            throw ScenarioError("branch " + br.from_bus + "-" + br.to_bus +
                                " must have r >= 0, x >= 0 and not both zero");
        }
    }

    for (const ConstantImpedanceLoad& ld : net.loads) {
        net.bus_index(ld.bus);
        const double p[3] = {ld.p_phase.a, ld.p_phase.b, ld.p_phase.c};
        const double q[3] = {ld.q_phase.a, ld.q_phase.b, ld.q_phase.c};
        for (int ph = 0; ph < 3; ++ph) {
            if (p[ph] < 0.0 || q[ph] < 0.0) {
                throw ScenarioError("load at bus '" + ld.bus +
                                    "' requires nonnegative per-phase P and Q");
            }
        }
    }

    for (const FaultElement& f : net.faults) {
        net.bus_index(f.bus);
        if (!(f.r_fault > 0.0)) {
            throw ScenarioError("fault at bus '" + f.bus + "' requires r_fault > 0");
        }
    }

    // island check: union-find over buses joined by branches
    const int nb = static_cast<int>(net.buses.size());
    std::vector<int> parent(static_cast<std::size_t>(nb));
    for (int i = 0; i < nb; ++i) parent[i] = i;
    auto find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (const Branch& br : net.branches) {
        const int a = find(net.bus_index(br.from_bus));
        const int b = find(net.bus_index(br.to_bus));
        if (a != b) parent[a] = b;
    }
    std::vector<bool> grounded(static_cast<std::size_t>(nb), false);
    auto mark = [&](const BusId& id) { grounded[static_cast<std::size_t>(find(net.bus_index(id)))] = true; };
    for (const IdealSource& s : net.sources) mark(s.bus);
    for (const ConstantImpedanceLoad& ld : net.loads) mark(ld.bus);
    for (const FaultElement& f : net.faults) mark(f.bus);
    for (const BusId& b : converter_buses) mark(b);
    for (int i = 0; i < nb; ++i) {
        if (!grounded[static_cast<std::size_t>(find(i))]) {
            throw ScenarioError("bus '" + net.buses[static_cast<std::size_t>(i)].id +
                                "' has no path to any source, converter or ground");
        }
    }
}

} // namespace frosim
