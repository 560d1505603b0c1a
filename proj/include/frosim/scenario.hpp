#pragma once

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "frosim/converter.hpp"
#include "frosim/network.hpp"
#include "frosim/scheme.hpp"

namespace frosim {

struct ConverterUnit {
    std::string id;
    BusId bus;
    ConverterParams params;
};

/// Which bus and converter the trace recorder follows.
struct OutputSelection {
    BusId bus;             // empty: first converter's bus, else first bus
    std::string converter; // empty: first converter
};

/// Complete description of one simulation: system, events, solver settings
/// and output selection.
struct Scenario {
    NetworkModel network;
    std::vector<ConverterUnit> converters;
    std::vector<Event> events;
    SchemeId scheme = SchemeId::Scheme1;
    SolverConfig solver;
    double duration = 2.0;
    OutputSelection outputs;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

[[noreturn]] inline void parse_fail(int line, const std::string& msg) {
    throw ScenarioError("line " + std::to_string(line) + ": " + msg);
}

inline double parse_number(std::string_view tok, int line) {
    double v = 0.0;
    const char* begin = tok.data();
    const char* end = tok.data() + tok.size();
    auto [p, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || p != end) {
        parse_fail(line, "expected a number, got '" + std::string(tok) + "'");
    }
    return v;
}

struct RawSection {
    std::string type;
    std::string id;
    int line = 0;
    std::vector<std::pair<std::string, std::string>> kv; // insertion order
    std::vector<int> kv_lines;
};

class SectionReader {
public:
    SectionReader(const RawSection& s) : sec_(s) {}

    bool has(const std::string& key) const { return find(key) >= 0; }

    std::string get_string(const std::string& key) {
        const int i = require(key);
        return sec_.kv[static_cast<std::size_t>(i)].second;
    }

    double get_number(const std::string& key) {
        const int i = require(key);
        return parse_number(sec_.kv[static_cast<std::size_t>(i)].second,
                            sec_.kv_lines[static_cast<std::size_t>(i)]);
    }

    double get_number_or(const std::string& key, double fallback) {
        return has(key) ? get_number(key) : fallback;
    }

    ThreePhase get_triplet(const std::string& key) {
        const int i = require(key);
        const int line = sec_.kv_lines[static_cast<std::size_t>(i)];
        std::istringstream in(sec_.kv[static_cast<std::size_t>(i)].second);
        std::vector<std::string> toks;
        std::string tok;
        while (in >> tok) toks.push_back(tok);
        if (toks.size() != 3) {
            parse_fail(line, "key '" + key + "' expects three per-phase values");
        }
        return {parse_number(toks[0], line), parse_number(toks[1], line),
                parse_number(toks[2], line)};
    }

    /// Every key must have been consumed by one of the getters above.
    void reject_unknown() const {
        for (std::size_t i = 0; i < sec_.kv.size(); ++i) {
            if (!used_[i]) {
                parse_fail(sec_.kv_lines[i], "unknown key '" + sec_.kv[i].first +
                                                 "' in section [" + sec_.type + "]");
            }
        }
    }

private:
    int find(const std::string& key) const {
        for (std::size_t i = 0; i < sec_.kv.size(); ++i) {
            if (sec_.kv[i].first == key) return static_cast<int>(i);
        }
        return -1;
    }

    int require(const std::string& key) {
        const int i = find(key);
        if (i < 0) {
            parse_fail(sec_.line, "section [" + sec_.type + " " + sec_.id +
                                      "] is missing required key '" + key + "'");
        }
        if (used_.size() < sec_.kv.size()) used_.resize(sec_.kv.size(), false);
        used_[static_cast<std::size_t>(i)] = true;
        return i;
    }

    const RawSection& sec_;
    mutable std::vector<bool> used_ = std::vector<bool>(sec_.kv.size(), false);
};

inline PhaseId parse_phase(const std::string& s, int line) {
    if (s == "a" || s == "A") return PhaseId::A;
    if (s == "b" || s == "B") return PhaseId::B;
    if (s == "c" || s == "C") return PhaseId::C;
    parse_fail(line, "expected phase a, b or c, got '" + s + "'");
}

} // namespace detail

/// Parse a scenario from text. Unknown sections or keys are rejected with the
/// offending line number; referential and range validation happens separately
/// in validate_scenario.
inline Scenario parse_scenario(std::string_view text) {
    using detail::RawSection;

    std::vector<RawSection> sections;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = detail::trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') detail::parse_fail(line_no, "unterminated section header");
            std::string_view inner = detail::trim(line.substr(1, line.size() - 2));
            const std::size_t sp = inner.find(' ');
            RawSection sec;
            sec.type = std::string(detail::trim(inner.substr(0, sp)));
            if (sp != std::string_view::npos) {
                sec.id = std::string(detail::trim(inner.substr(sp + 1)));
            }
            sec.line = line_no;
            if (sec.type.empty()) detail::parse_fail(line_no, "empty section header");
            sections.push_back(std::move(sec));
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            detail::parse_fail(line_no, "expected 'key = value' or a section header");
        }
        if (sections.empty()) {
            detail::parse_fail(line_no, "key before any section header");
        }
        const std::string key{detail::trim(line.substr(0, eq))};
        const std::string value{detail::trim(line.substr(eq + 1))};
        if (key.empty()) detail::parse_fail(line_no, "empty key");
        for (const auto& [k, v] : sections.back().kv) {
            if (k == key) detail::parse_fail(line_no, "duplicate key '" + key + "'");
        }
        sections.back().kv.emplace_back(key, value);
        sections.back().kv_lines.push_back(line_no);
    }

    Scenario sc;
    bool saw_solver = false;

    for (const RawSection& raw : sections) {
        detail::SectionReader sec(raw);
        const auto need_id = [&] {
            if (raw.id.empty()) {
                detail::parse_fail(raw.line, "section [" + raw.type + "] requires a name");
            }
        };

        if (raw.type == "solver") {
            if (saw_solver) detail::parse_fail(raw.line, "duplicate [solver] section");
            saw_solver = true;
            sc.scheme = parse_scheme(sec.has("scheme") ? sec.get_string("scheme") : "scheme1");
            sc.solver.h = sec.get_number("step_size");
            sc.duration = sec.get_number("duration");
            sc.solver.omega_select = sec.get_number_or("omega_select", omega_base);
            sc.solver.newton_tol = sec.get_number_or("newton_tol", 1e-8);
            sc.solver.max_iter = static_cast<int>(sec.get_number_or("max_iter", 50));
        } else if (raw.type == "bus") {
            need_id();
            sc.network.buses.push_back({raw.id});
        } else if (raw.type == "branch") {
            need_id();
            Branch br;
            br.from_bus = sec.get_string("from");
            br.to_bus = sec.get_string("to");
            br.r = sec.get_number("r");
            br.x = sec.get_number("x");
            sc.network.branches.push_back(br);
        } else if (raw.type == "load") {
            need_id();
            ConstantImpedanceLoad ld;
            ld.bus = sec.get_string("bus");
            ld.p_phase = sec.get_triplet("p");
            ld.q_phase = sec.get_triplet("q");
            sc.network.loads.push_back(ld);
        } else if (raw.type == "source") {
            need_id();
            IdealSource src;
            src.bus = sec.get_string("bus");
            src.magnitude = sec.get_triplet("magnitude");
            src.angle_deg = sec.get_triplet("angle_deg");
            sc.network.sources.push_back(src);
        } else if (raw.type == "converter") {
            need_id();
            ConverterUnit cu;
            cu.id = raw.id;
            cu.bus = sec.get_string("bus");
            ConverterParams& p = cu.params;
            p.l_f = sec.get_number("l_f");
            p.p_ref = sec.get_number("p_ref");
            p.q_ref = sec.get_number("q_ref");
            p.t_pcon = sec.get_number("t_pcon");
            p.t_qcon = sec.get_number("t_qcon");
            p.k_p_iod = sec.get_number("k_p_iod");
            p.k_i_iod = sec.get_number("k_i_iod");
            p.k_p_ioq = sec.get_number("k_p_ioq");
            p.k_i_ioq = sec.get_number("k_i_ioq");
            p.k_p_vid = sec.get_number("k_p_vid");
            p.k_i_vid = sec.get_number("k_i_vid");
            p.k_p_viq = sec.get_number("k_p_viq");
            p.k_i_viq = sec.get_number("k_i_viq");
            p.k_p_pll = sec.get_number("k_p_pll");
            p.k_i_pll = sec.get_number("k_i_pll");
            p.t_p = sec.get_number("t_p");
            p.t_q = sec.get_number("t_q");
            p.t_v = sec.get_number("t_v");
            sc.converters.push_back(std::move(cu));
        } else if (raw.type == "event") {
            need_id();
            Event ev;
            ev.time = sec.get_number("time");
            const std::string action = sec.get_string("action");
            if (action == "fault_apply") {
                ev.action = EventAction::FaultApply;
                ev.r_fault = sec.get_number("r_fault");
            } else if (action == "fault_clear") {
                ev.action = EventAction::FaultClear;
            } else {
                detail::parse_fail(raw.line, "unknown event action '" + action + "'");
            }
            ev.bus = sec.get_string("bus");
            ev.phase = detail::parse_phase(sec.get_string("phase"), raw.line);
            sc.events.push_back(std::move(ev));
        } else if (raw.type == "outputs") {
            if (sec.has("bus")) sc.outputs.bus = sec.get_string("bus");
            if (sec.has("converter")) sc.outputs.converter = sec.get_string("converter");
        } else {
            detail::parse_fail(raw.line, "unknown section type '" + raw.type + "'");
        }
        sec.reject_unknown();
    }

    if (!saw_solver) throw ScenarioError("scenario has no [solver] section");
    return sc;
}

inline Scenario parse_scenario_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError("cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

/// Referential and range validation of a parsed (or programmatically built)
/// scenario; throws ScenarioError on the first problem found.
inline void validate_scenario(const Scenario& sc) {
    std::vector<BusId> conv_buses;
    for (const ConverterUnit& cu : sc.converters) conv_buses.push_back(cu.bus);
    validate_network(sc.network, conv_buses);

    std::unordered_set<std::string> conv_ids;
    for (const ConverterUnit& cu : sc.converters) {
        if (!conv_ids.insert(cu.id).second) {
            throw ScenarioError("duplicate converter id '" + cu.id + "'");
        }
        sc.network.bus_index(cu.bus);
        const ConverterParams& p = cu.params;
        if (!(p.l_f > 0.0)) throw ScenarioError("converter '" + cu.id + "': l_f must be > 0");
        for (double tc : {p.t_pcon, p.t_qcon, p.t_p, p.t_q, p.t_v}) {
            if (!(tc > 0.0)) {
                throw ScenarioError("converter '" + cu.id + "': time constants must be > 0");
            }
        }
        for (double g : {p.k_p_iod, p.k_i_iod, p.k_p_ioq, p.k_i_ioq, p.k_p_vid,
                         p.k_i_vid, p.k_p_viq, p.k_i_viq, p.k_p_pll, p.k_i_pll}) {
            if (g < 0.0) throw ScenarioError("converter '" + cu.id + "': negative gain");
        }
    }

    if (!(sc.solver.h > 0.0)) throw ScenarioError("step_size must be > 0");
    if (!(sc.duration > 0.0)) throw ScenarioError("duration must be > 0");
    if (!(sc.solver.newton_tol > 0.0)) throw ScenarioError("newton_tol must be > 0");
    if (sc.solver.max_iter < 1) throw ScenarioError("max_iter must be >= 1");
    if (sc.scheme != SchemeId::EMTReference) {
        if (!(sc.solver.omega_select > 0.0)) {
            throw ScenarioError("omega_select must be > 0");
        }
        if (!(sc.solver.omega_select * sc.solver.h < std::numbers::pi)) {
            throw ScenarioError(
                "omega_select*step_size must stay below pi for schemes using "
                "integrators A/B");
        }
    }

    // event ordering per fault location
    std::vector<const Event*> evs;
    for (const Event& e : sc.events) evs.push_back(&e);
    std::stable_sort(evs.begin(), evs.end(),
                     [](const Event* a, const Event* b) { return a->time < b->time; });
    std::map<std::pair<std::string, int>, bool> active;
    for (const Event* e : evs) {
        sc.network.bus_index(e->bus);
        if (!(e->time > 0.0)) throw ScenarioError("event times must be > 0");
        if (e->time > sc.duration) throw ScenarioError("event beyond scenario duration");
        auto key = std::make_pair(e->bus, static_cast<int>(e->phase));
        bool& on = active[key];
        if (e->action == EventAction::FaultApply) {
            if (on) throw ScenarioError("fault applied twice at bus '" + e->bus + "'");
            if (!(e->r_fault > 0.0)) throw ScenarioError("fault r_fault must be > 0");
            on = true;
        } else {
            if (!on) {
                throw ScenarioError("fault_clear without matching fault_apply at bus '" +
                                    e->bus + "'");
            }
            on = false;
        }
    }

    if (!sc.outputs.bus.empty()) sc.network.bus_index(sc.outputs.bus);
    if (!sc.outputs.converter.empty()) {
        const bool known =
            std::any_of(sc.converters.begin(), sc.converters.end(),
                        [&](const ConverterUnit& c) { return c.id == sc.outputs.converter; });
        if (!known) {
            throw ScenarioError("outputs reference unknown converter '" +
                                sc.outputs.converter + "'");
        }
    }
}

/// N disconnected copies of the system in one scenario, for the enlarged
/// efficiency benchmark. Copies 2..n get an id suffix; outputs stay on the
/// first copy.
inline Scenario replicate_scenario(const Scenario& sc, int copies) {
    if (copies < 1) throw ScenarioError("copies must be >= 1");
    Scenario out = sc;
    for (int k = 2; k <= copies; ++k) {
        const std::string suffix = "_" + std::to_string(k);
        for (Bus b : sc.network.buses) {
            b.id += suffix;
            out.network.buses.push_back(std::move(b));
        }
        for (Branch br : sc.network.branches) {
            br.from_bus += suffix;
            br.to_bus += suffix;
            out.network.branches.push_back(std::move(br));
        }
        for (ConstantImpedanceLoad ld : sc.network.loads) {
            ld.bus += suffix;
            out.network.loads.push_back(std::move(ld));
        }
        for (IdealSource src : sc.network.sources) {
            src.bus += suffix;
            out.network.sources.push_back(std::move(src));
        }
        for (ConverterUnit cu : sc.converters) {
            cu.id += suffix;
            cu.bus += suffix;
            out.converters.push_back(std::move(cu));
        }
        for (Event ev : sc.events) {
            ev.bus += suffix;
            out.events.push_back(std::move(ev));
        }
    }
    return out;
}

} // namespace frosim
