#include "tmt/region_automaton.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

namespace tmt {

RegionAutomaton RegionAutomaton::build(const TimedAutomaton& a, const RegionBuildOptions& opts) {
    RegionAutomaton ra;
    ra.automaton_ = a;
    const MaxConstants& maxc = a.clock_max_constants();

    std::deque<StateId> queue;
    auto intern = [&](RegionState rs) {
        auto it = ra.index_.find(rs);
        if (it != ra.index_.end()) return it->second;
        StateId id = ra.states_.size();
        if (id >= opts.state_cap)
            throw ResourceError("region automaton exceeds cap of " + std::to_string(opts.state_cap) + " states");
        ra.index_.emplace(rs, id);
        ra.zones_.push_back(rs.region.zone(maxc));
        ra.states_.push_back(std::move(rs));
        queue.push_back(id);
        return id;
    };

    for (LocationId q : a.initial()) {
        StateId id = intern({q, Region::zero(a.num_clocks())});
        if (std::find(ra.initial_.begin(), ra.initial_.end(), id) == ra.initial_.end()) ra.initial_.push_back(id);
    }

    std::set<std::tuple<StateId, TransitionId, StateId>> seen;
    while (!queue.empty()) {
        StateId s = queue.front();
        queue.pop_front();
        LocationId q = ra.states_[s].location;
        for (const Region& later : time_successors(ra.states_[s].region, maxc)) {
            for (TransitionId e : a.outgoing(q)) {
                const Transition& t = a.transitions()[e];
                if (!later.satisfies(t.guard, maxc)) continue;
                StateId target = intern({t.target, later.reset(t.resets)});
                if (seen.emplace(s, e, target).second) ra.transitions_.push_back({s, e, target});
            }
        }
    }

    ra.outgoing_.resize(ra.states_.size());
    ra.incoming_.resize(ra.states_.size());
    for (std::size_t i = 0; i < ra.transitions_.size(); ++i) {
        ra.outgoing_[ra.transitions_[i].source].push_back(i);
        ra.incoming_[ra.transitions_[i].target].push_back(i);
    }
    return ra;
}

bool RegionAutomaton::is_initial(StateId s) const {
    return std::find(initial_.begin(), initial_.end(), s) != initial_.end();
}

std::optional<StateId> RegionAutomaton::find(const RegionState& rs) const {
    auto it = index_.find(rs);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::optional<StateId> RegionAutomaton::find(LocationId q, const ClockValuation& v) const {
    return find({q, Region::of(v, max_constants())});
}

bool RegionAutomaton::has_transition(StateId from, TransitionId edge, StateId to) const {
    for (auto i : outgoing_[from])
        if (transitions_[i].edge == edge && transitions_[i].target == to) return true;
    return false;
}

std::string RegionAutomaton::describe(StateId s) const {
    const auto& rs = states_[s];
    return automaton_.locations()[rs.location] + " " + rs.region.str(automaton_.clocks(), max_constants());
}

bool RegionAutomaton::accepts_untimed(const std::vector<Symbol>& word) const {
    std::set<StateId> cur(initial_.begin(), initial_.end());
    for (const auto& sym : word) {
        std::set<StateId> next;
        for (StateId s : cur)
            for (auto i : outgoing_[s]) {
                const auto& t = transitions_[i];
                if (automaton_.alphabet()[automaton_.transitions()[t.edge].symbol] == sym) next.insert(t.target);
            }
        cur = std::move(next);
        if (cur.empty()) return false;
    }
    return std::any_of(cur.begin(), cur.end(), [&](StateId s) { return is_final(s); });
}

std::optional<std::vector<StateId>> project_run(const RegionAutomaton& ra, const Run& run) {
    std::vector<StateId> path;
    for (const auto& st : run.states) {
        auto id = ra.find(st.location, st.valuation);
        if (!id) return std::nullopt;
        path.push_back(*id);
    }
    for (std::size_t i = 0; i < run.transitions.size(); ++i)
        if (!ra.has_transition(path[i], run.transitions[i], path[i + 1])) return std::nullopt;
    return path;
}

std::string region_automaton_json(const RegionAutomaton& ra) {
    using nlohmann::json;
    const auto& a = ra.automaton();
    json doc;
    doc["m"] = ra.size();
    doc["states"] = json::array();
    for (StateId s = 0; s < ra.size(); ++s) {
        doc["states"].push_back({{"id", s},
                                 {"location", a.locations()[ra.state(s).location]},
                                 {"region", ra.state(s).region.str(a.clocks(), ra.max_constants())},
                                 {"initial", ra.is_initial(s)},
                                 {"final", ra.is_final(s)}});
    }
    doc["transitions"] = json::array();
    for (const auto& t : ra.transitions()) {
        const Transition& e = a.transitions()[t.edge];
        doc["transitions"].push_back({{"source", t.source},
                                      {"target", t.target},
                                      {"edge", t.edge},
                                      {"symbol", a.alphabet()[e.symbol]},
                                      {"guard", a.describe_guard(e.guard)}});
    }
    return doc.dump(2) + "\n";
}

std::string region_automaton_dot(const RegionAutomaton& ra) {
    const auto& a = ra.automaton();
    auto escape = [](std::string s) {
        std::string out;
        for (char c : s) {
            if (c == '"') out += "\\\"";
            else out += c;
        }
        return out;
    };
    std::ostringstream os;
    os << "digraph region_automaton {\n  rankdir=LR;\n";
    for (StateId s = 0; s < ra.size(); ++s) {
        os << "  s" << s << " [label=\"" << escape(ra.describe(s)) << "\"";
        if (ra.is_final(s)) os << ", shape=doublecircle";
        if (ra.is_initial(s)) os << ", style=bold";
        os << "];\n";
    }
    for (const auto& t : ra.transitions()) {
        const Transition& e = a.transitions()[t.edge];
        os << "  s" << t.source << " -> s" << t.target << " [label=\"" << escape(a.alphabet()[e.symbol]) << " | "
           << escape(a.describe_guard(e.guard)) << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace tmt
