#include "tmt/semantics.hpp"

#include <algorithm>
#include <unordered_map>

namespace tmt {

ClockValuation zero_valuation(const TimedAutomaton& a) { return ClockValuation(a.num_clocks()); }

ClockValuation elapse(ClockValuation v, const TimeValue& t) {
    for (auto& x : v) x += t;
    return v;
}

ClockValuation reset(ClockValuation v, const std::vector<ClockId>& clocks) {
    for (auto c : clocks) v[c] = TimeValue{};
    return v;
}

bool satisfies(const ClockValuation& v, const std::vector<ClockConstraint>& guard) {
    return std::all_of(guard.begin(), guard.end(), [&](const ClockConstraint& c) { return c.satisfied_by(v[c.clock]); });
}

std::size_t RunStateHash::operator()(const RunState& s) const noexcept {
    std::size_t h = s.location * 0x9E3779B97F4A7C15ULL;
    for (const auto& x : s.valuation) h ^= x.hash() + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    return h;
}

std::vector<Successor> successors(const RunState& s, const TimeValue& delay, SymbolId symbol, const TimedAutomaton& a) {
    std::vector<Successor> out;
    ClockValuation moved = elapse(s.valuation, delay);
    for (TransitionId id : a.outgoing(s.location)) {
        const Transition& t = a.transitions()[id];
        if (t.symbol != symbol || !satisfies(moved, t.guard)) continue;
        out.push_back({RunState{t.target, reset(moved, t.resets)}, id});
    }
    return out;
}

std::vector<RunState> step(const RunState& s, const TimeValue& delay, const Symbol& symbol, const TimedAutomaton& a) {
    std::vector<RunState> out;
    auto sym = a.symbol_id(symbol);
    if (!sym) return out;
    for (auto& succ : successors(s, delay, *sym, a))
        if (std::find(out.begin(), out.end(), succ.state) == out.end()) out.push_back(std::move(succ.state));
    return out;
}

namespace {

// Breadth search over deduplicated state sets, one layer per letter. Each
// node remembers its parent so a witness run can be read back.
struct Layer {
    std::vector<RunState> states;
    std::vector<std::size_t> parent;
    std::vector<TransitionId> via;
};

std::vector<Layer> explore(std::vector<RunState> start, const TimedWord& w, const TimedAutomaton& a,
                           const MembershipOptions& opts) {
    std::vector<Layer> layers(1);
    layers[0].states = std::move(start);
    layers[0].parent.assign(layers[0].states.size(), 0);
    layers[0].via.assign(layers[0].states.size(), 0);
    for (const Letter& letter : w) {
        Layer next;
        auto sym = a.symbol_id(letter.symbol);
        if (sym) {
            std::unordered_map<RunState, std::size_t, RunStateHash> seen;
            const Layer& cur = layers.back();
            for (std::size_t i = 0; i < cur.states.size(); ++i) {
                for (auto& succ : successors(cur.states[i], letter.delay, *sym, a)) {
                    if (seen.count(succ.state)) continue;
                    seen.emplace(succ.state, next.states.size());
                    next.states.push_back(std::move(succ.state));
                    next.parent.push_back(i);
                    next.via.push_back(succ.via);
                    if (next.states.size() > opts.state_cap)
                        throw ResourceError("membership state set exceeds cap of " + std::to_string(opts.state_cap));
                }
            }
        }
        bool dead = next.states.empty();
        layers.push_back(std::move(next));
        if (dead) break;
    }
    return layers;
}

Run read_back(const std::vector<Layer>& layers, std::size_t index) {
    Run run;
    for (std::size_t l = layers.size(); l-- > 0;) {
        run.states.push_back(layers[l].states[index]);
        if (l > 0) run.transitions.push_back(layers[l].via[index]);
        index = layers[l].parent[index];
    }
    std::reverse(run.states.begin(), run.states.end());
    std::reverse(run.transitions.begin(), run.transitions.end());
    return run;
}

}  // namespace

MembershipResult membership_exact(const TimedAutomaton& a, const TimedWord& w, const MembershipOptions& opts) {
    std::vector<RunState> start;
    for (LocationId q : a.initial()) start.push_back({q, zero_valuation(a)});
    auto layers = explore(std::move(start), w, a, opts);
    MembershipResult result;
    if (layers.size() != w.size() + 1) return result;
    const Layer& last = layers.back();
    for (std::size_t i = 0; i < last.states.size(); ++i) {
        if (a.is_final(last.states[i].location)) {
            result.accepted = true;
            result.witness = read_back(layers, i);
            break;
        }
    }
    return result;
}

LocalRunResult local_run_exists(const RunState& start, const TimedWord& u, const TimedAutomaton& a,
                                const MembershipOptions& opts) {
    auto layers = explore({start}, u, a, opts);
    LocalRunResult result;
    if (layers.size() != u.size() + 1 || layers.back().states.empty()) return result;
    result.exists = true;
    result.end_states = layers.back().states;
    return result;
}

bool replay_run(const Run& run, const TimedWord& w, const TimedAutomaton& a) {
    if (run.states.size() != w.size() + 1 || run.transitions.size() != w.size()) return false;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const Transition& t = a.transitions().at(run.transitions[i]);
        if (t.source != run.states[i].location || a.alphabet()[t.symbol] != w[i].symbol) return false;
        ClockValuation moved = elapse(run.states[i].valuation, w[i].delay);
        if (!satisfies(moved, t.guard)) return false;
        if (run.states[i + 1] != RunState{t.target, reset(moved, t.resets)}) return false;
    }
    return true;
}

}  // namespace tmt
