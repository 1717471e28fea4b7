#include "tmt/track_search.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <tuple>

namespace tmt {

std::string FlatPi::str(const ComponentGraph& g) const {
    std::ostringstream os;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (i) os << ".";
        const PiStep& s = steps[i];
        if (s.transient) {
            os << "s" << g.node(s.node).states.front();
        } else {
            os << "C" << s.node;
            if (s.exit) os << "[" << *s.exit << "]";
        }
    }
    return os.str();
}

FlatPi flatten(const std::vector<ExtendedComponent>& bar, const ComponentGraph& g) {
    FlatPi pi;
    for (const auto& ec : bar) {
        for (StateId s : ec.prefix) pi.steps.push_back({g.node_of(s), true, std::nullopt});
        if (ec.component) pi.steps.push_back({*ec.component, false, ec.exit_state});
    }
    return pi;
}

FlatPi single_component(NodeId component) {
    FlatPi pi;
    pi.steps.push_back({component, false, std::nullopt});
    return pi;
}

TrackSearch::TrackSearch(const RegionAutomaton& ra, const ComponentGraph& g, const FlatPi& pi, TrackOptions opts)
    : ra_(ra), g_(g), pi_(pi), opts_(opts) {}

std::vector<SearchStart> TrackSearch::starts_at(std::size_t position, std::size_t tag) const {
    std::vector<SearchStart> out;
    for (StateId s : g_.node(pi_.steps[position].node).states) out.push_back({tag, {position, s}, ra_.zone(s)});
    return out;
}

void TrackSearch::start(const std::vector<SearchStart>& starts) {
    frontier_.clear();
    trace_.clear();
    read_ = 0;
    for (const auto& st : starts) {
        Config c{st.tag, st.anchor, st.anchor, st.zone, kNone};
        if (!c.zone.intersect_prefix(ra_.zone(st.anchor.state))) continue;
        if (opts_.keep_trace) {
            c.node = trace_.size();
            trace_.push_back({kNone, kNone, c.zone, c.at});
        }
        frontier_.push_back(std::move(c));
    }
    peak_ = std::max(peak_, frontier_.size());
}

bool TrackSearch::advance(const Letter& letter) { return step(letter, false); }

bool TrackSearch::try_advance(const Letter& letter) { return step(letter, true); }

bool TrackSearch::step(const Letter& letter, bool keep_when_empty) {
    const auto& a = ra_.automaton();
    auto sym = a.symbol_id(letter.symbol);
    if (!sym) {
        if (keep_when_empty) return false;
        ++read_;
        frontier_.clear();
        return false;
    }
    std::vector<Config> next;
    std::vector<bool> alive;
    std::map<std::tuple<std::size_t, std::size_t, StateId>, std::vector<std::size_t>> index;

    for (const Config& c : frontier_) {
        Zone shifted = c.zone;
        shifted.shift(letter.delay);
        const PiStep& step = pi_.steps[c.at.position];
        std::optional<TransitionId> cached_edge;
        Zone post;
        bool post_ok = false;
        for (auto ti : ra_.outgoing(c.at.state)) {
            const RegionTransition& t = ra_.transitions()[ti];
            const Transition& e = a.transitions()[t.edge];
            if (e.symbol != *sym) continue;
            const NodeId target_node = g_.node_of(t.target);
            std::size_t np;
            if (!step.transient && target_node == step.node) {
                np = c.at.position;
            } else if (c.at.position + 1 < pi_.size() && pi_.steps[c.at.position + 1].node == target_node &&
                       (step.transient || !step.exit || *step.exit == c.at.state)) {
                np = c.at.position + 1;
            } else {
                continue;
            }
            if (cached_edge != t.edge) {
                cached_edge = t.edge;
                post = shifted;
                post_ok = post.intersect(e.guard);
                if (post_ok) post.reset(e.resets);
            }
            if (!post_ok) continue;
            Zone nz = post;
            if (!nz.intersect_prefix(ra_.zone(t.target))) continue;

            auto& slot = index[{c.tag, np, t.target}];
            bool covered = false;
            for (auto idx : slot)
                if (alive[idx] && next[idx].zone.includes(nz)) {
                    covered = true;
                    break;
                }
            if (covered) continue;
            for (auto idx : slot)
                if (alive[idx] && nz.includes(next[idx].zone)) alive[idx] = false;
            Config n{c.tag, c.origin, {np, t.target}, std::move(nz), kNone};
            if (opts_.keep_trace) {
                n.node = trace_.size();
                trace_.push_back({c.node, ti, n.zone, n.at});
            }
            slot.push_back(next.size());
            next.push_back(std::move(n));
            alive.push_back(true);
            if (next.size() > opts_.zone_cap) throw ResourceError("compatibility search exceeded its zone cap");
        }
    }
    if (next.empty() && keep_when_empty) return false;
    ++read_;
    frontier_.clear();
    for (std::size_t i = 0; i < next.size(); ++i)
        if (alive[i]) frontier_.push_back(std::move(next[i]));
    peak_ = std::max(peak_, frontier_.size());
    return !frontier_.empty();
}

void TrackSearch::advance_all(std::span<const Letter> letters) {
    for (const auto& l : letters)
        if (!advance(l)) return;
}

CompatWitness TrackSearch::witness(const Config& c) const {
    if (c.node == kNone) throw std::logic_error("witness needs a traced search");
    CompatWitness w;
    w.start = c.origin;
    w.end = c.at;
    for (std::size_t n = c.node; n != kNone; n = trace_[n].parent) {
        w.zones.push_back(trace_[n].zone);
        if (trace_[n].transition != kNone) w.path.push_back(trace_[n].transition);
    }
    std::reverse(w.zones.begin(), w.zones.end());
    std::reverse(w.path.begin(), w.path.end());
    return w;
}

std::optional<Run> realize_path(const RegionAutomaton& ra, StateId first_state, const Zone& start,
                                std::span<const Letter> letters, const std::vector<std::size_t>& path,
                                const std::optional<ClockValuation>& target) {
    if (letters.size() != path.size()) throw std::invalid_argument("path and letters differ in length");
    const auto& a = ra.automaton();
    const std::size_t n = letters.size();

    std::vector<Zone> fwd;
    fwd.reserve(n + 1);
    fwd.push_back(start);
    if (!fwd[0].intersect_prefix(ra.zone(first_state))) return std::nullopt;
    StateId cur = first_state;
    for (std::size_t i = 0; i < n; ++i) {
        const RegionTransition& t = ra.transitions()[path[i]];
        if (t.source != cur) throw std::invalid_argument("path is not connected");
        const Transition& e = a.transitions()[t.edge];
        if (a.alphabet()[e.symbol] != letters[i].symbol) return std::nullopt;
        Zone z = fwd[i];
        z.shift(letters[i].delay);
        if (!z.intersect(e.guard)) return std::nullopt;
        z.reset(e.resets);
        if (!z.intersect_prefix(ra.zone(t.target))) return std::nullopt;
        fwd.push_back(std::move(z));
        cur = t.target;
    }

    // Refine backwards so that every start left in back[0] completes the path.
    std::vector<Zone> back(fwd);
    if (target && !back[n].intersect_prefix(Zone::point(*target))) return std::nullopt;
    for (std::size_t i = n; i-- > 0;) {
        const Transition& e = a.transitions()[ra.transitions()[path[i]].edge];
        Zone z = back[i + 1];
        for (ClockId c : e.resets) {
            z.constrain(c + 1, 0, Bound::le(0));
            z.free(c);
        }
        z.intersect(e.guard);
        z.shift(-letters[i].delay);
        if (!z.intersect_prefix(fwd[i]) || z.is_empty()) return std::nullopt;
        back[i] = std::move(z);
    }
    auto v = back[0].sample(Pick::Middle);
    if (!v) return std::nullopt;
    v->resize(a.num_clocks());

    Run run;
    run.states.push_back({ra.state(first_state).location, *v});
    for (std::size_t i = 0; i < n; ++i) {
        const RegionTransition& t = ra.transitions()[path[i]];
        const Transition& e = a.transitions()[t.edge];
        ClockValuation next = elapse(run.states.back().valuation, letters[i].delay);
        if (!satisfies(next, e.guard)) return std::nullopt;
        next = reset(std::move(next), e.resets);
        if (!ra.state(t.target).region.contains(next, ra.max_constants())) return std::nullopt;
        run.states.push_back({e.target, std::move(next)});
        run.transitions.push_back(t.edge);
    }
    if (target && run.states.back().valuation != *target) return std::nullopt;
    return run;
}

}  // namespace tmt
