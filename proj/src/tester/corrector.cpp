#include "tmt/corrector.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

namespace tmt {

const char* kind_name(Cut::Kind kind) { return kind == Cut::Kind::Weak ? "weak" : "strong"; }

std::size_t CutDecomposition::weak_count() const {
    return static_cast<std::size_t>(
        std::count_if(cuts.begin(), cuts.end(), [](const Cut& c) { return c.kind == Cut::Kind::Weak; }));
}

namespace {

// The point of iv closest to t, stepping inside open ends.
Rational closest(const Interval& iv, const Rational& t) {
    if (iv.contains(t)) return t;
    if (t < iv.lower || (t == iv.lower && iv.lower_strict)) return iv.pick(Pick::Low);
    const Rational& u = iv.upper.value;
    if (!iv.upper.strict) return u;
    return u - min(open_gap(), (u - iv.lower) / 2);
}

TimeValue link_bound(const RegionAutomaton& ra) {
    return Rational(3) * Rational(static_cast<std::int64_t>(ra.size())) * Rational(ra.automaton().max_constant());
}

}  // namespace

CutDecomposition decompose_cuts(const TimedWord& w, NodeId component, const RegionAutomaton& ra,
                                const ComponentGraph& g) {
    const auto& a = ra.automaton();
    FlatPi pi = single_component(component);
    TrackSearch ts(ra, g, pi, {false});
    const auto all = ts.starts_at(0, 0);
    ts.start(all);

    auto alone_compatible = [&](const Letter& letter) {
        TrackSearch one(ra, g, pi, {false});
        one.start(all);
        return one.advance(letter);
    };

    CutDecomposition d;
    d.link_bound = link_bound(ra);
    d.blocks.emplace_back();
    std::size_t seg_start = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const Letter& letter = w[i];
        if (ts.try_advance(letter)) {
            d.blocks.back().push_back(letter);
            continue;
        }
        Cut cut;
        cut.position = i;
        d.segments.emplace_back(seg_start, i);
        seg_start = i;
        if (alone_compatible(letter)) {
            cut.kind = Cut::Kind::Weak;
            cut.cost = d.link_bound;
            d.weak_cost += cut.cost;
            ts.start(all);
            if (!ts.try_advance(letter)) throw std::logic_error("weak cut letter stopped being compatible");
            d.blocks.emplace_back(1, letter);
        } else {
            cut.kind = Cut::Kind::Strong;
            std::optional<Rational> best;
            if (auto sym = a.symbol_id(letter.symbol))
                for (const auto& c : ts.frontier())
                    for (auto ti : ra.outgoing(c.at.state)) {
                        const RegionTransition& t = ra.transitions()[ti];
                        const Transition& e = a.transitions()[t.edge];
                        if (e.symbol != *sym || g.node_of(t.target) != component) continue;
                        Interval iv = delay_window(c.zone, e.guard, e.resets, ra.zone(t.target));
                        if (iv.empty()) continue;
                        Rational cand = closest(iv, letter.delay);
                        if (!best || (cand - letter.delay).abs() < (*best - letter.delay).abs() ||
                            ((cand - letter.delay).abs() == (*best - letter.delay).abs() && cand < *best))
                            best = cand;
                    }
            if (best && (*best - letter.delay).abs() < letter.delay) {
                Letter fixed{letter.symbol, *best};
                if (!ts.try_advance(fixed)) throw std::logic_error("retimed letter is not compatible");
                cut.retimed_to = *best;
                cut.cost = (*best - letter.delay).abs();
                d.blocks.back().push_back(std::move(fixed));
            } else {
                cut.deleted = true;
                cut.cost = letter.delay;
            }
            d.strong_cost += cut.cost;
        }
        d.V += cut.cost;
        d.cuts.push_back(std::move(cut));
    }
    d.segments.emplace_back(seg_start, w.size());
    return d;
}

std::optional<Link> link(const RegionAutomaton& ra, const ComponentGraph& g, NodeId component,
                         const ThicknessVerdict& thickness, const RunState& from, const RunState& to,
                         const LinkOptions& opts) {
    if (thickness.kind != ThicknessVerdict::Kind::Thick)
        throw std::invalid_argument("links exist only in thick components");
    const auto& a = ra.automaton();
    const std::size_t n = a.num_clocks();
    auto s0 = ra.find(from.location, from.valuation);
    auto s1 = ra.find(to.location, to.valuation);
    if (!s0 || !s1 || g.node_of(*s0) != component || g.node_of(*s1) != component)
        throw std::invalid_argument("link endpoints must lie in the component");
    if (from == to) return Link{TimedWord{}, Run{{from}, {}}};

    const TimeValue bound = link_bound(ra);
    const Zone goal_point = Zone::point(to.valuation);
    // The extra clock n measures the time spent so far.
    ClockValuation start = from.valuation;
    start.push_back(Rational{});

    struct Node {
        StateId state;
        Zone zone;
        std::size_t parent;
        std::size_t transition;
    };
    std::vector<Node> nodes{{*s0, Zone::point(start), 0, 0}};
    std::map<StateId, std::vector<std::size_t>> stored{{*s0, {0}}};
    std::deque<std::size_t> queue{0};
    std::optional<std::size_t> goal;
    while (!queue.empty() && !goal) {
        const std::size_t i = queue.front();
        queue.pop_front();
        for (auto ti : ra.outgoing(nodes[i].state)) {
            const RegionTransition& t = ra.transitions()[ti];
            if (g.node_of(t.target) != component) continue;
            const Transition& e = a.transitions()[t.edge];
            Zone z = nodes[i].zone;
            z.up();
            if (!z.constrain(n + 1, 0, Bound::le(bound))) continue;
            if (!z.intersect(e.guard)) continue;
            z.reset(e.resets);
            if (!z.intersect_prefix(ra.zone(t.target))) continue;
            if (t.target == *s1) {
                Zone hit = z;
                if (hit.intersect_prefix(goal_point)) {
                    nodes.push_back({t.target, std::move(z), i, ti});
                    goal = nodes.size() - 1;
                    break;
                }
            }
            auto& list = stored[t.target];
            if (std::any_of(list.begin(), list.end(), [&](std::size_t k) { return nodes[k].zone.includes(z); }))
                continue;
            nodes.push_back({t.target, std::move(z), i, ti});
            list.push_back(nodes.size() - 1);
            queue.push_back(nodes.size() - 1);
            if (nodes.size() > opts.zone_cap) return std::nullopt;
        }
    }
    if (!goal) return std::nullopt;

    std::vector<std::size_t> chain;
    for (std::size_t k = *goal; k != 0; k = nodes[k].parent) chain.push_back(k);
    std::reverse(chain.begin(), chain.end());
    const std::size_t r = chain.size();

    // back[i]: valuations after i letters from which the rest of the chain
    // still reaches `to`.
    std::vector<Zone> back(r + 1);
    back[r] = nodes[chain[r - 1]].zone;
    back[r].intersect_prefix(goal_point);
    for (std::size_t i = r; i >= 1; --i) {
        const Transition& e = a.transitions()[ra.transitions()[nodes[chain[i - 1]].transition].edge];
        Zone z = back[i];
        for (ClockId c : e.resets) {
            z.constrain(c + 1, 0, Bound::le(0));
            z.free(c);
        }
        z.intersect(e.guard);
        z.down();
        z.intersect_prefix(i >= 2 ? nodes[chain[i - 2]].zone : nodes[0].zone);
        if (z.is_empty()) throw std::logic_error("link refinement lost the path");
        back[i - 1] = std::move(z);
    }

    Link out;
    out.run.states.push_back(from);
    ClockValuation u = start;
    for (std::size_t i = 1; i <= r; ++i) {
        const TransitionId edge = ra.transitions()[nodes[chain[i - 1]].transition].edge;
        const Transition& e = a.transitions()[edge];
        Interval iv = delay_window(Zone::point(u), e.guard, e.resets, back[i]);
        if (iv.empty()) throw std::logic_error("link delay window is empty");
        Rational d = iv.pick(Pick::Low);
        ClockValuation next = elapse(u, d);
        if (!satisfies(next, e.guard)) throw std::logic_error("link guard fails");
        u = reset(std::move(next), e.resets);
        out.sigma.push_back({a.alphabet()[e.symbol], d});
        out.run.states.push_back({e.target, ClockValuation(u.begin(), u.begin() + static_cast<std::ptrdiff_t>(n))});
        out.run.transitions.push_back(edge);
    }
    if (out.run.states.back() != to) throw std::logic_error("link does not reach its target");
    return out;
}

Correction correct_word(const TimedWord& w, NodeId component, const RegionAutomaton& ra, const ComponentGraph& g,
                        const ThicknessVerdict& thickness, const LinkOptions& opts) {
    if (thickness.kind != ThicknessVerdict::Kind::Thick)
        throw std::invalid_argument("correction needs a thick component");
    Correction out;
    out.cuts = decompose_cuts(w, component, ra, g);
    out.cost = out.cuts.strong_cost;
    FlatPi pi = single_component(component);

    std::vector<Letter> letters;
    for (const auto& block : out.cuts.blocks) {
        TrackSearch ts(ra, g, pi);
        auto starts = ts.starts_at(0, 0);
        for (std::size_t i = 0; i < starts.size(); ++i) starts[i].tag = i;
        ts.start(starts);
        ts.advance_all(block);
        if (ts.frontier().empty()) throw std::logic_error("corrected block is not compatible");
        const auto& f = ts.frontier();
        auto best = std::min_element(f.begin(), f.end(), [](const auto& x, const auto& y) {
            return std::tie(x.origin.state, x.at.state) < std::tie(y.origin.state, y.at.state);
        });
        auto wit = ts.witness(*best);
        auto run = realize_path(ra, wit.start.state, ra.zone(wit.start.state), block, wit.path);
        if (!run) throw std::logic_error("corrected block cannot be realized");

        if (!out.run.states.empty()) {
            auto lk = link(ra, g, component, thickness, out.run.states.back(), run->states.front(), opts);
            if (!lk) throw std::runtime_error("no link between consecutive blocks");
            out.cost += lk->sigma.total_weight();
            letters.insert(letters.end(), lk->sigma.begin(), lk->sigma.end());
            out.run.states.insert(out.run.states.end(), lk->run.states.begin() + 1, lk->run.states.end());
            out.run.transitions.insert(out.run.transitions.end(), lk->run.transitions.begin(),
                                       lk->run.transitions.end());
            out.links.push_back(std::move(*lk));
            out.run.states.pop_back();
        }
        letters.insert(letters.end(), block.begin(), block.end());
        out.run.states.insert(out.run.states.end(), run->states.begin(), run->states.end());
        out.run.transitions.insert(out.run.transitions.end(), run->transitions.begin(), run->transitions.end());
    }
    out.word = TimedWord(std::move(letters));
    return out;
}

}  // namespace tmt
