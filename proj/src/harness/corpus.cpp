#include "tmt/corpus.hpp"

#include <deque>
#include <limits>

namespace tmt {

const char* claim_name(FarCertificate::Claim claim) {
    switch (claim) {
    case FarCertificate::Claim::UpperBoundOnly: return "upper-bound-only";
    case FarCertificate::Claim::CertifiedFar: return "certified-far";
    case FarCertificate::Claim::ExactSmallScale: return "exact-small-scale";
    }
    return "?";
}

Rational grid_delay(const Interval& window, UnitSource& src, const Rational& span_cap) {
    if (window.empty()) throw std::logic_error("no delay in an empty window");
    const Rational grid(1024);
    const Rational lo = window.lower * grid;
    const Rational hi = (window.upper.infinite ? window.lower + span_cap : window.upper.value) * grid;
    std::int64_t a = lo.ceil().floor_clamped();
    if (window.lower_strict && Rational(a) == lo) ++a;
    std::int64_t b = hi.floor().floor_clamped();
    if (!window.upper.infinite && window.upper.strict && Rational(b) == hi) --b;
    if (a > b) return window.pick(Pick::Middle);
    return Rational(a + static_cast<std::int64_t>(src.below(static_cast<std::uint64_t>(b - a + 1))), 1024);
}

namespace {

constexpr std::size_t kMaxLetters = 2'000'000;

// Steps to the nearest final state, or max for states that cannot reach F.
std::vector<std::size_t> distance_to_final(const RegionAutomaton& ra) {
    const auto inf = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> dist(ra.size(), inf);
    std::deque<StateId> work;
    for (StateId s = 0; s < ra.size(); ++s)
        if (ra.is_final(s)) {
            dist[s] = 0;
            work.push_back(s);
        }
    while (!work.empty()) {
        StateId s = work.front();
        work.pop_front();
        for (auto ti : ra.incoming(s)) {
            StateId p = ra.transitions()[ti].source;
            if (dist[p] == inf) {
                dist[p] = dist[s] + 1;
                work.push_back(p);
            }
        }
    }
    return dist;
}

struct Walker {
    const RegionAutomaton& ra;
    UnitSource& src;
    StateId state;
    ClockValuation v;
    std::vector<Letter> letters;
    TimeValue weight;

    void take(std::size_t ti, const Rational& span_cap) {
        const RegionTransition& t = ra.transitions()[ti];
        const Transition& e = ra.automaton().transitions()[t.edge];
        Interval iv = delay_window(Zone::point(v), e.guard, e.resets, ra.zone(t.target));
        Rational d = grid_delay(iv, src, span_cap);
        v = reset(elapse(std::move(v), d), e.resets);
        state = t.target;
        weight += d;
        letters.push_back({ra.automaton().alphabet()[e.symbol], std::move(d)});
    }

    std::size_t pick(const std::vector<std::size_t>& options) {
        return options[static_cast<std::size_t>(src.below(options.size()))];
    }

    bool chance(unsigned percent) { return src.below(100) < percent; }
};

}  // namespace

TimedWord generate_accepted(const TesterContext& ctx, const TimeValue& target, UnitSource& src) {
    const RegionAutomaton& ra = ctx.ra;
    const ComponentGraph& g = ctx.g;
    const auto inf = std::numeric_limits<std::size_t>::max();
    const auto dist = distance_to_final(ra);

    std::vector<StateId> inits;
    for (StateId s : ra.initial_states())
        if (dist[s] != inf) inits.push_back(s);
    if (inits.empty()) throw EmptyLanguageError("the automaton accepts no word");

    Walker w{ra, src, inits[src.below(inits.size())], ClockValuation(ra.automaton().num_clocks()), {}, {}};
    const Rational l(static_cast<std::int64_t>(std::max<std::size_t>(g.diameter(), 1)));
    std::int64_t component_index = g.node(g.node_of(w.state)).transient ? 0 : 1;

    while (w.weight < target && w.letters.size() < kMaxLetters) {
        const NodeId node = g.node_of(w.state);
        std::vector<std::size_t> stay, leave;
        for (auto ti : ra.outgoing(w.state)) {
            StateId t = ra.transitions()[ti].target;
            if (dist[t] == inf) continue;
            (g.node_of(t) == node ? stay : leave).push_back(ti);
        }
        if (stay.empty() && leave.empty()) break;
        std::size_t ti;
        if (g.node(node).transient || stay.empty()) {
            ti = w.pick(stay.empty() ? leave : stay);
        } else {
            const bool quota_left = w.weight < target * Rational(component_index) / l;
            if (leave.empty()) ti = w.pick(stay);
            else if (quota_left) ti = w.pick(w.chance(97) ? stay : leave);
            else ti = w.pick(w.chance(80) ? leave : stay);
        }
        const NodeId before = g.node_of(w.state);
        w.take(ti, Rational(2));
        const NodeId after = g.node_of(w.state);
        if (after != before && !g.node(after).transient) ++component_index;
    }
    // Head for the nearest final state.
    while (!ra.is_final(w.state) && w.letters.size() < kMaxLetters) {
        std::vector<std::size_t> closer;
        for (auto ti : ra.outgoing(w.state))
            if (dist[ra.transitions()[ti].target] + 1 == dist[w.state]) closer.push_back(ti);
        w.take(w.pick(closer), Rational(1));
    }
    TimedWord word(std::move(w.letters));
    if (!membership_exact(ra.automaton(), word).accepted)
        throw std::logic_error("generated word is not accepted: " + to_string(word));
    return word;
}

TimedWord generate_component_word(const TesterContext& ctx, NodeId component, const TimeValue& target,
                                  UnitSource& src) {
    const RegionAutomaton& ra = ctx.ra;
    const auto& states = ctx.g.node(component).states;
    if (ctx.g.node(component).transient) throw std::invalid_argument("not a component");
    StateId s = states[src.below(states.size())];
    ClockValuation v = ra.state(s).region.interior_point(1 + static_cast<unsigned>(src.below(3)), ra.max_constants());
    Walker w{ra, src, s, std::move(v), {}, {}};
    // Some components only admit zero delays; give up on the target once the
    // walk has stalled for long enough to have tried every state.
    const std::size_t stall_cap = 8 * states.size() + 16;
    std::size_t stalled = 0;
    while (w.weight < target && w.letters.size() < kMaxLetters && stalled < stall_cap) {
        std::vector<std::size_t> stay;
        for (auto ti : ra.outgoing(w.state))
            if (ctx.g.node_of(ra.transitions()[ti].target) == component) stay.push_back(ti);
        const TimeValue before = w.weight;
        w.take(w.pick(stay), Rational(2));
        stalled = w.weight == before ? stalled + 1 : 0;
    }
    return TimedWord(std::move(w.letters));
}

namespace {

Rational clamp_into(const Interval& iv, const Rational& t) {
    if (iv.contains(t)) return t;
    if (t < iv.lower || t == iv.lower) return iv.pick(Pick::Low);
    const Rational& u = iv.upper.value;
    if (!iv.upper.strict) return u;
    return u - min(open_gap(), (u - iv.lower) / 2);
}

}  // namespace

FarWord perturb_far(const TimedWord& w, const TesterContext& ctx, const Feasibility& feas, const Rational& epsilon,
                    UnitSource& src, FarMode mode) {
    FarWord out{w, {}};
    if (epsilon.sign() < 0 || epsilon >= Rational(1)) throw std::invalid_argument("epsilon must lie in [0, 1)");
    if (epsilon.sign() == 0) return out;

    std::vector<std::size_t> cand;
    for (std::size_t i = 0; i < w.size(); ++i) {
        auto h = feas.hull(w[i].symbol);
        if (h && !h->upper.infinite) cand.push_back(i);
    }
    if (cand.empty()) throw std::runtime_error("budget infeasible: no letter has a bounded delay");

    std::vector<std::size_t> chosen;
    if (mode == FarMode::Heavy) {
        chosen.push_back(cand[src.below(cand.size())]);
    } else {
        const std::size_t r = std::max<std::size_t>(1, cand.size() / 4);
        const std::size_t first = src.below(cand.size() - r + 1);
        chosen.assign(cand.begin() + static_cast<std::ptrdiff_t>(first),
                      cand.begin() + static_cast<std::ptrdiff_t>(first + r));
    }

    const TimeValue T = w.total_weight();
    TimeValue raise;
    for (auto i : chosen) raise += max(Rational{}, feas.hull(w[i].symbol)->upper.value - w[i].delay);
    // Excess X with X / (T + raise + X) > epsilon, plus a 10% margin.
    const Rational X = epsilon * (T + raise) / (Rational(1) - epsilon) * Rational(11, 10);
    const Rational share = max((X / Rational(static_cast<std::int64_t>(chosen.size())) * Rational(1024)).ceil() /
                                   Rational(1024),
                               Rational(1, 1024));

    std::vector<Letter> letters(w.begin(), w.end());
    for (auto i : chosen) {
        Rational nd = feas.hull(w[i].symbol)->upper.value + share;
        EditOp op{EditOp::Kind::Retime, i, {}, nd, nd - letters[i].delay};
        out.certificate.certified_cost += op.cost;
        out.certificate.script.push_back(std::move(op));
        letters[i].delay = nd;
    }
    out.word = TimedWord(std::move(letters));
    auto& cert = out.certificate;
    cert.lower_bound = feas.lower_bound(out.word);
    cert.upper_bound = cert.certified_cost / max(T, out.word.total_weight());
    cert.claim = epsilon < cert.lower_bound ? FarCertificate::Claim::CertifiedFar : FarCertificate::Claim::UpperBoundOnly;
    if (auto ub = small_scale_upper_bound(out.word, ctx, feas)) {
        cert.upper_bound = min(cert.upper_bound, *ub);
        if (cert.claim == FarCertificate::Claim::CertifiedFar && *ub == cert.lower_bound)
            cert.claim = FarCertificate::Claim::ExactSmallScale;
    }
    return out;
}

std::optional<Rational> small_scale_upper_bound(const TimedWord& w, const TesterContext& ctx,
                                                const Feasibility& feas, std::size_t cap) {
    if (w.size() > cap) return std::nullopt;
    const auto& a = ctx.ra.automaton();
    std::optional<Rational> best;
    for (std::uint32_t mask = 0; mask < (1u << w.size()); ++mask) {
        std::vector<Letter> kept;
        bool ok = true;
        for (std::size_t i = 0; i < w.size() && ok; ++i) {
            if (!(mask & (1u << i))) continue;
            auto h = feas.hull(w[i].symbol);
            if (!h) ok = false;
            else kept.push_back({w[i].symbol, clamp_into(*h, w[i].delay)});
        }
        if (!ok) continue;
        TimedWord cand(std::move(kept));
        if (!membership_exact(a, cand).accepted) continue;
        Rational rel = timed_edit_distance(w, cand).relative;
        if (!best || rel < *best) best = rel;
    }
    return best;
}

}  // namespace tmt
