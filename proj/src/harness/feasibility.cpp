#include "tmt/feasibility.hpp"

#include <deque>

namespace tmt {

namespace {

Interval hull_of(const Interval& a, const Interval& b) {
    Interval h;
    if (a.lower < b.lower) {
        h.lower = a.lower;
        h.lower_strict = a.lower_strict;
    } else if (b.lower < a.lower) {
        h.lower = b.lower;
        h.lower_strict = b.lower_strict;
    } else {
        h.lower = a.lower;
        h.lower_strict = a.lower_strict && b.lower_strict;
    }
    h.upper = a.upper < b.upper ? b.upper : a.upper;
    return h;
}

}  // namespace

Feasibility::Feasibility(const RegionAutomaton& ra) {
    const auto& a = ra.automaton();
    std::vector<bool> useful(ra.size(), false);
    std::deque<StateId> work;
    for (StateId s = 0; s < ra.size(); ++s)
        if (ra.is_final(s)) {
            useful[s] = true;
            work.push_back(s);
        }
    while (!work.empty()) {
        StateId s = work.front();
        work.pop_front();
        for (auto ti : ra.incoming(s)) {
            StateId p = ra.transitions()[ti].source;
            if (!useful[p]) {
                useful[p] = true;
                work.push_back(p);
            }
        }
    }
    for (const auto& t : ra.transitions()) {
        if (!useful[t.target]) continue;
        const Transition& e = a.transitions()[t.edge];
        Interval iv = delay_window(ra.zone(t.source), e.guard, e.resets, ra.zone(t.target));
        if (iv.empty()) continue;
        const Symbol& sym = a.alphabet()[e.symbol];
        auto it = hulls_.find(sym);
        if (it == hulls_.end()) hulls_.emplace(sym, iv);
        else it->second = hull_of(it->second, iv);
    }
}

std::optional<Interval> Feasibility::hull(const Symbol& a) const {
    auto it = hulls_.find(a);
    if (it == hulls_.end()) return std::nullopt;
    return it->second;
}

Feasibility::Excess Feasibility::excess(const TimedWord& w) const {
    Excess ex;
    for (const auto& letter : w) {
        TimeValue e;
        bool down = false;
        auto h = hull(letter.symbol);
        if (!h) {
            e = letter.delay;  // must be deleted
            down = true;
        } else if (!h->upper.infinite && h->upper.value < letter.delay) {
            e = letter.delay - h->upper.value;
            down = true;
        } else if (letter.delay < h->lower) {
            e = min(letter.delay, h->lower - letter.delay);
        }
        ex.total += e;
        if (down) ex.down += e;
        ex.per_letter.push_back(std::move(e));
    }
    return ex;
}

Rational Feasibility::lower_bound(const TimedWord& w) const {
    const TimeValue T = w.total_weight();
    if (T.sign() == 0) return Rational{};
    Excess ex = excess(w);
    Rational denom = max(T, T + ex.total - ex.down - ex.down);
    return min(ex.total / denom, Rational(1));
}

}  // namespace tmt
