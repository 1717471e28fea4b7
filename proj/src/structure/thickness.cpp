#include "tmt/thickness.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <unordered_map>

namespace tmt {

const char* kind_name(ThicknessVerdict::Kind kind) {
    switch (kind) {
    case ThicknessVerdict::Kind::Thick: return "thick";
    case ThicknessVerdict::Kind::Thin: return "thin";
    case ThicknessVerdict::Kind::Unknown: return "unknown";
    }
    return "?";
}

namespace {

// Supremum of coef . v over a region, plus whether it is constant there.
struct Sup {
    bool unbounded = false;
    Rational value;
    bool constant = true;
};

Sup sup_on_region(const Region& r, const std::vector<ClockValuation>& vertices, const std::vector<std::int64_t>& coef,
                  std::size_t offset) {
    Sup s;
    for (ClockId x : r.recession_clocks()) {
        std::int64_t c = coef[offset + x];
        if (c > 0) s.unbounded = true;
        if (c != 0) s.constant = false;
    }
    bool first = true;
    for (const auto& v : vertices) {
        Rational val;
        for (ClockId x = 0; x < v.size(); ++x)
            if (coef[offset + x] != 0) val += v[x] * Rational(coef[offset + x]);
        if (first) s.value = val;
        else if (val != s.value) s.constant = false;
        if (!first && val > s.value) s.value = val;
        first = false;
    }
    return s;
}

// A linear form over (v, v') with a coefficient on the elapsed time z.
struct Lin {
    int zc = 0;
    std::vector<std::int64_t> coef;
};

}  // namespace

bool orbit_complete(const RegionAutomaton& ra, const std::vector<std::size_t>& cycle, std::size_t rotation,
                    unsigned power) {
    const auto& a = ra.automaton();
    const std::size_t n = a.num_clocks();
    const std::size_t len = cycle.size();
    StateId s = ra.transitions()[cycle[rotation]].source;
    const Region& region = ra.state(s).region;

    // Live clocks x, frozen copies y of the start valuation, elapsed time z.
    // Every clock advances together, so y = v + z throughout.
    Zone z = ra.zone(s).with_copies().with_extra_clocks(1);
    for (unsigned rep = 0; rep < power; ++rep)
        for (std::size_t i = 0; i < len; ++i) {
            const RegionTransition& t = ra.transitions()[cycle[(rotation + i) % len]];
            const Transition& e = a.transitions()[t.edge];
            z.up();
            z.intersect(e.guard);
            z.reset(e.resets);
            z.intersect_prefix(ra.zone(t.target));
            if (z.is_empty()) return false;
        }

    auto vertices = region.closure_vertices(ra.max_constants());
    auto lin = [&](std::size_t idx) {
        Lin l;
        l.coef.assign(2 * n, 0);
        if (idx == 0) return l;
        if (idx <= n) {
            l.coef[n + idx - 1] = 1;  // x_j = v'_j
        } else if (idx <= 2 * n) {
            l.coef[idx - n - 1] = 1;  // y_i = v_i + z
            l.zc = 1;
        } else {
            l.zc = 1;  // z
        }
        return l;
    };
    // Does coef . (v, v') < c (or <=) hold on all of R x R?
    auto holds = [&](const std::vector<std::int64_t>& coef, const Rational& c, bool strict) {
        Sup sv = sup_on_region(region, vertices, coef, 0);
        Sup sw = sup_on_region(region, vertices, coef, n);
        if (sv.unbounded || sw.unbounded) return false;
        Rational total = sv.value + sw.value;
        if (total != c) return total < c;
        if (!strict) return true;
        // R x R is relatively open: a non-constant form never attains its sup.
        return !(sv.constant && sw.constant);
    };

    struct Side {
        std::vector<std::int64_t> coef;
        Rational c;
        bool strict;
    };
    std::vector<Side> lowers, uppers;
    const std::size_t dim = 2 * n + 2;
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
            if (i == j || z.at(i, j).infinite) continue;
            Lin li = lin(i), lj = lin(j);
            std::vector<std::int64_t> coef(2 * n);
            for (std::size_t k = 0; k < 2 * n; ++k) coef[k] = li.coef[k] - lj.coef[k];
            int zc = li.zc - lj.zc;
            const Bound& b = z.at(i, j);
            if (zc == 0) {
                if (!holds(coef, b.value, b.strict)) return false;
            } else if (zc > 0) {
                uppers.push_back({coef, b.value, b.strict});
            } else {
                lowers.push_back({coef, b.value, b.strict});
            }
        }
    // Some z must fit between every lower and every upper bound.
    for (const auto& lo : lowers)
        for (const auto& up : uppers) {
            std::vector<std::int64_t> coef(2 * n);
            for (std::size_t k = 0; k < 2 * n; ++k) coef[k] = lo.coef[k] + up.coef[k];
            if (!holds(coef, lo.c + up.c, lo.strict || up.strict)) return false;
        }
    return true;
}

std::vector<std::vector<std::size_t>> component_cycles(const ComponentGraph& g, NodeId component,
                                                       const RegionAutomaton& ra, std::size_t cap, bool* truncated) {
    std::vector<std::vector<std::size_t>> cycles;
    bool hit_cap = false;
    const auto& states = g.node(component).states;
    std::vector<std::size_t> path;
    std::set<StateId> on_path;

    // Each cycle is found once, from its smallest state.
    std::function<void(StateId, StateId)> dfs = [&](StateId start, StateId v) {
        for (auto i : ra.outgoing(v)) {
            if (hit_cap) return;
            StateId w = ra.transitions()[i].target;
            if (g.node_of(w) != component || w < start) continue;
            if (w == start) {
                path.push_back(i);
                cycles.push_back(path);
                path.pop_back();
                if (cycles.size() >= cap) hit_cap = true;
                continue;
            }
            if (on_path.count(w)) continue;
            path.push_back(i);
            on_path.insert(w);
            dfs(start, w);
            on_path.erase(w);
            path.pop_back();
        }
    };
    for (StateId s : states) {
        if (hit_cap) break;
        on_path = {s};
        dfs(s, s);
    }
    std::stable_sort(cycles.begin(), cycles.end(), [](const auto& x, const auto& y) { return x.size() < y.size(); });
    if (truncated) *truncated = hit_cap;
    return cycles;
}

namespace {

enum class Reach { Yes, No, Capped };

// Is `target` reachable at state s from the concrete point `from` at s by a
// non-empty word whose region path stays inside the component?
Reach reachable_in_component(const ComponentGraph& g, NodeId component, const RegionAutomaton& ra, StateId s,
                             const ClockValuation& from, const ClockValuation& target, std::size_t cap) {
    const auto& a = ra.automaton();
    std::unordered_map<StateId, std::vector<Zone>> stored;
    std::vector<std::pair<StateId, Zone>> work;
    std::size_t explored = 0;
    // Past these ceilings clock values cannot influence whether `target` is hit.
    std::vector<Rational> ceiling(a.num_clocks());
    for (ClockId c = 0; c < a.num_clocks(); ++c)
        ceiling[c] = max(Rational(ra.max_constants()[c]), max(from[c], target[c]).ceil());

    auto expand = [&](StateId st, const Zone& zone) {
        for (auto i : ra.outgoing(st)) {
            const RegionTransition& t = ra.transitions()[i];
            if (g.node_of(t.target) != component) continue;
            const Transition& e = a.transitions()[t.edge];
            Zone next = zone;
            next.up();
            if (!next.intersect(e.guard)) continue;
            next.reset(e.resets);
            if (!next.intersect_prefix(ra.zone(t.target))) continue;
            next.extrapolate(ceiling);
            auto& list = stored[t.target];
            if (std::any_of(list.begin(), list.end(), [&](const Zone& old) { return old.includes(next); })) continue;
            list.erase(std::remove_if(list.begin(), list.end(), [&](const Zone& old) { return next.includes(old); }),
                       list.end());
            list.push_back(next);
            work.emplace_back(t.target, std::move(next));
            ++explored;
        }
    };
    expand(s, Zone::point(from));
    while (!work.empty()) {
        if (explored > cap) return Reach::Capped;
        auto [st, zone] = std::move(work.back());
        work.pop_back();
        expand(st, zone);
    }
    for (const auto& zone : stored[s])
        if (zone.contains(target)) return Reach::Yes;
    return Reach::No;
}

}  // namespace

ThicknessVerdict is_thick(const ComponentGraph& g, NodeId component, const RegionAutomaton& ra,
                          const ThicknessOptions& opts) {
    ThicknessVerdict verdict;
    if (g.node(component).transient) {
        verdict.reason = "transient state, not a component";
        return verdict;
    }
    bool truncated = false;
    auto cycles = component_cycles(g, component, ra, opts.cycle_cap, &truncated);
    for (unsigned power = 1; power <= opts.max_power; ++power)
        for (const auto& cycle : cycles) {
            bool all = true;
            for (std::size_t r = 0; r < cycle.size() && all; ++r) all = orbit_complete(ra, cycle, r, power);
            if (all) {
                verdict.kind = ThicknessVerdict::Kind::Thick;
                verdict.cycle = cycle;
                verdict.power = power;
                verdict.reason = "forgetful cycle of length " + std::to_string(cycle.size());
                return verdict;
            }
        }

    // No forgetful cycle found: try to prove that none exists by exhibiting,
    // for every state, a pair of valuations the component cannot connect.
    const auto& maxc = ra.max_constants();
    for (StateId s : g.node(component).states) {
        std::vector<ClockValuation> candidates;
        for (unsigned variant = 1; variant <= 3; ++variant) {
            auto p = ra.state(s).region.interior_point(variant, maxc);
            if (std::find(candidates.begin(), candidates.end(), p) == candidates.end()) candidates.push_back(p);
        }
        bool separated = false;
        bool capped = false;
        for (std::size_t i = 0; i < candidates.size() && !separated; ++i)
            for (std::size_t j = 0; j < candidates.size() && !separated; ++j) {
                if (i == j && candidates.size() > 1) continue;
                Reach r = reachable_in_component(g, component, ra, s, candidates[i], candidates[j], opts.zone_cap);
                if (r == Reach::No) separated = true;
                if (r == Reach::Capped) capped = true;
            }
        if (!separated) {
            verdict.kind = ThicknessVerdict::Kind::Unknown;
            verdict.reason = "no forgetful cycle among " + std::to_string(cycles.size()) +
                             (truncated ? "+ (capped)" : "") + " cycles, and state " + ra.describe(s) +
                             (capped ? " hit the zone cap" : " could not be separated");
            return verdict;
        }
    }
    verdict.kind = ThicknessVerdict::Kind::Thin;
    verdict.reason = "every state has a pair of valuations the component cannot connect";
    return verdict;
}

}  // namespace tmt
