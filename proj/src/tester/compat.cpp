#include "tmt/compat.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace tmt {

ComponentCompat factor_compatible_component(std::span<const Letter> u, NodeId component, const RegionAutomaton& ra,
                                            const ComponentGraph& g) {
    FlatPi pi = single_component(component);
    TrackSearch ts(ra, g, pi);
    auto starts = ts.starts_at(0, 0);
    for (std::size_t i = 0; i < starts.size(); ++i) starts[i].tag = i;
    ts.start(starts);
    ts.advance_all(u);
    ComponentCompat out;
    if (ts.frontier().empty() || ts.letters_read() < u.size()) return out;
    out.compatible = true;
    const auto& f = ts.frontier();
    auto best = std::min_element(f.begin(), f.end(), [](const auto& x, const auto& y) {
        return std::tie(x.origin.state, x.at.state) < std::tie(y.origin.state, y.at.state);
    });
    out.witness = ts.witness(*best);
    return out;
}

std::vector<std::pair<Anchor, Anchor>> a1_pairs(std::span<const Letter> u, const FlatPi& pi,
                                                const RegionAutomaton& ra, const ComponentGraph& g) {
    TrackSearch ts(ra, g, pi, {false});
    std::vector<SearchStart> starts;
    for (std::size_t p = 0; p < pi.size(); ++p)
        for (auto& s : ts.starts_at(p, 0)) starts.push_back(std::move(s));
    for (std::size_t i = 0; i < starts.size(); ++i) starts[i].tag = i;
    ts.start(starts);
    ts.advance_all(u);
    std::set<std::pair<Anchor, Anchor>> pairs;
    if (ts.letters_read() == u.size())
        for (const auto& c : ts.frontier()) pairs.insert({c.origin, c.at});
    return {pairs.begin(), pairs.end()};
}

namespace {

Factor join(const Factor& a, const Factor& b) {
    Factor f = a;
    f.end = b.end;
    f.letters.insert(f.letters.end(), b.letters.begin(), b.letters.end());
    f.weight += b.weight;
    f.truncated = b.truncated;
    return f;
}

}  // namespace

A2Result a2_compatible(const std::vector<Factor>& factors, std::size_t word_length, const FlatPi& pi,
                       const RegionAutomaton& ra, const ComponentGraph& g) {
    A2Result out;
    for (const auto& f : factors) {
        if (!out.tested.empty() && out.tested.back().end + 1 == f.start) out.tested.back() = join(out.tested.back(), f);
        else out.tested.push_back(f);
    }
    const std::size_t P = pi.size();
    if (P == 0) {
        out.reason = "empty path";
        return out;
    }
    auto moves = [&](std::size_t from, std::size_t to, std::size_t gap) {
        // Can gap >= 1 letters lead from position `from` to position `to`?
        std::size_t least = from + (pi.steps[from].transient ? 1 : 0);
        return to >= least && to - from <= gap;
    };

    // Reachable end positions of the previous factor; the word start acts as
    // a factor ending at position 0.
    std::set<std::size_t> ends = {0};
    std::vector<std::map<std::size_t, CompatWitness>> found;
    std::size_t prev_end_letter = 0;
    bool first = true;
    for (std::size_t i = 0; i < out.tested.size(); ++i) {
        const Factor& f = out.tested[i];
        TrackSearch ts(ra, g, pi);
        std::vector<SearchStart> starts;
        if (first && f.start == 0) {
            ClockValuation zero(ra.automaton().num_clocks());
            for (StateId s : g.node(pi.steps[0].node).states)
                if (ra.is_initial(s)) starts.push_back({0, {0, s}, Zone::point(zero)});
        } else {
            const std::size_t gap = first ? f.start : f.start - prev_end_letter - 1;
            for (std::size_t p = 0; p < P; ++p)
                if (std::any_of(ends.begin(), ends.end(), [&](std::size_t e) { return moves(e, p, gap); }))
                    for (auto& s : ts.starts_at(p, p)) starts.push_back(std::move(s));
        }
        ts.start(starts);
        ts.advance_all(f.letters);
        const bool ends_word = f.end + 1 == word_length;
        std::map<std::size_t, CompatWitness> reached;
        if (ts.letters_read() == f.letters.size())
            for (const auto& c : ts.frontier()) {
                if (ends_word && !(c.at.position == P - 1 && ra.is_final(c.at.state))) continue;
                if (!reached.count(c.at.position)) reached.emplace(c.at.position, ts.witness(c));
            }
        if (reached.empty()) {
            out.reason = "factor " + std::to_string(i) + " [" + std::to_string(f.start) + ", " +
                         std::to_string(f.end) + "] has no compatible anchors in order";
            return out;
        }
        ends.clear();
        for (const auto& [p, w] : reached) ends.insert(p);
        found.push_back(std::move(reached));
        prev_end_letter = f.end;
        first = false;
    }

    // The letters after the last factor must still reach the end of pi.
    std::optional<std::size_t> last;
    if (out.tested.empty()) {
        out.compatible = true;
        out.reason = "no factors";
        return out;
    }
    const std::size_t tail = word_length - 1 - out.tested.back().end;
    for (std::size_t e : ends)
        if (tail == 0 ? e == P - 1 : moves(e, P - 1, tail)) {
            last = e;
            break;
        }
    if (!last) {
        out.reason = "the letters after the last factor cannot reach the end of the path";
        return out;
    }

    // Walk back, picking for each factor an end its successor can follow.
    out.witnesses.resize(out.tested.size());
    std::size_t want = *last;
    for (std::size_t i = out.tested.size(); i-- > 0;) {
        out.witnesses[i] = found[i].at(want);
        if (i == 0) break;
        const std::size_t s = out.witnesses[i].start.position;
        const std::size_t gap = out.tested[i].start - out.tested[i - 1].end - 1;
        for (const auto& [p, w] : found[i - 1])
            if (moves(p, s, gap)) {
                want = p;
                break;
            }
    }
    out.compatible = true;
    return out;
}

bool restricted_membership(std::span<const Letter> w, const FlatPi& pi, const RegionAutomaton& ra,
                           const ComponentGraph& g) {
    if (pi.size() == 0) return false;
    TrackSearch ts(ra, g, pi, {false});
    std::vector<SearchStart> starts;
    ClockValuation zero(ra.automaton().num_clocks());
    for (StateId s : g.node(pi.steps[0].node).states)
        if (ra.is_initial(s)) starts.push_back({0, {0, s}, Zone::point(zero)});
    ts.start(starts);
    ts.advance_all(w);
    if (ts.letters_read() < w.size()) return false;
    return std::any_of(ts.frontier().begin(), ts.frontier().end(), [&](const auto& c) {
        return c.at.position == pi.size() - 1 && ra.is_final(c.at.state);
    });
}

std::optional<Run> realize_witness(const RegionAutomaton& ra, const CompatWitness& witness,
                                   std::span<const Letter> letters) {
    if (witness.zones.empty()) return std::nullopt;
    return realize_path(ra, witness.start.state, witness.zones.front(), letters, witness.path);
}

}  // namespace tmt
