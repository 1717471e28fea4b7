#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "helpers.hpp"
#include "tmt/corpus.hpp"
#include "tmt/corrector.hpp"

using namespace tmt;
using namespace tmt::testing;

namespace {

const char* kCorpus[] = {"loop", "two_phase", "thin_punctual", "never_reset", "thick_two_clock"};

struct Built {
    RegionAutomaton ra;
    ComponentGraph g;
};

Built build(const TimedAutomaton& a) {
    auto ra = RegionAutomaton::build(a);
    auto g = ComponentGraph::condense(ra);
    return {std::move(ra), std::move(g)};
}

// SCCs from the transitive closure, independent of the Tarjan code.
std::vector<std::vector<bool>> reach_matrix(const RegionAutomaton& ra) {
    const std::size_t m = ra.size();
    std::vector<std::vector<bool>> r(m, std::vector<bool>(m, false));
    for (const auto& t : ra.transitions()) r[t.source][t.target] = true;
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t i = 0; i < m; ++i)
            if (r[i][k])
                for (std::size_t j = 0; j < m; ++j)
                    if (r[k][j]) r[i][j] = true;
    return r;
}

std::size_t count_components(const ComponentGraph& g) { return g.components().size(); }

}  // namespace

TEST_CASE("condensation examples") {
    SUBCASE("loop") {
        auto b = build(corpus("loop"));
        CHECK(count_components(b.g) == 1);
        CHECK(b.g.transient_states().empty());
        CHECK(b.g.diameter() == 1);
    }
    SUBCASE("linear automaton") {
        auto a = parse_automaton(automaton_doc(R"(["a"])", R"([])", R"(["q0", "q1", "q2"])", R"(["q0"])", R"(["q2"])",
                                               R"([{"source": "q0", "symbol": "a", "target": "q1"},
                                                   {"source": "q1", "symbol": "a", "target": "q2"}])"));
        auto b = build(a);
        CHECK(count_components(b.g) == 0);
        CHECK(b.g.transient_states().size() == 3);
    }
    SUBCASE("two cycles joined by a bridge") {
        auto b = build(corpus("two_phase"));
        CHECK(count_components(b.g) == 2);
        CHECK(b.g.transient_states().size() == 1);
        CHECK(b.g.diameter() == 2);
    }
}

TEST_CASE("condensation agrees with the closure oracle") {
    for (const char* name : kCorpus) {
        CAPTURE(name);
        auto b = build(corpus(name));
        auto r = reach_matrix(b.ra);
        for (StateId s = 0; s < b.ra.size(); ++s)
            for (StateId t = 0; t < b.ra.size(); ++t) {
                const bool same_scc = s == t || (r[s][t] && r[t][s]);
                CHECK((b.g.node_of(s) == b.g.node_of(t)) == same_scc);
            }
        for (StateId s = 0; s < b.ra.size(); ++s) {
            const auto& node = b.g.node(b.g.node_of(s));
            CHECK(node.transient == !r[s][s]);
        }
        // Edges mirror inter-node transitions, and the graph is acyclic.
        std::set<std::pair<NodeId, NodeId>> expected, got;
        for (const auto& t : b.ra.transitions())
            if (b.g.node_of(t.source) != b.g.node_of(t.target))
                expected.insert({b.g.node_of(t.source), b.g.node_of(t.target)});
        for (NodeId n = 0; n < b.g.nodes().size(); ++n)
            for (NodeId m : b.g.successors(n)) got.insert({n, m});
        CHECK(got == expected);
        for (auto [x, y] : got) CHECK_FALSE(r[b.g.node(y).states[0]][b.g.node(x).states[0]]);
    }
}

TEST_CASE("thickness verdicts") {
    SUBCASE("loop with 0 < x < 1 and a reset is thick") {
        auto a = parse_automaton(automaton_doc(
            R"(["a"])", R"(["x"])", R"(["q0"])", R"(["q0"])", R"(["q0"])",
            R"([{"source": "q0", "symbol": "a", "guard": [{"clock": "x", "op": "gt", "bound": 0}, {"clock": "x", "op": "lt", "bound": 1}], "resets": ["x"], "target": "q0"}])"));
        auto b = build(a);
        auto v = is_thick(b.g, b.g.components().at(0), b.ra);
        CHECK(v.kind == ThicknessVerdict::Kind::Thick);
        CHECK_FALSE(v.cycle.empty());
        auto corpus_loop = build(corpus("loop"));
        CHECK(is_thick(corpus_loop.g, corpus_loop.g.components().at(0), corpus_loop.ra).kind ==
              ThicknessVerdict::Kind::Thick);
    }
    SUBCASE("a clock that is never reset makes the cycle thin") {
        auto b = build(corpus("never_reset"));
        REQUIRE(b.g.components().size() == 1);
        CHECK(is_thick(b.g, b.g.components()[0], b.ra).kind == ThicknessVerdict::Kind::Thin);
    }
    SUBCASE("a punctual cycle is thin") {
        auto b = build(corpus("thin_punctual"));
        REQUIRE(b.g.components().size() == 1);
        CHECK(is_thick(b.g, b.g.components()[0], b.ra).kind == ThicknessVerdict::Kind::Thin);
    }
    SUBCASE("one-clock punctual loop") {
        auto a = parse_automaton(automaton_doc(R"(["a"])", R"(["x"])", R"(["q0"])", R"(["q0"])", R"(["q0"])",
                                               R"([{"source": "q0", "symbol": "a", "guard": ["x == 1"], "resets": ["x"], "target": "q0"}])"));
        auto b = build(a);
        // From x = 0 only x = 0 is ever seen again, a single-point region.
        for (NodeId c : b.g.components()) CHECK(is_thick(b.g, c, b.ra).kind != ThicknessVerdict::Kind::Unknown);
    }
}

TEST_CASE("orbit completeness does not depend on the starting state") {
    for (const char* name : kCorpus) {
        CAPTURE(name);
        auto b = build(corpus(name));
        for (NodeId c : b.g.components()) {
            auto cycles = component_cycles(b.g, c, b.ra, 50, nullptr);
            for (const auto& cycle : cycles)
                for (unsigned p = 1; p <= 2; ++p) {
                    const bool first = orbit_complete(b.ra, cycle, 0, p);
                    for (std::size_t r = 1; r < cycle.size(); ++r) CHECK(orbit_complete(b.ra, cycle, r, p) == first);
                }
        }
    }
}

TEST_CASE("thick components connect sampled valuation pairs") {
    // A thick verdict means any two valuations of a region on the cycle are
    // linked; the link search is an independent zone exploration.
    std::mt19937_64 gen(9);
    for (const char* name : {"loop", "two_phase", "thick_two_clock"}) {
        CAPTURE(name);
        auto b = build(corpus(name));
        for (NodeId c : b.g.components()) {
            auto v = is_thick(b.g, c, b.ra);
            if (v.kind != ThicknessVerdict::Kind::Thick) continue;
            const auto& states = b.g.node(c).states;
            for (int i = 0; i < 20; ++i) {
                StateId s = states[gen() % states.size()], t = states[gen() % states.size()];
                RunState from{b.ra.state(s).location, b.ra.state(s).region.interior_point(1 + gen() % 3, b.ra.max_constants())};
                RunState to{b.ra.state(t).location, b.ra.state(t).region.interior_point(1 + gen() % 3, b.ra.max_constants())};
                auto lk = link(b.ra, b.g, c, v, from, to);
                REQUIRE(lk);
                CHECK(lk->run.states.front() == from);
                CHECK(lk->run.states.back() == to);
            }
        }
    }
}

TEST_CASE("path enumeration") {
    SUBCASE("single component") {
        auto b = build(corpus("loop"));
        auto e = enumerate_paths(b.g, b.ra);
        REQUIRE(e.paths.size() == 1);
        CHECK(e.paths[0].nodes.size() == 1);
        CHECK_FALSE(e.truncated);
    }
    SUBCASE("two candidate exit states") {
        auto a = parse_automaton(automaton_doc(R"(["a", "b", "c"])", R"([])", R"(["p1", "p2", "r"])", R"(["p1"])", R"(["r"])",
                                               R"([{"source": "p1", "symbol": "a", "target": "p2"},
                                                   {"source": "p2", "symbol": "a", "target": "p1"},
                                                   {"source": "p1", "symbol": "b", "target": "r"},
                                                   {"source": "p2", "symbol": "b", "target": "r"},
                                                   {"source": "r", "symbol": "c", "target": "r"}])"));
        auto b = build(a);
        auto e = enumerate_paths(b.g, b.ra);
        CHECK(e.paths.size() == 2);
        std::set<StateId> exits;
        for (const auto& p : e.paths) {
            auto bar = p.bar_form(b.g);
            REQUIRE(bar.size() == 2);
            REQUIRE(bar[0].exit_state);
            exits.insert(*bar[0].exit_state);
            CHECK(b.g.node_of(*bar[0].exit_state) == *bar[0].component);
        }
        CHECK(exits.size() == 2);
    }
    SUBCASE("diamond") {
        auto a = parse_automaton(automaton_doc(R"(["a", "b", "c", "d", "e"])", R"([])", R"(["s0", "c1", "c2", "c3"])",
                                               R"(["s0"])", R"(["c3"])",
                                               R"([{"source": "s0", "symbol": "a", "target": "c1"},
                                                   {"source": "s0", "symbol": "b", "target": "c2"},
                                                   {"source": "c1", "symbol": "c", "target": "c1"},
                                                   {"source": "c2", "symbol": "c", "target": "c2"},
                                                   {"source": "c1", "symbol": "d", "target": "c3"},
                                                   {"source": "c2", "symbol": "d", "target": "c3"},
                                                   {"source": "c3", "symbol": "e", "target": "c3"}])"));
        auto b = build(a);
        auto e = enumerate_paths(b.g, b.ra);
        CHECK(e.paths.size() == 2);
        for (const auto& p : e.paths) CHECK(p.nodes.size() == 3);
    }
    SUBCASE("cap") {
        auto b = build(corpus("thick_two_clock"));
        auto e = enumerate_paths(b.g, b.ra, 2);
        CHECK(e.truncated);
        CHECK(e.paths.size() == 2);
    }
}

TEST_CASE("accepted runs follow an enumerated path") {
    for (const char* name : {"loop", "two_phase", "thin_punctual", "thick_two_clock"}) {
        CAPTURE(name);
        auto ctx = TesterContext::build(corpus(name));
        auto e = enumerate_paths(ctx.g, ctx.ra);
        Mt64Source src(4);
        for (int i = 0; i < 100; ++i) {
            auto w = generate_accepted(ctx, Rational(i % 9), src);
            auto m = membership_exact(ctx.ra.automaton(), w);
            REQUIRE(m.accepted);
            auto path = *project_run(ctx.ra, *m.witness);
            std::vector<NodeId> nodes;
            std::vector<std::optional<StateId>> leaving;
            for (std::size_t j = 0; j < path.size(); ++j) {
                NodeId n = ctx.g.node_of(path[j]);
                if (nodes.empty() || nodes.back() != n) {
                    if (!nodes.empty() && !ctx.g.node(nodes.back()).transient) leaving.back() = path[j - 1];
                    nodes.push_back(n);
                    leaving.emplace_back();
                }
            }
            bool found = false;
            for (const auto& p : e.paths) {
                if (p.nodes != nodes) continue;
                bool exits_ok = true;
                for (std::size_t k = 0; k + 1 < nodes.size(); ++k)
                    if (leaving[k] && p.exits[k] != leaving[k]) exits_ok = false;
                found = found || exits_ok;
            }
            CHECK(found);
        }
    }
}
