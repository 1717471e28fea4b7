#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "helpers.hpp"
#include "tmt/corpus.hpp"
#include "tmt/corrector.hpp"

using namespace tmt;
using namespace tmt::testing;

namespace {

const std::string kLessThanOne = R"([{"clock": "x", "op": "lt", "bound": 1}])";

// q0 -a-> q1 -b-> q0, both with x < 1 and a reset: a second a in a row needs
// a fresh start, which makes a weak cut.
TimedAutomaton alternating() {
    return parse_automaton(automaton_doc(R"(["a", "b"])", R"(["x"])", R"(["q0", "q1"])", R"(["q0"])", R"(["q0"])",
                                         R"([{"source": "q0", "symbol": "a", "guard": )" + kLessThanOne +
                                             R"(, "resets": ["x"], "target": "q1"},
                                             {"source": "q1", "symbol": "b", "guard": )" + kLessThanOne +
                                             R"(, "resets": ["x"], "target": "q0"}])"));
}

// The loop plus an idle letter c that lets x drift inside (0, 1).
TimedAutomaton drifting_loop() {
    return parse_automaton(automaton_doc(R"(["a", "c"])", R"(["x"])", R"(["q0"])", R"(["q0"])", R"(["q0"])",
                                         R"([{"source": "q0", "symbol": "a", "guard": )" + kLessThanOne +
                                             R"(, "resets": ["x"], "target": "q0"},
                                             {"source": "q0", "symbol": "c", "guard": )" + kLessThanOne +
                                             R"(, "target": "q0"}])"));
}

NodeId only_component(const TesterContext& ctx) {
    REQUIRE(ctx.g.components().size() == 1);
    return ctx.g.components()[0];
}

const ThicknessVerdict& verdict_of(const TesterContext& ctx, NodeId c) {
    for (const auto& [n, v] : ctx.thickness)
        if (n == c) return v;
    FAIL("component has no thickness verdict");
    throw std::logic_error("unreachable");
}

// Replays a run letter by letter with the concrete semantics.
bool replays(const Run& run, const TimedWord& w, const TimedAutomaton& a) {
    if (run.states.size() != w.size() + 1) return false;
    for (std::size_t i = 0; i < w.size(); ++i) {
        auto next = step(run.states[i], w[i].delay, w[i].symbol, a);
        if (std::find(next.begin(), next.end(), run.states[i + 1]) == next.end()) return false;
    }
    return true;
}

// Concrete oracle for components whose regions are single points: track the
// set of concrete states that stay inside the component.
std::vector<RunState> step_inside(const std::vector<RunState>& from, const Letter& l, const TesterContext& ctx,
                                  NodeId c) {
    std::vector<RunState> out;
    for (const auto& s : from)
        for (auto& t : step(s, l.delay, l.symbol, ctx.ra.automaton())) {
            auto id = ctx.ra.find(t.location, t.valuation);
            if (id && ctx.g.node_of(*id) == c && std::find(out.begin(), out.end(), t) == out.end())
                out.push_back(std::move(t));
        }
    return out;
}

std::vector<RunState> component_points(const TesterContext& ctx, NodeId c) {
    std::vector<RunState> out;
    for (StateId s : ctx.g.node(c).states)
        out.push_back({ctx.ra.state(s).location, ctx.ra.state(s).region.interior_point(1, ctx.ra.max_constants())});
    return out;
}

}  // namespace

TEST_CASE("factor_compatible_component on the loop") {
    auto ctx = TesterContext::build(corpus("loop"));
    NodeId c = only_component(ctx);
    CHECK(factor_compatible_component({}, c, ctx.ra, ctx.g).compatible);
    auto good = W({{"a", "1/2"}, {"a", "1/2"}});
    auto r = factor_compatible_component(good.letters(), c, ctx.ra, ctx.g);
    CHECK(r.compatible);
    REQUIRE(r.witness);
    auto run = realize_witness(ctx.ra, *r.witness, good.letters());
    REQUIRE(run);
    CHECK(replays(*run, good, ctx.ra.automaton()));
    CHECK_FALSE(factor_compatible_component(W({{"a", "2"}}).letters(), c, ctx.ra, ctx.g).compatible);
}

TEST_CASE("a1_pairs") {
    SUBCASE("empty factor gives the diagonal") {
        auto ctx = TesterContext::build(corpus("two_phase"));
        REQUIRE(ctx.paths.size() == 1);
        const auto& pi = ctx.paths[0];
        auto pairs = a1_pairs({}, pi, ctx.ra, ctx.g);
        REQUIRE_FALSE(pairs.empty());
        for (const auto& [x, y] : pairs) CHECK(x == y);
    }
    SUBCASE("single component reduces to component compatibility") {
        auto ctx = TesterContext::build(corpus("loop"));
        NodeId c = only_component(ctx);
        auto pi = single_component(c);
        auto u = W({{"a", "1/4"}});
        CHECK(a1_pairs(u.letters(), pi, ctx.ra, ctx.g).empty() ==
              !factor_compatible_component(u.letters(), c, ctx.ra, ctx.g).compatible);
        CHECK(a1_pairs(W({{"a", "3"}}).letters(), pi, ctx.ra, ctx.g).empty());
    }
    SUBCASE("two-phase bridge") {
        auto ctx = TesterContext::build(corpus("two_phase"));
        const auto& pi = ctx.paths.at(0);
        REQUIRE(pi.size() == 3);
        auto u = W({{"b", "1/2"}, {"c", "1/2"}});
        auto pairs = a1_pairs(u.letters(), pi, ctx.ra, ctx.g);
        bool crossing = false;
        for (const auto& [x, y] : pairs) {
            CHECK(x.position <= y.position);
            if (x.position == 0 && y.position == 2) crossing = true;
        }
        CHECK(crossing);
        // The start must be the exit state of the first component.
        for (const auto& [x, y] : pairs)
            if (x.position == 0) CHECK(pi.steps[0].exit == std::optional<StateId>(x.state));
    }
}

TEST_CASE("a2_compatible") {
    auto ctx = TesterContext::build(corpus("two_phase"));
    const auto& pi = ctx.paths.at(0);
    SUBCASE("l = 1 reduces to a1") {
        auto w = W({{"a", "1/2"}, {"a", "1/2"}, {"a", "1/2"}, {"b", "1/2"}, {"c", "1/2"}});
        auto f = k_factor(w, 1, R("1/2"));
        CHECK(a2_compatible({f}, w.size(), pi, ctx.ra, ctx.g).compatible ==
              !a1_pairs(f.letters, pi, ctx.ra, ctx.g).empty());
    }
    SUBCASE("factors in reverse component order") {
        // (c, 3/2) only fits the second component, (a, 1/2) only the first.
        auto w = W({{"a", "1/2"}, {"c", "3/2"}, {"a", "1/2"}, {"a", "1/2"}, {"b", "1/2"}, {"c", "1/2"}});
        auto f1 = k_factor(w, 1, R("1"));
        auto f2 = k_factor(w, 3, R("1/2"));
        REQUIRE(f1.end < f2.start);
        CHECK_FALSE(a1_pairs(f1.letters, pi, ctx.ra, ctx.g).empty());
        CHECK_FALSE(a1_pairs(f2.letters, pi, ctx.ra, ctx.g).empty());
        auto r = a2_compatible({f1, f2}, w.size(), pi, ctx.ra, ctx.g);
        CHECK_FALSE(r.compatible);
    }
    SUBCASE("factors of accepted words") {
        Mt64Source src(5);
        for (int i = 0; i < 50; ++i) {
            auto w = generate_accepted(ctx, R("30"), src);
            auto s = sample_factors(w, 2, R("2"), src);
            auto r = a2_compatible(s.factors, w.size(), pi, ctx.ra, ctx.g);
            CHECK(r.compatible);
            REQUIRE(r.witnesses.size() == r.tested.size());
            for (std::size_t j = 0; j < r.tested.size(); ++j) {
                auto run = realize_witness(ctx.ra, r.witnesses[j], r.tested[j].letters);
                REQUIRE(run);
                CHECK(replays(*run, r.tested[j].word(), ctx.ra.automaton()));
                if (j > 0) CHECK(r.witnesses[j - 1].end <= r.witnesses[j].start);
            }
        }
    }
}

TEST_CASE("derive_params") {
    auto p = derive_params(2, 3, 2, R("1/2"));
    CHECK(p.k == R("576"));
    CHECK(p.sample_weight() == R("576"));
    CHECK(derive_params(2, 3, 2, R("1/2"), std::nullopt, 2).sample_weight() == R("1152"));
    CHECK(derive_params(2, 3, 2, R("1/2"), R("7")).k == R("7"));
    CHECK_THROWS_AS(derive_params(1, 1, 1, R("0")), std::invalid_argument);
    CHECK_THROWS_AS(derive_params(1, 1, 1, R("1")), std::invalid_argument);
    auto ctx = TesterContext::build(corpus("two_phase"));
    auto q = ctx.params(R("1/2"));
    CHECK(q.l == 2);
    CHECK(q.m == ctx.ra.size());
    CHECK(q.B == 2);
}

TEST_CASE("word tester soundness") {
    for (const char* name : {"loop", "two_phase", "thin_punctual", "thick_two_clock"}) {
        CAPTURE(name);
        auto ctx = TesterContext::build(corpus(name));
        auto params = ctx.params(R("1/4"), R("1"));
        Mt64Source src(13);
        for (int i = 0; i < 60; ++i) {
            auto w = generate_accepted(ctx, Rational(5 + 5 * (i % 6)), src);
            for (std::uint64_t seed = 0; seed < 3; ++seed) CHECK(word_tester(w, ctx, params, seed * 977 + i).accept);
        }
    }
}

TEST_CASE("word tester corner cases") {
    auto loop = corpus("loop");
    CHECK(word_tester(TimedWord{}, loop, R("1/2"), 1).accept);

    auto empty_language = parse_automaton(automaton_doc(R"(["a"])", R"(["x"])", R"(["q", "f"])", R"(["q"])", R"(["f"])",
                                                        R"([{"source": "q", "symbol": "a", "target": "q"}])"));
    CHECK_FALSE(word_tester(W({{"a", "1"}}), empty_language, R("1/2"), 1).accept);

    // Every letter overshoots x < 1, so the word is far from the language.
    std::vector<Letter> letters(20, Letter{"a", R("2")});
    TimedWord far(letters);
    auto ctx = TesterContext::build(loop);
    auto params = ctx.params(R("1/2"), R("2"));
    std::size_t rejected = 0;
    for (std::uint64_t seed = 0; seed < 2000; ++seed) rejected += word_tester(far, ctx, params, seed).accept ? 0 : 1;
    CHECK(double(rejected) / 2000 >= 3.0 / 5 * 0.25);
}

TEST_CASE("word_tester_along replays its draws") {
    auto ctx = TesterContext::build(corpus("two_phase"));
    auto params = ctx.params(R("1/2"), R("1"));
    Mt64Source src(8);
    auto w = generate_accepted(ctx, R("20"), src);
    ReplayPositions pos({0, std::size_t(w.size() - 1)});
    auto v = word_tester_along(w, ctx.paths[0], ctx, params, pos);
    CHECK(v.accept);
    CHECK(v.samples.draws == std::vector<std::size_t>{0, w.size() - 1});
}

TEST_CASE("decompose_cuts") {
    SUBCASE("compatible word") {
        auto ctx = TesterContext::build(corpus("loop"));
        auto d = decompose_cuts(W({{"a", "1/2"}, {"a", "1/3"}}), only_component(ctx), ctx.ra, ctx.g);
        CHECK(d.h() == 0);
        CHECK(d.V == Rational{});
    }
    SUBCASE("one strong cut on the loop") {
        auto ctx = TesterContext::build(corpus("loop"));
        NodeId c = only_component(ctx);
        auto w = W({{"a", "1/2"}, {"a", "5"}, {"a", "1/2"}});
        auto d = decompose_cuts(w, c, ctx.ra, ctx.g);
        REQUIRE(d.h() == 1);
        const auto& cut = d.cuts[0];
        CHECK(cut.position == 1);
        CHECK(cut.kind == Cut::Kind::Strong);
        REQUIRE(cut.retimed_to);
        // Any delay below 1 fits, so the cost is just above 5 - 1.
        CHECK(R("4") < cut.cost);
        CHECK(cut.cost <= R("9/2"));
        CHECK(cut.cost == R("5") - *cut.retimed_to);
        CHECK_FALSE(step({0, {Rational{}}}, *cut.retimed_to, "a", ctx.ra.automaton()).empty());
        CHECK(d.V == d.strong_cost + d.weak_cost);

        auto fixed = correct_word(w, c, ctx.ra, ctx.g, verdict_of(ctx, c));
        CHECK(fixed.cost == cut.cost);
        CHECK(decompose_cuts(fixed.word, c, ctx.ra, ctx.g).h() == 0);
        CHECK(replays(fixed.run, fixed.word, ctx.ra.automaton()));
    }
    SUBCASE("cut counts match a concrete longest-prefix oracle") {
        auto ctx = TesterContext::build(corpus("two_phase"));
        std::mt19937_64 gen(31);
        const char* syms[] = {"a", "b", "c"};
        for (NodeId c : ctx.g.components()) {
            const auto all = component_points(ctx, c);
            for (int i = 0; i < 200; ++i) {
                std::vector<Letter> letters;
                const int n = 1 + static_cast<int>(gen() % 12);
                for (int j = 0; j < n; ++j)
                    letters.push_back({syms[gen() % 3], Rational(static_cast<std::int64_t>(gen() % 20), 8)});
                TimedWord w(letters);
                auto d = decompose_cuts(w, c, ctx.ra, ctx.g);
                std::vector<RunState> live = all;
                std::size_t cuts = 0, next_cut = 0;
                for (const auto& l : w) {
                    auto after = step_inside(live, l, ctx, c);
                    if (!after.empty()) {
                        live = std::move(after);
                        continue;
                    }
                    ++cuts;
                    REQUIRE(next_cut < d.cuts.size());
                    const auto& cut = d.cuts[next_cut++];
                    auto alone = step_inside(all, l, ctx, c);
                    CHECK((cut.kind == Cut::Kind::Weak) == !alone.empty());
                    if (!alone.empty()) live = std::move(alone);
                    else if (cut.retimed_to) live = step_inside(live, {l.symbol, *cut.retimed_to}, ctx, c);
                    if (live.empty()) live = all;  // a deleted letter leaves the state alone
                }
                CHECK(cuts == d.h());
            }
        }
    }
    SUBCASE("two consecutive weak cuts") {
        auto ctx = TesterContext::build(alternating());
        NodeId c = only_component(ctx);
        auto w = W({{"a", "1/2"}, {"a", "1/2"}, {"a", "1/2"}});
        auto d = decompose_cuts(w, c, ctx.ra, ctx.g);
        REQUIRE(d.h() == 2);
        CHECK(d.weak_count() == 2);
        CHECK(d.V == Rational(2) * d.link_bound);
        Factor whole = k_factor(w, 0, w.total_weight());
        CHECK_FALSE(a2_compatible({whole}, w.size(), single_component(c), ctx.ra, ctx.g).compatible);

        auto fixed = correct_word(w, c, ctx.ra, ctx.g, verdict_of(ctx, c));
        CHECK(fixed.links.size() == 2);
        CHECK(fixed.cost <= d.strong_cost + Rational(static_cast<std::int64_t>(d.weak_count())) * d.link_bound);
        CHECK(timed_edit_distance(w, fixed.word).absolute <= fixed.cost);
        CHECK(decompose_cuts(fixed.word, c, ctx.ra, ctx.g).h() == 0);
    }
}

TEST_CASE("link") {
    SUBCASE("loop with drift") {
        auto ctx = TesterContext::build(drifting_loop());
        NodeId c = only_component(ctx);
        const auto& v = verdict_of(ctx, c);
        REQUIRE(v.kind == ThicknessVerdict::Kind::Thick);
        RunState from{0, {R("1/3")}}, to{0, {Rational{}}};
        auto same = link(ctx.ra, ctx.g, c, v, from, from);
        REQUIRE(same);
        CHECK(same->sigma.empty());
        auto lk = link(ctx.ra, ctx.g, c, v, from, to);
        REQUIRE(lk);
        CHECK(replays(lk->run, lk->sigma, ctx.ra.automaton()));
        CHECK(lk->run.states.back() == to);
        // (a, 1/2) alone does it, so the cheapest link weighs less than 1.
        CHECK(lk->sigma.total_weight() < R("2/3"));
    }
    SUBCASE("random pairs on a thick two-clock component") {
        auto ctx = TesterContext::build(corpus("thick_two_clock"));
        std::mt19937_64 gen(77);
        const Rational bound = Rational(3) * Rational(static_cast<std::int64_t>(ctx.ra.size())) *
                               Rational(ctx.ra.automaton().max_constant());
        std::size_t tried = 0;
        for (const auto& [c, v] : ctx.thickness) {
            if (v.kind != ThicknessVerdict::Kind::Thick) continue;
            const auto& states = ctx.g.node(c).states;
            for (int i = 0; i < 100 / 3 + 1; ++i, ++tried) {
                StateId s = states[gen() % states.size()], t = states[gen() % states.size()];
                RunState from{ctx.ra.state(s).location,
                              ctx.ra.state(s).region.interior_point(1 + gen() % 4, ctx.ra.max_constants())};
                RunState to{ctx.ra.state(t).location,
                            ctx.ra.state(t).region.interior_point(1 + gen() % 4, ctx.ra.max_constants())};
                auto lk = link(ctx.ra, ctx.g, c, v, from, to);
                REQUIRE(lk);
                CHECK(lk->sigma.total_weight() <= bound);
                CHECK(replays(lk->run, lk->sigma, ctx.ra.automaton()));
                CHECK(lk->run.states.front() == from);
                CHECK(lk->run.states.back() == to);
            }
        }
        CHECK(tried >= 100);
    }
    SUBCASE("thin components are refused") {
        auto ctx = TesterContext::build(corpus("thin_punctual"));
        NodeId c = only_component(ctx);
        const auto& v = verdict_of(ctx, c);
        REQUIRE(v.kind == ThicknessVerdict::Kind::Thin);
        auto pts = component_points(ctx, c);
        CHECK_THROWS_AS(link(ctx.ra, ctx.g, c, v, pts[0], pts[0]), std::invalid_argument);
        CHECK_THROWS_AS(correct_word(TimedWord{}, c, ctx.ra, ctx.g, v), std::invalid_argument);
    }
}

TEST_CASE("correct_word on perturbed component words") {
    for (const char* name : {"loop", "two_phase", "thick_two_clock"}) {
        CAPTURE(name);
        auto ctx = TesterContext::build(corpus(name));
        Mt64Source src(19);
        std::mt19937_64 gen(19);
        const auto& alphabet = ctx.ra.automaton().alphabet();
        for (const auto& [c, v] : ctx.thickness) {
            if (v.kind != ThicknessVerdict::Kind::Thick) continue;
            for (int i = 0; i < 40; ++i) {
                auto base = generate_component_word(ctx, c, R("6"), src);
                std::vector<Letter> letters(base.begin(), base.end());
                for (int e = 0; e < 3 && !letters.empty(); ++e) {
                    const std::size_t at = gen() % letters.size();
                    switch (gen() % 3) {
                        case 0: letters[at].delay = Rational(static_cast<std::int64_t>(gen() % 40), 8); break;
                        case 1: letters.erase(letters.begin() + static_cast<std::ptrdiff_t>(at)); break;
                        default:
                            letters.insert(letters.begin() + static_cast<std::ptrdiff_t>(at),
                                           {alphabet[gen() % alphabet.size()], Rational(static_cast<std::int64_t>(gen() % 16), 8)});
                    }
                }
                TimedWord w(letters);
                auto d = decompose_cuts(w, c, ctx.ra, ctx.g);
                auto fixed = correct_word(w, c, ctx.ra, ctx.g, v);
                CHECK(fixed.cost <= d.strong_cost + Rational(static_cast<std::int64_t>(d.weak_count())) * d.link_bound);
                CHECK(timed_edit_distance(w, fixed.word).absolute <= fixed.cost);
                CHECK(decompose_cuts(fixed.word, c, ctx.ra, ctx.g).h() == 0);
                CHECK(replays(fixed.run, fixed.word, ctx.ra.automaton()));
            }
        }
    }
}
