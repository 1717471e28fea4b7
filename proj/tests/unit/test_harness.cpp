#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include "helpers.hpp"
#include "tmt/experiment.hpp"
#include "tmt/stream.hpp"

using namespace tmt;
using namespace tmt::testing;

namespace {

const char* kCorpus[] = {"loop", "two_phase", "thin_punctual", "thick_two_clock"};

// q0 loops on a with x <= 1 and a reset.
TimedAutomaton closed_loop() {
    return parse_automaton(automaton_doc(R"(["a"])", R"(["x"])", R"(["q0"])", R"(["q0"])", R"(["q0"])",
                                         R"([{"source": "q0", "symbol": "a", "guard": [{"clock": "x", "op": "le", "bound": 1}], "resets": ["x"], "target": "q0"}])"));
}

LetterSource from_word(const TimedWord& w) {
    auto i = std::make_shared<std::size_t>(0);
    return [w, i]() -> std::optional<Letter> {
        if (*i >= w.size()) return std::nullopt;
        return w[(*i)++];
    };
}

std::string csv_of(const ExperimentConfig& cfg) {
    std::ostringstream out;
    write_csv(out, run_experiment(cfg), cfg.timing);
    return out.str();
}

}  // namespace

TEST_CASE("generate_accepted") {
    SUBCASE("target 0") {
        Mt64Source src(1);
        auto loop = TesterContext::build(corpus("loop"));
        CHECK(generate_accepted(loop, Rational{}, src).empty());
        // two_phase needs a bridge letter and one c; thin_punctual one a.
        auto two = TesterContext::build(corpus("two_phase"));
        auto w = generate_accepted(two, Rational{}, src);
        CHECK(w.untimed() == std::vector<Symbol>{"b", "c"});
        auto thin = TesterContext::build(corpus("thin_punctual"));
        CHECK(generate_accepted(thin, Rational{}, src).untimed() == std::vector<Symbol>{"a"});
    }
    SUBCASE("target weight is roughly met") {
        Mt64Source src(2);
        auto ctx = TesterContext::build(corpus("loop"));
        auto w = generate_accepted(ctx, R("10"), src);
        CHECK(R("10") <= w.total_weight());
        CHECK(w.total_weight() < R("11"));
        CHECK(membership_exact(ctx.ra.automaton(), w).accepted);
    }
    SUBCASE("500 generations pass the oracle") {
        std::size_t ok = 0;
        Mt64Source src(3);
        for (int i = 0; i < 500; ++i) {
            auto ctx = TesterContext::build(corpus(kCorpus[i % 4]));
            auto w = generate_accepted(ctx, Rational(i % 25), src);
            ok += membership_exact(ctx.ra.automaton(), w).accepted ? 1 : 0;
        }
        CHECK(ok == 500);
    }
    SUBCASE("empty language") {
        Mt64Source src(4);
        auto a = parse_automaton(automaton_doc(R"(["a"])", R"(["x"])", R"(["q", "f"])", R"(["q"])", R"(["f"])",
                                               R"([{"source": "q", "symbol": "a", "target": "q"}])"));
        auto ctx = TesterContext::build(a);
        CHECK_THROWS_AS(generate_accepted(ctx, R("3"), src), EmptyLanguageError);
    }
}

TEST_CASE("perturb_far") {
    auto ctx = TesterContext::build(corpus("loop"));
    Feasibility feas(ctx.ra);
    Mt64Source src(6);
    auto w = generate_accepted(ctx, R("20"), src);

    SUBCASE("epsilon 0 leaves the word alone") {
        auto far = perturb_far(w, ctx, feas, Rational{}, src);
        CHECK(far.word == w);
        CHECK(far.certificate.certified_cost == Rational{});
        CHECK(far.certificate.script.empty());
    }
    SUBCASE("bad epsilon") {
        CHECK_THROWS_AS(perturb_far(w, ctx, feas, R("-1/2"), src), std::invalid_argument);
        CHECK_THROWS_AS(perturb_far(w, ctx, feas, R("1"), src), std::invalid_argument);
    }
    SUBCASE("no bounded letter") {
        auto free = TesterContext::build(parse_automaton(automaton_doc(
            R"(["a"])", R"([])", R"(["q"])", R"(["q"])", R"(["q"])", R"([{"source": "q", "symbol": "a", "target": "q"}])")));
        Feasibility f2(free.ra);
        CHECK_THROWS_AS(perturb_far(W({{"a", "1"}}), free, f2, R("1/2"), src), std::runtime_error);
    }
    SUBCASE("certificates are honest in both modes") {
        for (auto mode : {FarMode::Interval, FarMode::Heavy})
            for (const char* eps : {"1/10", "2/5", "3/4"}) {
                CAPTURE(eps);
                auto far = perturb_far(w, ctx, feas, R(eps), src, mode);
                const auto& cert = far.certificate;
                auto applied = apply_script(w, cert.script);
                CHECK(applied.word == far.word);
                CHECK(applied.cost == cert.certified_cost);
                TimeValue sum;
                for (const auto& op : cert.script) sum += op.cost;
                CHECK(sum == cert.certified_cost);
                CHECK(R(eps) * w.total_weight() <= cert.certified_cost);
                CHECK(cert.lower_bound == feas.lower_bound(far.word));
                CHECK(cert.claim != FarCertificate::Claim::UpperBoundOnly);
                CHECK(R(eps) < cert.lower_bound);
                CHECK(cert.lower_bound <= cert.upper_bound);
                CHECK_FALSE(membership_exact(ctx.ra.automaton(), far.word).accepted);
            }
    }
}

TEST_CASE("small-scale exact certificates") {
    auto ctx = TesterContext::build(closed_loop());
    Feasibility feas(ctx.ra);
    auto w = W({{"a", "3"}});
    CHECK(feas.lower_bound(w) == R("2/3"));
    auto ub = small_scale_upper_bound(w, ctx, feas);
    REQUIRE(ub);
    CHECK(*ub == R("2/3"));

    // Independent oracle: every accepted word of up to 4 letters on a
    // 1/4 grid, compared by relative edit distance.
    std::vector<TimedWord> accepted{TimedWord{}};
    Rational best = timed_edit_distance(w, TimedWord{}).relative;
    for (std::size_t len = 1; len <= 4; ++len) {
        std::vector<TimedWord> next;
        for (const auto& u : accepted)
            if (u.size() == len - 1)
                for (int q = 0; q <= 4; ++q) {
                    auto v = u;
                    v.push_back({"a", Rational(q, 4)});
                    next.push_back(v);
                    best = min(best, timed_edit_distance(w, v).relative);
                }
        accepted.insert(accepted.end(), next.begin(), next.end());
    }
    CHECK(best == R("2/3"));

    Mt64Source src(1);
    auto far = perturb_far(W({{"a", "1/2"}}), ctx, feas, R("1/2"), src, FarMode::Heavy);
    CHECK(far.certificate.claim == FarCertificate::Claim::ExactSmallScale);
    CHECK(far.certificate.lower_bound == far.certificate.upper_bound);
    CHECK(R("1/2") < far.certificate.lower_bound);
}

TEST_CASE("experiment configuration") {
    auto cfg = parse_experiment_config(
        R"({"format": "timed-tester/1", "automaton": "loop.json", "epsilon": "2/5", "trials": 3, "seed": 9})",
        TMT_CORPUS_DIR);
    CHECK(cfg.epsilon == R("2/5"));
    CHECK(cfg.trials == 3);
    CHECK(cfg.seed == 9);
    CHECK(cfg.automaton == std::string(TMT_CORPUS_DIR) + "/loop.json");
    cfg.trials = 0;
    CHECK_THROWS_AS(cfg.check(), std::invalid_argument);
    CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
    CHECK_THROWS(parse_experiment_config(R"({"automaton": "loop.json", "epsilon": "2"})", TMT_CORPUS_DIR).check());
    CHECK_THROWS(parse_experiment_config(R"({"format": "bogus/9", "automaton": "loop.json", "epsilon": "1/2"})"));
}

TEST_CASE("loop experiment") {
    auto cfg = load_experiment_config(corpus_path("loop_experiment.json"));
    auto result = run_experiment(cfg);
    REQUIRE(result.rows.size() == 100);
    CHECK(result.summary.acceptance_rate() == 1.0);
    CHECK(result.summary.rejection_rate() >= 0.05);
    CHECK(result.summary.delta_floor == doctest::Approx(3.0 * 0.16 / 5));
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        const auto& row = result.rows[i];
        CHECK(row.trial == i);
        CHECK(row.seed == derive_seed(cfg.seed, i));
        CHECK(apply_script(row.accepted_word, row.certificate.script).word == row.far_word);
    }
}

TEST_CASE("csv output") {
    auto cfg = load_experiment_config(corpus_path("loop_experiment.json"));
    cfg.trials = 12;
    const auto first = csv_of(cfg);
    CHECK(first == csv_of(cfg));
    cfg.threads = 3;
    CHECK(first == csv_of(cfg));

    std::istringstream in(first);
    std::string line;
    std::getline(in, line);
    CHECK(line == kCsvHeader);
    std::size_t rows = 0;
    std::string last;
    while (std::getline(in, line)) {
        ++rows;
        last = line;
        CHECK(std::count(line.begin(), line.end(), ',') == 9);
    }
    CHECK(rows == 13);
    CHECK(last.rfind("summary,7,1.000000,", 0) == 0);
    CHECK(last.find("delta_floor=0.096000") != std::string::npos);
}

TEST_CASE("delta floor") {
    CHECK(delta_floor(R("2/5"), 1) == doctest::Approx(0.096));
    CHECK(delta_floor(R("1/2"), 2) == doctest::Approx(std::pow(3.0 / 8 / 10 / 8, 2)));
}

TEST_CASE("stream mode matches file mode") {
    for (const char* name : {"loop", "two_phase"}) {
        CAPTURE(name);
        auto ctx = TesterContext::build(corpus(name));
        auto params = ctx.params(R("2/5"), R("2"));
        Feasibility feas(ctx.ra);
        Mt64Source src(12);
        for (int i = 0; i < 40; ++i) {
            auto w = generate_accepted(ctx, Rational(4 + i), src);
            if (i % 2) w = perturb_far(w, ctx, feas, R("2/5"), src, i % 4 == 1 ? FarMode::Heavy : FarMode::Interval).word;
            const std::uint64_t seed = 1000 + static_cast<std::uint64_t>(i);
            auto s = stream_test(from_word(w), ctx, params, seed);
            CHECK(s.letters == w.size());
            CHECK(s.weight == w.total_weight());
            auto f = word_tester(w, ctx, params, seed, replay_factory(s.slot_starts));
            CHECK(s.verdict.accept == f.accept);
            if (i % 2 == 0) CHECK(s.verdict.accept);
        }
    }
}

TEST_CASE("stream corner cases") {
    auto ctx = TesterContext::build(corpus("loop"));
    auto params = ctx.params(R("1/2"));
    CHECK(stream_test(from_word(TimedWord{}), ctx, params, 1).verdict.accept);
    CHECK_FALSE(stream_test(from_word(W({{"a", "3"}})), ctx, params, 1).verdict.accept);

    std::ifstream in(corpus_path("loop_word.jsonl"));
    auto r = stream_test(in, ctx, params, 1);
    CHECK(r.letters > 0);
    CHECK(r.verdict.accept);
}
