#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>

#include "helpers.hpp"
#include "tmt/sampling.hpp"

using namespace tmt;
using namespace tmt::testing;

namespace {

TimedWord ten_letters() {
    return W({{"a", "1"}, {"b", "2"}, {"a", "3"}, {"b", "1/2"}, {"a", "5"},
              {"b", "1"}, {"a", "7/2"}, {"b", "2"}, {"a", "1"}, {"b", "1/2"}});
}

double chi_square_p(const std::vector<std::size_t>& counts, const TimedWord& w, std::size_t draws) {
    double stat = 0;
    const double T = w.total_weight().to_double();
    for (std::size_t j = 0; j < w.size(); ++j) {
        const double expected = double(draws) * w[j].delay.to_double() / T;
        stat += (double(counts[j]) - expected) * (double(counts[j]) - expected) / expected;
    }
    boost::math::chi_squared dist(double(w.size() - 1));
    return boost::math::cdf(boost::math::complement(dist, stat));
}

}  // namespace

TEST_CASE("sample_position is exact on a full grid") {
    auto w = W({{"a", "1"}, {"b", "3"}});
    GridSource grid(4);
    std::vector<std::size_t> counts(2, 0);
    for (int i = 0; i < 16; ++i) ++counts[sample_position(w, grid)];
    CHECK(counts[0] == 4);
    CHECK(counts[1] == 12);

    // Weights summing to a power of two: counts over one period are exact.
    auto v = W({{"a", "1/2"}, {"b", "3/2"}, {"a", "5"}, {"c", "0"}, {"b", "9"}});
    PositionSampler sampler(v);
    GridSource fine(10);
    std::vector<std::size_t> c(v.size(), 0);
    for (int i = 0; i < 1024; ++i) ++c[sampler.draw(fine)];
    for (std::size_t j = 0; j < v.size(); ++j) CHECK(Rational(static_cast<std::int64_t>(c[j]), 1024) == v[j].delay / v.total_weight());

    CHECK(sampler.thresholds().back() == kUnitGrid);
}

TEST_CASE("sample_position corner cases") {
    Mt64Source src(1);
    auto one = W({{"a", "2"}});
    for (int i = 0; i < 100; ++i) CHECK(sample_position(one, src) == 0);
    CHECK_THROWS_AS(sample_position(W({{"a", "0"}}), src), std::invalid_argument);
    CHECK_THROWS_AS(sample_position(TimedWord{}, src), std::invalid_argument);
}

TEST_CASE("sample_position frequencies") {
    auto w = ten_letters();
    const double T = w.total_weight().to_double();
    PositionSampler sampler(w);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        Mt64Source src(seed);
        std::vector<std::size_t> counts(w.size(), 0);
        const std::size_t n = 1'000'000;
        for (std::size_t i = 0; i < n; ++i) ++counts[sampler.draw(src)];
        for (std::size_t j = 0; j < w.size(); ++j)
            CHECK(std::abs(double(counts[j]) / double(n) - w[j].delay.to_double() / T) <= 0.005);
        CHECK(chi_square_p(counts, w, n) > 0.01);
    }
}

TEST_CASE("k_factor") {
    auto w = W({{"a", "2"}, {"b", "4"}, {"a", "5"}});
    auto f = k_factor(w, 1, R("5"));
    CHECK(f.word() == W({{"b", "4"}, {"a", "5"}}));
    CHECK(f.weight == R("9"));
    CHECK_FALSE(f.truncated);
    auto g = k_factor(w, 2, R("100"));
    CHECK(g.word() == W({{"a", "5"}}));
    CHECK(g.truncated);
    auto h = k_factor(w, 0, Rational{});
    CHECK(h.letters.size() == 1);
    CHECK(h.end == 0);
    CHECK_THROWS_AS(k_factor(w, 3, R("1")), std::out_of_range);
}

TEST_CASE("merge") {
    auto w = ten_letters();
    auto a = k_factor(w, 1, R("4"));
    auto b = k_factor(w, 2, R("6"));
    REQUIRE(a.overlaps(b));
    auto u = merge(w, a, b);
    CHECK(u.start == 1);
    CHECK(u.end == std::max(a.end, b.end));
    CHECK(u.weight == weight_of(u.letters));
    auto again = merge(w, u, b);
    CHECK(again.start == u.start);
    CHECK(again.end == u.end);
    CHECK(merge(w, u, u).letters == u.letters);
}

TEST_CASE("sample_factors") {
    SUBCASE("l = 1 never merges") {
        Mt64Source src(3);
        auto w = ten_letters();
        for (int i = 0; i < 200; ++i) {
            auto s = sample_factors(w, 1, R("2"), src);
            CHECK(s.factors.size() == 1);
            CHECK(s.merges.empty());
            CHECK(s.draws.size() == 1);
        }
    }
    SUBCASE("word lighter than k") {
        Mt64Source src(3);
        auto w = W({{"a", "1"}, {"b", "1"}});
        auto s = sample_factors(w, 2, R("5"), src);
        CHECK(s.degenerate);
        REQUIRE(s.factors.size() == 1);
        CHECK(s.factors[0].word() == w);
        CHECK(s.factors[0].truncated);
    }
    SUBCASE("heavy words give disjoint ordered factors") {
        std::vector<Letter> letters;
        for (int i = 0; i < 400; ++i) letters.push_back({"a", Rational(1 + i % 3, 2)});
        TimedWord w(letters);
        const std::size_t l = 3;
        const TimeValue k = R("10");
        REQUIRE(Rational(2 * 3) * k <= w.total_weight());
        Mt64Source src(4);
        int fine = 0;
        for (int i = 0; i < 300; ++i) {
            auto s = sample_factors(w, l, k, src);
            if (s.degenerate) continue;
            ++fine;
            REQUIRE(s.factors.size() == l);
            for (std::size_t j = 0; j + 1 < l; ++j) CHECK(s.factors[j].end < s.factors[j + 1].start);
            for (const auto& f : s.factors) CHECK((f.weight >= k || f.truncated));
        }
        CHECK(fine == 300);
    }
    SUBCASE("duplicate starts trigger a redraw") {
        auto w = ten_letters();
        ReplayPositions pos({4, 4, 0});
        auto s = sample_factors(w, 2, R("1"), pos);
        CHECK(s.draws == std::vector<std::size_t>{4, 4, 0});
        CHECK(s.factors.size() == 2);
        CHECK(s.merges.size() == 1);
    }
    SUBCASE("draw budget") {
        auto w = ten_letters();
        ReplayPositions pos(std::vector<std::size_t>(5, 4));
        auto s = sample_factors(w, 2, R("1"), pos, 3);
        CHECK(s.degenerate);
        CHECK(s.draws.size() == 5);
    }
}

TEST_CASE("reservoir corner cases") {
    Mt64Source src(2);
    std::vector<Letter> none;
    auto empty = reservoir_stream(none, 1, R("1"), src);
    CHECK(empty.factors.empty());
    CHECK(empty.degenerate);

    std::vector<Letter> one{{"a", R("3")}};
    auto s = reservoir_stream(one, 1, R("1"), src);
    REQUIRE(s.factors.size() == 1);
    CHECK(s.factors[0].letters == one);
    CHECK_FALSE(s.degenerate);

    // Lighter than k: the whole stream, as in file mode.
    auto light = reservoir_stream(one, 1, R("10"), src);
    CHECK(light.degenerate);
    REQUIRE(light.factors.size() == 1);
    CHECK(light.factors[0].letters == one);
}

TEST_CASE("reservoir windows match k_factor") {
    auto w = ten_letters();
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Mt64Source src(seed);
        ReservoirSampler r(2, R("4"), src);
        for (const auto& l : w) r.push(l);
        auto s = r.finish();
        if (s.degenerate) continue;
        for (const auto& f : s.factors) {
            CHECK(f.letters == std::vector<Letter>(w.begin() + f.start, w.begin() + f.end + 1));
            if (s.merges.empty()) CHECK(f == k_factor(w, f.start, R("4")));
        }
        // Replaying the slot starts in file mode gives the same factors.
        std::vector<std::size_t> starts;
        for (auto st : r.starts()) starts.push_back(*st);
        ReplayPositions replay(starts);
        auto file = sample_factors(w, 2, R("4"), replay);
        REQUIRE(file.factors.size() == s.factors.size());
        for (std::size_t i = 0; i < s.factors.size(); ++i) {
            CHECK(file.factors[i].start == s.factors[i].start);
            CHECK(file.factors[i].letters == s.factors[i].letters);
        }
    }
}

TEST_CASE("reservoir start positions follow mu") {
    auto w = ten_letters();
    const double T = w.total_weight().to_double();
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        Mt64Source src(seed * 101);
        std::vector<std::size_t> counts(w.size(), 0);
        const std::size_t runs = 100'000;
        for (std::size_t i = 0; i < runs; ++i) {
            ReservoirSampler r(1, Rational{}, src, 0);
            for (const auto& l : w) r.push(l);
            ++counts[*r.starts()[0]];
        }
        for (std::size_t j = 0; j < w.size(); ++j)
            CHECK(std::abs(double(counts[j]) / double(runs) - w[j].delay.to_double() / T) <= 0.005);
        CHECK(chi_square_p(counts, w, runs) > 0.01);
    }
}

TEST_CASE("reservoir slot probabilities are exact on a grid") {
    // With a source walking the full grid, a single push replaces exactly
    // tau_j / W_j of the grid.
    auto w = W({{"a", "1"}, {"b", "3"}, {"a", "4"}});
    TimeValue seen;
    for (const auto& l : w) {
        seen += l.delay;
        const auto t = unit_threshold(l.delay, seen);
        CHECK(Rational(static_cast<std::int64_t>(t >> 32), std::int64_t{1} << 30) == l.delay / seen);
    }
}
