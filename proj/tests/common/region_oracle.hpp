// An independent region oracle: region keys computed from integer and
// fractional parts directly, without the library's Region type.
#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "tmt/region.hpp"
#include "tmt/semantics.hpp"

namespace tmt::testing {

// Independent region key: integer parts (or "above c"), zero-fraction flags
// and the order of the fractional parts.
using Key = std::vector<std::int64_t>;

inline Key key_of(const ClockValuation& v, const MaxConstants& c) {
    const std::size_t n = v.size();
    Key k;
    std::vector<Rational> fr;
    for (std::size_t x = 0; x < n; ++x) {
        if (Rational(c[x]) < v[x]) {
            k.push_back(-1);
            continue;
        }
        Rational f = v[x] - v[x].floor();
        k.push_back(v[x].floor().floor_clamped() * 2 + (f.sign() == 0 ? 0 : 1));
        if (f.sign() != 0) fr.push_back(f);
    }
    std::sort(fr.begin(), fr.end());
    fr.erase(std::unique(fr.begin(), fr.end()), fr.end());
    for (std::size_t x = 0; x < n; ++x) {
        if (k[x] < 0 || k[x] % 2 == 0) {
            k.push_back(0);
            continue;
        }
        Rational f = v[x] - v[x].floor();
        k.push_back(std::lower_bound(fr.begin(), fr.end(), f) - fr.begin() + 1);
    }
    return k;
}

// A valuation for a key: rank r gets fractional part r / (classes + 1).
inline ClockValuation canonical(const Key& k, const MaxConstants& c) {
    const std::size_t n = c.size();
    std::int64_t classes = 0;
    for (std::size_t x = 0; x < n; ++x) classes = std::max(classes, k[n + x]);
    ClockValuation v(n);
    for (std::size_t x = 0; x < n; ++x) {
        if (k[x] < 0) v[x] = Rational(c[x] + 1);
        else v[x] = Rational(k[x] / 2) + Rational(k[n + x], classes + 1);
    }
    return v;
}

inline Rational random_value(std::mt19937_64& gen, std::int64_t top) {
    const std::int64_t den = 1 + static_cast<std::int64_t>(gen() % 8);
    return Rational(static_cast<std::int64_t>(gen() % static_cast<std::uint64_t>((top + 2) * den + 1)), den);
}

// Delays that land v in every time successor region: each boundary hit and
// the midpoints between consecutive ones.
inline std::vector<Rational> successor_delays(const ClockValuation& v, std::int64_t top) {
    std::vector<Rational> hits{Rational{}};
    for (const auto& x : v)
        for (std::int64_t k = 0; k <= top + 1; ++k)
            if (x < Rational(k)) hits.push_back(Rational(k) - x);
    std::sort(hits.begin(), hits.end());
    hits.erase(std::unique(hits.begin(), hits.end()), hits.end());
    std::vector<Rational> out = hits;
    for (std::size_t i = 0; i + 1 < hits.size(); ++i) out.push_back((hits[i] + hits[i + 1]) / 2);
    out.push_back(hits.back() + 1);
    return out;
}


// Counts valuations violating one of the three partition conditions: guard
// agreement, time elapse and resets.
inline std::size_t partition_violations(const TimedAutomaton& a, std::mt19937_64& gen, int samples) {
    const auto& c = a.clock_max_constants();
    const std::size_t n = a.num_clocks();
    std::int64_t top = n ? *std::max_element(c.begin(), c.end()) : 0;
    std::size_t violations = 0;
    for (int i = 0; i < samples; ++i) {
        ClockValuation v(n);
        for (auto& x : v) x = random_value(gen, top);
        Region r = Region::of(v, c);
        ClockValuation w = r.interior_point(1 + static_cast<unsigned>(gen() % 3), c);
        if (!(Region::of(w, c) == r)) ++violations;
        for (const auto& t : a.transitions())
            for (const auto& atom : t.guard)
                if (atom.satisfied_by(v[atom.clock]) != atom.satisfied_by(w[atom.clock])) ++violations;
        Rational d = random_value(gen, top);
        Key target = key_of(elapse(v, d), c);
        bool matched = false;
        for (const auto& d2 : successor_delays(w, top))
            if (key_of(elapse(w, d2), c) == target) matched = true;
        if (!matched) ++violations;
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            std::vector<ClockId> ys;
            for (ClockId x = 0; x < n; ++x)
                if (mask & (1u << x)) ys.push_back(x);
            if (key_of(reset(v, ys), c) != key_of(reset(w, ys), c)) ++violations;
        }
    }
    return violations;
}

}  // namespace tmt::testing
