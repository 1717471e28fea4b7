#include "tmt/region.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace tmt {

Region Region::zero(std::size_t clocks) {
    Region r;
    r.clocks_.assign(clocks, ClockRegion{});
    return r;
}

void Region::normalize() {
    std::vector<std::uint32_t> ranks;
    for (auto& c : clocks_) {
        if (c.saturated) {
            c.integer = 0;
            c.rank = 0;
        } else if (c.rank > 0) {
            ranks.push_back(c.rank);
        }
    }
    std::sort(ranks.begin(), ranks.end());
    ranks.erase(std::unique(ranks.begin(), ranks.end()), ranks.end());
    for (auto& c : clocks_)
        if (!c.saturated && c.rank > 0)
            c.rank = static_cast<std::uint32_t>(std::lower_bound(ranks.begin(), ranks.end(), c.rank) - ranks.begin()) + 1;
    classes_ = static_cast<std::uint32_t>(ranks.size());
}

Region Region::of(const ClockValuation& v, const MaxConstants& maxc) {
    Region r;
    r.clocks_.resize(v.size());
    std::vector<Rational> fracs;
    for (ClockId x = 0; x < v.size(); ++x) {
        if (v[x] > Rational(maxc[x])) {
            r.clocks_[x].saturated = true;
            continue;
        }
        Rational f = v[x].floor();
        r.clocks_[x].integer = f.floor_clamped();
        Rational frac = v[x] - f;
        if (!frac.is_zero()) fracs.push_back(frac);
    }
    std::sort(fracs.begin(), fracs.end());
    fracs.erase(std::unique(fracs.begin(), fracs.end()), fracs.end());
    for (ClockId x = 0; x < v.size(); ++x) {
        if (r.clocks_[x].saturated) continue;
        Rational frac = v[x] - v[x].floor();
        if (frac.is_zero()) continue;
        r.clocks_[x].rank = static_cast<std::uint32_t>(std::lower_bound(fracs.begin(), fracs.end(), frac) - fracs.begin()) + 1;
    }
    r.classes_ = static_cast<std::uint32_t>(fracs.size());
    return r;
}

Region region_of(const ClockValuation& v, const TimedAutomaton& a) { return Region::of(v, a.clock_max_constants()); }

bool Region::all_saturated() const {
    return std::all_of(clocks_.begin(), clocks_.end(), [](const ClockRegion& c) { return c.saturated; });
}

bool Region::satisfies(const ClockConstraint& c, const MaxConstants&) const {
    const ClockRegion& r = clocks_[c.clock];
    if (r.saturated) return c.op == CmpOp::Gt || c.op == CmpOp::Ge;
    std::int64_t k = r.integer;
    if (r.rank == 0) {
        switch (c.op) {
        case CmpOp::Lt: return k < c.bound;
        case CmpOp::Le: return k <= c.bound;
        case CmpOp::Ge: return k >= c.bound;
        case CmpOp::Gt: return k > c.bound;
        }
    }
    switch (c.op) {
    case CmpOp::Lt:
    case CmpOp::Le: return k + 1 <= c.bound;
    case CmpOp::Ge:
    case CmpOp::Gt: return k >= c.bound;
    }
    return false;
}

bool Region::satisfies(const std::vector<ClockConstraint>& guard, const MaxConstants& maxc) const {
    return std::all_of(guard.begin(), guard.end(), [&](const ClockConstraint& c) { return satisfies(c, maxc); });
}

std::optional<Region> Region::successor(const MaxConstants& maxc) const {
    Region next = *this;
    bool any_zero = false;
    bool any_positive = false;
    for (const auto& c : clocks_) {
        if (c.saturated) continue;
        (c.rank == 0 ? any_zero : any_positive) = true;
    }
    if (any_zero) {
        // Zero fractional parts become the smallest positive ones, or leave
        // the bounded part if they sit on c_x.
        for (ClockId x = 0; x < clocks_.size(); ++x) {
            auto& c = next.clocks_[x];
            if (c.saturated) continue;
            if (c.rank == 0) {
                if (c.integer >= maxc[x]) c.saturated = true;
                else c.rank = 1;
            } else {
                c.rank += 1;
            }
        }
    } else if (any_positive) {
        // The largest fractional parts reach the next integer.
        for (auto& c : next.clocks_) {
            if (c.saturated || c.rank != classes_) continue;
            c.integer += 1;
            c.rank = 0;
        }
    } else {
        return std::nullopt;
    }
    next.normalize();
    return next;
}

Region Region::reset(const std::vector<ClockId>& clocks) const {
    Region r = *this;
    for (auto x : clocks) r.clocks_[x] = ClockRegion{};
    r.normalize();
    return r;
}

Zone Region::zone(const MaxConstants& maxc) const {
    Zone z(clocks_.size());
    for (ClockId x = 0; x < clocks_.size(); ++x) {
        const auto& c = clocks_[x];
        std::size_t i = x + 1;
        if (c.saturated) {
            z.constrain(0, i, Bound::lt(-Rational(maxc[x])));
        } else if (c.rank == 0) {
            z.constrain(i, 0, Bound::le(c.integer));
            z.constrain(0, i, Bound::le(-Rational(c.integer)));
        } else {
            z.constrain(i, 0, Bound::lt(c.integer + 1));
            z.constrain(0, i, Bound::lt(-Rational(c.integer)));
        }
    }
    for (ClockId x = 0; x < clocks_.size(); ++x)
        for (ClockId y = 0; y < clocks_.size(); ++y) {
            const auto& a = clocks_[x];
            const auto& b = clocks_[y];
            if (x == y || a.saturated || b.saturated || a.rank == 0 || b.rank == 0) continue;
            Rational diff(a.integer - b.integer);
            if (a.rank == b.rank) z.constrain(x + 1, y + 1, Bound::le(diff));
            else if (a.rank < b.rank) z.constrain(x + 1, y + 1, Bound::lt(diff));
        }
    return z;
}

bool Region::contains(const ClockValuation& v, const MaxConstants& maxc) const { return Region::of(v, maxc) == *this; }

std::vector<ClockValuation> Region::closure_vertices(const MaxConstants& maxc) const {
    std::vector<ClockValuation> out;
    for (std::uint32_t j = 0; j <= classes_; ++j) {
        ClockValuation v(clocks_.size());
        for (ClockId x = 0; x < clocks_.size(); ++x) {
            const auto& c = clocks_[x];
            if (c.saturated) v[x] = Rational(maxc[x]);
            else if (c.rank == 0) v[x] = Rational(c.integer);
            else v[x] = Rational(c.integer + (c.rank <= j ? 0 : 1));
        }
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<ClockId> Region::recession_clocks() const {
    std::vector<ClockId> out;
    for (ClockId x = 0; x < clocks_.size(); ++x)
        if (clocks_[x].saturated) out.push_back(x);
    return out;
}

ClockValuation Region::point(const std::vector<Rational>& class_values, const Rational& saturated_extra,
                             const MaxConstants& maxc) const {
    ClockValuation v(clocks_.size());
    for (ClockId x = 0; x < clocks_.size(); ++x) {
        const auto& c = clocks_[x];
        if (c.saturated) v[x] = Rational(maxc[x]) + saturated_extra;
        else if (c.rank == 0) v[x] = Rational(c.integer);
        else v[x] = Rational(c.integer) + class_values.at(c.rank - 1);
    }
    return v;
}

ClockValuation Region::interior_point(unsigned variant, const MaxConstants& maxc) const {
    std::vector<Rational> values;
    auto den = static_cast<std::int64_t>(classes_ + variant);
    for (std::uint32_t i = 1; i <= classes_; ++i) values.emplace_back(static_cast<std::int64_t>(i), den);
    return point(values, Rational(static_cast<std::int64_t>(variant)), maxc);
}

std::string Region::str(const std::vector<std::string>& names, const MaxConstants& maxc) const {
    std::string out;
    auto name = [&](ClockId x) { return x < names.size() ? names[x] : "x" + std::to_string(x); };
    for (ClockId x = 0; x < clocks_.size(); ++x) {
        const auto& c = clocks_[x];
        if (!out.empty()) out += ", ";
        if (c.saturated) out += name(x) + ">" + std::to_string(maxc[x]);
        else if (c.rank == 0) out += name(x) + "=" + std::to_string(c.integer);
        else out += std::to_string(c.integer) + "<" + name(x) + "<" + std::to_string(c.integer + 1);
    }
    if (classes_ > 0) {
        std::map<std::uint32_t, std::vector<ClockId>> by_rank;
        for (ClockId x = 0; x < clocks_.size(); ++x)
            if (!clocks_[x].saturated && clocks_[x].rank > 0) by_rank[clocks_[x].rank].push_back(x);
        std::size_t positive = 0;
        for (auto& [rank, xs] : by_rank) positive += xs.size();
        if (positive > 1) {
            out += ", frac ";
            bool first = true;
            for (auto& [rank, xs] : by_rank) {
                if (!first) out += "<";
                first = false;
                for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "=" : "") + name(xs[i]);
            }
        }
    }
    return "{" + out + "}";
}

std::size_t Region::hash() const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (const auto& c : clocks_) {
        std::size_t v = static_cast<std::size_t>(c.integer) * 31 + c.rank * 7 + (c.saturated ? 1 : 0);
        h ^= v + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

std::vector<Region> time_successors(const Region& r, const MaxConstants& maxc) {
    std::vector<Region> out{r};
    while (auto next = out.back().successor(maxc)) out.push_back(std::move(*next));
    return out;
}

std::vector<Region> enumerate_regions(const MaxConstants& maxc) {
    std::size_t n = maxc.size();
    std::vector<Region> out;

    // Integer parts first, then every ranking of the clocks with positive
    // fractional part that uses ranks 1..r without gaps.
    std::vector<ClockRegion> shape(n);
    std::vector<bool> positive(n, false);
    std::function<void(std::size_t)> integer_parts = [&](std::size_t x) {
        if (x == n) {
            std::vector<ClockId> pos;
            for (ClockId c = 0; c < n; ++c)
                if (positive[c]) pos.push_back(c);
            std::vector<std::uint32_t> rank(pos.size(), 1);
            while (true) {
                std::uint32_t top = 0;
                for (auto r : rank) top = std::max(top, r);
                std::vector<bool> used(top + 1, false);
                for (auto r : rank) used[r] = true;
                bool gapless = true;
                for (std::uint32_t r = 1; r <= top; ++r) gapless = gapless && used[r];
                if (gapless) {
                    std::vector<ClockRegion> cs = shape;
                    for (std::size_t i = 0; i < pos.size(); ++i) cs[pos[i]].rank = rank[i];
                    std::vector<Rational> class_values;
                    for (std::uint32_t r = 1; r <= top; ++r) class_values.emplace_back(static_cast<std::int64_t>(r), static_cast<std::int64_t>(top) + 1);
                    ClockValuation v(n);
                    for (ClockId c = 0; c < n; ++c) {
                        if (cs[c].saturated) v[c] = Rational(maxc[c] + 1);
                        else if (cs[c].rank == 0) v[c] = Rational(cs[c].integer);
                        else v[c] = Rational(cs[c].integer) + class_values[cs[c].rank - 1];
                    }
                    out.push_back(Region::of(v, maxc));
                }
                std::size_t i = 0;
                while (i < rank.size() && rank[i] == rank.size()) rank[i++] = 1;
                if (i == rank.size()) break;
                ++rank[i];
            }
            return;
        }
        shape[x] = ClockRegion{0, true, 0};
        positive[x] = false;
        integer_parts(x + 1);
        for (std::int64_t k = 0; k <= maxc[x]; ++k) {
            shape[x] = ClockRegion{k, false, 0};
            positive[x] = false;
            integer_parts(x + 1);
            if (k < maxc[x]) {
                positive[x] = true;
                integer_parts(x + 1);
            }
        }
        positive[x] = false;
    };
    integer_parts(0);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace tmt
