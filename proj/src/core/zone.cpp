#include "tmt/zone.hpp"

#include <sstream>
#include <stdexcept>

namespace tmt {

Bound operator+(const Bound& a, const Bound& b) {
    if (a.infinite || b.infinite) return Bound::inf();
    return {a.value + b.value, a.strict || b.strict, false};
}

bool operator<(const Bound& a, const Bound& b) {
    if (a.infinite) return false;
    if (b.infinite) return true;
    if (a.value != b.value) return a.value < b.value;
    return a.strict && !b.strict;
}

bool operator==(const Bound& a, const Bound& b) {
    if (a.infinite || b.infinite) return a.infinite == b.infinite;
    return a.value == b.value && a.strict == b.strict;
}

Rational open_gap() { return Rational(1, 1024); }

bool Interval::empty() const {
    if (upper.infinite) return false;
    if (lower < upper.value) return false;
    return !(lower == upper.value && !lower_strict && !upper.strict);
}

bool Interval::contains(const Rational& t) const {
    if (lower_strict ? !(t > lower) : t < lower) return false;
    if (upper.infinite) return true;
    return upper.strict ? t < upper.value : t <= upper.value;
}

Rational Interval::pick(Pick how) const {
    if (empty()) throw std::logic_error("pick from an empty interval");
    if (how == Pick::Low) {
        if (!lower_strict) return lower;
        if (upper.infinite) return lower + open_gap();
        return lower + min(open_gap(), (upper.value - lower) / 2);
    }
    if (upper.infinite) return lower + 1;
    if (lower == upper.value) return lower;
    return (lower + upper.value) / 2;
}

std::string Interval::str() const {
    std::string out = lower_strict ? "(" : "[";
    out += lower.str() + ", ";
    out += upper.infinite ? "inf)" : upper.value.str() + (upper.strict ? ")" : "]");
    return out;
}

Zone::Zone(std::size_t clocks) : dim_(clocks + 1), m_(dim_ * dim_, Bound::inf()) {
    for (std::size_t i = 0; i < dim_; ++i) {
        ref(i, i) = Bound::le(0);
        ref(0, i) = Bound::le(0);
    }
}

Zone Zone::point(const ClockValuation& v) {
    Zone z(v.size());
    auto val = [&](std::size_t i) { return i == 0 ? Rational{} : v[i - 1]; };
    for (std::size_t i = 0; i < z.dim_; ++i)
        for (std::size_t j = 0; j < z.dim_; ++j) z.ref(i, j) = Bound::le(val(i) - val(j));
    return z;
}

void Zone::close() {
    for (std::size_t k = 0; k < dim_; ++k)
        for (std::size_t i = 0; i < dim_; ++i) {
            if (at(i, k).infinite) continue;
            for (std::size_t j = 0; j < dim_; ++j) {
                if (at(k, j).infinite) continue;
                Bound via = at(i, k) + at(k, j);
                if (via < at(i, j)) ref(i, j) = std::move(via);
            }
        }
    for (std::size_t i = 0; i < dim_; ++i)
        if (at(i, i) < Bound::le(0)) {
            empty_ = true;
            return;
        }
}

bool Zone::constrain(std::size_t i, std::size_t j, const Bound& b) {
    if (empty_) return false;
    if (!(b < at(i, j))) return true;
    if (b + at(j, i) < Bound::le(0)) {
        empty_ = true;
        return false;
    }
    ref(i, j) = b;
    // The new edge is the only way a shortest path can improve.
    std::vector<Bound> to_i(dim_), from_j(dim_);
    for (std::size_t k = 0; k < dim_; ++k) {
        to_i[k] = at(k, i);
        from_j[k] = at(j, k);
    }
    for (std::size_t k = 0; k < dim_; ++k) {
        if (to_i[k].infinite) continue;
        Bound head = to_i[k] + b;
        for (std::size_t l = 0; l < dim_; ++l) {
            if (from_j[l].infinite) continue;
            Bound via = head + from_j[l];
            if (via < at(k, l)) ref(k, l) = std::move(via);
        }
    }
    return true;
}

bool Zone::intersect(const ClockConstraint& c) {
    std::size_t x = c.clock + 1;
    Rational bound(c.bound);
    switch (c.op) {
    case CmpOp::Lt: return constrain(x, 0, Bound::lt(bound));
    case CmpOp::Le: return constrain(x, 0, Bound::le(bound));
    case CmpOp::Gt: return constrain(0, x, Bound::lt(-bound));
    case CmpOp::Ge: return constrain(0, x, Bound::le(-bound));
    }
    return !empty_;
}

bool Zone::intersect(const std::vector<ClockConstraint>& guard) {
    for (const auto& c : guard)
        if (!intersect(c)) return false;
    return !empty_;
}

bool Zone::intersect_prefix(const Zone& other) {
    if (other.dim_ > dim_) throw std::invalid_argument("zone dimension mismatch");
    if (other.empty_) empty_ = true;
    for (std::size_t i = 0; i < other.dim_ && !empty_; ++i)
        for (std::size_t j = 0; j < other.dim_ && !empty_; ++j)
            if (i != j) constrain(i, j, other.at(i, j));
    return !empty_;
}

void Zone::up() {
    if (empty_) return;
    for (std::size_t i = 1; i < dim_; ++i) ref(i, 0) = Bound::inf();
}

void Zone::down() {
    if (empty_) return;
    for (std::size_t i = 1; i < dim_; ++i) {
        ref(0, i) = Bound::le(0);
        for (std::size_t j = 1; j < dim_; ++j)
            if (at(j, i) < at(0, i)) ref(0, i) = at(j, i);
    }
}

void Zone::shift(const Rational& t) {
    if (empty_) return;
    for (std::size_t i = 1; i < dim_; ++i) {
        if (!at(i, 0).infinite) ref(i, 0).value += t;
        if (!at(0, i).infinite) ref(0, i).value -= t;
    }
    if (t.sign() < 0)
        for (std::size_t i = 1; i < dim_ && !empty_; ++i) constrain(0, i, Bound::le(0));
}

void Zone::reset(ClockId c) {
    if (empty_) return;
    std::size_t i = c + 1;
    for (std::size_t j = 0; j < dim_; ++j) {
        if (j == i) continue;
        ref(i, j) = at(0, j);
        ref(j, i) = at(j, 0);
    }
}

void Zone::reset(const std::vector<ClockId>& clocks) {
    for (auto c : clocks) reset(c);
}

void Zone::free(ClockId c) {
    if (empty_) return;
    std::size_t i = c + 1;
    for (std::size_t j = 0; j < dim_; ++j) {
        if (j == i) continue;
        ref(i, j) = Bound::inf();
        ref(j, i) = at(j, 0);
    }
}

void Zone::extrapolate(const std::vector<Rational>& ceiling) {
    if (empty_) return;
    auto M = [&](std::size_t i) { return i == 0 ? Rational{} : ceiling[i - 1]; };
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) {
            if (i == j || at(i, j).infinite) continue;
            if (M(i) < at(i, j).value) ref(i, j) = Bound::inf();
            else if (at(i, j).value < -M(j)) ref(i, j) = Bound::lt(-M(j));
        }
    close();
}

Zone Zone::with_extra_clocks(std::size_t k) const {
    Zone z(clocks() + k);
    z.empty_ = empty_;
    for (std::size_t i = 0; i < z.dim_; ++i)
        for (std::size_t j = 0; j < z.dim_; ++j) {
            std::size_t a = i < dim_ ? i : 0;
            std::size_t b = j < dim_ ? j : 0;
            z.ref(i, j) = at(a, b);
        }
    return z;
}

Zone Zone::with_copies() const {
    std::size_t n = clocks();
    Zone z(2 * n);
    z.empty_ = empty_;
    auto origin = [n](std::size_t i) { return i > n ? i - n : i; };
    for (std::size_t i = 0; i < z.dim_; ++i)
        for (std::size_t j = 0; j < z.dim_; ++j) z.ref(i, j) = at(origin(i), origin(j));
    return z;
}

Zone Zone::project_prefix(std::size_t k) const {
    Zone z(k);
    z.empty_ = empty_;
    for (std::size_t i = 0; i < z.dim_; ++i)
        for (std::size_t j = 0; j < z.dim_; ++j) z.ref(i, j) = at(i, j);
    return z;
}

bool Zone::includes(const Zone& other) const {
    if (other.empty_) return true;
    if (empty_ || other.dim_ != dim_) return false;
    for (std::size_t k = 0; k < m_.size(); ++k)
        if (m_[k] < other.m_[k]) return false;
    return true;
}

bool Zone::contains(const ClockValuation& v) const {
    if (empty_ || v.size() + 1 != dim_) return false;
    auto val = [&](std::size_t i) { return i == 0 ? Rational{} : v[i - 1]; };
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) {
            const Bound& b = at(i, j);
            if (b.infinite || i == j) continue;
            Rational d = val(i) - val(j);
            if (b.strict ? !(d < b.value) : d > b.value) return false;
        }
    return true;
}

Interval Zone::interval(ClockId c) const {
    if (empty_) return {Rational{}, false, Bound::lt(0)};
    std::size_t i = c + 1;
    return {-at(0, i).value, at(0, i).strict, at(i, 0)};
}

std::optional<ClockValuation> Zone::sample(Pick how) const {
    if (empty_) return std::nullopt;
    Zone z = *this;
    ClockValuation v(clocks());
    for (ClockId c = 0; c < clocks(); ++c) {
        Rational value = z.interval(c).pick(how);
        z.constrain(c + 1, 0, Bound::le(value));
        z.constrain(0, c + 1, Bound::le(-value));
        if (z.empty_) return std::nullopt;  // cannot happen on a canonical zone
        v[c] = std::move(value);
    }
    return v;
}

std::string Zone::str(const std::vector<std::string>& names) const {
    if (empty_) return "false";
    auto name = [&](std::size_t i) {
        if (i == 0) return std::string("0");
        return i - 1 < names.size() ? names[i - 1] : "x" + std::to_string(i - 1);
    };
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) {
            if (i == j || at(i, j).infinite) continue;
            if (i == 0 && at(i, j) == Bound::le(0)) continue;
            if (!first) os << " && ";
            first = false;
            os << name(i) << "-" << name(j) << (at(i, j).strict ? "<" : "<=") << at(i, j).value;
        }
    return first ? "true" : os.str();
}

bool operator==(const Zone& a, const Zone& b) {
    if (a.empty_ || b.empty_) return a.empty_ == b.empty_ && a.dim_ == b.dim_;
    return a.dim_ == b.dim_ && a.m_ == b.m_;
}

Interval delay_window(const Zone& from, const std::vector<ClockConstraint>& guard,
                      const std::vector<ClockId>& resets, const Zone& target) {
    std::size_t n = from.clocks();
    Zone z = from.with_extra_clocks(1);
    z.up();
    z.intersect(guard);
    z.reset(resets);
    z.intersect_prefix(target);
    return z.interval(n);
}

}  // namespace tmt
