// Difference-bound matrices over rational bounds.
//
// Index 0 is the zero reference; clock c lives at index c+1. Entry (i,j)
// bounds x_i - x_j. Every public operation leaves the matrix canonical
// (shortest-path closed) or marks the zone empty.
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tmt/automaton.hpp"
#include "tmt/semantics.hpp"

namespace tmt {

struct Bound {
    Rational value;
    bool strict = false;
    bool infinite = false;

    static Bound inf() { return {Rational{}, false, true}; }
    static Bound le(Rational v) { return {std::move(v), false, false}; }
    static Bound lt(Rational v) { return {std::move(v), true, false}; }

    friend Bound operator+(const Bound& a, const Bound& b);
    friend bool operator<(const Bound& a, const Bound& b);
    friend bool operator==(const Bound& a, const Bound& b);
    friend bool operator<=(const Bound& a, const Bound& b) { return !(b < a); }
};

// How to pick a value inside an interval.
enum class Pick {
    Low,     // the smallest admissible value, nudged inside when the end is open
    Middle,  // the midpoint, or lower end plus one when unbounded
};

// A set of reals { t : lower < t < upper } with per-end strictness.
struct Interval {
    Rational lower;
    bool lower_strict = false;
    Bound upper = Bound::inf();

    [[nodiscard]] bool empty() const;
    [[nodiscard]] bool contains(const Rational& t) const;
    [[nodiscard]] Rational pick(Pick how) const;
    [[nodiscard]] std::string str() const;
};

// Gap used to step inside an open interval end.
Rational open_gap();

class Zone {
public:
    // All valuations over `clocks` clocks with every clock >= 0.
    explicit Zone(std::size_t clocks = 0);
    static Zone point(const ClockValuation& v);

    [[nodiscard]] std::size_t clocks() const noexcept { return dim_ - 1; }
    [[nodiscard]] bool is_empty() const noexcept { return empty_; }
    [[nodiscard]] const Bound& at(std::size_t i, std::size_t j) const { return m_[i * dim_ + j]; }

    // Tightens x_i - x_j (raw indices). Returns false once the zone is empty.
    bool constrain(std::size_t i, std::size_t j, const Bound& b);
    bool intersect(const ClockConstraint& c);
    bool intersect(const std::vector<ClockConstraint>& guard);
    // Intersects with a zone whose clocks are a prefix of ours.
    bool intersect_prefix(const Zone& other);

    void up();
    void down();
    void shift(const Rational& t);
    void reset(ClockId c);
    void reset(const std::vector<ClockId>& clocks);
    void free(ClockId c);
    // Classic extrapolation with per-clock ceilings: bounds past the ceiling
    // are forgotten. Exact for reachability of constraints within the ceilings.
    void extrapolate(const std::vector<Rational>& ceiling);

    // Appends k clocks, all equal to zero.
    [[nodiscard]] Zone with_extra_clocks(std::size_t k) const;
    // Appends a copy y_i of every clock x_i with y_i = x_i.
    [[nodiscard]] Zone with_copies() const;
    // Keeps only the first k clocks.
    [[nodiscard]] Zone project_prefix(std::size_t k) const;

    [[nodiscard]] bool includes(const Zone& other) const;
    [[nodiscard]] bool contains(const ClockValuation& v) const;
    [[nodiscard]] Interval interval(ClockId c) const;
    [[nodiscard]] std::optional<ClockValuation> sample(Pick how = Pick::Middle) const;

    [[nodiscard]] std::string str(const std::vector<std::string>& names = {}) const;

    friend bool operator==(const Zone& a, const Zone& b);

private:
    Bound& ref(std::size_t i, std::size_t j) { return m_[i * dim_ + j]; }
    void close();

    std::size_t dim_;
    std::vector<Bound> m_;
    bool empty_ = false;
};

// Delays d such that some v in `from` satisfies `guard` at v+d and lands,
// after `resets`, inside `target`.
Interval delay_window(const Zone& from, const std::vector<ClockConstraint>& guard,
                      const std::vector<ClockId>& resets, const Zone& target);

}  // namespace tmt
