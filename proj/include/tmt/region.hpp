// Alur-Dill regions with per-clock maximal constants.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tmt/automaton.hpp"
#include "tmt/semantics.hpp"
#include "tmt/zone.hpp"

namespace tmt {

using MaxConstants = std::vector<std::int64_t>;

// Canonical encoding: fractional parts of non-saturated clocks are ranked
// 1..r by increasing value, rank 0 meaning "fractional part is zero".
// Saturated clocks carry integer 0 and rank 0, so equality is syntactic.
struct ClockRegion {
    std::int64_t integer = 0;
    bool saturated = false;
    std::uint32_t rank = 0;

    friend bool operator==(const ClockRegion&, const ClockRegion&) = default;
    friend auto operator<=>(const ClockRegion&, const ClockRegion&) = default;
};

class Region {
public:
    Region() = default;
    static Region zero(std::size_t clocks);
    static Region of(const ClockValuation& v, const MaxConstants& maxc);

    [[nodiscard]] std::size_t clocks() const noexcept { return clocks_.size(); }
    [[nodiscard]] const ClockRegion& clock(ClockId c) const { return clocks_[c]; }
    [[nodiscard]] std::uint32_t classes() const noexcept { return classes_; }
    [[nodiscard]] bool all_saturated() const;

    [[nodiscard]] bool satisfies(const ClockConstraint& c, const MaxConstants& maxc) const;
    [[nodiscard]] bool satisfies(const std::vector<ClockConstraint>& guard, const MaxConstants& maxc) const;

    // The next region reached by letting time elapse, if any.
    [[nodiscard]] std::optional<Region> successor(const MaxConstants& maxc) const;
    [[nodiscard]] Region reset(const std::vector<ClockId>& clocks) const;

    [[nodiscard]] Zone zone(const MaxConstants& maxc) const;
    [[nodiscard]] bool contains(const ClockValuation& v, const MaxConstants& maxc) const;

    // Vertices of the topological closure; saturated clocks sit at c_x and
    // additionally recede along their own axis.
    [[nodiscard]] std::vector<ClockValuation> closure_vertices(const MaxConstants& maxc) const;
    [[nodiscard]] std::vector<ClockId> recession_clocks() const;

    // A valuation in the region. class_values[i] is the fractional part of
    // rank i+1 and must be strictly increasing inside (0,1); saturated clocks
    // get c_x + saturated_extra (which must be positive).
    [[nodiscard]] ClockValuation point(const std::vector<Rational>& class_values, const Rational& saturated_extra,
                                       const MaxConstants& maxc) const;
    // Evenly spread interior points, variant = 1, 2, 3, ...
    [[nodiscard]] ClockValuation interior_point(unsigned variant, const MaxConstants& maxc) const;

    [[nodiscard]] std::string str(const std::vector<std::string>& names, const MaxConstants& maxc) const;

    friend bool operator==(const Region&, const Region&) = default;
    friend auto operator<=>(const Region&, const Region&) = default;
    [[nodiscard]] std::size_t hash() const noexcept;

private:
    void normalize();

    std::vector<ClockRegion> clocks_;
    std::uint32_t classes_ = 0;
};

Region region_of(const ClockValuation& v, const TimedAutomaton& a);

// R itself followed by every later time successor, in elapse order.
std::vector<Region> time_successors(const Region& r, const MaxConstants& maxc);

// Every region of the partition (exponential; for tests and small tools).
std::vector<Region> enumerate_regions(const MaxConstants& maxc);

}  // namespace tmt

template <>
struct std::hash<tmt::Region> {
    std::size_t operator()(const tmt::Region& r) const noexcept { return r.hash(); }
};
