// Per-symbol delay hulls and the distance lower bound built from them.
#pragma once

#include <map>
#include <optional>
#include <vector>

#include "tmt/region_automaton.hpp"
#include "tmt/timed_word.hpp"
#include "tmt/zone.hpp"

namespace tmt {

// Hull of the delays a symbol can carry in any accepted word: the union of
// the delay windows of every region transition that can still reach F.
class Feasibility {
public:
    explicit Feasibility(const RegionAutomaton& ra);

    // nullopt when the symbol never occurs in an accepted word.
    [[nodiscard]] std::optional<Interval> hull(const Symbol& a) const;

    struct Excess {
        TimeValue total;  // E: forced cost, letter by letter
        TimeValue down;   // the part that can only be paid by shrinking delays
        std::vector<TimeValue> per_letter;
    };
    [[nodiscard]] Excess excess(const TimedWord& w) const;

    // A lower bound on the relative distance from w to the language:
    // E / max(T, T + E - 2 E_down), capped at 1.
    [[nodiscard]] Rational lower_bound(const TimedWord& w) const;

private:
    std::map<Symbol, Interval> hulls_;
};

}  // namespace tmt
