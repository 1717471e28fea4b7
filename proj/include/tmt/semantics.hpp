// Concrete run semantics: valuations, single steps, exact membership.
#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "tmt/automaton.hpp"
#include "tmt/timed_word.hpp"

namespace tmt {

// One value per declared clock, indexed by ClockId.
using ClockValuation = std::vector<TimeValue>;

ClockValuation zero_valuation(const TimedAutomaton& a);
ClockValuation elapse(ClockValuation v, const TimeValue& t);
ClockValuation reset(ClockValuation v, const std::vector<ClockId>& clocks);
bool satisfies(const ClockValuation& v, const std::vector<ClockConstraint>& guard);

struct RunState {
    LocationId location = 0;
    ClockValuation valuation;

    friend bool operator==(const RunState&, const RunState&) = default;
};

struct RunStateHash {
    std::size_t operator()(const RunState& s) const noexcept;
};

// A run reads letter i on transitions[i], going from states[i] to states[i+1].
struct Run {
    std::vector<RunState> states;
    std::vector<TransitionId> transitions;
};

class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Successor {
    RunState state;
    TransitionId via;
};

std::vector<Successor> successors(const RunState& s, const TimeValue& delay, SymbolId symbol, const TimedAutomaton& a);

// Every successor over transitions labelled `symbol`; unknown symbols give none.
std::vector<RunState> step(const RunState& s, const TimeValue& delay, const Symbol& symbol, const TimedAutomaton& a);

struct MembershipOptions {
    std::size_t state_cap = 1'000'000;  // per position, throws ResourceError beyond
};

struct MembershipResult {
    bool accepted = false;
    std::optional<Run> witness;
};

MembershipResult membership_exact(const TimedAutomaton& a, const TimedWord& w, const MembershipOptions& opts = {});

struct LocalRunResult {
    bool exists = false;
    std::vector<RunState> end_states;
};

LocalRunResult local_run_exists(const RunState& start, const TimedWord& u, const TimedAutomaton& a,
                                const MembershipOptions& opts = {});

// True iff `run` reads `w` step by step under the semantics above.
bool replay_run(const Run& run, const TimedWord& w, const TimedAutomaton& a);

}  // namespace tmt
