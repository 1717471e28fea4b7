// The region automaton, pruned to states reachable from I x {R_0}.
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "tmt/automaton.hpp"
#include "tmt/region.hpp"
#include "tmt/semantics.hpp"
#include "tmt/zone.hpp"

namespace tmt {

using StateId = std::size_t;

struct RegionState {
    LocationId location = 0;
    Region region;

    friend bool operator==(const RegionState&, const RegionState&) = default;
};

struct RegionStateHash {
    std::size_t operator()(const RegionState& s) const noexcept { return s.region.hash() * 31 + s.location; }
};

struct RegionTransition {
    StateId source = 0;
    TransitionId edge = 0;  // the automaton transition it abstracts
    StateId target = 0;
};

struct RegionBuildOptions {
    std::size_t state_cap = 1'000'000;
};

class RegionAutomaton {
public:
    // Throws ResourceError when the cap is exceeded.
    static RegionAutomaton build(const TimedAutomaton& a, const RegionBuildOptions& opts = {});

    [[nodiscard]] const TimedAutomaton& automaton() const noexcept { return automaton_; }
    [[nodiscard]] const MaxConstants& max_constants() const noexcept { return automaton_.clock_max_constants(); }

    // m, the number of reachable states.
    [[nodiscard]] std::size_t size() const noexcept { return states_.size(); }
    [[nodiscard]] const RegionState& state(StateId s) const { return states_[s]; }
    [[nodiscard]] const Zone& zone(StateId s) const { return zones_[s]; }
    [[nodiscard]] const std::vector<RegionTransition>& transitions() const noexcept { return transitions_; }
    [[nodiscard]] std::span<const std::size_t> outgoing(StateId s) const { return outgoing_[s]; }
    [[nodiscard]] std::span<const std::size_t> incoming(StateId s) const { return incoming_[s]; }
    [[nodiscard]] const std::vector<StateId>& initial_states() const noexcept { return initial_; }
    [[nodiscard]] bool is_initial(StateId s) const;
    [[nodiscard]] bool is_final(StateId s) const { return automaton_.is_final(states_[s].location); }

    [[nodiscard]] std::optional<StateId> find(const RegionState& rs) const;
    [[nodiscard]] std::optional<StateId> find(LocationId q, const ClockValuation& v) const;
    [[nodiscard]] bool has_transition(StateId from, TransitionId edge, StateId to) const;

    [[nodiscard]] std::string describe(StateId s) const;

    // Accepts untime(w) when read as a finite automaton over symbols.
    [[nodiscard]] bool accepts_untimed(const std::vector<Symbol>& word) const;

private:
    TimedAutomaton automaton_;
    std::vector<RegionState> states_;
    std::vector<Zone> zones_;
    std::vector<RegionTransition> transitions_;
    std::vector<std::vector<std::size_t>> outgoing_;
    std::vector<std::vector<std::size_t>> incoming_;
    std::vector<StateId> initial_;
    std::unordered_map<RegionState, StateId, RegionStateHash> index_;
};

// The region path of a concrete run, or nullopt if some step is missing.
std::optional<std::vector<StateId>> project_run(const RegionAutomaton& ra, const Run& run);

std::string region_automaton_json(const RegionAutomaton& ra);
std::string region_automaton_dot(const RegionAutomaton& ra);

}  // namespace tmt
