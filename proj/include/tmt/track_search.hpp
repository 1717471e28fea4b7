// Zone search for local runs along a path Pi, with concrete delays.
//
// A configuration is (Pi position, region state, zone). Reading (a, tau)
// translates the zone by tau, applies a matching transition and intersects
// with the target region. A run may stay inside a component position, and
// moves to the next position by one transition; a transient position is
// left after exactly one letter, and a component with an exit state is left
// only from that state.
#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tmt/component_graph.hpp"
#include "tmt/semantics.hpp"
#include "tmt/zone.hpp"

namespace tmt {

// bar-Pi flattened into one position per transient state or component.
struct PiStep {
    NodeId node = 0;
    bool transient = false;
    std::optional<StateId> exit;
};

struct FlatPi {
    std::vector<PiStep> steps;

    [[nodiscard]] std::size_t size() const noexcept { return steps.size(); }
    [[nodiscard]] std::string str(const ComponentGraph& g) const;
};

FlatPi flatten(const std::vector<ExtendedComponent>& bar, const ComponentGraph& g);
// The one-position path made of a single component.
FlatPi single_component(NodeId component);

struct Anchor {
    std::size_t position = 0;  // index into FlatPi::steps
    StateId state = 0;

    friend bool operator==(const Anchor&, const Anchor&) = default;
    friend auto operator<=>(const Anchor&, const Anchor&) = default;
};

// Evidence that a factor is compatible from `start` to `end`: the region
// transitions taken and the zone after every letter (zones[0] is the start).
struct CompatWitness {
    Anchor start;
    Anchor end;
    std::vector<std::size_t> path;  // region-automaton transition indices
    std::vector<Zone> zones;
};

struct SearchStart {
    std::size_t tag = 0;  // configurations with different tags never merge
    Anchor anchor;
    Zone zone;
};

struct TrackOptions {
    bool keep_trace = true;        // needed for witnesses
    std::size_t zone_cap = 500'000;  // configurations per layer; ResourceError beyond
};

class TrackSearch {
public:
    struct Config {
        std::size_t tag = 0;
        Anchor origin;
        Anchor at;
        Zone zone;
        std::size_t node = kNone;  // trace index
    };
    static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

    TrackSearch(const RegionAutomaton& ra, const ComponentGraph& g, const FlatPi& pi, TrackOptions opts = {});

    void start(const std::vector<SearchStart>& starts);
    // Reads one letter; returns false once no configuration survives.
    bool advance(const Letter& letter);
    // Like advance, but leaves the frontier untouched when nothing survives.
    bool try_advance(const Letter& letter);
    void advance_all(std::span<const Letter> letters);

    [[nodiscard]] const std::vector<Config>& frontier() const noexcept { return frontier_; }
    [[nodiscard]] std::size_t letters_read() const noexcept { return read_; }
    [[nodiscard]] std::size_t peak_frontier() const noexcept { return peak_; }

    // Requires keep_trace.
    [[nodiscard]] CompatWitness witness(const Config& c) const;

    // Every state allowed at a position, each paired with its region zone.
    [[nodiscard]] std::vector<SearchStart> starts_at(std::size_t position, std::size_t tag) const;

private:
    bool step(const Letter& letter, bool keep_when_empty);

    struct TraceNode {
        std::size_t parent;
        std::size_t transition;  // region transition, kNone at a root
        Zone zone;
        Anchor at;
    };

    const RegionAutomaton& ra_;
    const ComponentGraph& g_;
    const FlatPi& pi_;
    TrackOptions opts_;
    std::vector<Config> frontier_;
    std::vector<TraceNode> trace_;
    std::size_t read_ = 0;
    std::size_t peak_ = 0;
};

// A concrete local run along region transitions `path` reading `letters`,
// starting in `start` (inside the region of `first_state`) and, if given,
// ending exactly at `target`. The start valuation is chosen from the set of
// starts that can complete the path. nullopt if the path is infeasible.
std::optional<Run> realize_path(const RegionAutomaton& ra, StateId first_state, const Zone& start,
                                std::span<const Letter> letters, const std::vector<std::size_t>& path,
                                const std::optional<ClockValuation>& target = std::nullopt);

}  // namespace tmt
