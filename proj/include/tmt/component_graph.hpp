// Condensation of the region automaton and the paths Pi / bar-Pi over it.
#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "tmt/region_automaton.hpp"

namespace tmt {

using NodeId = std::size_t;

// A node of the condensation: either a component (an SCC with at least one
// internal transition) or a transient state (singleton SCC, no self-loop).
struct GraphNode {
    std::vector<StateId> states;
    bool transient = false;
    bool has_final = false;
    bool has_initial = false;
};

class ComponentGraph {
public:
    static ComponentGraph condense(const RegionAutomaton& ra);

    [[nodiscard]] const std::vector<GraphNode>& nodes() const noexcept { return nodes_; }
    [[nodiscard]] const GraphNode& node(NodeId n) const { return nodes_[n]; }
    [[nodiscard]] NodeId node_of(StateId s) const { return node_of_[s]; }
    [[nodiscard]] const std::vector<NodeId>& successors(NodeId n) const { return succ_[n]; }
    [[nodiscard]] const std::vector<NodeId>& initial_nodes() const noexcept { return initial_; }

    [[nodiscard]] std::vector<NodeId> components() const;
    [[nodiscard]] std::vector<StateId> transient_states() const;
    [[nodiscard]] std::size_t edge_count() const;

    // l: the largest number of extended components on a path from an
    // initial node. Transient states are folded into the component that
    // follows them, or form one trailing extended component of their own.
    [[nodiscard]] std::size_t diameter() const noexcept { return diameter_; }

private:
    std::vector<GraphNode> nodes_;
    std::vector<NodeId> node_of_;
    std::vector<std::vector<NodeId>> succ_;
    std::vector<NodeId> initial_;
    std::size_t diameter_ = 0;
};

struct ExtendedComponent {
    std::vector<StateId> prefix;         // transient states, in order
    std::optional<NodeId> component;     // absent for a trailing run of transients
    std::optional<StateId> exit_state;   // where the path leaves the component
};

// A path of the condensation together with one choice of exit state for
// every component that is not last.
struct PathPi {
    std::vector<NodeId> nodes;
    std::vector<std::optional<StateId>> exits;

    [[nodiscard]] std::vector<ExtendedComponent> bar_form(const ComponentGraph& g) const;
};

struct PathEnumeration {
    std::vector<PathPi> paths;
    bool truncated = false;
};

// Paths from an initial node to any node holding a final state, with every
// exit-state choice expanded. Stops after `cap` bar forms.
PathEnumeration enumerate_paths(const ComponentGraph& g, const RegionAutomaton& ra, std::size_t cap = 10'000);

}  // namespace tmt
