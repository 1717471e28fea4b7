// Thick/thin classification of components via forgetful cycles.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tmt/component_graph.hpp"

namespace tmt {

struct ThicknessVerdict {
    enum class Kind { Thick, Thin, Unknown };
    Kind kind = Kind::Unknown;
    std::vector<std::size_t> cycle;  // region-automaton transition indices, for Thick
    unsigned power = 0;              // the cycle is iterated this many times
    std::string reason;
};

const char* kind_name(ThicknessVerdict::Kind kind);

struct ThicknessOptions {
    std::size_t cycle_cap = 2000;   // simple cycles examined
    unsigned max_power = 3;         // cycle iterations tried
    std::size_t zone_cap = 20'000;  // zones per reachability proof
};

// True iff, starting anywhere in the region of the state the rotation starts
// from, iterating `power` times the cycle rotated by `rotation` can reach
// every valuation of that region. Decided exactly over the closure vertices.
bool orbit_complete(const RegionAutomaton& ra, const std::vector<std::size_t>& cycle, std::size_t rotation,
                    unsigned power);

// Simple cycles of a component, shortest first, at most `cap` of them.
std::vector<std::vector<std::size_t>> component_cycles(const ComponentGraph& g, NodeId component,
                                                       const RegionAutomaton& ra, std::size_t cap, bool* truncated);

ThicknessVerdict is_thick(const ComponentGraph& g, NodeId component, const RegionAutomaton& ra,
                          const ThicknessOptions& opts = {});

}  // namespace tmt
