// Compatibility of factors with components and with paths bar-Pi.
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tmt/sampling.hpp"
#include "tmt/track_search.hpp"

namespace tmt {

struct ComponentCompat {
    bool compatible = false;
    std::optional<CompatWitness> witness;  // from the smallest start state that works
};

// Is there a local run reading u whose region path stays inside C?
ComponentCompat factor_compatible_component(std::span<const Letter> u, NodeId component, const RegionAutomaton& ra,
                                            const ComponentGraph& g);

// Every (start, end) anchor pair on pi between which u is compatible.
std::vector<std::pair<Anchor, Anchor>> a1_pairs(std::span<const Letter> u, const FlatPi& pi,
                                                const RegionAutomaton& ra, const ComponentGraph& g);

struct A2Result {
    bool compatible = false;
    std::vector<Factor> tested;  // the factors after joining adjacent ones
    std::vector<CompatWitness> witnesses;  // one per tested factor, when compatible
    std::string reason;
};

// Chooses anchors for the ordered factors so that they respect the order of
// pi. Factors that touch are tested as their union. The gaps between them
// bound how far along pi the run can move (one letter per step); a factor
// that starts the word starts at an initial state with all clocks zero, and
// one that ends the word ends in a final state at the end of pi.
A2Result a2_compatible(const std::vector<Factor>& factors, std::size_t word_length, const FlatPi& pi,
                       const RegionAutomaton& ra, const ComponentGraph& g);

// Exact membership among the runs that follow pi from an initial state.
bool restricted_membership(std::span<const Letter> w, const FlatPi& pi, const RegionAutomaton& ra,
                           const ComponentGraph& g);

// A concrete local run reproducing a witness over its factor.
std::optional<Run> realize_witness(const RegionAutomaton& ra, const CompatWitness& witness,
                                   std::span<const Letter> letters);

}  // namespace tmt
