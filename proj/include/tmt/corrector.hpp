// Cut decomposition of a word against one component, links between states
// of a thick component, and the corrector built from both.
#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "tmt/compat.hpp"
#include "tmt/thickness.hpp"

namespace tmt {

struct Cut {
    enum class Kind { Weak, Strong };
    std::size_t position = 0;  // letter index in the input word
    Kind kind = Kind::Weak;
    TimeValue cost;
    std::optional<TimeValue> retimed_to;  // strong cuts fixed by retiming
    bool deleted = false;                 // strong cuts fixed by deletion
};

const char* kind_name(Cut::Kind kind);

struct CutDecomposition {
    std::vector<Cut> cuts;
    std::vector<std::pair<std::size_t, std::size_t>> segments;  // [first, last) between cuts
    // The letters between weak cuts with every strong cut already fixed; each
    // block is compatible with the component on its own.
    std::vector<std::vector<Letter>> blocks;
    TimeValue V;
    TimeValue strong_cost;
    TimeValue weak_cost;
    TimeValue link_bound;  // 3 m B, the cost charged per weak cut

    [[nodiscard]] std::size_t h() const noexcept { return cuts.size(); }
    [[nodiscard]] std::size_t weak_count() const;
};

// Greedy left to right: keep every run that is still compatible; at the
// first letter that kills them all, cut. A letter incompatible from every
// state of C is a strong cut and is retimed to the closest delay the
// surviving runs accept (or deleted when that is cheaper); otherwise the cut
// is weak and the search restarts from all of C at that letter.
CutDecomposition decompose_cuts(const TimedWord& w, NodeId component, const RegionAutomaton& ra,
                                const ComponentGraph& g);

struct LinkOptions {
    std::size_t zone_cap = 200'000;
};

struct Link {
    TimedWord sigma;
    Run run;  // from `from` to `to`, reading sigma
};

// A word leading from `from` to exactly `to` inside C, of weight at most
// 3 m B. Throws std::invalid_argument unless `thickness` says Thick; nullopt
// if the search finds nothing within its cap.
std::optional<Link> link(const RegionAutomaton& ra, const ComponentGraph& g, NodeId component,
                         const ThicknessVerdict& thickness, const RunState& from, const RunState& to,
                         const LinkOptions& opts = {});

struct Correction {
    TimedWord word;
    TimeValue cost;  // edit cost of the changes made
    CutDecomposition cuts;
    std::vector<Link> links;
    Run run;  // a local run of the corrected word inside C
};

// Fixes strong cuts in place and splices a link at every weak cut. Throws
// std::invalid_argument unless the component is thick, std::runtime_error
// if a link cannot be found.
Correction correct_word(const TimedWord& w, NodeId component, const RegionAutomaton& ra, const ComponentGraph& g,
                        const ThicknessVerdict& thickness, const LinkOptions& opts = {});

}  // namespace tmt
