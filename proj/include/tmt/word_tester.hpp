// The word tester: sample factors, then look for anchors along some bar-Pi.
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tmt/compat.hpp"
#include "tmt/thickness.hpp"

namespace tmt {

struct TesterParams {
    Rational epsilon;
    std::size_t l = 1;
    std::size_t m = 1;
    std::int64_t B = 0;
    TimeValue k;
    unsigned sample_weight_multiplier = 1;  // factors are drawn with weight k * multiplier
    std::size_t retry_cap = 16;

    [[nodiscard]] TimeValue sample_weight() const { return k * Rational(sample_weight_multiplier); }
};

// k = 24 l m B / epsilon unless overridden. epsilon must lie in (0, 1).
TesterParams derive_params(std::size_t l, std::size_t m, std::int64_t B, const Rational& epsilon,
                           const std::optional<TimeValue>& k_override = std::nullopt, unsigned multiplier = 1);

struct ContextOptions {
    RegionBuildOptions regions;
    std::size_t path_cap = 10'000;
    bool classify = true;  // run the thickness check on every component
    ThicknessOptions thickness;
};

// Everything derived from the automaton alone, built once and shared.
struct TesterContext {
    RegionAutomaton ra;
    ComponentGraph g;
    std::vector<FlatPi> paths;
    bool paths_truncated = false;
    std::vector<std::pair<NodeId, ThicknessVerdict>> thickness;
    std::vector<std::string> warnings;

    static TesterContext build(const TimedAutomaton& a, const ContextOptions& opts = {});
    [[nodiscard]] TesterParams params(const Rational& epsilon, const std::optional<TimeValue>& k_override = std::nullopt,
                                      unsigned multiplier = 1) const;
};

struct Verdict {
    bool accept = false;
    bool fallback_used = false;
    std::size_t pi_count = 0;
    std::size_t pi_tried = 0;
    std::optional<std::size_t> accepting_pi;
    std::size_t samples_drawn = 0;  // over every path tried
    SampleSet samples;              // of the accepting path, else of the last one tried
    std::vector<CompatWitness> witnesses;
    TimeValue k_used;
    std::string reason;
};

// Returns the position source for path number i.
using PositionFactory = std::function<std::unique_ptr<PositionSource>(std::size_t pi_index, const TimedWord& w)>;

Verdict word_tester_along(const TimedWord& w, const FlatPi& pi, const TesterContext& ctx, const TesterParams& params,
                          PositionSource& positions);

// Tries every bar-Pi in order with its own sub-seed and accepts as soon as
// one accepts. `factory` replaces the mu sampler (used to replay draws).
Verdict word_tester(const TimedWord& w, const TesterContext& ctx, const TesterParams& params, std::uint64_t seed,
                    const PositionFactory& factory = nullptr);

Verdict word_tester(const TimedWord& w, const TimedAutomaton& a, const Rational& epsilon, std::uint64_t seed);

}  // namespace tmt
