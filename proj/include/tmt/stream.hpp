// Stream mode: one pass over the letters, memory bounded by the factor
// windows and the automaton, never by the word length.
#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "tmt/word_tester.hpp"

namespace tmt {

using LetterSource = std::function<std::optional<Letter>()>;

struct StreamResult {
    Verdict verdict;
    std::size_t letters = 0;
    TimeValue weight;
    // Final start position of every reservoir slot, per bar-Pi. Feeding these
    // to file mode through ReplayPositions reproduces the samples.
    std::vector<std::vector<std::size_t>> slot_starts;
    std::size_t peak_buffered = 0;  // letters held in factor windows
};

// Every bar-Pi gets its own reservoir seeded like file mode, plus an exact
// search along the path used when the stream is too light to sample.
StreamResult stream_test(const LetterSource& next, const TesterContext& ctx, const TesterParams& params,
                         std::uint64_t seed);
StreamResult stream_test(std::istream& in, const TesterContext& ctx, const TesterParams& params, std::uint64_t seed);

// File mode driven by recorded slot starts.
PositionFactory replay_factory(const std::vector<std::vector<std::size_t>>& slot_starts);

}  // namespace tmt
