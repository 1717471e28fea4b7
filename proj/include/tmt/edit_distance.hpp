// Timed edit distance: deletions and insertions cost the letter's delay,
// retiming (a,t) to (a,t') costs |t - t'|.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tmt/timed_word.hpp"

namespace tmt {

struct EditOp {
    enum class Kind { Delete, Insert, Retime };
    Kind kind = Kind::Delete;
    std::size_t position = 0;  // in the word as transformed by the preceding ops
    Symbol symbol;             // Insert only
    TimeValue delay;           // Insert: the new letter's delay; Retime: the new delay
    TimeValue cost;
};

const char* kind_name(EditOp::Kind kind);

struct DistanceResult {
    TimeValue absolute;
    Rational relative;               // absolute / max(T1, T2); 0 when both are empty
    bool relative_exceeds_one = false;
    std::vector<EditOp> script;
};

// Quadratic DP with traceback. Scripts put deletions before insertions at
// the same position.
DistanceResult timed_edit_distance(const TimedWord& w1, const TimedWord& w2);

// The DP value alone, in linear memory.
TimeValue timed_edit_cost(const TimedWord& w1, const TimedWord& w2);

struct ApplyResult {
    TimedWord word;
    TimeValue cost;
};

// Applies ops left to right; throws std::out_of_range on a bad position and
// std::invalid_argument when a recorded cost does not match the op.
ApplyResult apply_script(const TimedWord& w, const std::vector<EditOp>& script);

// Exhaustive minimum over monotone matchings; both words must have at most
// `cap` letters (throws std::length_error otherwise).
TimeValue brute_force_distance(const TimedWord& w1, const TimedWord& w2, std::size_t cap = 6);

}  // namespace tmt
