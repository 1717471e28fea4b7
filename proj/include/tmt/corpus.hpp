// Test inputs: random accepted words, component words, and far words with
// certificates.
#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tmt/edit_distance.hpp"
#include "tmt/feasibility.hpp"
#include "tmt/random.hpp"
#include "tmt/word_tester.hpp"

namespace tmt {

class EmptyLanguageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Delays are drawn on a 1/1024 grid inside each transition's window.
Rational grid_delay(const Interval& window, UnitSource& src, const Rational& span_cap = Rational(2));

// A random accepted word of weight about `target` (the final steps towards F
// may add a little). The walk lingers in each component for its share of
// the target before moving on. Every word is checked by membership_exact.
TimedWord generate_accepted(const TesterContext& ctx, const TimeValue& target, UnitSource& src);

// A random word compatible with `component`, read from a valuation inside
// one of its regions. Stops short of the target when the walk stalls on
// zero delays.
TimedWord generate_component_word(const TesterContext& ctx, NodeId component, const TimeValue& target,
                                  UnitSource& src);

struct FarCertificate {
    enum class Claim {
        UpperBoundOnly,  // only the script cost is known
        CertifiedFar,    // the feasibility lower bound exceeds epsilon
        ExactSmallScale, // a brute-force search met the lower bound exactly
    };
    std::vector<EditOp> script;
    TimeValue certified_cost;
    Claim claim = Claim::UpperBoundOnly;
    Rational lower_bound;  // on the relative distance to the language
    Rational upper_bound;  // relative distance to the best accepted word known
};

const char* claim_name(FarCertificate::Claim claim);

enum class FarMode { Interval, Heavy };

struct FarWord {
    TimedWord word;
    FarCertificate certificate;
};

// Pushes delays past their feasible hull until the lower bound exceeds
// epsilon: spread over a run of letters (Interval) or on one letter (Heavy).
// Throws std::runtime_error when no letter can be pushed. epsilon = 0
// returns the word unchanged.
FarWord perturb_far(const TimedWord& w, const TesterContext& ctx, const Feasibility& feas, const Rational& epsilon,
                    UnitSource& src, FarMode mode = FarMode::Interval);

// For words of at most `cap` letters: the smallest relative distance from w
// to an accepted word obtained by deleting letters and clamping the rest into
// their hulls. An upper bound on dist(w, L).
std::optional<Rational> small_scale_upper_bound(const TimedWord& w, const TesterContext& ctx,
                                                const Feasibility& feas, std::size_t cap = 8);

}  // namespace tmt
