#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tmt/rational.hpp"

namespace tmt {

using Symbol = std::string;

struct Letter {
    Symbol symbol;
    TimeValue delay;  // time since the previous letter (or since 0 for the first)

    friend bool operator==(const Letter&, const Letter&) = default;
};

// A finite timed word in relative-delay form. Absolute times are cached and
// kept in sync; positions are 0-based throughout the library.
class TimedWord {
public:
    TimedWord() = default;
    explicit TimedWord(std::vector<Letter> letters);

    void push_back(Letter letter);

    [[nodiscard]] std::size_t size() const noexcept { return letters_.size(); }
    [[nodiscard]] bool empty() const noexcept { return letters_.empty(); }
    [[nodiscard]] const Letter& operator[](std::size_t i) const { return letters_[i]; }
    [[nodiscard]] std::span<const Letter> letters() const noexcept { return letters_; }
    [[nodiscard]] auto begin() const noexcept { return letters_.begin(); }
    [[nodiscard]] auto end() const noexcept { return letters_.end(); }

    // t_i: absolute time of letter i, i.e. the sum of delays 0..i.
    [[nodiscard]] const TimeValue& abs_time(std::size_t i) const { return abs_[i]; }
    [[nodiscard]] TimeValue total_weight() const { return abs_.empty() ? TimeValue{} : abs_.back(); }

    // Letters [first, last).
    [[nodiscard]] TimedWord slice(std::size_t first, std::size_t last) const;
    [[nodiscard]] std::vector<Symbol> untimed() const;

    // Recomputes the cached sums from scratch and compares.
    [[nodiscard]] bool check_invariants() const;

    friend bool operator==(const TimedWord& a, const TimedWord& b) { return a.letters_ == b.letters_; }

private:
    std::vector<Letter> letters_;
    std::vector<TimeValue> abs_;
};

// Sum of delays of an arbitrary letter range.
TimeValue weight_of(std::span<const Letter> letters);

std::string to_string(const TimedWord& w);

}  // namespace tmt
