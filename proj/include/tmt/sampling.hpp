// The weighted time distribution mu, k-factors and sample sets.
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tmt/random.hpp"
#include "tmt/timed_word.hpp"

namespace tmt {

// A slice [start, end] (inclusive, 0-based) of a word.
struct Factor {
    std::size_t start = 0;
    std::size_t end = 0;
    std::vector<Letter> letters;
    TimeValue weight;
    bool truncated = false;  // the word ended before the weight reached k

    [[nodiscard]] TimedWord word() const { return TimedWord(letters); }
    [[nodiscard]] bool overlaps(const Factor& other) const { return start <= other.end && other.start <= end; }
    friend bool operator==(const Factor&, const Factor&) = default;
};

// The shortest slice starting at j whose weight reaches k (a single letter
// when k = 0), or the rest of the word, flagged truncated.
Factor k_factor(const TimedWord& w, std::size_t j, const TimeValue& k);

// The smallest factor of w containing both; they must overlap.
Factor merge(const TimedWord& w, const Factor& a, const Factor& b);

// Draws positions with probability tau_j / T. Construction throws
// std::invalid_argument when T = 0.
class PositionSampler {
public:
    explicit PositionSampler(const TimedWord& w);

    std::size_t draw(UnitSource& src) const;
    // The position a given 62-bit draw maps to.
    [[nodiscard]] std::size_t locate(std::uint64_t r) const;
    // Cumulative grid thresholds; the last one is 2^62.
    [[nodiscard]] const std::vector<std::uint64_t>& thresholds() const noexcept { return thresholds_; }

private:
    std::vector<std::uint64_t> thresholds_;
};

std::size_t sample_position(const TimedWord& w, UnitSource& src);

class PositionSource {
public:
    virtual ~PositionSource() = default;
    virtual std::size_t next_position() = 0;
};

class MuPositions final : public PositionSource {
public:
    MuPositions(const TimedWord& w, UnitSource& src) : sampler_(w), src_(src) {}
    std::size_t next_position() override { return sampler_.draw(src_); }

private:
    PositionSampler sampler_;
    UnitSource& src_;
};

// Hands out a recorded sequence; throws std::out_of_range past its end.
class ReplayPositions final : public PositionSource {
public:
    explicit ReplayPositions(std::vector<std::size_t> positions) : positions_(std::move(positions)) {}
    std::size_t next_position() override;

private:
    std::vector<std::size_t> positions_;
    std::size_t next_ = 0;
};

struct MergeRecord {
    std::size_t draw = 0;  // index of the draw that caused it
    std::size_t start = 0;
    std::size_t end = 0;
};

struct SampleSet {
    std::vector<Factor> factors;  // disjoint, ordered by start
    std::vector<std::size_t> draws;
    std::vector<MergeRecord> merges;
    bool degenerate = false;
    std::string reason;
};

// Keeps a set of disjoint factors; a new factor swallows everything it
// overlaps. Shared by the offline and the streaming sampler.
class SampleAssembler {
public:
    explicit SampleAssembler(const TimedWord* word = nullptr) : word_(word) {}

    void add(Factor f);
    [[nodiscard]] std::size_t size() const noexcept { return set_.factors.size(); }
    [[nodiscard]] std::size_t draws() const noexcept { return set_.draws.size(); }
    SampleSet take() { return std::move(set_); }

private:
    const TimedWord* word_;
    SampleSet set_;
};

// Draws k-factors until l of them are pairwise disjoint, merging overlaps
// and drawing again; at most l + retry_cap draws. A word lighter than k, or
// one where the budget runs out, yields the whole word as a single factor
// with the degenerate flag set.
SampleSet sample_factors(const TimedWord& w, std::size_t l, const TimeValue& k, PositionSource& positions,
                         std::size_t retry_cap = 16);
SampleSet sample_factors(const TimedWord& w, std::size_t l, const TimeValue& k, UnitSource& src,
                         std::size_t retry_cap = 16);

// One-pass sampling for streams. Each of l slots keeps one start position,
// replaced by letter j with probability tau_j / W_j (W_j the weight seen so
// far), so its final start is mu-distributed; the slot also keeps the
// k-factor window growing from that start.
class ReservoirSampler {
public:
    ReservoirSampler(std::size_t l, TimeValue k, UnitSource& src, std::size_t retry_cap = 16);

    void push(const Letter& letter);

    [[nodiscard]] std::size_t letters_seen() const noexcept { return seen_; }
    [[nodiscard]] const TimeValue& weight_seen() const noexcept { return weight_; }
    // Current start position of each slot, in slot order.
    [[nodiscard]] std::vector<std::optional<std::size_t>> starts() const;
    // Letters currently buffered across all windows.
    [[nodiscard]] std::size_t buffered() const;

    // Assembles the windows in slot order like sample_factors does with its
    // draws. A stream lighter than k comes back whole as one degenerate
    // factor, as in file mode; it is short by definition, so it was kept.
    [[nodiscard]] SampleSet finish() const;

private:
    struct Slot {
        std::optional<std::size_t> start;
        std::vector<Letter> window;
        TimeValue weight;
    };

    std::size_t l_;
    TimeValue k_;
    UnitSource& src_;
    std::size_t retry_cap_;
    std::vector<Slot> slots_;
    std::vector<Letter> prefix_;  // the stream so far, until it weighs k
    bool prefix_live_ = true;
    std::size_t seen_ = 0;
    TimeValue weight_;
};

template <typename Range>
SampleSet reservoir_stream(const Range& letters, std::size_t l, const TimeValue& k, UnitSource& src,
                           std::size_t retry_cap = 16) {
    ReservoirSampler r(l, k, src, retry_cap);
    for (const auto& letter : letters) r.push(letter);
    return r.finish();
}

}  // namespace tmt
