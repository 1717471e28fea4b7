#include "tmt/sampling.hpp"

#include <algorithm>
#include <stdexcept>

namespace tmt {

Factor k_factor(const TimedWord& w, std::size_t j, const TimeValue& k) {
    if (j >= w.size()) throw std::out_of_range("k_factor position out of range");
    Factor f;
    f.start = j;
    for (std::size_t i = j; i < w.size(); ++i) {
        f.letters.push_back(w[i]);
        f.weight += w[i].delay;
        f.end = i;
        if (f.weight >= k) return f;
    }
    f.truncated = true;
    return f;
}

Factor merge(const TimedWord& w, const Factor& a, const Factor& b) {
    if (!a.overlaps(b)) throw std::invalid_argument("merging disjoint factors");
    Factor f;
    f.start = std::min(a.start, b.start);
    f.end = std::max(a.end, b.end);
    for (std::size_t i = f.start; i <= f.end; ++i) {
        f.letters.push_back(w[i]);
        f.weight += w[i].delay;
    }
    f.truncated = (a.end == f.end && a.truncated) || (b.end == f.end && b.truncated);
    return f;
}

PositionSampler::PositionSampler(const TimedWord& w) {
    const TimeValue total = w.total_weight();
    if (total.sign() <= 0) throw std::invalid_argument("sampling from a word of zero weight");
    thresholds_.reserve(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) thresholds_.push_back(unit_threshold(w.abs_time(i), total));
}

std::size_t PositionSampler::locate(std::uint64_t r) const {
    // First j with r < threshold_j, i.e. u T < t_j.
    auto it = std::upper_bound(thresholds_.begin(), thresholds_.end(), r);
    return static_cast<std::size_t>(it - thresholds_.begin());
}

std::size_t PositionSampler::draw(UnitSource& src) const { return locate(src.next62()); }

std::size_t sample_position(const TimedWord& w, UnitSource& src) { return PositionSampler(w).draw(src); }

std::size_t ReplayPositions::next_position() {
    if (next_ >= positions_.size()) throw std::out_of_range("replayed positions exhausted");
    return positions_[next_++];
}

void SampleAssembler::add(Factor f) {
    const std::size_t draw = set_.draws.size();
    set_.draws.push_back(f.start);
    auto& fs = set_.factors;
    bool merged = false;
    for (;;) {
        auto it = std::find_if(fs.begin(), fs.end(), [&](const Factor& g) { return g.overlaps(f); });
        if (it == fs.end()) break;
        if (word_) {
            f = merge(*word_, f, *it);
        } else {
            // Stream windows: splice letters without the original word.
            Factor u;
            const Factor& lo = it->start <= f.start ? *it : f;
            const Factor& hi = it->start <= f.start ? f : *it;
            u.start = lo.start;
            u.letters = lo.letters;
            u.end = lo.end;
            u.truncated = lo.truncated;
            for (std::size_t i = lo.end + 1; i <= hi.end; ++i) u.letters.push_back(hi.letters[i - hi.start]);
            if (hi.end > lo.end) {
                u.end = hi.end;
                u.truncated = hi.truncated;
            } else if (hi.end == lo.end) {
                u.truncated = lo.truncated || hi.truncated;
            }
            u.weight = weight_of(u.letters);
            f = std::move(u);
        }
        fs.erase(it);
        merged = true;
    }
    if (merged) set_.merges.push_back({draw, f.start, f.end});
    auto pos = std::lower_bound(fs.begin(), fs.end(), f.start, [](const Factor& g, std::size_t s) { return g.start < s; });
    fs.insert(pos, std::move(f));
}

namespace {

SampleSet whole_word(const TimedWord& w, std::string reason, SampleSet base = {}) {
    base.factors.clear();
    if (!w.empty()) {
        Factor f;
        f.start = 0;
        f.end = w.size() - 1;
        f.letters.assign(w.begin(), w.end());
        f.weight = w.total_weight();
        f.truncated = true;
        base.factors.push_back(std::move(f));
    }
    base.degenerate = true;
    base.reason = std::move(reason);
    return base;
}

}  // namespace

SampleSet sample_factors(const TimedWord& w, std::size_t l, const TimeValue& k, PositionSource& positions,
                         std::size_t retry_cap) {
    if (l == 0) throw std::invalid_argument("sample count must be positive");
    const TimeValue total = w.total_weight();
    if (total.sign() == 0) return whole_word(w, "word has zero weight");
    if (total < k) return whole_word(w, "word is lighter than the sample weight");

    SampleAssembler assembler(&w);
    while (assembler.size() < l && assembler.draws() < l + retry_cap)
        assembler.add(k_factor(w, positions.next_position(), k));
    if (assembler.size() < l)
        return whole_word(w, "no " + std::to_string(l) + " disjoint factors within the draw budget", assembler.take());
    return assembler.take();
}

SampleSet sample_factors(const TimedWord& w, std::size_t l, const TimeValue& k, UnitSource& src,
                         std::size_t retry_cap) {
    if (w.total_weight().sign() == 0) {
        ReplayPositions none({});
        return sample_factors(w, l, k, none, retry_cap);
    }
    MuPositions positions(w, src);
    return sample_factors(w, l, k, positions, retry_cap);
}

ReservoirSampler::ReservoirSampler(std::size_t l, TimeValue k, UnitSource& src, std::size_t retry_cap)
    : l_(l), k_(std::move(k)), src_(src), retry_cap_(retry_cap), slots_(l + retry_cap) {
    if (l == 0) throw std::invalid_argument("sample count must be positive");
}

void ReservoirSampler::push(const Letter& letter) {
    const std::size_t j = seen_++;
    weight_ += letter.delay;
    if (prefix_live_) {
        prefix_.push_back(letter);
        if (weight_.sign() > 0 && weight_ >= k_) {
            prefix_live_ = false;
            prefix_.clear();
            prefix_.shrink_to_fit();
        }
    }
    for (auto& s : slots_)
        if (s.start && s.weight < k_) {
            s.window.push_back(letter);
            s.weight += letter.delay;
        }
    if (letter.delay.sign() == 0) return;
    const std::uint64_t threshold = unit_threshold(letter.delay, weight_);
    for (auto& s : slots_)
        if (src_.next62() < threshold) {
            s.start = j;
            s.window.assign(1, letter);
            s.weight = letter.delay;
        }
}

std::vector<std::optional<std::size_t>> ReservoirSampler::starts() const {
    std::vector<std::optional<std::size_t>> out;
    for (const auto& s : slots_) out.push_back(s.start);
    return out;
}

std::size_t ReservoirSampler::buffered() const {
    std::size_t n = prefix_.size();
    for (const auto& s : slots_) n += s.window.size();
    return n;
}

SampleSet ReservoirSampler::finish() const {
    if (seen_ == 0) {
        SampleSet empty;
        empty.degenerate = true;
        empty.reason = "empty stream";
        return empty;
    }
    if (weight_.sign() == 0) return whole_word(TimedWord(prefix_), "word has zero weight");
    if (weight_ < k_) return whole_word(TimedWord(prefix_), "word is lighter than the sample weight");
    SampleAssembler assembler;
    for (const auto& s : slots_) {
        if (assembler.size() >= l_) break;
        Factor f;
        f.start = *s.start;
        f.end = f.start + s.window.size() - 1;
        f.letters = s.window;
        f.weight = s.weight;
        f.truncated = s.weight < k_;
        assembler.add(std::move(f));
    }
    if (assembler.size() < l_) {
        SampleSet out = assembler.take();
        out.factors.clear();
        out.degenerate = true;
        out.reason = "no " + std::to_string(l_) + " disjoint factors within the draw budget";
        return out;
    }
    return assembler.take();
}

}  // namespace tmt
