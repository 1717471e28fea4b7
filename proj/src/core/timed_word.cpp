#include "tmt/timed_word.hpp"

#include <stdexcept>

namespace tmt {

TimedWord::TimedWord(std::vector<Letter> letters) {
    letters_.reserve(letters.size());
    abs_.reserve(letters.size());
    for (auto& l : letters) push_back(std::move(l));
}

void TimedWord::push_back(Letter letter) {
    if (letter.delay.sign() < 0) throw std::invalid_argument("negative delay in timed word");
    TimeValue t = abs_.empty() ? letter.delay : abs_.back() + letter.delay;
    letters_.push_back(std::move(letter));
    abs_.push_back(std::move(t));
}

TimedWord TimedWord::slice(std::size_t first, std::size_t last) const {
    if (first > last || last > letters_.size()) throw std::out_of_range("timed word slice");
    return TimedWord(std::vector<Letter>(letters_.begin() + static_cast<std::ptrdiff_t>(first),
                                         letters_.begin() + static_cast<std::ptrdiff_t>(last)));
}

std::vector<Symbol> TimedWord::untimed() const {
    std::vector<Symbol> out;
    out.reserve(letters_.size());
    for (const auto& l : letters_) out.push_back(l.symbol);
    return out;
}

bool TimedWord::check_invariants() const {
    if (abs_.size() != letters_.size()) return false;
    TimeValue sum;
    for (std::size_t i = 0; i < letters_.size(); ++i) {
        if (letters_[i].delay.sign() < 0) return false;
        sum += letters_[i].delay;
        if (sum != abs_[i]) return false;
        if (i > 0 && abs_[i] < abs_[i - 1]) return false;
    }
    return true;
}

TimeValue weight_of(std::span<const Letter> letters) {
    TimeValue sum;
    for (const auto& l : letters) sum += l.delay;
    return sum;
}

std::string to_string(const TimedWord& w) {
    std::string out;
    for (const auto& l : w) out += "(" + l.symbol + "," + l.delay.str() + ")";
    return out.empty() ? "ε" : out;
}

}  // namespace tmt
