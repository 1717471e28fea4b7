// File formats: automata as JSON documents, words as JSON lines.
#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "tmt/automaton.hpp"
#include "tmt/timed_word.hpp"

namespace tmt {

inline constexpr const char* kFormatTag = "timed-tester/1";

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parses the document structure only; call validate_automaton on the result.
AutomatonDescription parse_automaton_description(const std::string& text);
TimedAutomaton parse_automaton(const std::string& text);
TimedAutomaton load_automaton(const std::string& path);
std::string automaton_to_json(const TimedAutomaton& a);

struct WordReadOptions {
    std::size_t max_denominator_bits = 256;
};

// One JSON-lines record. Returns nullopt for blank lines and the format header.
std::optional<Letter> parse_letter_line(std::string_view line, const WordReadOptions& opts = {});

// Pulls letters one at a time; used by stream mode.
class LetterReader {
public:
    explicit LetterReader(std::istream& in, WordReadOptions opts = {});
    std::optional<Letter> next();
    [[nodiscard]] std::size_t line_number() const noexcept { return line_no_; }

private:
    std::istream& in_;
    WordReadOptions opts_;
    std::size_t line_no_ = 0;
    std::string line_;
};

TimedWord read_word(std::istream& in, const WordReadOptions& opts = {});
TimedWord load_word(const std::string& path, const WordReadOptions& opts = {});
void write_word(std::ostream& out, const TimedWord& w);
void save_word(const std::string& path, const TimedWord& w);

std::string read_file(const std::string& path);

}  // namespace tmt
