// Small builders shared by the unit and acceptance tests.
#pragma once

#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "tmt/io.hpp"
#include "tmt/rational.hpp"
#include "tmt/timed_word.hpp"

namespace tmt::testing {

inline Rational R(const std::string& text) {
    auto r = Rational::parse(text);
    if (!r) throw std::invalid_argument("bad rational in test: " + text);
    return *r;
}

inline TimedWord W(std::initializer_list<std::pair<const char*, const char*>> letters) {
    std::vector<Letter> out;
    for (const auto& [s, d] : letters) out.push_back({s, R(d)});
    return TimedWord(std::move(out));
}

inline std::string corpus_path(const std::string& name) { return std::string(TMT_CORPUS_DIR) + "/" + name; }

inline TimedAutomaton corpus(const std::string& name) { return load_automaton(corpus_path(name + ".json")); }

// Builds an automaton document from the interesting parts only.
inline std::string automaton_doc(const std::string& alphabet, const std::string& clocks, const std::string& locations,
                                 const std::string& initial, const std::string& final, const std::string& transitions,
                                 const std::string& extra = "") {
    return R"({"format": "timed-tester/1", "alphabet": )" + alphabet + R"(, "clocks": )" + clocks +
           R"(, "locations": )" + locations + R"(, "initial": )" + initial + R"(, "final": )" + final +
           R"(, "transitions": )" + transitions + extra + "}";
}

}  // namespace tmt::testing
