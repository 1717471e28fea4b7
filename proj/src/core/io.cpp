#include "tmt/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace tmt {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

void check_format(const json& doc) {
    if (!doc.contains("format")) throw FormatError("missing \"format\" field");
    if (doc.at("format") != kFormatTag)
        throw FormatError("unsupported format '" + doc.at("format").dump() + "', expected " + kFormatTag);
}

std::vector<std::string> string_list(const json& doc, const char* key, bool required = true) {
    if (!doc.contains(key)) {
        if (required) throw FormatError(std::string("missing \"") + key + "\"");
        return {};
    }
    const json& arr = doc.at(key);
    if (!arr.is_array()) throw FormatError(std::string("\"") + key + "\" must be an array");
    std::vector<std::string> out;
    for (const auto& item : arr) {
        if (!item.is_string()) throw FormatError(std::string("\"") + key + "\" must hold strings");
        out.push_back(item.get<std::string>());
    }
    return out;
}

std::string trim(std::string s) {
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

// Text atoms like "x < 1", "x >= 2" or the diagonal "x - y < 2".
AutomatonDescription::Atom parse_text_atom(const std::string& text) {
    static const char* ops[] = {"<=", ">=", "<", ">", "=="};
    for (const char* op : ops) {
        auto pos = text.find(op);
        if (pos == std::string::npos) continue;
        AutomatonDescription::Atom atom;
        std::string lhs = trim(text.substr(0, pos));
        std::string rhs = trim(text.substr(pos + std::string(op).size()));
        try {
            atom.bound = std::stoll(rhs);
        } catch (const std::exception&) {
            throw FormatError("bad guard bound in '" + text + "'");
        }
        atom.op = op;
        if (auto minus = lhs.find('-'); minus != std::string::npos) {
            atom.clock = trim(lhs.substr(0, minus));
            atom.minus = trim(lhs.substr(minus + 1));
        } else {
            atom.clock = lhs;
        }
        return atom;
    }
    throw FormatError("cannot parse guard atom '" + text + "'");
}

void add_atoms(const json& g, std::vector<AutomatonDescription::Atom>& out) {
    if (g.is_string()) {
        auto atom = parse_text_atom(g.get<std::string>());
        // "x == c" is sugar for x >= c && x <= c.
        if (atom.op == "==") {
            atom.op = "ge";
            out.push_back(atom);
            atom.op = "le";
        }
        out.push_back(atom);
        return;
    }
    if (!g.is_object()) throw FormatError("guard atoms must be objects or strings");
    AutomatonDescription::Atom atom;
    atom.clock = g.at("clock").get<std::string>();
    if (g.contains("minus")) atom.minus = g.at("minus").get<std::string>();
    atom.op = g.at("op").get<std::string>();
    if (!g.at("bound").is_number_integer()) throw FormatError("guard bound must be an integer");
    atom.bound = g.at("bound").get<std::int64_t>();
    out.push_back(atom);
}

}  // namespace

AutomatonDescription parse_automaton_description(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("automaton is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw FormatError("automaton document must be an object");
    check_format(doc);
    AutomatonDescription d;
    try {
        d.alphabet = string_list(doc, "alphabet");
        d.clocks = string_list(doc, "clocks");
        d.locations = string_list(doc, "locations");
        d.initial = string_list(doc, "initial");
        d.final = string_list(doc, "final");
        if (doc.contains("max_constant")) d.max_constant = doc.at("max_constant").get<std::int64_t>();
        for (const auto& t : doc.at("transitions")) {
            AutomatonDescription::Edge e;
            e.source = t.at("source").get<std::string>();
            e.symbol = t.at("symbol").get<std::string>();
            e.target = t.at("target").get<std::string>();
            if (t.contains("guard"))
                for (const auto& g : t.at("guard")) add_atoms(g, e.guard);
            if (t.contains("resets"))
                for (const auto& r : t.at("resets")) e.resets.push_back(r.get<std::string>());
            d.transitions.push_back(std::move(e));
        }
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed automaton: ") + e.what());
    }
    return d;
}

TimedAutomaton parse_automaton(const std::string& text) {
    return TimedAutomaton::from_description(parse_automaton_description(text));
}

TimedAutomaton load_automaton(const std::string& path) { return parse_automaton(read_file(path)); }

std::string automaton_to_json(const TimedAutomaton& a) {
    AutomatonDescription d = a.describe();
    json doc;
    doc["format"] = kFormatTag;
    doc["alphabet"] = d.alphabet;
    doc["clocks"] = d.clocks;
    doc["locations"] = d.locations;
    doc["initial"] = d.initial;
    doc["final"] = d.final;
    doc["max_constant"] = a.max_constant();
    doc["transitions"] = json::array();
    for (const auto& e : d.transitions) {
        json t;
        t["source"] = e.source;
        t["symbol"] = e.symbol;
        t["target"] = e.target;
        t["resets"] = e.resets;
        t["guard"] = json::array();
        for (const auto& g : e.guard) t["guard"].push_back({{"clock", g.clock}, {"op", g.op}, {"bound", g.bound}});
        doc["transitions"].push_back(std::move(t));
    }
    return doc.dump(2) + "\n";
}

namespace {

// SAX handler for a flat letter record. Floats arrive with their source text,
// so "0.1" stays exactly 1/10.
struct LetterSax : nlohmann::json_sax<json> {
    int depth = 0;
    std::string current_key;
    std::optional<std::string> symbol;
    std::optional<std::string> delay;
    std::optional<std::string> format;
    bool bad = false;

    void put(std::string value) {
        if (depth != 1) return;
        if (current_key == "symbol") symbol = std::move(value);
        else if (current_key == "delay") delay = std::move(value);
        else if (current_key == "format") format = std::move(value);
    }
    bool null() override { bad = bad || depth == 1; return true; }
    bool boolean(bool) override { bad = bad || depth == 1; return true; }
    bool number_integer(number_integer_t v) override { put(std::to_string(v)); return true; }
    bool number_unsigned(number_unsigned_t v) override { put(std::to_string(v)); return true; }
    bool number_float(number_float_t, const string_t& s) override { put(s); return true; }
    bool string(string_t& v) override { put(v); return true; }
    bool binary(binary_t&) override { return true; }
    bool start_object(std::size_t) override { ++depth; return true; }
    bool key(string_t& k) override { current_key = k; return true; }
    bool end_object() override { --depth; return true; }
    bool start_array(std::size_t) override { ++depth; return true; }
    bool end_array() override { --depth; return true; }
    bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception& e) override {
        throw FormatError(std::string("bad word record: ") + e.what());
    }
};

}  // namespace

std::optional<Letter> parse_letter_line(std::string_view line, const WordReadOptions& opts) {
    if (line.find_first_not_of(" \t\r\n") == std::string_view::npos) return std::nullopt;
    LetterSax sax;
    json::sax_parse(line, &sax);
    if (sax.format) {
        if (*sax.format != kFormatTag) throw FormatError("unsupported word format '" + *sax.format + "'");
        if (!sax.symbol) return std::nullopt;
    }
    if (!sax.symbol || !sax.delay || sax.bad) throw FormatError("word record needs \"symbol\" and \"delay\"");
    auto delay = Rational::parse(*sax.delay);
    if (!delay) throw FormatError("bad delay '" + *sax.delay + "'");
    if (delay->sign() < 0) throw FormatError("negative delay '" + *sax.delay + "'");
    if (delay->denominator_bits() > opts.max_denominator_bits)
        throw FormatError("delay '" + *sax.delay + "' exceeds the denominator limit");
    return Letter{std::move(*sax.symbol), std::move(*delay)};
}

LetterReader::LetterReader(std::istream& in, WordReadOptions opts) : in_(in), opts_(opts) {}

std::optional<Letter> LetterReader::next() {
    while (std::getline(in_, line_)) {
        ++line_no_;
        try {
            if (auto letter = parse_letter_line(line_, opts_)) return letter;
        } catch (const FormatError& e) {
            throw FormatError("line " + std::to_string(line_no_) + ": " + e.what());
        }
    }
    return std::nullopt;
}

TimedWord read_word(std::istream& in, const WordReadOptions& opts) {
    LetterReader reader(in, opts);
    TimedWord w;
    while (auto letter = reader.next()) w.push_back(std::move(*letter));
    return w;
}

TimedWord load_word(const std::string& path, const WordReadOptions& opts) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open '" + path + "'");
    return read_word(in, opts);
}

void write_word(std::ostream& out, const TimedWord& w) {
    out << json{{"format", kFormatTag}}.dump() << '\n';
    for (const auto& l : w) out << json{{"symbol", l.symbol}, {"delay", l.delay.str()}}.dump() << '\n';
}

void save_word(const std::string& path, const TimedWord& w) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write '" + path + "'");
    write_word(out, w);
}

}  // namespace tmt
