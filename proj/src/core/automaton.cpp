#include "tmt/automaton.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

namespace tmt {

const char* op_name(CmpOp op) {
    switch (op) {
    case CmpOp::Lt: return "lt";
    case CmpOp::Le: return "le";
    case CmpOp::Ge: return "ge";
    case CmpOp::Gt: return "gt";
    }
    return "?";
}

const char* op_symbol(CmpOp op) {
    switch (op) {
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Ge: return ">=";
    case CmpOp::Gt: return ">";
    }
    return "?";
}

std::optional<CmpOp> parse_op(const std::string& name) {
    if (name == "lt" || name == "<") return CmpOp::Lt;
    if (name == "le" || name == "<=") return CmpOp::Le;
    if (name == "ge" || name == ">=") return CmpOp::Ge;
    if (name == "gt" || name == ">") return CmpOp::Gt;
    return std::nullopt;
}

bool ClockConstraint::satisfied_by(const TimeValue& value) const {
    Rational c(bound);
    switch (op) {
    case CmpOp::Lt: return value < c;
    case CmpOp::Le: return value <= c;
    case CmpOp::Ge: return value >= c;
    case CmpOp::Gt: return value > c;
    }
    return false;
}

const char* kind_name(Violation::Kind kind) {
    using K = Violation::Kind;
    switch (kind) {
    case K::DuplicateName: return "duplicate-name";
    case K::UndeclaredClock: return "undeclared-clock";
    case K::UndeclaredLocation: return "undeclared-location";
    case K::UndeclaredSymbol: return "undeclared-symbol";
    case K::DiagonalConstraint: return "diagonal-constraint";
    case K::BadOperator: return "bad-operator";
    case K::NegativeBound: return "negative-bound";
    case K::EmptyInitial: return "empty-initial";
    case K::MaxConstantMismatch: return "max-constant-mismatch";
    }
    return "?";
}

bool ValidationReport::has(Violation::Kind kind) const {
    return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.kind == kind; });
}

std::string ValidationReport::summary() const {
    std::string out;
    for (const auto& v : violations) {
        if (!out.empty()) out += "; ";
        out += std::string(kind_name(v.kind)) + ": " + v.message;
    }
    return out;
}

ValidationError::ValidationError(ValidationReport report)
    : std::runtime_error("invalid automaton: " + report.summary()), report_(std::move(report)) {}

namespace {

// A clock name written as "x - y" is a diagonal atom in disguise.
bool looks_diagonal(const std::string& clock) { return clock.find('-') != std::string::npos; }

void check_unique(const std::vector<std::string>& names, const char* what, ValidationReport& report) {
    std::set<std::string> seen;
    for (const auto& n : names)
        if (!seen.insert(n).second)
            report.violations.push_back({Violation::Kind::DuplicateName, std::string(what) + " '" + n + "' declared twice"});
}

}  // namespace

ValidationReport validate_automaton(const AutomatonDescription& d) {
    using K = Violation::Kind;
    ValidationReport report;
    check_unique(d.alphabet, "symbol", report);
    check_unique(d.clocks, "clock", report);
    check_unique(d.locations, "location", report);

    std::set<std::string> clocks(d.clocks.begin(), d.clocks.end());
    std::set<std::string> locs(d.locations.begin(), d.locations.end());
    std::set<std::string> syms(d.alphabet.begin(), d.alphabet.end());

    if (d.initial.empty()) report.violations.push_back({K::EmptyInitial, "no initial location"});
    for (const auto& q : d.initial)
        if (!locs.count(q)) report.violations.push_back({K::UndeclaredLocation, "initial location '" + q + "'"});
    for (const auto& q : d.final)
        if (!locs.count(q)) report.violations.push_back({K::UndeclaredLocation, "final location '" + q + "'"});

    std::int64_t max_bound = 0;
    for (std::size_t i = 0; i < d.transitions.size(); ++i) {
        const auto& e = d.transitions[i];
        std::string where = "transition " + std::to_string(i);
        if (!locs.count(e.source)) report.violations.push_back({K::UndeclaredLocation, where + " source '" + e.source + "'"});
        if (!locs.count(e.target)) report.violations.push_back({K::UndeclaredLocation, where + " target '" + e.target + "'"});
        if (!syms.count(e.symbol)) report.violations.push_back({K::UndeclaredSymbol, where + " symbol '" + e.symbol + "'"});
        for (const auto& r : e.resets)
            if (!clocks.count(r)) report.violations.push_back({K::UndeclaredClock, where + " resets '" + r + "'"});
        for (const auto& a : e.guard) {
            if (a.minus || looks_diagonal(a.clock)) {
                std::string text = a.minus ? a.clock + " - " + *a.minus : a.clock;
                report.violations.push_back({K::DiagonalConstraint, where + " guard '" + text + "'"});
                continue;
            }
            if (!clocks.count(a.clock)) report.violations.push_back({K::UndeclaredClock, where + " guard clock '" + a.clock + "'"});
            if (!parse_op(a.op)) report.violations.push_back({K::BadOperator, where + " operator '" + a.op + "'"});
            if (a.bound < 0) report.violations.push_back({K::NegativeBound, where + " bound " + std::to_string(a.bound)});
            max_bound = std::max(max_bound, a.bound);
        }
    }
    if (d.max_constant && *d.max_constant != max_bound)
        report.violations.push_back({K::MaxConstantMismatch, "declared " + std::to_string(*d.max_constant) +
                                                                 " but guards use " + std::to_string(max_bound)});
    return report;
}

TimedAutomaton TimedAutomaton::from_description(const AutomatonDescription& d) {
    auto report = validate_automaton(d);
    if (!report.ok()) throw ValidationError(std::move(report));

    auto index = [](const std::vector<std::string>& names) {
        std::unordered_map<std::string, std::size_t> m;
        for (std::size_t i = 0; i < names.size(); ++i) m.emplace(names[i], i);
        return m;
    };
    auto clock_ix = index(d.clocks);
    auto loc_ix = index(d.locations);
    auto sym_ix = index(d.alphabet);

    TimedAutomaton a;
    a.alphabet_ = d.alphabet;
    a.clocks_ = d.clocks;
    a.locations_ = d.locations;
    a.final_.assign(d.locations.size(), false);
    a.outgoing_.resize(d.locations.size());
    a.clock_max_.assign(d.clocks.size(), 0);
    for (const auto& q : d.initial) {
        LocationId id = loc_ix.at(q);
        if (std::find(a.initial_.begin(), a.initial_.end(), id) == a.initial_.end()) a.initial_.push_back(id);
    }
    for (const auto& q : d.final) a.final_[loc_ix.at(q)] = true;

    for (const auto& e : d.transitions) {
        Transition t;
        t.source = loc_ix.at(e.source);
        t.target = loc_ix.at(e.target);
        t.symbol = sym_ix.at(e.symbol);
        for (const auto& atom : e.guard) {
            ClockConstraint c{clock_ix.at(atom.clock), *parse_op(atom.op), atom.bound};
            a.clock_max_[c.clock] = std::max(a.clock_max_[c.clock], c.bound);
            a.max_constant_ = std::max(a.max_constant_, c.bound);
            t.guard.push_back(c);
        }
        std::set<ClockId> resets;
        for (const auto& r : e.resets) resets.insert(clock_ix.at(r));
        t.resets.assign(resets.begin(), resets.end());
        a.outgoing_[t.source].push_back(a.transitions_.size());
        a.transitions_.push_back(std::move(t));
    }
    return a;
}

bool TimedAutomaton::is_initial(LocationId q) const {
    return std::find(initial_.begin(), initial_.end(), q) != initial_.end();
}

namespace {
template <typename Id>
std::optional<Id> find_name(const std::vector<std::string>& names, const std::string& name) {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) return std::nullopt;
    return static_cast<Id>(it - names.begin());
}
}  // namespace

std::optional<SymbolId> TimedAutomaton::symbol_id(const std::string& name) const { return find_name<SymbolId>(alphabet_, name); }
std::optional<LocationId> TimedAutomaton::location_id(const std::string& name) const { return find_name<LocationId>(locations_, name); }
std::optional<ClockId> TimedAutomaton::clock_id(const std::string& name) const { return find_name<ClockId>(clocks_, name); }

AutomatonDescription TimedAutomaton::describe() const {
    AutomatonDescription d;
    d.alphabet = alphabet_;
    d.clocks = clocks_;
    d.locations = locations_;
    for (auto q : initial_) d.initial.push_back(locations_[q]);
    for (LocationId q = 0; q < locations_.size(); ++q)
        if (final_[q]) d.final.push_back(locations_[q]);
    for (const auto& t : transitions_) {
        AutomatonDescription::Edge e;
        e.source = locations_[t.source];
        e.target = locations_[t.target];
        e.symbol = alphabet_[t.symbol];
        for (const auto& c : t.guard) e.guard.push_back({clocks_[c.clock], std::nullopt, op_name(c.op), c.bound});
        for (auto r : t.resets) e.resets.push_back(clocks_[r]);
        d.transitions.push_back(std::move(e));
    }
    d.max_constant = max_constant_;
    return d;
}

std::string TimedAutomaton::describe_guard(const std::vector<ClockConstraint>& guard) const {
    if (guard.empty()) return "true";
    std::string out;
    for (const auto& c : guard) {
        if (!out.empty()) out += " && ";
        out += clocks_[c.clock] + op_symbol(c.op) + std::to_string(c.bound);
    }
    return out;
}

}  // namespace tmt
