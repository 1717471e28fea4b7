// Timed automata with diagonal-free guards.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tmt/rational.hpp"

namespace tmt {

using ClockId = std::size_t;
using LocationId = std::size_t;
using SymbolId = std::size_t;
using TransitionId = std::size_t;

enum class CmpOp { Lt, Le, Ge, Gt };

const char* op_name(CmpOp op);         // "lt", "le", ...
const char* op_symbol(CmpOp op);       // "<", "<=", ...
std::optional<CmpOp> parse_op(const std::string& name);

struct ClockConstraint {
    ClockId clock = 0;
    CmpOp op = CmpOp::Lt;
    std::int64_t bound = 0;

    [[nodiscard]] bool satisfied_by(const TimeValue& value) const;
    friend bool operator==(const ClockConstraint&, const ClockConstraint&) = default;
};

struct Transition {
    LocationId source = 0;
    std::vector<ClockConstraint> guard;
    SymbolId symbol = 0;
    std::vector<ClockId> resets;
    LocationId target = 0;
};

// Name-based description as read from a file, before any checking.
struct AutomatonDescription {
    struct Atom {
        std::string clock;
        std::optional<std::string> minus;  // present only for (rejected) diagonal atoms
        std::string op;
        std::int64_t bound = 0;
    };
    struct Edge {
        std::string source;
        std::string symbol;
        std::vector<Atom> guard;
        std::vector<std::string> resets;
        std::string target;
    };

    std::vector<std::string> alphabet;
    std::vector<std::string> clocks;
    std::vector<std::string> locations;
    std::vector<std::string> initial;
    std::vector<std::string> final;
    std::vector<Edge> transitions;
    std::optional<std::int64_t> max_constant;
};

struct Violation {
    enum class Kind {
        DuplicateName,
        UndeclaredClock,
        UndeclaredLocation,
        UndeclaredSymbol,
        DiagonalConstraint,
        BadOperator,
        NegativeBound,
        EmptyInitial,
        MaxConstantMismatch,
    };
    Kind kind;
    std::string message;
};

const char* kind_name(Violation::Kind kind);

struct ValidationReport {
    std::vector<Violation> violations;

    [[nodiscard]] bool ok() const noexcept { return violations.empty(); }
    [[nodiscard]] bool has(Violation::Kind kind) const;
    [[nodiscard]] std::string summary() const;
};

ValidationReport validate_automaton(const AutomatonDescription& desc);

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(ValidationReport report);
    [[nodiscard]] const ValidationReport& report() const noexcept { return report_; }

private:
    ValidationReport report_;
};

class TimedAutomaton {
public:
    // Throws ValidationError if the description is not well formed.
    static TimedAutomaton from_description(const AutomatonDescription& desc);

    [[nodiscard]] const std::vector<std::string>& alphabet() const noexcept { return alphabet_; }
    [[nodiscard]] const std::vector<std::string>& clocks() const noexcept { return clocks_; }
    [[nodiscard]] const std::vector<std::string>& locations() const noexcept { return locations_; }
    [[nodiscard]] const std::vector<Transition>& transitions() const noexcept { return transitions_; }
    [[nodiscard]] const std::vector<LocationId>& initial() const noexcept { return initial_; }
    [[nodiscard]] bool is_final(LocationId q) const { return final_[q]; }
    [[nodiscard]] bool is_initial(LocationId q) const;

    [[nodiscard]] std::size_t num_clocks() const noexcept { return clocks_.size(); }
    [[nodiscard]] std::size_t num_locations() const noexcept { return locations_.size(); }
    // B: the largest constant appearing in any guard.
    [[nodiscard]] std::int64_t max_constant() const noexcept { return max_constant_; }
    // c_x: the largest constant compared against clock x (0 if none).
    [[nodiscard]] const std::vector<std::int64_t>& clock_max_constants() const noexcept { return clock_max_; }

    [[nodiscard]] std::span<const TransitionId> outgoing(LocationId q) const { return outgoing_[q]; }
    [[nodiscard]] std::optional<SymbolId> symbol_id(const std::string& name) const;
    [[nodiscard]] std::optional<LocationId> location_id(const std::string& name) const;
    [[nodiscard]] std::optional<ClockId> clock_id(const std::string& name) const;

    [[nodiscard]] AutomatonDescription describe() const;
    [[nodiscard]] std::string describe_guard(const std::vector<ClockConstraint>& guard) const;

private:
    std::vector<std::string> alphabet_;
    std::vector<std::string> clocks_;
    std::vector<std::string> locations_;
    std::vector<Transition> transitions_;
    std::vector<LocationId> initial_;
    std::vector<bool> final_;
    std::vector<std::vector<TransitionId>> outgoing_;
    std::vector<std::int64_t> clock_max_;
    std::int64_t max_constant_ = 0;
};

}  // namespace tmt
