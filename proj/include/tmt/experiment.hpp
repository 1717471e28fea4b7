// The experiment runner: generate accepted words, perturb them far, test
// both, and tabulate the verdicts as CSV.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tmt/corpus.hpp"

namespace tmt {

enum class FarSchedule { Interval, Heavy, Alternate };

struct ExperimentConfig {
    std::string automaton;  // path, relative to the config file when loaded from one
    Rational epsilon;
    std::size_t trials = 1;
    std::uint64_t seed = 1;
    TimeValue target_weight{100};
    // Distance the perturbation aims for, as a fraction of T. Defaults to epsilon.
    std::optional<Rational> budget;
    unsigned sample_weight_multiplier = 1;
    FarSchedule far_mode = FarSchedule::Alternate;
    std::optional<TimeValue> k_override;
    std::string output;  // empty: stdout
    bool timing = false; // wall_time is "-" unless set, so reruns stay byte-identical
    unsigned threads = 1;

    void check() const;  // throws std::invalid_argument
};

// Same JSON document style as automata:
// {"format": "timed-tester/1", "automaton": "loop.json", "epsilon": "2/5", ...}
ExperimentConfig parse_experiment_config(const std::string& text, const std::string& base_dir = "");
ExperimentConfig load_experiment_config(const std::string& path);

struct TrialRow {
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    bool accepted_verdict = false;
    bool far_verdict = false;
    TimeValue k_used;
    std::size_t samples_drawn = 0;
    std::size_t pi_count = 0;
    double wall_time = 0;
    FarCertificate certificate;
    TimedWord accepted_word;
    TimedWord far_word;
};

struct ExperimentSummary {
    std::uint64_t seed = 0;
    std::size_t trials = 0;
    std::size_t accepted_ok = 0;  // accepted words the tester accepted
    std::size_t far_rejected = 0;
    std::size_t certified = 0;    // far words with a lower bound above epsilon
    std::size_t l = 1;
    double delta_floor = 0;
    double wall_time = 0;

    [[nodiscard]] double acceptance_rate() const { return trials ? double(accepted_ok) / double(trials) : 0; }
    [[nodiscard]] double rejection_rate() const { return trials ? double(far_rejected) / double(trials) : 0; }
};

struct ExperimentResult {
    std::vector<TrialRow> rows;  // ordered by trial index
    ExperimentSummary summary;
};

// 3 eps^2 / 5 for one component, (3 eps^3 / 10 l^3)^l otherwise.
double delta_floor(const Rational& epsilon, std::size_t l);

ExperimentResult run_experiment(const ExperimentConfig& config);
ExperimentResult run_experiment(const ExperimentConfig& config, const TesterContext& ctx);

inline constexpr const char* kCsvHeader =
    "trial,seed,verdict_accepted,verdict_far,k_used,samples_drawn,pi_count,wall_time,far_certificate,far_lower_bound";

void write_csv(std::ostream& out, const ExperimentResult& result, bool timing);

}  // namespace tmt
