#include "tmt/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <mutex>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "tmt/io.hpp"

namespace tmt {

using nlohmann::json;

void ExperimentConfig::check() const {
    if (trials < 1) throw std::invalid_argument("trials must be at least 1");
    if (epsilon.sign() <= 0 || epsilon >= Rational(1)) throw std::invalid_argument("epsilon must lie in (0, 1)");
    if (budget && (budget->sign() <= 0 || *budget >= Rational(1)))
        throw std::invalid_argument("budget must lie in (0, 1)");
    if (target_weight.sign() < 0) throw std::invalid_argument("target weight must be non-negative");
    if (sample_weight_multiplier != 1 && sample_weight_multiplier != 2)
        throw std::invalid_argument("sample weight multiplier must be 1 or 2");
    if (threads < 1) throw std::invalid_argument("threads must be at least 1");
}

namespace {

Rational rational_field(const json& doc, const char* key) {
    const json& v = doc.at(key);
    std::string text = v.is_string() ? v.get<std::string>() : v.dump();
    auto r = Rational::parse(text);
    if (!r) throw FormatError(std::string("field '") + key + "' is not a number: " + text);
    return *r;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& text, const std::string& base_dir) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("config is not valid JSON: ") + e.what());
    }
    ExperimentConfig c;
    try {
        if (doc.contains("format") && doc.at("format") != kFormatTag)
            throw FormatError("unsupported format " + doc.at("format").dump());
        std::filesystem::path p = doc.at("automaton").get<std::string>();
        if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
        c.automaton = p.string();
        c.epsilon = rational_field(doc, "epsilon");
        if (doc.contains("trials")) {
            auto t = doc.at("trials").get<std::int64_t>();
            if (t < 1) throw std::invalid_argument("trials must be at least 1");
            c.trials = static_cast<std::size_t>(t);
        }
        if (doc.contains("seed")) c.seed = doc.at("seed").get<std::uint64_t>();
        if (doc.contains("target_weight")) c.target_weight = rational_field(doc, "target_weight");
        if (doc.contains("budget")) c.budget = rational_field(doc, "budget");
        if (doc.contains("sample_weight_multiplier"))
            c.sample_weight_multiplier = doc.at("sample_weight_multiplier").get<unsigned>();
        if (doc.contains("far_mode")) {
            auto m = doc.at("far_mode").get<std::string>();
            if (m == "interval") c.far_mode = FarSchedule::Interval;
            else if (m == "heavy") c.far_mode = FarSchedule::Heavy;
            else if (m == "alternate") c.far_mode = FarSchedule::Alternate;
            else throw FormatError("far_mode must be interval, heavy or alternate");
        }
        if (doc.contains("k_override")) c.k_override = rational_field(doc, "k_override");
        if (doc.contains("output")) c.output = doc.at("output").get<std::string>();
        if (doc.contains("timing")) c.timing = doc.at("timing").get<bool>();
        if (doc.contains("threads")) c.threads = doc.at("threads").get<unsigned>();
    } catch (const json::exception& e) {
        throw FormatError(std::string("bad experiment config: ") + e.what());
    }
    c.check();
    return c;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    return parse_experiment_config(read_file(path), std::filesystem::path(path).parent_path().string());
}

double delta_floor(const Rational& epsilon, std::size_t l) {
    const double e = epsilon.to_double();
    if (l <= 1) return 3 * e * e / 5;
    const double L = static_cast<double>(l);
    return std::pow(3 * e * e * e / (10 * L * L * L), L);
}

namespace {

TrialRow run_trial(const ExperimentConfig& cfg, const TesterContext& ctx, const TesterParams& params,
                   const Feasibility& feas, std::size_t trial) {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    TrialRow row;
    row.trial = trial;
    row.seed = derive_seed(cfg.seed, trial);
    Mt64Source src(row.seed);
    row.accepted_word = generate_accepted(ctx, cfg.target_weight, src);
    Verdict va = word_tester(row.accepted_word, ctx, params, derive_seed(row.seed, 1));

    FarMode mode = cfg.far_mode == FarSchedule::Heavy ? FarMode::Heavy
                   : cfg.far_mode == FarSchedule::Interval ? FarMode::Interval
                   : (trial % 2 == 0 ? FarMode::Interval : FarMode::Heavy);
    FarWord far = perturb_far(row.accepted_word, ctx, feas, cfg.budget.value_or(cfg.epsilon), src, mode);
    Verdict vf = word_tester(far.word, ctx, params, derive_seed(row.seed, 2));

    row.accepted_verdict = va.accept;
    row.far_verdict = vf.accept;
    row.k_used = params.sample_weight();
    row.samples_drawn = va.samples_drawn + vf.samples_drawn;
    row.pi_count = ctx.paths.size();
    row.certificate = std::move(far.certificate);
    row.far_word = std::move(far.word);
    row.wall_time = std::chrono::duration<double>(clock::now() - t0).count();
    return row;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, const TesterContext& ctx) {
    config.check();
    const TesterParams params = ctx.params(config.epsilon, config.k_override, config.sample_weight_multiplier);
    const Feasibility feas(ctx.ra);
    const auto t0 = std::chrono::steady_clock::now();

    ExperimentResult out;
    out.rows.resize(config.trials);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t t; (t = next.fetch_add(1)) < config.trials;) {
            try {
                out.rows[t] = run_trial(config, ctx, params, feas, t);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = config.trials;
            }
        }
    };
    const unsigned n = std::min<unsigned>(config.threads, static_cast<unsigned>(config.trials));
    if (n <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    auto& s = out.summary;
    s.seed = config.seed;
    s.trials = config.trials;
    s.l = params.l;
    s.delta_floor = delta_floor(config.epsilon, params.l);
    for (const auto& r : out.rows) {
        s.accepted_ok += r.accepted_verdict;
        s.far_rejected += !r.far_verdict;
        s.certified += r.certificate.claim != FarCertificate::Claim::UpperBoundOnly;
    }
    s.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.check();
    TesterContext ctx = TesterContext::build(load_automaton(config.automaton));
    return run_experiment(config, ctx);
}

namespace {

std::string fixed(double x, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

}  // namespace

void write_csv(std::ostream& out, const ExperimentResult& result, bool timing) {
    out << kCsvHeader << '\n';
    for (const auto& r : result.rows) {
        out << r.trial << ',' << r.seed << ',' << (r.accepted_verdict ? "accept" : "reject") << ','
            << (r.far_verdict ? "accept" : "reject") << ',' << r.k_used.str() << ',' << r.samples_drawn << ','
            << r.pi_count << ',' << (timing ? fixed(r.wall_time) : "-") << ',' << claim_name(r.certificate.claim) << ','
            << r.certificate.lower_bound.str() << '\n';
    }
    const auto& s = result.summary;
    std::size_t drawn = 0;
    for (const auto& r : result.rows) drawn += r.samples_drawn;
    out << "summary," << s.seed << ',' << fixed(s.acceptance_rate())
        << ',' << fixed(s.rejection_rate()) << ','
        << (result.rows.empty() ? std::string("-") : result.rows.front().k_used.str()) << ',' << drawn << ','
        << (result.rows.empty() ? 0 : result.rows.front().pi_count) << ','
        << (timing ? fixed(s.wall_time) : "-") << ",certified=" << s.certified << ",delta_floor=" << fixed(s.delta_floor)
        << '\n';
}

}  // namespace tmt
