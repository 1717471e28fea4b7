// timed-tester: command-line front end. Yes/no answers exit 0 for yes and 1
// for no; usage, format and resource errors exit 2.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tmt/alloc_counter.hpp"
#include "tmt/experiment.hpp"
#include "tmt/io.hpp"
#include "tmt/stream.hpp"

using nlohmann::json;
using namespace tmt;

namespace {

std::uint64_t effective_seed(std::uint64_t flag) {
    if (const char* env = std::getenv("TIMED_TESTER_SEED")) {
        try {
            std::size_t used = 0;
            auto v = std::stoull(env, &used);
            if (used == std::string(env).size()) return v;
        } catch (const std::exception&) {}
        throw std::invalid_argument(std::string("TIMED_TESTER_SEED is not an unsigned integer: ") + env);
    }
    return flag;
}

Rational rational_arg(const std::string& text, const char* what) {
    auto r = Rational::parse(text);
    if (!r) throw std::invalid_argument(std::string(what) + " is not a number: " + text);
    return *r;
}

json letters_json(std::span<const Letter> letters) {
    json arr = json::array();
    for (const auto& l : letters) arr.push_back({{"symbol", l.symbol}, {"delay", l.delay.str()}});
    return arr;
}

json run_json(const TimedAutomaton& a, const Run& run) {
    json states = json::array();
    for (const auto& s : run.states) {
        json v = json::object();
        for (std::size_t c = 0; c < a.num_clocks(); ++c) v[a.clocks()[c]] = s.valuation[c].str();
        states.push_back({{"location", a.locations()[s.location]}, {"valuation", v}});
    }
    return {{"states", states}, {"transitions", run.transitions}};
}

json factor_json(const Factor& f) {
    return {{"start", f.start},
            {"end", f.end},
            {"weight", f.weight.str()},
            {"truncated", f.truncated},
            {"letters", letters_json(f.letters)}};
}

json verdict_json(const Verdict& v, const TesterContext& ctx, bool emit_witness) {
    json samples = json::array();
    for (const auto& f : v.samples.factors) samples.push_back(factor_json(f));
    json out{{"verdict", v.accept ? "accept" : "reject"},
             {"pi_count", v.pi_count},
             {"pi_tried", v.pi_tried},
             {"samples", samples},
             {"samples_drawn", v.samples_drawn},
             {"k_used", v.k_used.str()},
             {"fallback_used", v.fallback_used},
             {"reason", v.reason}};
    if (emit_witness && v.accept) {
        json w{{"pi", ctx.paths[*v.accepting_pi].str(ctx.g)}};
        json anchors = json::array();
        for (const auto& c : v.witnesses) {
            json path = json::array();
            for (auto ti : c.path) path.push_back(ti);
            anchors.push_back({{"start", {{"position", c.start.position}, {"state", ctx.ra.describe(c.start.state)}}},
                               {"end", {{"position", c.end.position}, {"state", ctx.ra.describe(c.end.state)}}},
                               {"region_transitions", path}});
        }
        w["anchors"] = anchors;
        out["witness"] = w;
    }
    if (!ctx.warnings.empty()) out["warnings"] = ctx.warnings;
    return out;
}

json components_json(const TesterContext& ctx) {
    const auto& g = ctx.g;
    json comps = json::array();
    for (const auto& [c, verdict] : ctx.thickness) {
        json states = json::array();
        for (auto s : g.node(c).states) states.push_back(ctx.ra.describe(s));
        comps.push_back({{"id", c}, {"states", states}, {"thickness", kind_name(verdict.kind)}, {"reason", verdict.reason}});
    }
    json transient = json::array();
    for (auto s : g.transient_states()) transient.push_back({{"id", g.node_of(s)}, {"state", ctx.ra.describe(s)}});
    json edges = json::array();
    for (NodeId n = 0; n < g.nodes().size(); ++n)
        for (NodeId m : g.successors(n)) edges.push_back({n, m});
    json paths = json::array();
    for (const auto& p : ctx.paths) paths.push_back(p.str(g));
    return {{"m", ctx.ra.size()},          {"components", comps}, {"transient", transient}, {"edges", edges},
            {"diameter", g.diameter()},    {"paths", paths},      {"paths_truncated", ctx.paths_truncated}};
}

json script_json(const std::vector<EditOp>& script) {
    json arr = json::array();
    for (const auto& op : script) {
        json o{{"op", kind_name(op.kind)}, {"position", op.position}, {"cost", op.cost.str()}};
        if (op.kind == EditOp::Kind::Insert) o["symbol"] = op.symbol;
        if (op.kind != EditOp::Kind::Delete) o["delay"] = op.delay.str();
        arr.push_back(o);
    }
    return arr;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Timed automata toolkit: edit distance and approximate membership testing"};
    app.require_subcommand(1);
    int status = 0;

    // validate
    std::string automaton_path;
    auto* validate = app.add_subcommand("validate", "Check an automaton file");
    validate->add_option("automaton", automaton_path)->required();
    validate->callback([&] {
        auto report = validate_automaton(parse_automaton_description(read_file(automaton_path)));
        json v = json::array();
        for (const auto& x : report.violations) v.push_back({{"kind", kind_name(x.kind)}, {"message", x.message}});
        std::cout << json{{"valid", report.ok()}, {"violations", v}}.dump(2) << '\n';
        status = report.ok() ? 0 : 1;
    });

    // regions
    bool dot = false;
    auto* regions = app.add_subcommand("regions", "Print the region automaton");
    regions->add_option("automaton", automaton_path)->required();
    regions->add_flag("--dot", dot, "DOT graph instead of JSON");
    regions->callback([&] {
        auto ra = RegionAutomaton::build(load_automaton(automaton_path));
        std::cout << (dot ? region_automaton_dot(ra) : region_automaton_json(ra)) << '\n';
    });

    // components
    auto* components = app.add_subcommand("components", "Print the condensation and thickness verdicts");
    components->add_option("automaton", automaton_path)->required();
    components->callback([&] {
        auto ctx = TesterContext::build(load_automaton(automaton_path));
        std::cout << components_json(ctx).dump(2) << '\n';
    });

    // distance
    std::string word1, word2;
    auto* distance = app.add_subcommand("distance", "Timed edit distance between two words");
    distance->add_option("first", word1)->required();
    distance->add_option("second", word2)->required();
    distance->callback([&] {
        auto r = timed_edit_distance(load_word(word1), load_word(word2));
        json out{{"absolute", r.absolute.str()}, {"relative", r.relative.str()}, {"script", script_json(r.script)}};
        if (r.relative_exceeds_one) out["relative_exceeds_one"] = true;
        std::cout << out.dump(2) << '\n';
    });

    // membership
    std::string word_path;
    auto* membership = app.add_subcommand("membership", "Exact membership with a witness run");
    membership->add_option("automaton", automaton_path)->required();
    membership->add_option("word", word_path)->required();
    membership->callback([&] {
        auto a = load_automaton(automaton_path);
        auto r = membership_exact(a, load_word(word_path));
        json out{{"accepted", r.accepted}};
        if (r.witness) out["run"] = run_json(a, *r.witness);
        std::cout << out.dump(2) << '\n';
        status = r.accepted ? 0 : 1;
    });

    // sample
    std::size_t l = 1;
    std::string k_text;
    std::uint64_t seed = 1;
    bool stdin_stream = false;
    auto* sample = app.add_subcommand("sample", "Draw weighted k-factors from a word");
    auto* sample_word = sample->add_option("--word", word_path, "Word file");
    sample->add_flag("--stdin-stream", stdin_stream, "Read letters from stdin in one pass")->excludes(sample_word);
    sample->add_option("--l", l, "Number of factors")->check(CLI::PositiveNumber);
    sample->add_option("--k", k_text, "Factor weight")->required();
    sample->add_option("--seed", seed);
    sample->callback([&] {
        if (!stdin_stream && word_path.empty()) throw CLI::RequiredError("--word or --stdin-stream");
        TimeValue k = rational_arg(k_text, "--k");
        Mt64Source src(effective_seed(seed));
        SampleSet s;
        if (stdin_stream) {
            LetterReader reader(std::cin);
            ReservoirSampler r(l, k, src);
            while (auto letter = reader.next()) r.push(*letter);
            s = r.finish();
        } else {
            s = sample_factors(load_word(word_path), l, k, src);
        }
        for (const auto& f : s.factors) std::cout << factor_json(f).dump() << '\n';
        if (s.degenerate) std::cerr << "degenerate sample: " << s.reason << '\n';
    });

    // test and stream
    std::string epsilon_text, k_override;
    unsigned multiplier = 1;
    bool emit_witness = false;
    auto* test = app.add_subcommand("test", "Run the word tester");
    test->add_option("--automaton", automaton_path)->required();
    auto* test_word = test->add_option("--word", word_path, "Word file");
    test->add_flag("--stdin-stream", stdin_stream, "Read letters from stdin in one pass")->excludes(test_word);
    test->add_option("--epsilon", epsilon_text)->required();
    test->add_option("--seed", seed);
    test->add_option("--k-override", k_override);
    test->add_option("--sample-weight-multiplier", multiplier)->check(CLI::IsMember({1, 2}));
    test->add_flag("--emit-witness", emit_witness);

    std::string input_path;
    bool report_memory = false;
    auto* stream = app.add_subcommand("stream", "Run the word tester in one pass over a letter stream");
    stream->add_option("--automaton", automaton_path)->required();
    stream->add_option("--input", input_path, "Letter file or pipe (default stdin)");
    stream->add_option("--epsilon", epsilon_text)->required();
    stream->add_option("--seed", seed);
    stream->add_option("--k-override", k_override);
    stream->add_option("--sample-weight-multiplier", multiplier)->check(CLI::IsMember({1, 2}));
    stream->add_flag("--emit-witness", emit_witness);
    stream->add_flag("--memory", report_memory, "Report the heap high-water mark");

    auto run_tester = [&](bool streaming) {
        auto ctx = TesterContext::build(load_automaton(automaton_path));
        std::optional<TimeValue> k;
        if (!k_override.empty()) k = rational_arg(k_override, "--k-override");
        auto params = ctx.params(rational_arg(epsilon_text, "--epsilon"), k, multiplier);
        const auto s = effective_seed(seed);
        json out;
        if (streaming) {
            alloc::reset_peak();
            const std::size_t base = alloc::current();
            StreamResult r;
            if (input_path.empty() || input_path == "-") {
                r = stream_test(std::cin, ctx, params, s);
            } else {
                std::ifstream in(input_path);
                if (!in) throw std::runtime_error("cannot open " + input_path);
                r = stream_test(in, ctx, params, s);
            }
            out = verdict_json(r.verdict, ctx, emit_witness);
            out["letters"] = r.letters;
            out["weight"] = r.weight.str();
            out["peak_buffered_letters"] = r.peak_buffered;
            if (report_memory) out["peak_heap_bytes"] = alloc::peak() - std::min(alloc::peak(), base);
            status = r.verdict.accept ? 0 : 1;
        } else {
            Verdict v = word_tester(load_word(word_path), ctx, params, s);
            out = verdict_json(v, ctx, emit_witness);
            status = v.accept ? 0 : 1;
        }
        std::cout << out.dump(2) << '\n';
    };
    test->callback([&] {
        if (stdin_stream) return run_tester(true);
        if (word_path.empty()) throw CLI::RequiredError("--word or --stdin-stream");
        run_tester(false);
    });
    stream->callback([&] { run_tester(true); });

    // experiment
    std::string config_path, output_path;
    std::optional<std::uint64_t> seed_flag;
    std::optional<std::size_t> trials_flag;
    auto* experiment = app.add_subcommand("experiment", "Measure the tester on generated accepted and far words");
    experiment->add_option("--config", config_path)->required();
    experiment->add_option("--seed", seed_flag);
    experiment->add_option("--trials", trials_flag);
    experiment->add_option("--output", output_path, "CSV file (default: the config's output, else stdout)");
    experiment->callback([&] {
        auto cfg = load_experiment_config(config_path);
        if (seed_flag) cfg.seed = *seed_flag;
        if (std::getenv("TIMED_TESTER_SEED")) cfg.seed = effective_seed(cfg.seed);
        if (trials_flag) cfg.trials = *trials_flag;
        if (!output_path.empty()) cfg.output = output_path;
        auto result = run_experiment(cfg);
        if (cfg.output.empty() || cfg.output == "-") {
            write_csv(std::cout, result, cfg.timing);
        } else {
            std::ofstream out(cfg.output);
            if (!out) throw std::runtime_error("cannot write " + cfg.output);
            write_csv(out, result, cfg.timing);
        }
        const auto& s = result.summary;
        std::cerr << "acceptance rate " << s.acceptance_rate() << ", far rejection rate " << s.rejection_rate()
                  << ", floor " << s.delta_floor << '\n';
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ValidationError& e) {
        std::cerr << "invalid automaton: " << e.report().summary() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return status;
}
