#include "tmt/stream.hpp"

#include <algorithm>
#include <istream>

#include "tmt/io.hpp"

namespace tmt {

namespace {

// Exact membership along one path, fed a letter at a time.
class OnlineMembership {
public:
    OnlineMembership(const TesterContext& ctx, const FlatPi& pi) : ctx_(ctx), pi_(pi), ts_(ctx.ra, ctx.g, pi, {false}) {
        std::vector<SearchStart> starts;
        ClockValuation zero(ctx.ra.automaton().num_clocks());
        if (pi.size() > 0)
            for (StateId s : ctx.g.node(pi.steps[0].node).states)
                if (ctx.ra.is_initial(s)) starts.push_back({0, {0, s}, Zone::point(zero)});
        ts_.start(starts);
        alive_ = !starts.empty();
    }

    void push(const Letter& letter) {
        if (alive_) alive_ = ts_.advance(letter);
    }

    [[nodiscard]] bool accepts() const {
        if (!alive_) return false;
        const auto& f = ts_.frontier();
        return std::any_of(f.begin(), f.end(), [&](const auto& c) {
            return c.at.position == pi_.size() - 1 && ctx_.ra.is_final(c.at.state);
        });
    }

private:
    const TesterContext& ctx_;
    const FlatPi& pi_;
    TrackSearch ts_;
    bool alive_ = false;
};

}  // namespace

StreamResult stream_test(const LetterSource& next, const TesterContext& ctx, const TesterParams& params,
                         std::uint64_t seed) {
    const std::size_t n_paths = ctx.paths.size();
    std::vector<std::unique_ptr<Mt64Source>> sources;
    std::vector<std::unique_ptr<ReservoirSampler>> reservoirs;
    std::vector<std::unique_ptr<OnlineMembership>> exact;
    for (std::size_t i = 0; i < n_paths; ++i) {
        sources.push_back(std::make_unique<Mt64Source>(derive_seed(seed, i)));
        reservoirs.push_back(
            std::make_unique<ReservoirSampler>(params.l, params.sample_weight(), *sources.back(), params.retry_cap));
        exact.push_back(std::make_unique<OnlineMembership>(ctx, ctx.paths[i]));
    }

    StreamResult out;
    while (auto letter = next()) {
        ++out.letters;
        out.weight += letter->delay;
        for (std::size_t i = 0; i < n_paths; ++i) {
            reservoirs[i]->push(*letter);
            exact[i]->push(*letter);
        }
        std::size_t held = 0;
        for (const auto& r : reservoirs) held += r->buffered();
        out.peak_buffered = std::max(out.peak_buffered, held);
    }

    Verdict& v = out.verdict;
    v.pi_count = n_paths;
    v.k_used = params.sample_weight();
    if (n_paths == 0) v.reason = "no path reaches a final state";
    for (std::size_t i = 0; i < n_paths; ++i) {
        auto& starts = out.slot_starts.emplace_back();
        for (const auto& s : reservoirs[i]->starts())
            if (s) starts.push_back(*s);
        SampleSet samples = reservoirs[i]->finish();
        bool accept;
        v.pi_tried = i + 1;
        v.samples_drawn += samples.draws.size();
        if (samples.degenerate) {
            v.fallback_used = true;
            accept = exact[i]->accepts();
            v.reason = samples.reason + "; exact membership along the path " + (accept ? "holds" : "fails");
            v.witnesses.clear();
        } else {
            A2Result r = a2_compatible(samples.factors, out.letters, ctx.paths[i], ctx.ra, ctx.g);
            accept = r.compatible;
            v.witnesses = std::move(r.witnesses);
            v.reason = accept ? "samples compatible along the path" : r.reason;
        }
        v.samples = std::move(samples);
        if (accept) {
            v.accept = true;
            v.accepting_pi = i;
            break;
        }
    }
    if (!v.accept) v.witnesses.clear();
    return out;
}

StreamResult stream_test(std::istream& in, const TesterContext& ctx, const TesterParams& params, std::uint64_t seed) {
    LetterReader reader(in);
    return stream_test([&reader] { return reader.next(); }, ctx, params, seed);
}

PositionFactory replay_factory(const std::vector<std::vector<std::size_t>>& slot_starts) {
    return [slot_starts](std::size_t i, const TimedWord&) -> std::unique_ptr<PositionSource> {
        return std::make_unique<ReplayPositions>(i < slot_starts.size() ? slot_starts[i] : std::vector<std::size_t>{});
    };
}

}  // namespace tmt
