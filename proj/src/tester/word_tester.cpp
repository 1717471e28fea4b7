#include "tmt/word_tester.hpp"

#include <stdexcept>

namespace tmt {

TesterParams derive_params(std::size_t l, std::size_t m, std::int64_t B, const Rational& epsilon,
                           const std::optional<TimeValue>& k_override, unsigned multiplier) {
    if (epsilon.sign() <= 0 || epsilon >= Rational(1)) throw std::invalid_argument("epsilon must lie in (0, 1)");
    if (multiplier != 1 && multiplier != 2) throw std::invalid_argument("sample weight multiplier must be 1 or 2");
    TesterParams p;
    p.epsilon = epsilon;
    p.l = std::max<std::size_t>(l, 1);
    p.m = m;
    p.B = B;
    p.sample_weight_multiplier = multiplier;
    if (k_override) {
        if (k_override->sign() < 0) throw std::invalid_argument("k must be non-negative");
        p.k = *k_override;
    } else {
        p.k = Rational(24) * Rational(static_cast<std::int64_t>(p.l)) * Rational(static_cast<std::int64_t>(m)) *
              Rational(B) / epsilon;
    }
    return p;
}

TesterContext TesterContext::build(const TimedAutomaton& a, const ContextOptions& opts) {
    TesterContext ctx{RegionAutomaton::build(a, opts.regions), {}, {}, false, {}, {}};
    ctx.g = ComponentGraph::condense(ctx.ra);
    auto en = enumerate_paths(ctx.g, ctx.ra, opts.path_cap);
    ctx.paths_truncated = en.truncated;
    for (const auto& p : en.paths) ctx.paths.push_back(flatten(p.bar_form(ctx.g), ctx.g));
    if (en.truncated)
        ctx.warnings.push_back("path enumeration stopped at " + std::to_string(opts.path_cap) +
                               " paths; acceptance is no longer guaranteed");
    if (opts.classify)
        for (NodeId c : ctx.g.components()) {
            auto v = is_thick(ctx.g, c, ctx.ra, opts.thickness);
            if (v.kind != ThicknessVerdict::Kind::Thick)
                ctx.warnings.push_back("component " + std::to_string(c) + " is " + kind_name(v.kind) +
                                       "; the rejection guarantee does not apply");
            ctx.thickness.emplace_back(c, std::move(v));
        }
    return ctx;
}

TesterParams TesterContext::params(const Rational& epsilon, const std::optional<TimeValue>& k_override,
                                   unsigned multiplier) const {
    return derive_params(g.diameter(), ra.size(), ra.automaton().max_constant(), epsilon, k_override, multiplier);
}

Verdict word_tester_along(const TimedWord& w, const FlatPi& pi, const TesterContext& ctx, const TesterParams& params,
                          PositionSource& positions) {
    Verdict v;
    v.pi_count = 1;
    v.pi_tried = 1;
    v.k_used = params.sample_weight();
    v.samples = sample_factors(w, params.l, params.sample_weight(), positions, params.retry_cap);
    v.samples_drawn = v.samples.draws.size();
    if (v.samples.degenerate) {
        v.fallback_used = true;
        v.accept = restricted_membership(w.letters(), pi, ctx.ra, ctx.g);
        v.reason = v.samples.reason + "; exact membership along the path " + (v.accept ? "holds" : "fails");
        return v;
    }
    A2Result r = a2_compatible(v.samples.factors, w.size(), pi, ctx.ra, ctx.g);
    v.accept = r.compatible;
    v.witnesses = std::move(r.witnesses);
    v.reason = r.compatible ? "samples compatible along the path" : r.reason;
    return v;
}

Verdict word_tester(const TimedWord& w, const TesterContext& ctx, const TesterParams& params, std::uint64_t seed,
                    const PositionFactory& factory) {
    Verdict out;
    out.pi_count = ctx.paths.size();
    out.k_used = params.sample_weight();
    if (ctx.paths.empty()) {
        out.reason = "no path reaches a final state";
        return out;
    }
    for (std::size_t i = 0; i < ctx.paths.size(); ++i) {
        Verdict v;
        if (factory) {
            auto positions = factory(i, w);
            v = word_tester_along(w, ctx.paths[i], ctx, params, *positions);
        } else if (w.total_weight().sign() == 0) {
            ReplayPositions none({});
            v = word_tester_along(w, ctx.paths[i], ctx, params, none);
        } else {
            Mt64Source src(derive_seed(seed, i));
            MuPositions positions(w, src);
            v = word_tester_along(w, ctx.paths[i], ctx, params, positions);
        }
        out.pi_tried = i + 1;
        out.samples_drawn += v.samples_drawn;
        out.fallback_used = out.fallback_used || v.fallback_used;
        out.samples = std::move(v.samples);
        out.reason = std::move(v.reason);
        if (v.accept) {
            out.accept = true;
            out.accepting_pi = i;
            out.witnesses = std::move(v.witnesses);
            return out;
        }
    }
    return out;
}

Verdict word_tester(const TimedWord& w, const TimedAutomaton& a, const Rational& epsilon, std::uint64_t seed) {
    ContextOptions opts;
    opts.classify = false;
    TesterContext ctx = TesterContext::build(a, opts);
    return word_tester(w, ctx, ctx.params(epsilon), seed);
}

}  // namespace tmt
