#include "tmt/edit_distance.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

namespace tmt {

const char* kind_name(EditOp::Kind kind) {
    switch (kind) {
    case EditOp::Kind::Delete: return "delete";
    case EditOp::Kind::Insert: return "insert";
    case EditOp::Kind::Retime: return "retime";
    }
    return "?";
}

namespace {

Rational relative_of(const TimeValue& d, const TimedWord& w1, const TimedWord& w2) {
    Rational norm = max(w1.total_weight(), w2.total_weight());
    return norm.is_zero() ? Rational{} : d / norm;
}

}  // namespace

DistanceResult timed_edit_distance(const TimedWord& w1, const TimedWord& w2) {
    const std::size_t n1 = w1.size(), n2 = w2.size();
    std::vector<std::vector<TimeValue>> a(n1 + 1, std::vector<TimeValue>(n2 + 1));
    for (std::size_t i = 1; i <= n1; ++i) a[i][0] = a[i - 1][0] + w1[i - 1].delay;
    for (std::size_t j = 1; j <= n2; ++j) a[0][j] = a[0][j - 1] + w2[j - 1].delay;
    for (std::size_t i = 1; i <= n1; ++i)
        for (std::size_t j = 1; j <= n2; ++j) {
            TimeValue best = min(a[i][j - 1] + w2[j - 1].delay, a[i - 1][j] + w1[i - 1].delay);
            if (w1[i - 1].symbol == w2[j - 1].symbol)
                best = min(best, a[i - 1][j - 1] + (w1[i - 1].delay - w2[j - 1].delay).abs());
            a[i][j] = std::move(best);
        }

    // Walk back, preferring a match, then an insertion, then a deletion; read
    // forwards this puts deletions first at any position.
    enum class Step { Match, Insert, Delete };
    std::vector<Step> steps;
    std::size_t i = n1, j = n2;
    while (i > 0 || j > 0) {
        if (i > 0 && j > 0 && w1[i - 1].symbol == w2[j - 1].symbol &&
            a[i][j] == a[i - 1][j - 1] + (w1[i - 1].delay - w2[j - 1].delay).abs()) {
            steps.push_back(Step::Match);
            --i;
            --j;
        } else if (j > 0 && a[i][j] == a[i][j - 1] + w2[j - 1].delay) {
            steps.push_back(Step::Insert);
            --j;
        } else {
            steps.push_back(Step::Delete);
            --i;
        }
    }
    std::reverse(steps.begin(), steps.end());

    DistanceResult result;
    result.absolute = a[n1][n2];
    result.relative = relative_of(result.absolute, w1, w2);
    result.relative_exceeds_one = result.relative > Rational(1);
    std::size_t cursor = 0;
    i = j = 0;
    for (Step s : steps) {
        switch (s) {
        case Step::Match:
            if (w1[i].delay != w2[j].delay)
                result.script.push_back({EditOp::Kind::Retime, cursor, {}, w2[j].delay, (w1[i].delay - w2[j].delay).abs()});
            ++cursor;
            ++i;
            ++j;
            break;
        case Step::Insert:
            result.script.push_back({EditOp::Kind::Insert, cursor, w2[j].symbol, w2[j].delay, w2[j].delay});
            ++cursor;
            ++j;
            break;
        case Step::Delete:
            result.script.push_back({EditOp::Kind::Delete, cursor, {}, {}, w1[i].delay});
            ++i;
            break;
        }
    }
    return result;
}

TimeValue timed_edit_cost(const TimedWord& w1, const TimedWord& w2) {
    const std::size_t n2 = w2.size();
    std::vector<TimeValue> prev(n2 + 1), cur(n2 + 1);
    for (std::size_t j = 1; j <= n2; ++j) cur[j] = cur[j - 1] + w2[j - 1].delay;
    for (std::size_t i = 1; i <= w1.size(); ++i) {
        std::swap(prev, cur);
        cur[0] = prev[0] + w1[i - 1].delay;
        for (std::size_t j = 1; j <= n2; ++j) {
            TimeValue best = min(cur[j - 1] + w2[j - 1].delay, prev[j] + w1[i - 1].delay);
            if (w1[i - 1].symbol == w2[j - 1].symbol)
                best = min(best, prev[j - 1] + (w1[i - 1].delay - w2[j - 1].delay).abs());
            cur[j] = std::move(best);
        }
    }
    return cur[n2];
}

ApplyResult apply_script(const TimedWord& w, const std::vector<EditOp>& script) {
    std::vector<Letter> letters(w.begin(), w.end());
    TimeValue cost;
    for (const auto& op : script) {
        switch (op.kind) {
        case EditOp::Kind::Delete: {
            if (op.position >= letters.size()) throw std::out_of_range("delete position out of range");
            if (op.cost != letters[op.position].delay) throw std::invalid_argument("delete cost mismatch");
            letters.erase(letters.begin() + static_cast<std::ptrdiff_t>(op.position));
            break;
        }
        case EditOp::Kind::Insert: {
            if (op.position > letters.size()) throw std::out_of_range("insert position out of range");
            if (op.cost != op.delay) throw std::invalid_argument("insert cost mismatch");
            letters.insert(letters.begin() + static_cast<std::ptrdiff_t>(op.position), Letter{op.symbol, op.delay});
            break;
        }
        case EditOp::Kind::Retime: {
            if (op.position >= letters.size()) throw std::out_of_range("retime position out of range");
            if (op.cost != (letters[op.position].delay - op.delay).abs()) throw std::invalid_argument("retime cost mismatch");
            letters[op.position].delay = op.delay;
            break;
        }
        }
        cost += op.cost;
    }
    return {TimedWord(std::move(letters)), cost};
}

TimeValue brute_force_distance(const TimedWord& w1, const TimedWord& w2, std::size_t cap) {
    if (w1.size() > cap || w2.size() > cap) throw std::length_error("brute-force distance beyond its cap");
    const std::size_t n1 = w1.size(), n2 = w2.size();
    const TimeValue total = w1.total_weight() + w2.total_weight();
    std::optional<TimeValue> best;

    // Matched letters pair up in order; everything else is deleted or inserted.
    for (unsigned m1 = 0; m1 < (1u << n1); ++m1) {
        std::vector<std::size_t> left;
        for (std::size_t i = 0; i < n1; ++i)
            if (m1 & (1u << i)) left.push_back(i);
        for (unsigned m2 = 0; m2 < (1u << n2); ++m2) {
            if (static_cast<std::size_t>(__builtin_popcount(m2)) != left.size()) continue;
            std::vector<std::size_t> right;
            for (std::size_t j = 0; j < n2; ++j)
                if (m2 & (1u << j)) right.push_back(j);
            bool ok = true;
            TimeValue cost = total;
            for (std::size_t k = 0; k < left.size() && ok; ++k) {
                const Letter& x = w1[left[k]];
                const Letter& y = w2[right[k]];
                if (x.symbol != y.symbol) ok = false;
                else cost += (x.delay - y.delay).abs() - x.delay - y.delay;
            }
            if (ok && (!best || cost < *best)) best = cost;
        }
    }
    return *best;
}

}  // namespace tmt
