// Exact rational numbers for time values.
//
// Values that fit a pair of int64 stay on a fast path with 128-bit
// intermediates; anything larger is carried as a GMP rational. Results are
// always reduced, so equality is structural.
#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace tmt {

class Rational {
public:
    Rational() noexcept = default;
    Rational(std::int64_t value) noexcept : num_(value) {}  // NOLINT: implicit on purpose
    Rational(std::int64_t num, std::int64_t den);
    explicit Rational(const mpq_class& q);

    Rational(const Rational& other);
    Rational(Rational&&) noexcept = default;
    Rational& operator=(const Rational& other);
    Rational& operator=(Rational&&) noexcept = default;
    ~Rational() = default;

    // Accepts "p", "p/q", "-p/q" and plain decimals such as "12.375".
    static std::optional<Rational> parse(std::string_view text);

    [[nodiscard]] std::string str() const;
    [[nodiscard]] double to_double() const;
    [[nodiscard]] mpq_class to_mpq() const;

    [[nodiscard]] int sign() const noexcept;
    [[nodiscard]] bool is_zero() const noexcept { return !big_ && num_ == 0; }
    [[nodiscard]] bool is_integer() const;
    [[nodiscard]] bool is_small() const noexcept { return !big_; }
    // Numerator and denominator when on the fast path.
    [[nodiscard]] bool small_parts(std::int64_t& num, std::int64_t& den) const noexcept {
        if (big_) return false;
        num = num_;
        den = den_;
        return true;
    }
    // Bit length of the reduced denominator.
    [[nodiscard]] std::size_t denominator_bits() const;

    [[nodiscard]] Rational floor() const;
    [[nodiscard]] Rational ceil() const;
    [[nodiscard]] Rational abs() const;
    [[nodiscard]] Rational frac() const { return *this - floor(); }
    // floor() as an int64, clamped to the int64 range.
    [[nodiscard]] std::int64_t floor_clamped() const;

    Rational operator-() const;
    Rational& operator+=(const Rational& rhs);
    Rational& operator-=(const Rational& rhs);
    Rational& operator*=(const Rational& rhs);
    Rational& operator/=(const Rational& rhs);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b);
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

    [[nodiscard]] std::size_t hash() const;

private:
    __extension__ static Rational from_wide(__int128 num, __int128 den);
    void demote();

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
    std::unique_ptr<mpq_class> big_;  // engaged iff the value left the int64 range
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

// Time values are non-negative rationals; the constraint is checked where they
// enter the system (word construction, parsing, valuations).
using TimeValue = Rational;

}  // namespace tmt

template <>
struct std::hash<tmt::Rational> {
    std::size_t operator()(const tmt::Rational& r) const noexcept { return r.hash(); }
};
