#include "tmt/rational.hpp"

#include <cctype>
#include <climits>
#include <ostream>
#include <stdexcept>

namespace tmt {

namespace {

__extension__ using i128 = __int128;
__extension__ using u128 = unsigned __int128;

u128 gcd_u128(u128 a, u128 b) {
    while (b != 0) {
        u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

bool fits64(i128 v) { return v >= INT64_MIN && v <= INT64_MAX; }

mpz_class wide_to_mpz(i128 v) {
    bool neg = v < 0;
    u128 u = neg ? static_cast<u128>(0) - static_cast<u128>(v) : static_cast<u128>(v);
    std::uint64_t parts[2] = {static_cast<std::uint64_t>(u), static_cast<std::uint64_t>(u >> 64)};
    mpz_class z;
    mpz_import(z.get_mpz_t(), 2, -1, sizeof(std::uint64_t), 0, 0, parts);
    if (neg) z = -z;
    return z;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    *this = from_wide(num, den);
}

Rational::Rational(const mpq_class& q) : big_(std::make_unique<mpq_class>(q)) {
    big_->canonicalize();
    demote();
}

Rational::Rational(const Rational& other)
    : num_(other.num_), den_(other.den_),
      big_(other.big_ ? std::make_unique<mpq_class>(*other.big_) : nullptr) {}

Rational& Rational::operator=(const Rational& other) {
    if (this == &other) return *this;
    num_ = other.num_;
    den_ = other.den_;
    if (other.big_) {
        if (big_) *big_ = *other.big_;
        else big_ = std::make_unique<mpq_class>(*other.big_);
    } else {
        big_.reset();
    }
    return *this;
}

Rational Rational::from_wide(i128 num, i128 den) {
    if (den < 0) {
        num = -num;
        den = -den;
    }
    Rational r;
    if (num == 0) return r;
    u128 un = num < 0 ? static_cast<u128>(0) - static_cast<u128>(num) : static_cast<u128>(num);
    u128 g = gcd_u128(un, static_cast<u128>(den));
    if (g > 1) {
        num /= static_cast<i128>(g);
        den /= static_cast<i128>(g);
    }
    if (fits64(num) && fits64(den)) {
        r.num_ = static_cast<std::int64_t>(num);
        r.den_ = static_cast<std::int64_t>(den);
        return r;
    }
    r.big_ = std::make_unique<mpq_class>(wide_to_mpz(num), wide_to_mpz(den));
    r.num_ = 0;
    r.den_ = 1;
    return r;
}

void Rational::demote() {
    if (!big_) return;
    const mpz_class& n = big_->get_num();
    const mpz_class& d = big_->get_den();
    if (n.fits_slong_p() && d.fits_slong_p()) {
        num_ = n.get_si();
        den_ = d.get_si();
        big_.reset();
    }
}

mpq_class Rational::to_mpq() const {
    if (big_) return *big_;
    mpq_class q{mpz_class(static_cast<long>(num_)), mpz_class(static_cast<long>(den_))};
    return q;
}

std::optional<Rational> Rational::parse(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) return std::nullopt;

    bool neg = false;
    if (text.front() == '-' || text.front() == '+') {
        neg = text.front() == '-';
        text.remove_prefix(1);
    }
    auto all_digits = [](std::string_view s) {
        if (s.empty()) return false;
        for (char c : s)
            if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        return true;
    };

    mpq_class q;
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        auto ns = text.substr(0, slash);
        auto ds = text.substr(slash + 1);
        if (!all_digits(ns) || !all_digits(ds)) return std::nullopt;
        mpz_class n(std::string(ns), 10), d(std::string(ds), 10);
        if (d == 0) return std::nullopt;
        q = mpq_class(n, d);
    } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
        auto ip = text.substr(0, dot);
        auto fp = text.substr(dot + 1);
        if (ip.empty() && fp.empty()) return std::nullopt;
        if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp))) return std::nullopt;
        std::string digits = std::string(ip) + std::string(fp);
        mpz_class n(digits.empty() ? std::string("0") : digits, 10);
        mpz_class d;
        mpz_ui_pow_ui(d.get_mpz_t(), 10, fp.size());
        q = mpq_class(n, d);
    } else {
        if (!all_digits(text)) return std::nullopt;
        q = mpq_class(mpz_class(std::string(text), 10));
    }
    q.canonicalize();
    if (neg) q = -q;
    return Rational(q);
}

std::string Rational::str() const {
    if (big_) {
        if (big_->get_den() == 1) return big_->get_num().get_str();
        return big_->get_str();
    }
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

double Rational::to_double() const {
    if (big_) return big_->get_d();
    return static_cast<double>(num_) / static_cast<double>(den_);
}

int Rational::sign() const noexcept {
    if (big_) return sgn(*big_);
    return (num_ > 0) - (num_ < 0);
}

bool Rational::is_integer() const {
    if (big_) return big_->get_den() == 1;
    return den_ == 1;
}

std::size_t Rational::denominator_bits() const {
    if (big_) return mpz_sizeinbase(big_->get_den_mpz_t(), 2);
    std::size_t bits = 0;
    for (std::uint64_t d = static_cast<std::uint64_t>(den_); d != 0; d >>= 1) ++bits;
    return bits;
}

Rational Rational::floor() const {
    if (big_) {
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), big_->get_num_mpz_t(), big_->get_den_mpz_t());
        return Rational(mpq_class(q));
    }
    std::int64_t q = num_ / den_;
    if ((num_ % den_ != 0) && (num_ < 0)) --q;
    return Rational(q);
}

Rational Rational::ceil() const {
    Rational f = floor();
    if (f == *this) return f;
    return f + 1;
}

std::int64_t Rational::floor_clamped() const {
    Rational f = floor();
    if (!f.big_) return f.num_;
    return f.sign() < 0 ? INT64_MIN : INT64_MAX;
}

Rational Rational::abs() const { return sign() < 0 ? -*this : *this; }

Rational Rational::operator-() const {
    if (!big_ && num_ != INT64_MIN) {
        Rational r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }
    return Rational(mpq_class(-to_mpq()));
}

Rational& Rational::operator+=(const Rational& rhs) {
    if (!big_ && !rhs.big_) {
        if (den_ == rhs.den_) {
            i128 n = static_cast<i128>(num_) + rhs.num_;
            if (den_ == 1 && fits64(n)) {
                num_ = static_cast<std::int64_t>(n);
                return *this;
            }
            return *this = from_wide(n, den_);
        }
        i128 n = static_cast<i128>(num_) * rhs.den_ + static_cast<i128>(rhs.num_) * den_;
        i128 d = static_cast<i128>(den_) * rhs.den_;
        return *this = from_wide(n, d);
    }
    return *this = Rational(mpq_class(to_mpq() + rhs.to_mpq()));
}

Rational& Rational::operator-=(const Rational& rhs) {
    if (!big_ && !rhs.big_) {
        if (den_ == rhs.den_) {
            i128 n = static_cast<i128>(num_) - rhs.num_;
            if (den_ == 1 && fits64(n)) {
                num_ = static_cast<std::int64_t>(n);
                return *this;
            }
            return *this = from_wide(n, den_);
        }
        i128 n = static_cast<i128>(num_) * rhs.den_ - static_cast<i128>(rhs.num_) * den_;
        i128 d = static_cast<i128>(den_) * rhs.den_;
        return *this = from_wide(n, d);
    }
    return *this = Rational(mpq_class(to_mpq() - rhs.to_mpq()));
}

Rational& Rational::operator*=(const Rational& rhs) {
    if (!big_ && !rhs.big_) {
        if (den_ == 1 && rhs.den_ == 1) {
            i128 n = static_cast<i128>(num_) * rhs.num_;
            if (fits64(n)) {
                num_ = static_cast<std::int64_t>(n);
                return *this;
            }
        }
        return *this = from_wide(static_cast<i128>(num_) * rhs.num_, static_cast<i128>(den_) * rhs.den_);
    }
    return *this = Rational(mpq_class(to_mpq() * rhs.to_mpq()));
}

Rational& Rational::operator/=(const Rational& rhs) {
    if (rhs.is_zero()) throw std::domain_error("rational division by zero");
    if (!big_ && !rhs.big_)
        return *this = from_wide(static_cast<i128>(num_) * rhs.den_, static_cast<i128>(den_) * rhs.num_);
    return *this = Rational(mpq_class(to_mpq() / rhs.to_mpq()));
}

bool operator==(const Rational& a, const Rational& b) {
    // Both sides are reduced and demoted whenever possible, so a small value
    // never equals a big one.
    if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
    if (a.big_ && b.big_) return *a.big_ == *b.big_;
    return false;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
        if (a.den_ == b.den_) return a.num_ <=> b.num_;
        i128 l = static_cast<i128>(a.num_) * b.den_;
        i128 r = static_cast<i128>(b.num_) * a.den_;
        return l < r ? std::strong_ordering::less : (l > r ? std::strong_ordering::greater : std::strong_ordering::equal);
    }
    int c = cmp(a.to_mpq(), b.to_mpq());
    return c < 0 ? std::strong_ordering::less : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

std::size_t Rational::hash() const {
    if (big_) return std::hash<std::string>{}(big_->get_str());
    std::uint64_t h = static_cast<std::uint64_t>(num_) * 0x9E3779B97F4A7C15ULL;
    h ^= static_cast<std::uint64_t>(den_) + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace tmt
