#include "tmt/random.hpp"

#include <stdexcept>

namespace tmt {

Rational UnitSource::next_unit() {
    return Rational(mpq_class(mpz_class(std::to_string(next62())), mpz_class(std::to_string(kUnitGrid))));
}

std::uint64_t UnitSource::below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("below(0)");
    // Rejection keeps the draw exactly uniform.
    const std::uint64_t limit = kUnitGrid - kUnitGrid % n;
    for (;;) {
        std::uint64_t r = next62();
        if (r < limit) return r % n;
    }
}

std::uint64_t GridSource::next62() {
    const std::uint64_t period = std::uint64_t{1} << bits_;
    std::uint64_t r = i_ << (62 - bits_);
    i_ = (i_ + 1) % period;
    return r;
}

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t s = base;
    splitmix64(s);
    s ^= index * 0xd1b54a32d192ed03ULL;
    return splitmix64(s);
}

std::uint64_t unit_threshold(const Rational& part, const Rational& whole) {
    if (whole.sign() <= 0 || part.sign() < 0 || whole < part) throw std::invalid_argument("unit_threshold range");
    std::int64_t pn, pd, wn, wd;
    if (part.small_parts(pn, pd) && whole.small_parts(wn, wd)) {
        __extension__ using u128 = unsigned __int128;
        u128 a = static_cast<u128>(pn) * static_cast<u128>(wd);
        u128 b = static_cast<u128>(pd) * static_cast<u128>(wn);
        if ((a >> 64) == 0 && (b >> 64) == 0) {
            u128 num = a << 62;
            return static_cast<std::uint64_t>((num + b - 1) / b);
        }
    }
    mpq_class q = part.to_mpq() / whole.to_mpq() * mpq_class(mpz_class(std::to_string(kUnitGrid)));
    mpz_class c;
    mpz_cdiv_q(c.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return std::stoull(c.get_str());
}

}  // namespace tmt
