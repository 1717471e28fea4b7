// Random sources. Everything random in the library goes through UnitSource so
// that tests can swap in a deterministic grid.
#pragma once

#include <cstdint>
#include <random>

#include "tmt/rational.hpp"

namespace tmt {

// Draws are integers r uniform on [0, 2^62); the unit value is r / 2^62.
inline constexpr std::uint64_t kUnitGrid = std::uint64_t{1} << 62;

class UnitSource {
public:
    virtual ~UnitSource() = default;
    virtual std::uint64_t next62() = 0;

    [[nodiscard]] Rational next_unit();
    // Uniform on {0, ..., n-1}; n must be positive.
    std::uint64_t below(std::uint64_t n);
};

class Mt64Source final : public UnitSource {
public:
    explicit Mt64Source(std::uint64_t seed) : gen_(seed) {}
    std::uint64_t next62() override { return gen_() >> 2; }

private:
    std::mt19937_64 gen_;
};

// Walks the grid i / 2^bits for i = 0, 1, ..., wrapping around. Over one full
// period every grid point is produced exactly once.
class GridSource final : public UnitSource {
public:
    explicit GridSource(unsigned bits) : bits_(bits) {}
    std::uint64_t next62() override;

private:
    unsigned bits_;
    std::uint64_t i_ = 0;
};

std::uint64_t splitmix64(std::uint64_t& state);
// An independent-looking child seed for (base, index).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

// ceil(part / whole * 2^62), for 0 <= part <= whole and whole > 0. A draw r
// satisfies r < threshold exactly when r / 2^62 < part / whole.
std::uint64_t unit_threshold(const Rational& part, const Rational& whole);

}  // namespace tmt
