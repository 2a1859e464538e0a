#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>

namespace flatcheck {

/// Maximum number of variables (base + fiber) a Series may carry.
inline constexpr std::size_t kMaxVars = 8;

/// Exponent vector packed into one machine word, one byte per variable.
///
/// Variable 0 occupies the most significant byte so that integer comparison
/// of the packed word is lexicographic comparison of exponent vectors.
/// Individual exponents are limited to 255; callers keep total degrees well
/// below that (series orders are capped at kMaxOrder).
class Monomial {
public:
    constexpr Monomial() = default;
    constexpr explicit Monomial(std::uint64_t bits) : bits_(bits) {}

    static constexpr Monomial var(std::size_t index, unsigned power = 1) {
        return Monomial(std::uint64_t(power) << shift(index));
    }

    constexpr unsigned exp(std::size_t index) const { return unsigned((bits_ >> shift(index)) & 0xffu); }

    constexpr Monomial with_exp(std::size_t index, unsigned e) const {
        std::uint64_t mask = std::uint64_t(0xff) << shift(index);
        return Monomial((bits_ & ~mask) | (std::uint64_t(e) << shift(index)));
    }

    constexpr unsigned degree() const {
        // byte-sum; valid while the sum stays below 256
        return unsigned((bits_ * 0x0101010101010101ull) >> 56);
    }

    /// Degree restricted to variables [first, last).
    constexpr unsigned degree_in(std::size_t first, std::size_t last) const {
        unsigned s = 0;
        for (std::size_t i = first; i < last; ++i) s += exp(i);
        return s;
    }

    constexpr std::uint64_t bits() const { return bits_; }
    constexpr bool is_one() const { return bits_ == 0; }

    constexpr Monomial operator*(Monomial o) const { return Monomial(bits_ + o.bits_); }

    /// True if every exponent of `o` is <= the matching exponent here.
    constexpr bool divisible_by(Monomial o) const {
        for (std::size_t i = 0; i < kMaxVars; ++i)
            if (o.exp(i) > exp(i)) return false;
        return true;
    }

    /// Requires divisible_by(o).
    constexpr Monomial operator/(Monomial o) const { return Monomial(bits_ - o.bits_); }

    /// Keep only variables [first, last).
    constexpr Monomial restricted(std::size_t first, std::size_t last) const {
        Monomial out;
        for (std::size_t i = first; i < last; ++i) out = out.with_exp(i, exp(i));
        return out;
    }

    friend constexpr bool operator==(Monomial a, Monomial b) { return a.bits_ == b.bits_; }

private:
    static constexpr unsigned shift(std::size_t index) { return unsigned(8 * (kMaxVars - 1 - index)); }
    std::uint64_t bits_ = 0;
};

/// Graded order: total degree first, then lexicographic with variable 0 largest.
struct GradedLess {
    constexpr bool operator()(Monomial a, Monomial b) const {
        unsigned da = a.degree(), db = b.degree();
        if (da != db) return da < db;
        return a.bits() < b.bits();
    }
};

struct MonomialHash {
    std::size_t operator()(Monomial m) const noexcept {
        std::uint64_t x = m.bits();
        x ^= x >> 33;
        x *= 0xff51afd7ed558ccdull;
        x ^= x >> 33;
        return std::size_t(x);
    }
};

}  // namespace flatcheck
