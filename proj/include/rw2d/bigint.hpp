#pragma once
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rw2d {

/// Arbitrary-precision unsigned integer, base 2^32 little-endian limbs.
/// Just enough functionality for exact path counting and the dyadic
/// rationals behind the enumeration oracles; no division beyond a
/// single-limb divisor.
class BigUint {
public:
    BigUint() = default;
    BigUint(std::uint64_t v);

    bool is_zero() const { return limbs_.empty(); }
    bool is_even() const { return limbs_.empty() || (limbs_.front() & 1u) == 0; }

    BigUint& operator+=(const BigUint& o);
    friend BigUint operator+(BigUint a, const BigUint& b) { return a += b; }
    friend BigUint operator*(const BigUint& a, const BigUint& b);

    BigUint& mul_small(std::uint32_t m);
    /// Exact division; throws if a remainder would be left.
    BigUint& div_small_exact(std::uint32_t d);

    /// Shift left by k bits (multiply by 2^k).
    BigUint& shl(std::size_t k);

    friend bool operator==(const BigUint& a, const BigUint& b) { return a.limbs_ == b.limbs_; }
    friend bool operator!=(const BigUint& a, const BigUint& b) { return !(a == b); }
    friend bool operator<(const BigUint& a, const BigUint& b);

    /// Natural log, accurate to double precision (uses the top 96 bits).
    double log() const;
    double to_double() const;

    std::string to_decimal() const;

    std::size_t bit_length() const;

private:
    void trim();
    std::vector<std::uint32_t> limbs_; // empty means zero
};

/// Exact binomial coefficient C(n,k).
BigUint big_binomial(std::uint64_t n, std::uint64_t k);

/// Nonnegative dyadic rational num / 2^den_pow2, exact arithmetic.
struct Dyadic {
    BigUint num;
    std::size_t den_pow2 = 0;

    Dyadic() = default;
    Dyadic(BigUint n, std::size_t d) : num(std::move(n)), den_pow2(d) {}

    static Dyadic zero() { return Dyadic(); }
    static Dyadic one() { return Dyadic(BigUint(1), 0); }

    Dyadic& operator+=(const Dyadic& o);
    friend Dyadic operator*(const Dyadic& a, const Dyadic& b);
    friend bool operator==(const Dyadic& a, const Dyadic& b);

    bool is_zero() const { return num.is_zero(); }
    double log() const; // natural log of the value
    double to_double() const;
    void normalize(); // strip common powers of two
};

} // namespace rw2d
