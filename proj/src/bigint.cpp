#include "rw2d/bigint.hpp"

#include <algorithm>
#include <cmath>

namespace rw2d {

BigUint::BigUint(std::uint64_t v) {
    while (v) {
        limbs_.push_back(static_cast<std::uint32_t>(v));
        v >>= 32;
    }
}

void BigUint::trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
}

BigUint& BigUint::operator+=(const BigUint& o) {
    const std::size_t n = std::max(limbs_.size(), o.limbs_.size());
    limbs_.resize(n, 0);
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t s = carry + limbs_[i];
        if (i < o.limbs_.size()) s += o.limbs_[i];
        limbs_[i] = static_cast<std::uint32_t>(s);
        carry = s >> 32;
    }
    if (carry) limbs_.push_back(static_cast<std::uint32_t>(carry));
    return *this;
}

BigUint operator*(const BigUint& a, const BigUint& b) {
    BigUint r;
    if (a.is_zero() || b.is_zero()) return r;
    r.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
    for (std::size_t i = 0; i < a.limbs_.size(); ++i) {
        std::uint64_t carry = 0;
        const std::uint64_t ai = a.limbs_[i];
        for (std::size_t j = 0; j < b.limbs_.size(); ++j) {
            const std::uint64_t cur = r.limbs_[i + j] + ai * b.limbs_[j] + carry;
            r.limbs_[i + j] = static_cast<std::uint32_t>(cur);
            carry = cur >> 32;
        }
        std::size_t k = i + b.limbs_.size();
        while (carry) {
            const std::uint64_t cur = r.limbs_[k] + carry;
            r.limbs_[k] = static_cast<std::uint32_t>(cur);
            carry = cur >> 32;
            ++k;
        }
    }
    r.trim();
    return r;
}

BigUint& BigUint::mul_small(std::uint32_t m) {
    if (m == 0) {
        limbs_.clear();
        return *this;
    }
    std::uint64_t carry = 0;
    for (auto& l : limbs_) {
        const std::uint64_t cur = static_cast<std::uint64_t>(l) * m + carry;
        l = static_cast<std::uint32_t>(cur);
        carry = cur >> 32;
    }
    while (carry) {
        limbs_.push_back(static_cast<std::uint32_t>(carry));
        carry >>= 32;
    }
    return *this;
}

BigUint& BigUint::div_small_exact(std::uint32_t d) {
    if (d == 0) throw std::invalid_argument("BigUint: division by zero");
    std::uint64_t rem = 0;
    for (std::size_t i = limbs_.size(); i-- > 0;) {
        const std::uint64_t cur = (rem << 32) | limbs_[i];
        limbs_[i] = static_cast<std::uint32_t>(cur / d);
        rem = cur % d;
    }
    if (rem != 0) throw std::logic_error("BigUint: inexact small division");
    trim();
    return *this;
}

BigUint& BigUint::shl(std::size_t k) {
    if (is_zero() || k == 0) return *this;
    const std::size_t words = k / 32, bits = k % 32;
    limbs_.insert(limbs_.begin(), words, 0);
    if (bits) {
        std::uint32_t carry = 0;
        for (std::size_t i = words; i < limbs_.size(); ++i) {
            const std::uint32_t nc = limbs_[i] >> (32 - bits);
            limbs_[i] = (limbs_[i] << bits) | carry;
            carry = nc;
        }
        if (carry) limbs_.push_back(carry);
    }
    return *this;
}

bool operator<(const BigUint& a, const BigUint& b) {
    if (a.limbs_.size() != b.limbs_.size()) return a.limbs_.size() < b.limbs_.size();
    for (std::size_t i = a.limbs_.size(); i-- > 0;)
        if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] < b.limbs_[i];
    return false;
}

std::size_t BigUint::bit_length() const {
    if (limbs_.empty()) return 0;
    std::size_t bits = (limbs_.size() - 1) * 32;
    std::uint32_t top = limbs_.back();
    while (top) {
        ++bits;
        top >>= 1;
    }
    return bits;
}

double BigUint::log() const {
    if (is_zero()) throw std::domain_error("BigUint::log of zero");
    // Mantissa from the top <= 96 bits, exponent for the rest.
    double m = 0.0;
    const std::size_t top = limbs_.size();
    for (std::size_t i = top; i-- > 0 && i + 3 >= top;)
        m = m * 4294967296.0 + limbs_[i];
    const std::size_t used = std::min<std::size_t>(top, 3) * 32;
    const double exp2_rest = static_cast<double>(top * 32 - used);
    return std::log(m) + exp2_rest * M_LN2;
}

double BigUint::to_double() const {
    double v = 0.0;
    for (std::size_t i = limbs_.size(); i-- > 0;) v = v * 4294967296.0 + limbs_[i];
    return v;
}

std::string BigUint::to_decimal() const {
    if (is_zero()) return "0";
    BigUint t = *this;
    std::string out;
    while (!t.is_zero()) {
        std::uint64_t rem = 0;
        for (std::size_t i = t.limbs_.size(); i-- > 0;) {
            const std::uint64_t cur = (rem << 32) | t.limbs_[i];
            t.limbs_[i] = static_cast<std::uint32_t>(cur / 1000000000u);
            rem = cur % 1000000000u;
        }
        t.trim();
        std::string chunk = std::to_string(rem);
        if (!t.is_zero()) chunk.insert(0, 9 - chunk.size(), '0');
        out.insert(0, chunk);
    }
    return out;
}

BigUint big_binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return BigUint(0);
    if (k > n - k) k = n - k;
    BigUint r(1);
    for (std::uint64_t i = 1; i <= k; ++i) {
        const std::uint64_t f = n - k + i;
        if (f > 0xFFFFFFFFULL) throw std::invalid_argument("big_binomial: factor too large");
        r.mul_small(static_cast<std::uint32_t>(f));
        r.div_small_exact(static_cast<std::uint32_t>(i));
    }
    return r;
}

Dyadic& Dyadic::operator+=(const Dyadic& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) {
        *this = o;
        return *this;
    }
    if (den_pow2 < o.den_pow2) {
        num.shl(o.den_pow2 - den_pow2);
        den_pow2 = o.den_pow2;
        num += o.num;
    } else {
        BigUint t = o.num;
        t.shl(den_pow2 - o.den_pow2);
        num += t;
    }
    return *this;
}

Dyadic operator*(const Dyadic& a, const Dyadic& b) {
    Dyadic r;
    r.num = a.num * b.num;
    r.den_pow2 = a.den_pow2 + b.den_pow2;
    return r;
}

bool operator==(const Dyadic& a, const Dyadic& b) {
    Dyadic x = a, y = b;
    x.normalize();
    y.normalize();
    return x.den_pow2 == y.den_pow2 && x.num == y.num;
}

void Dyadic::normalize() {
    if (num.is_zero()) {
        den_pow2 = 0;
        return;
    }
    while (den_pow2 > 0 && num.is_even()) {
        num.div_small_exact(2);
        --den_pow2;
    }
}

double Dyadic::log() const {
    return num.log() - static_cast<double>(den_pow2) * M_LN2;
}

double Dyadic::to_double() const {
    if (num.is_zero()) return 0.0;
    return std::exp(log());
}

} // namespace rw2d
