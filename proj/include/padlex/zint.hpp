#ifndef PADLEX_ZINT_HPP
#define PADLEX_ZINT_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <variant>

#include "padlex/errors.hpp"

namespace padlex {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Arbitrary-precision integer that stays on a machine-word fast path while
// values fit in int64.  The exhaustive checkers grind through tens of
// millions of exact operations on tiny numbers, so every operator below
// tries overflow-checked int64 arithmetic first and only then falls back to
// cpp_int.  Results that fit are demoted back, keeping chains of operations
// on the fast path.
class Zint {
public:
    Zint() : v_(std::int64_t{0}) {}
    Zint(int v) : v_(static_cast<std::int64_t>(v)) {}
    Zint(long v) : v_(static_cast<std::int64_t>(v)) {}
    Zint(long long v) : v_(static_cast<std::int64_t>(v)) {}
    Zint(unsigned v) : v_(static_cast<std::int64_t>(v)) {}
    Zint(const BigInt& b) { assign(b); }
    Zint(BigInt&& b) { assign(b); }

    static Zint from_string(const std::string& s) { return Zint(BigInt(s)); }

    bool is_small() const { return std::holds_alternative<std::int64_t>(v_); }
    bool is_zero() const { return is_small() ? small() == 0 : std::get<BigInt>(v_).is_zero(); }
    bool is_negative() const { return is_small() ? small() < 0 : std::get<BigInt>(v_) < 0; }
    int sign() const { return is_zero() ? 0 : (is_negative() ? -1 : 1); }
    bool is_odd() const { return is_small() ? (small() & 1) != 0 : bit_test(std::get<BigInt>(v_), 0); }

    bool fits_int64() const { return is_small(); }

    // Raw small value; only valid when is_small().
    std::int64_t small() const { return std::get<std::int64_t>(v_); }

    std::int64_t to_int64() const {
        if (!is_small())
            throw OutsideRepresentablePrecision("integer does not fit in 64 bits: " + str());
        return small();
    }

    BigInt big() const { return is_small() ? BigInt(small()) : std::get<BigInt>(v_); }

    std::string str() const { return is_small() ? std::to_string(small()) : std::get<BigInt>(v_).str(); }

    friend Zint operator-(const Zint& a) {
        if (a.is_small() && a.small() != std::numeric_limits<std::int64_t>::min())
            return Zint(-a.small());
        return Zint(BigInt(-a.big()));
    }

    friend Zint operator+(const Zint& a, const Zint& b) {
        if (a.is_small() && b.is_small()) {
            std::int64_t r;
            if (!__builtin_add_overflow(a.small(), b.small(), &r)) return Zint(r);
        }
        return Zint(BigInt(a.big() + b.big()));
    }

    friend Zint operator-(const Zint& a, const Zint& b) {
        if (a.is_small() && b.is_small()) {
            std::int64_t r;
            if (!__builtin_sub_overflow(a.small(), b.small(), &r)) return Zint(r);
        }
        return Zint(BigInt(a.big() - b.big()));
    }

    friend Zint operator*(const Zint& a, const Zint& b) {
        if (a.is_small() && b.is_small()) {
            std::int64_t r;
            if (!__builtin_mul_overflow(a.small(), b.small(), &r)) return Zint(r);
        }
        return Zint(BigInt(a.big() * b.big()));
    }

    // Truncated division, C++ semantics.
    friend Zint operator/(const Zint& a, const Zint& b) {
        if (b.is_zero()) throw DivisionByZero("integer division by zero");
        if (a.is_small() && b.is_small() &&
            !(a.small() == std::numeric_limits<std::int64_t>::min() && b.small() == -1))
            return Zint(a.small() / b.small());
        return Zint(BigInt(a.big() / b.big()));
    }

    friend Zint operator%(const Zint& a, const Zint& b) {
        if (b.is_zero()) throw DivisionByZero("integer remainder by zero");
        if (a.is_small() && b.is_small() &&
            !(a.small() == std::numeric_limits<std::int64_t>::min() && b.small() == -1))
            return Zint(a.small() % b.small());
        return Zint(BigInt(a.big() % b.big()));
    }

    Zint& operator+=(const Zint& o) { return *this = *this + o; }
    Zint& operator-=(const Zint& o) { return *this = *this - o; }
    Zint& operator*=(const Zint& o) { return *this = *this * o; }
    Zint& operator/=(const Zint& o) { return *this = *this / o; }
    Zint& operator%=(const Zint& o) { return *this = *this % o; }

    friend bool operator==(const Zint& a, const Zint& b) {
        if (a.is_small() && b.is_small()) return a.small() == b.small();
        // Mixed forms cannot be equal: big form always holds out-of-range values.
        if (a.is_small() != b.is_small()) return false;
        return std::get<BigInt>(a.v_) == std::get<BigInt>(b.v_);
    }
    friend bool operator!=(const Zint& a, const Zint& b) { return !(a == b); }
    friend bool operator<(const Zint& a, const Zint& b) {
        if (a.is_small() && b.is_small()) return a.small() < b.small();
        return a.big() < b.big();
    }
    friend bool operator>(const Zint& a, const Zint& b) { return b < a; }
    friend bool operator<=(const Zint& a, const Zint& b) { return !(b < a); }
    friend bool operator>=(const Zint& a, const Zint& b) { return !(a < b); }

private:
    std::variant<std::int64_t, BigInt> v_;

    void assign(const BigInt& b) {
        if (b >= std::numeric_limits<std::int64_t>::min() &&
            b <= std::numeric_limits<std::int64_t>::max())
            v_ = b.convert_to<std::int64_t>();
        else
            v_ = b;
    }
};

inline Zint abs(const Zint& a) { return a.is_negative() ? -a : a; }

inline Zint gcd(const Zint& a, const Zint& b) {
    if (a.is_small() && b.is_small() &&
        a.small() != std::numeric_limits<std::int64_t>::min() &&
        b.small() != std::numeric_limits<std::int64_t>::min())
        return Zint(std::gcd(a.small(), b.small()));
    return Zint(BigInt(boost::multiprecision::gcd(a.big(), b.big())));
}

// a mod m normalized into [0, m); requires m > 0.
inline Zint pos_mod(const Zint& a, const Zint& m) {
    Zint r = a % m;
    return r.is_negative() ? r + m : r;
}

inline Zint pow_zi(const Zint& base, std::uint64_t e) {
    Zint acc(1), b = base;
    while (e) {
        if (e & 1) acc *= b;
        e >>= 1;
        if (e) b *= b;
    }
    return acc;
}

// base^e mod m with m > 0, e >= 0.
inline Zint mulmod(const Zint& a, const Zint& b, const Zint& m) {
    if (a.is_small() && b.is_small() && m.is_small() && m.small() > 0) {
        __int128 r = static_cast<__int128>(a.small()) * b.small() % m.small();
        if (r < 0) r += m.small();
        return Zint(static_cast<std::int64_t>(r));
    }
    return pos_mod(a * b, m);
}

inline Zint powmod(const Zint& base, std::uint64_t e, const Zint& m) {
    Zint acc(1), b = pos_mod(base, m);
    while (e) {
        if (e & 1) acc = mulmod(acc, b, m);
        e >>= 1;
        if (e) b = mulmod(b, b, m);
    }
    return acc;
}

// Inverse of a modulo m (m >= 1); requires gcd(a, m) == 1.
inline Zint invmod(const Zint& a, const Zint& m) {
    if (m <= Zint(0)) throw std::invalid_argument("invmod: modulus must be positive");
    if (m == Zint(1)) return Zint(0);
    if (a.is_small() && m.is_small()) {
        // Bezout coefficients stay below the modulus, so int64 suffices.
        std::int64_t mm = m.small();
        std::int64_t r0 = mm, r1 = a.small() % mm;
        if (r1 < 0) r1 += mm;
        std::int64_t t0 = 0, t1 = 1;
        while (r1 != 0) {
            std::int64_t q = r0 / r1;
            std::int64_t r2 = r0 - q * r1;
            r0 = r1; r1 = r2;
            std::int64_t t2 = t0 - q * t1;
            t0 = t1; t1 = t2;
        }
        if (r0 != 1) throw std::invalid_argument("invmod: arguments are not coprime");
        if (t0 < 0) t0 += mm;
        return Zint(t0);
    }
    BigInt r0 = m.big(), r1 = pos_mod(a, m).big();
    BigInt t0 = 0, t1 = 1;
    while (r1 != 0) {
        BigInt q = r0 / r1;
        BigInt r2 = r0 - q * r1;
        r0 = r1; r1 = r2;
        BigInt t2 = t0 - q * t1;
        t0 = t1; t1 = t2;
    }
    if (r0 != 1) throw std::invalid_argument("invmod: arguments are not coprime");
    if (t0 < 0) t0 += m.big();
    return Zint(t0);
}

// Exact k-th root of n >= 0, or nullopt if n is not a perfect k-th power.
inline std::optional<Zint> iroot_exact(const Zint& n, unsigned k) {
    if (k == 0) throw std::invalid_argument("iroot_exact: zero degree");
    if (n.is_negative()) throw std::invalid_argument("iroot_exact: negative radicand");
    if (n.is_zero()) return Zint(0);
    if (k == 1) return n;
    BigInt N = n.big();
    unsigned bits = boost::multiprecision::msb(N) + 1;
    BigInt r = BigInt(1) << ((bits + k - 1) / k);
    // Newton iteration for floor(N^(1/k)), monotone once above the root.
    while (true) {
        BigInt rk1 = boost::multiprecision::pow(r, k - 1);
        BigInt next = ((k - 1) * r + N / rk1) / k;
        if (next >= r) break;
        r = next;
    }
    if (boost::multiprecision::pow(r, k) == N) return Zint(r);
    return std::nullopt;
}

// Multiplicity of p in n; requires n != 0.
inline std::int64_t ord_in(const Zint& n, std::int64_t p) {
    if (n.is_zero()) throw std::invalid_argument("ord_in: zero argument");
    std::int64_t k = 0;
    Zint m = n;
    while (true) {
        Zint q = m / Zint(p);
        if (q * Zint(p) != m) return k;
        m = q;
        ++k;
    }
}

// Floor/ceiling division for int64 with positive divisor.
inline std::int64_t floor_div64(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b, r = a % b;
    return r < 0 ? q - 1 : q;
}

inline std::int64_t ceil_div64(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b, r = a % b;
    return r > 0 ? q + 1 : q;
}

inline Rat make_rat(const Zint& num, const Zint& den) {
    if (den.is_zero()) throw DivisionByZero("rational with zero denominator");
    return Rat(num.big(), den.big());
}

inline Zint rat_floor(const Rat& r) {
    BigInt n = numerator(r), d = denominator(r);
    BigInt q = n / d;
    if (n % d != 0 && n < 0) --q;
    return Zint(q);
}

inline Zint rat_ceil(const Rat& r) {
    BigInt n = numerator(r), d = denominator(r);
    BigInt q = n / d;
    if (n % d != 0 && n > 0) ++q;
    return Zint(q);
}

inline bool rat_is_integer(const Rat& r) { return denominator(r) == 1; }

inline std::string rat_str(const Rat& r) {
    BigInt n = numerator(r), d = denominator(r);
    if (d == 1) return n.str();
    return n.str() + "/" + d.str();
}

} // namespace padlex

#endif
