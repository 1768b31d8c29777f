#ifndef PADLEX_VALUATION_HPP
#define PADLEX_VALUATION_HPP

#include <cstdint>
#include <string>

#include "padlex/errors.hpp"
#include "padlex/zint.hpp"

namespace padlex {

// Additive valuation: an integer or +infinity (the valuation of zero).
class Valuation {
public:
    Valuation() : finite_(true), v_(0) {}
    Valuation(std::int64_t v) : finite_(true), v_(v) {}

    static Valuation infinity() {
        Valuation r;
        r.finite_ = false;
        return r;
    }

    bool is_finite() const { return finite_; }

    std::int64_t value() const {
        if (!finite_) throw IndeterminateValuation("valuation is +infinity");
        return v_;
    }

    friend Valuation operator+(const Valuation& a, const Valuation& b) {
        if (!a.finite_ || !b.finite_) return infinity();
        return Valuation(a.v_ + b.v_);
    }

    friend bool operator==(const Valuation& a, const Valuation& b) {
        if (a.finite_ != b.finite_) return false;
        return !a.finite_ || a.v_ == b.v_;
    }
    friend bool operator!=(const Valuation& a, const Valuation& b) { return !(a == b); }
    friend bool operator<(const Valuation& a, const Valuation& b) {
        if (!a.finite_) return false;
        if (!b.finite_) return true;
        return a.v_ < b.v_;
    }
    friend bool operator>(const Valuation& a, const Valuation& b) { return b < a; }
    friend bool operator<=(const Valuation& a, const Valuation& b) { return !(b < a); }
    friend bool operator>=(const Valuation& a, const Valuation& b) { return !(a < b); }

    std::string str() const { return finite_ ? std::to_string(v_) : "+inf"; }

private:
    bool finite_;
    std::int64_t v_;
};

// Exact absolute value: either 0 or p^exponent.  The prime is implicit; all
// values in one computation share it, and conversions that need it take it
// as an argument.
class Norm {
public:
    static Norm zero() { return Norm(true, 0); }
    static Norm one() { return Norm(false, 0); }
    static Norm p_power(std::int64_t e) { return Norm(false, e); }

    // |x| = p^{-ord(x)}, with |0| = 0.
    static Norm from_valuation(const Valuation& v) {
        return v.is_finite() ? p_power(-v.value()) : zero();
    }

    bool is_zero() const { return zero_; }

    std::int64_t exponent() const {
        if (zero_) throw DivisionByZero("norm zero has no exponent");
        return e_;
    }

    friend Norm operator*(const Norm& a, const Norm& b) {
        if (a.zero_ || b.zero_) return zero();
        return p_power(a.e_ + b.e_);
    }

    friend Norm operator/(const Norm& a, const Norm& b) {
        if (b.zero_) throw DivisionByZero("division by zero norm");
        if (a.zero_) return zero();
        return p_power(a.e_ - b.e_);
    }

    friend bool operator==(const Norm& a, const Norm& b) {
        if (a.zero_ != b.zero_) return false;
        return a.zero_ || a.e_ == b.e_;
    }
    friend bool operator!=(const Norm& a, const Norm& b) { return !(a == b); }
    friend bool operator<(const Norm& a, const Norm& b) {
        if (b.zero_) return false;
        if (a.zero_) return true;
        return a.e_ < b.e_;
    }
    friend bool operator>(const Norm& a, const Norm& b) { return b < a; }
    friend bool operator<=(const Norm& a, const Norm& b) { return !(b < a); }
    friend bool operator>=(const Norm& a, const Norm& b) { return !(a < b); }

    friend Norm max(const Norm& a, const Norm& b) { return a < b ? b : a; }
    friend Norm min(const Norm& a, const Norm& b) { return b < a ? b : a; }

    Rat to_rational(std::int64_t p) const {
        if (zero_) return Rat(0);
        if (e_ >= 0) return Rat(pow_zi(Zint(p), static_cast<std::uint64_t>(e_)).big());
        return Rat(BigInt(1), pow_zi(Zint(p), static_cast<std::uint64_t>(-e_)).big());
    }

    std::string str(std::int64_t p) const {
        if (zero_) return "0";
        if (e_ == 0) return "1";
        return std::to_string(p) + "^" + std::to_string(e_);
    }

private:
    Norm(bool zero, std::int64_t e) : zero_(zero), e_(e) {}
    bool zero_;
    std::int64_t e_;
};

// Exact comparison of a norm against an arbitrary nonnegative rational bound.
inline bool norm_leq_rat(const Norm& n, std::int64_t p, const Rat& bound) {
    if (n.is_zero()) return bound >= 0;
    return n.to_rational(p) <= bound;
}

} // namespace padlex

#endif
