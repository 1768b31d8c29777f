#ifndef PADLEX_SCALAR_HPP
#define PADLEX_SCALAR_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "padlex/errors.hpp"
#include "padlex/valuation.hpp"
#include "padlex/zint.hpp"

namespace padlex {

// Depth-m angular data: the class of a unit modulo p^m, or the zero class.
// residue() is normalized into [0, p^m) and is either 0 or prime to p.
class AngularClass {
public:
    AngularClass(std::int64_t p, std::int32_t m, const Zint& residue)
        : p_(p), m_(m), r_(pos_mod(residue, pow_zi(Zint(p), static_cast<std::uint64_t>(m)))) {
        if (p < 2 || m < 1) throw std::invalid_argument("AngularClass: need p >= 2, m >= 1");
        if (!r_.is_zero() && (r_ % Zint(p)).is_zero())
            throw std::invalid_argument("AngularClass: residue neither zero nor a unit");
    }

    std::int64_t prime() const { return p_; }
    std::int32_t depth() const { return m_; }
    const Zint& residue() const { return r_; }
    bool is_zero() const { return r_.is_zero(); }

    Zint modulus() const { return pow_zi(Zint(p_), static_cast<std::uint64_t>(m_)); }

    friend bool operator==(const AngularClass& a, const AngularClass& b) {
        return a.p_ == b.p_ && a.m_ == b.m_ && a.r_ == b.r_;
    }
    friend bool operator!=(const AngularClass& a, const AngularClass& b) { return !(a == b); }

    friend AngularClass operator*(const AngularClass& a, const AngularClass& b) {
        a.require_same(b);
        return AngularClass(a.p_, a.m_, mulmod(a.r_, b.r_, a.modulus()));
    }

    AngularClass inverse() const {
        if (is_zero()) throw ZeroClass("zero angular class has no inverse");
        return AngularClass(p_, m_, invmod(r_, modulus()));
    }

    AngularClass pow(std::int64_t e) const {
        if (e < 0) return inverse().pow(-e);
        if (is_zero())
            return e == 0 ? AngularClass(p_, m_, Zint(1)) : *this;
        return AngularClass(p_, m_, powmod(r_, static_cast<std::uint64_t>(e), modulus()));
    }

    // Restriction to a shallower depth.
    AngularClass truncate(std::int32_t m) const {
        if (m < 1 || m > m_) throw std::invalid_argument("AngularClass::truncate: bad depth");
        return AngularClass(p_, m, r_ % pow_zi(Zint(p_), static_cast<std::uint64_t>(m)));
    }

    std::string str() const { return r_.str() + " mod " + std::to_string(p_) + "^" + std::to_string(m_); }

private:
    void require_same(const AngularClass& o) const {
        if (p_ != o.p_ || m_ != o.m_)
            throw std::invalid_argument("AngularClass: mixed primes or depths");
    }

    std::int64_t p_;
    std::int32_t m_;
    Zint r_;
};

// Number of low base-p digits on which two classes of equal depth agree
// (m if they are equal).
inline std::int32_t agreement_depth(const AngularClass& a, const AngularClass& b) {
    if (a.prime() != b.prime() || a.depth() != b.depth())
        throw std::invalid_argument("agreement_depth: mixed primes or depths");
    Zint d = a.residue() - b.residue();
    if (d.is_zero()) return a.depth();
    return static_cast<std::int32_t>(std::min<std::int64_t>(a.depth(), ord_in(d, a.prime())));
}

// Element of the field of p-adic numbers, either exact or known to finite
// precision.
//
// Exact form: x = p^v * u / w with u, w coprime, w > 0, and both prime to p;
// zero is u = 0.  This makes ord, norm and angular data O(1) reads.
//
// Approximate form: x = p^v * (u + O(p^k)) with u a unit mod p^k, k >= 1.
// A quantity known only to vanish to absolute precision A (for instance a
// cancelled difference) is stored with k = 0 and v = A; its valuation is
// indeterminate.  Approximate values appear only where roots are involved;
// field operations on exact inputs stay exact.
//
// Precision propagates pessimistically: additions meet absolute precision,
// multiplications meet relative precision.  Mixed-prime operands are
// rejected.
class PadicScalar {
public:
    static PadicScalar zero(std::int64_t p) { return PadicScalar(p, 0, Zint(0), Zint(1)); }
    static PadicScalar one(std::int64_t p) { return PadicScalar(p, 0, Zint(1), Zint(1)); }

    static PadicScalar from_int(std::int64_t p, const Zint& n) { return from_ratio(p, n, Zint(1)); }

    static PadicScalar from_ratio(std::int64_t p, const Zint& num, const Zint& den) {
        check_prime(p);
        if (den.is_zero()) throw DivisionByZero("scalar with zero denominator");
        return make_exact(p, 0, num, den);
    }

    // Unit u (given modulo p^prec, prec >= 1) scaled by p^v.
    static PadicScalar approx(std::int64_t p, std::int64_t v, const Zint& unit, std::int32_t prec) {
        check_prime(p);
        if (prec < 1) throw std::invalid_argument("approx scalar needs precision >= 1");
        Zint mod = pow_zi(Zint(p), static_cast<std::uint64_t>(prec));
        Zint u = pos_mod(unit, mod);
        if (u.is_zero() || (u % Zint(p)).is_zero())
            throw std::invalid_argument("approx scalar unit must be prime to p");
        PadicScalar r(p);
        r.exact_ = false;
        r.v_ = v;
        r.u_ = u;
        r.prec_ = prec;
        return r;
    }

    // A value known only to satisfy ord(x) >= abs_prec.
    static PadicScalar approx_zero(std::int64_t p, std::int64_t abs_prec) {
        check_prime(p);
        PadicScalar r(p);
        r.exact_ = false;
        r.v_ = abs_prec;
        r.u_ = Zint(0);
        r.prec_ = 0;
        return r;
    }

    // Parses "a", "-a", or "a/b" in base 10 into an exact scalar.
    static PadicScalar parse(std::int64_t p, const std::string& s);

    std::int64_t prime() const { return p_; }
    bool is_exact() const { return exact_; }
    bool is_exact_zero() const { return exact_ && u_.is_zero(); }
    bool is_indeterminate_zero() const { return !exact_ && prec_ == 0; }

    Valuation ord() const {
        if (is_exact_zero()) return Valuation::infinity();
        if (is_indeterminate_zero())
            throw IndeterminateValuation("value vanishes to precision " + std::to_string(v_) +
                                         "; its valuation is unknown");
        return Valuation(v_);
    }

    Norm norm() const { return Norm::from_valuation(ord()); }

    // Absolute precision: smallest power of p about which nothing is known.
    Valuation abs_precision() const {
        if (exact_) return Valuation::infinity();
        return Valuation(prec_ == 0 ? v_ : v_ + prec_);
    }

    // Relative precision (digits of the unit part); exact values report a
    // requested cap instead.
    std::int32_t rel_precision_or(std::int32_t cap) const { return exact_ ? cap : prec_; }

    // Angular class at depth m: the unit part modulo p^m (0 for zero).
    AngularClass ac(std::int32_t m) const {
        if (m < 1) throw std::invalid_argument("ac: depth must be >= 1");
        if (is_exact_zero()) return AngularClass(p_, m, Zint(0));
        if (is_indeterminate_zero())
            throw InsufficientPrecision("angular class of a value indistinguishable from zero");
        return AngularClass(p_, m, unit_mod(m));
    }

    // Unit part modulo p^k.
    Zint unit_mod(std::int32_t k) const {
        if (k < 1) throw std::invalid_argument("unit_mod: depth must be >= 1");
        if (is_exact_zero() || is_indeterminate_zero())
            throw std::invalid_argument("unit_mod: value has no unit part");
        Zint mod = pow_zi(Zint(p_), static_cast<std::uint64_t>(k));
        if (exact_)
            return mulmod(pos_mod(u_, mod), invmod(w_, mod), mod);
        if (prec_ < k)
            throw InsufficientPrecision("unit known mod p^" + std::to_string(prec_) +
                                        ", requested mod p^" + std::to_string(k));
        return u_ % mod;
    }

    // x * p^{-base} reduced modulo p^depth; requires ord(x) >= base and
    // absolute precision >= base + depth.
    Zint scaled_residue(std::int64_t base, std::int32_t depth) const {
        Zint mod = pow_zi(Zint(p_), static_cast<std::uint64_t>(depth));
        if (is_exact_zero()) return Zint(0);
        if (is_indeterminate_zero()) {
            if (v_ >= base + depth) return Zint(0);
            throw InsufficientPrecision("residue requested beyond stored precision");
        }
        if (v_ < base) throw std::invalid_argument("scaled_residue: valuation below base");
        if (!exact_ && v_ + prec_ < base + depth)
            throw InsufficientPrecision("residue requested beyond stored precision");
        std::uint64_t shift = static_cast<std::uint64_t>(v_ - base);
        Zint r = mulmod(pos_mod(u_, mod), pow_zi(Zint(p_), shift) % mod, mod);
        if (exact_) r = mulmod(r, invmod(w_, mod), mod);
        return r;
    }

    Rat exact_rational() const {
        if (!exact_) throw InsufficientPrecision("value is approximate, no exact rational form");
        Rat u = make_rat(u_, w_);
        if (v_ >= 0) return u * Rat(pow_zi(Zint(p_), static_cast<std::uint64_t>(v_)).big());
        return u / Rat(pow_zi(Zint(p_), static_cast<std::uint64_t>(-v_)).big());
    }

    // Base-p digits of the unit part, least significant first.
    std::vector<std::int64_t> unit_digits(std::int32_t count) const {
        Zint u = unit_mod(count);
        std::vector<std::int64_t> out;
        out.reserve(count);
        for (std::int32_t i = 0; i < count; ++i) {
            out.push_back((u % Zint(p_)).to_int64());
            u /= Zint(p_);
        }
        return out;
    }

    friend PadicScalar operator-(const PadicScalar& x) {
        PadicScalar r = x;
        if (r.exact_) {
            r.u_ = -r.u_;
        } else if (r.prec_ > 0) {
            Zint mod = pow_zi(Zint(r.p_), static_cast<std::uint64_t>(r.prec_));
            r.u_ = pos_mod(-r.u_, mod);
        }
        return r;
    }

    friend PadicScalar operator+(const PadicScalar& x, const PadicScalar& y) {
        x.require_same(y);
        if (x.exact_ && y.exact_) {
            if (x.is_exact_zero()) return y;
            if (y.is_exact_zero()) return x;
            std::int64_t base = std::min(x.v_, y.v_);
            Zint sx = pow_zi(Zint(x.p_), static_cast<std::uint64_t>(x.v_ - base));
            Zint sy = pow_zi(Zint(x.p_), static_cast<std::uint64_t>(y.v_ - base));
            return make_exact(x.p_, base, x.u_ * sx * y.w_ + y.u_ * sy * x.w_, x.w_ * y.w_);
        }
        return approx_add(x, y);
    }

    friend PadicScalar operator-(const PadicScalar& x, const PadicScalar& y) { return x + (-y); }

    friend PadicScalar operator*(const PadicScalar& x, const PadicScalar& y) {
        x.require_same(y);
        if (x.is_exact_zero() || y.is_exact_zero()) return zero(x.p_);
        if (x.exact_ && y.exact_)
            return make_exact(x.p_, x.v_ + y.v_, x.u_ * y.u_, x.w_ * y.w_);
        if (x.is_indeterminate_zero() || y.is_indeterminate_zero()) {
            // v_ is the valuation of a nonzero factor and a lower bound on it
            // for an approx zero, so the sum bounds ord(xy) either way.
            return approx_zero(x.p_, x.v_ + y.v_);
        }
        std::int32_t prec = std::min(x.rel_precision_or(INT32_MAX), y.rel_precision_or(INT32_MAX));
        Zint mod = pow_zi(Zint(x.p_), static_cast<std::uint64_t>(prec));
        Zint u = mulmod(x.unit_mod(prec), y.unit_mod(prec), mod);
        return approx(x.p_, x.v_ + y.v_, u, prec);
    }

    friend PadicScalar operator/(const PadicScalar& x, const PadicScalar& y) {
        x.require_same(y);
        if (y.is_exact_zero()) throw DivisionByZero("division by zero scalar");
        if (y.is_indeterminate_zero())
            throw IndeterminateValuation("divisor is indistinguishable from zero");
        if (x.is_exact_zero()) return zero(x.p_);
        if (x.exact_ && y.exact_)
            return make_exact(x.p_, x.v_ - y.v_, x.u_ * y.w_, x.w_ * y.u_);
        if (x.is_indeterminate_zero()) return approx_zero(x.p_, x.v_ - y.v_);
        std::int32_t prec = std::min(x.rel_precision_or(INT32_MAX), y.rel_precision_or(INT32_MAX));
        Zint mod = pow_zi(Zint(x.p_), static_cast<std::uint64_t>(prec));
        Zint u = mulmod(x.unit_mod(prec), invmod(y.unit_mod(prec), mod), mod);
        return approx(x.p_, x.v_ - y.v_, u, prec);
    }

    PadicScalar pow(std::int64_t e) const {
        if (e == 0) return one(p_); // includes 0^0 = 1
        if (e < 0) return one(p_) / this->pow(-e);
        if (is_exact_zero()) return *this;
        if (exact_) {
            std::uint64_t k = static_cast<std::uint64_t>(e);
            return make_exact(p_, v_ * e, pow_zi(u_, k), pow_zi(w_, k));
        }
        if (is_indeterminate_zero()) return approx_zero(p_, v_ * e);
        Zint mod = pow_zi(Zint(p_), static_cast<std::uint64_t>(prec_));
        return approx(p_, v_ * e, powmod(u_, static_cast<std::uint64_t>(e), mod), prec_);
    }

    // Representation equality (same form, same stored data).  For exact
    // values this is value equality; approximate values compare by stored
    // digits, not by the numbers they might denote.
    friend bool operator==(const PadicScalar& x, const PadicScalar& y) {
        if (x.p_ != y.p_ || x.exact_ != y.exact_) return false;
        if (x.exact_) {
            if (x.u_.is_zero() || y.u_.is_zero()) return x.u_.is_zero() && y.u_.is_zero();
            return x.v_ == y.v_ && x.u_ == y.u_ && x.w_ == y.w_;
        }
        return x.v_ == y.v_ && x.prec_ == y.prec_ && x.u_ == y.u_;
    }
    friend bool operator!=(const PadicScalar& x, const PadicScalar& y) { return !(x == y); }

    // Whether x - y is indistinguishable from zero at the joint precision.
    bool agrees_with(const PadicScalar& y) const {
        PadicScalar d = *this - y;
        return d.is_exact_zero() || d.is_indeterminate_zero();
    }

    // Decides x == y as field elements; throws InsufficientPrecision when
    // the stored digits cannot settle it.
    bool definitely_equal(const PadicScalar& y) const {
        PadicScalar d = *this - y;
        if (d.is_exact_zero()) return true;
        if (d.is_indeterminate_zero())
            throw InsufficientPrecision("equality test below working precision");
        return false;
    }

    // Reduces stored relative precision to at most k (no-op on exact values).
    PadicScalar truncated(std::int32_t k) const {
        if (exact_ || prec_ <= k) return *this;
        if (k < 1) throw std::invalid_argument("truncated: precision must be >= 1");
        return approx(p_, v_, u_ % pow_zi(Zint(p_), static_cast<std::uint64_t>(k)), k);
    }

    std::string str() const;

private:
    explicit PadicScalar(std::int64_t p) : p_(p), exact_(true), v_(0), u_(0), w_(1), prec_(0) {}

    PadicScalar(std::int64_t p, std::int64_t v, Zint u, Zint w)
        : p_(p), exact_(true), v_(v), u_(std::move(u)), w_(std::move(w)), prec_(0) {}

    static void check_prime(std::int64_t p) {
        if (p < 2) throw std::invalid_argument("prime must be >= 2");
    }

    // Normal form of p^base * num / den.
    static PadicScalar make_exact(std::int64_t p, std::int64_t base, Zint num, Zint den) {
        if (num.is_zero()) return zero(p);
        if (den.is_negative()) {
            num = -num;
            den = -den;
        }
        Zint g = gcd(abs(num), den);
        if (g != Zint(1)) {
            num /= g;
            den /= g;
        }
        std::int64_t v = base;
        // p divides at most one of num, den after the reduction.
        std::int64_t a = ord_in(num, p);
        if (a > 0) {
            num /= pow_zi(Zint(p), static_cast<std::uint64_t>(a));
            v += a;
        } else {
            std::int64_t b = ord_in(den, p);
            if (b > 0) {
                den /= pow_zi(Zint(p), static_cast<std::uint64_t>(b));
                v -= b;
            }
        }
        return PadicScalar(p, v, std::move(num), std::move(den));
    }

    static PadicScalar approx_add(const PadicScalar& x, const PadicScalar& y);

    void require_same(const PadicScalar& o) const {
        if (p_ != o.p_) throw std::invalid_argument("mixed primes in scalar arithmetic");
    }

    std::int64_t p_;
    bool exact_;
    std::int64_t v_;   // valuation (exact nonzero / approx) or absolute precision (approx zero)
    Zint u_;           // unit numerator (exact) / unit residue (approx) / 0 (zero forms)
    Zint w_;           // unit denominator (exact form only)
    std::int32_t prec_; // approx form: digits stored; 0 marks an approx zero
};

inline PadicScalar pow(const PadicScalar& x, std::int64_t e) { return x.pow(e); }

// Description of a coset set: scaling element xi, angular depth m, order
// modulus n.  xi == 0 describes the degenerate singleton {0}.
struct CosetSpec {
    PadicScalar xi;
    std::int32_t m = 1;
    std::int64_t n = 1;

    CosetSpec(PadicScalar xi_, std::int32_t m_, std::int64_t n_) : xi(std::move(xi_)), m(m_), n(n_) {
        if (!xi.is_exact())
            throw std::invalid_argument("CosetSpec: xi must be exact");
        if (m < 1 || n < 1) throw std::invalid_argument("CosetSpec: need m >= 1, n >= 1");
    }

    std::int64_t prime() const { return xi.prime(); }
    bool is_zero() const { return xi.is_exact_zero(); }

    std::int64_t xi_ord() const {
        if (is_zero()) throw std::invalid_argument("zero coset has no scaling order");
        return xi.ord().value();
    }

    AngularClass xi_class() const { return xi.ac(m); }

    // Whether some element of the coset has valuation l.
    bool admits_order(std::int64_t l) const {
        if (is_zero()) return false;
        std::int64_t d = l - xi_ord();
        return d % n == 0;
    }

    friend bool operator==(const CosetSpec& a, const CosetSpec& b) {
        return a.xi == b.xi && a.m == b.m && a.n == b.n;
    }
    friend bool operator!=(const CosetSpec& a, const CosetSpec& b) { return !(a == b); }
};

// Membership of x in the set described by q; throws InsufficientPrecision
// when x's stored digits cannot settle it.
bool in_coset(const PadicScalar& x, const CosetSpec& q);

// Smallest representative of a nonzero angular class as an exact scalar.
PadicScalar lift_ac(const AngularClass& a);

// b-th root of x by Hensel lifting, for b prime to p.  When several roots
// exist, `branch` picks the one in the given angular class; with no branch
// given a unique root is required.  The result carries at least `precision`
// unit digits (less if x itself carries fewer) and is exact when the root
// is rational.
PadicScalar hensel_root(const PadicScalar& x, std::int64_t b,
                        const std::optional<AngularClass>& branch, std::int32_t precision);

} // namespace padlex

#endif
