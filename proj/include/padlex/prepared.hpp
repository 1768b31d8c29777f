#pragma once

#include <padlex/geometry.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace padlex {

// Order of the derivative of a power-law rule, as an affine function of
// l = ord(x - c).  Both coefficients are exact rationals; on admissible
// orders the value is always an integer.
struct DerivativeOrder {
    Rat constant_part;  // ord(e)/b + ord_p(a) - ord_p(b)
    Rat slope;          // a/b - 1

    Rat at(std::int64_t l) const { return constant_part + slope * l; }

    // The order at l, which must come out an integer for coherent inputs.
    std::int64_t at_integer(std::int64_t l) const;
};

// Outcome of a sampled or exhaustive check.  Failures are content, not
// exceptions: `pass` drops on the first violation and a capped list of
// witness descriptions is kept for the report.
struct CheckReport {
    bool pass = true;
    std::uint64_t points = 0;
    std::uint64_t pairs = 0;
    std::uint64_t violations = 0;
    std::vector<std::string> notes;
    std::vector<std::string> witnesses;

    void fail(const std::string& w);
    void merge(const CheckReport& other, const std::string& prefix);
    std::string str() const;
};

// A power-law rule g(x) = c' + (e (x-c)^a)^{1/b} on one fiber, with the
// root branch pinned by the target coset's angular class.  Conventions:
// gcd(a,b) = 1 with b >= 1 (so a = 0 forces b = 1, and g is then the
// constant c' + e), and a point-fiber source forces a = 0.
class PreparedFunction {
public:
    PreparedFunction(std::int64_t a, std::int64_t b, PadicScalar e, PadicScalar c,
                     PadicScalar c_prime, CellFiber source, CosetSpec target);

    std::int64_t a() const { return a_; }
    std::int64_t b() const { return b_; }
    const PadicScalar& e() const { return e_; }
    const PadicScalar& c() const { return c_; }
    const PadicScalar& c_prime() const { return c_prime_; }
    const CellFiber& source() const { return source_; }
    const CosetSpec& target() const { return target_; }
    std::int64_t prime() const { return e_.prime(); }

    // a/b; the exponent seen by the order map l -> ord(g(x) - c').
    Rat exp_ratio() const { return make_rat(Zint(a_), Zint(b_)); }

    bool is_constant() const { return a_ == 0; }
    PadicScalar constant_value() const;  // c' + e; only when a = 0

    // Affine order data of dg/dx; only when a != 0.
    DerivativeOrder derivative() const;

    // ord(dg/dx) at a point with ord(x - c) = l.
    std::int64_t derivative_order_at(std::int64_t l) const;
    std::int64_t derivative_order_at(const PadicScalar& x) const;

    // l' = (ord(e) + a l) / b = ord(g(x) - c') for ord(x - c) = l.
    std::int64_t image_order(std::int64_t l) const;

    // Depth of image balls: m' = m + ord_p(a) - ord_p(b); only when a != 0.
    std::int32_t image_depth() const;

    // The fiber c' + target coset (unbounded window).
    CellFiber target_fiber() const;

    PadicScalar eval(const PadicScalar& x, std::int32_t precision) const;

    Ball image_ball(const Ball& B) const;

    std::string str() const;

    friend bool operator==(const PreparedFunction& f, const PreparedFunction& g) {
        return f.a_ == g.a_ && f.b_ == g.b_ && f.e_ == g.e_ && f.c_ == g.c_ &&
               f.c_prime_ == g.c_prime_ && f.source_ == g.source_ && f.target_ == g.target_;
    }
    friend bool operator!=(const PreparedFunction& f, const PreparedFunction& g) {
        return !(f == g);
    }

private:
    std::int64_t a_, b_;
    PadicScalar e_, c_, c_prime_;
    CellFiber source_;
    CosetSpec target_;
};

// Find the target coset of a power-law rule by evaluating it on one ball:
// the image class at depth m + ord_p(a), with order step max(1, |a| n / b).
CosetSpec derive_target(std::int64_t a, std::int64_t b, const PadicScalar& e,
                        const CellFiber& source);

// Verify on one source ball that the order of any difference splits as
// ord(g(x) - g(y)) = ord(dg/dx) + ord(x - y), and that g is injective
// there.  Runs exhaustively at four digits of resolution when the lattice
// is small, otherwise on a seeded sample.
CheckReport check_jacobian(const PreparedFunction& g, const Ball& B, std::uint64_t samples,
                           std::uint64_t seed);

// Per-ball compatibility over a window of source orders: the image of each
// ball is a ball of the declared target fiber, differences split on it in
// both directions, and the checked resolution of the image is attained.
CheckReport check_compatible(const PreparedFunction& g, std::int64_t window_lo,
                             std::int64_t window_hi, std::uint64_t samples, std::uint64_t seed);

}  // namespace padlex
