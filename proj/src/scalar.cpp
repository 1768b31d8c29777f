#include "padlex/scalar.hpp"

#include <algorithm>
#include <cctype>

namespace padlex {

namespace {

bool valid_int_token(const std::string& s) {
    std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (i >= s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

} // namespace

PadicScalar PadicScalar::parse(std::int64_t p, const std::string& s) {
    check_prime(p);
    std::string num = s, den = "1";
    if (auto pos = s.find('/'); pos != std::string::npos) {
        num = s.substr(0, pos);
        den = s.substr(pos + 1);
    }
    if (!valid_int_token(num) || !valid_int_token(den))
        throw SpecParseError("not a rational: \"" + s + "\"");
    if (num[0] == '+') num.erase(0, 1);
    if (den[0] == '+') den.erase(0, 1);
    return from_ratio(p, Zint::from_string(num), Zint::from_string(den));
}

PadicScalar PadicScalar::approx_add(const PadicScalar& x, const PadicScalar& y) {
    const std::int64_t p = x.p_;
    // Joint absolute precision; finite because at least one side is approximate.
    Valuation ax = x.abs_precision(), ay = y.abs_precision();
    std::int64_t A = std::min(ax, ay).value();

    bool xz = x.is_exact_zero() || x.is_indeterminate_zero();
    bool yz = y.is_exact_zero() || y.is_indeterminate_zero();
    if (xz && yz) return approx_zero(p, A);

    std::int64_t B = A;
    if (!xz) B = std::min(B, x.v_);
    if (!yz) B = std::min(B, y.v_);
    std::int32_t D = static_cast<std::int32_t>(A - B);
    if (D <= 0) return approx_zero(p, A);

    Zint mod = pow_zi(Zint(p), static_cast<std::uint64_t>(D));
    Zint r(0);
    for (const PadicScalar* t : {&x, &y}) {
        if (t->is_exact_zero() || t->is_indeterminate_zero()) continue;
        std::int64_t shift = t->v_ - B;
        if (shift >= D) continue;
        Zint part = t->unit_mod(static_cast<std::int32_t>(D - shift));
        r = pos_mod(r + part * pow_zi(Zint(p), static_cast<std::uint64_t>(shift)), mod);
    }
    if (r.is_zero()) return approx_zero(p, A);
    std::int64_t t = ord_in(r, p);
    std::int64_t v = B + t;
    std::int32_t prec = static_cast<std::int32_t>(A - v);
    Zint unit = r / pow_zi(Zint(p), static_cast<std::uint64_t>(t));
    return approx(p, v, unit, prec);
}

std::string PadicScalar::str() const {
    if (exact_) return rat_str(exact_rational());
    std::string P = std::to_string(p_);
    if (is_indeterminate_zero()) return "O(" + P + "^" + std::to_string(v_) + ")";
    std::string head = u_.str();
    if (v_ != 0) head = P + "^" + std::to_string(v_) + "*" + head;
    return head + "+O(" + P + "^" + std::to_string(v_ + prec_) + ")";
}

bool in_coset(const PadicScalar& x, const CosetSpec& q) {
    if (x.prime() != q.prime()) throw std::invalid_argument("in_coset: mixed primes");
    if (q.is_zero()) {
        if (x.is_exact_zero()) return true;
        if (x.is_indeterminate_zero())
            throw InsufficientPrecision("cannot decide membership of a near-zero value in {0}");
        return false;
    }
    if (x.is_exact_zero()) return false;
    if (x.is_indeterminate_zero())
        throw InsufficientPrecision("cannot decide coset membership of a near-zero value");
    if (!q.admits_order(x.ord().value())) return false;
    return x.ac(q.m) == q.xi_class();
}

PadicScalar lift_ac(const AngularClass& a) {
    if (a.is_zero()) throw ZeroClass("zero angular class has no unit lift");
    return PadicScalar::from_int(a.prime(), a.residue());
}

namespace {

// Lifts a mod-p root of z^b = u to a root modulo p^target by Newton steps
// with doubling modulus.  Requires p not dividing b and r0^b = u (mod p).
Zint lift_root(std::int64_t p, const Zint& u, std::int64_t b, const Zint& r0, std::int32_t target) {
    Zint z = r0;
    std::int32_t have = 1;
    while (have < target) {
        std::int32_t next = std::min(target, 2 * have);
        Zint M = pow_zi(Zint(p), static_cast<std::uint64_t>(next));
        Zint fz = pos_mod(powmod(z, static_cast<std::uint64_t>(b), M) - pos_mod(u, M), M);
        Zint dz = mulmod(Zint(b), powmod(z, static_cast<std::uint64_t>(b - 1), M), M);
        z = pos_mod(z - fz * invmod(dz, M), M);
        have = next;
    }
    return z;
}

} // namespace

PadicScalar hensel_root(const PadicScalar& x, std::int64_t b,
                        const std::optional<AngularClass>& branch, std::int32_t precision) {
    const std::int64_t p = x.prime();
    if (b < 1) throw std::invalid_argument("hensel_root: degree must be >= 1");
    if (precision < 1) throw std::invalid_argument("hensel_root: precision must be >= 1");
    if (branch && branch->prime() != p) throw std::invalid_argument("hensel_root: mixed primes");
    if (x.is_exact_zero()) throw std::invalid_argument("hensel_root: radicand must be nonzero");
    if (x.is_indeterminate_zero())
        throw IndeterminateValuation("radicand is indistinguishable from zero");
    if (branch && branch->is_zero())
        throw NoRoot("no nonzero root lies in the zero angular class");
    if (b % p == 0)
        throw UnsupportedRamifiedRoot("degree " + std::to_string(b) + " shares a factor with p=" +
                                      std::to_string(p));

    if (b == 1) {
        if (branch && x.ac(branch->depth()) != *branch)
            throw NoRoot("value lies outside the requested angular class");
        return x;
    }

    std::int64_t o = x.ord().value();
    if (((o % b) + b) % b != 0)
        throw NoRoot("valuation " + std::to_string(o) + " is not divisible by " + std::to_string(b));
    std::int64_t rv = o / b;

    std::int32_t nx = x.rel_precision_or(INT32_MAX);
    std::int32_t nret = std::min(precision, nx);
    std::int32_t nwork = std::max(nret, branch ? branch->depth() : 1);
    if (nx < nwork)
        throw InsufficientPrecision("radicand carries " + std::to_string(nx) +
                                    " digits, branch selection needs " + std::to_string(nwork));

    Zint u0 = x.unit_mod(nwork);
    Zint u0p = u0 % Zint(p);

    std::vector<Zint> roots;
    for (std::int64_t r = 1; r < p; ++r)
        if (powmod(Zint(r), static_cast<std::uint64_t>(b), Zint(p)) == u0p)
            roots.push_back(lift_root(p, u0, b, Zint(r), nwork));
    if (roots.empty()) throw NoRoot("unit part is not a degree-" + std::to_string(b) + " power residue");

    const Zint* chosen = nullptr;
    if (branch) {
        Zint pm = branch->modulus();
        for (const Zint& z : roots)
            if (z % pm == branch->residue()) {
                // Distinct roots differ already modulo p, so at most one survives.
                chosen = &z;
                break;
            }
        if (!chosen) throw NoRoot("no root lies in the requested angular class");
    } else {
        if (roots.size() > 1)
            throw AmbiguousRoot(std::to_string(roots.size()) +
                                " roots exist; select one with an angular class");
        chosen = &roots.front();
    }

    if (x.is_exact()) {
        // Rational radicands often have rational roots; report those exactly.
        Rat unit_part = x.exact_rational();
        if (o >= 0)
            unit_part /= Rat(pow_zi(Zint(p), static_cast<std::uint64_t>(o)).big());
        else
            unit_part *= Rat(pow_zi(Zint(p), static_cast<std::uint64_t>(-o)).big());
        Zint num(numerator(unit_part)), den(denominator(unit_part));
        bool neg = num.is_negative();
        auto s = iroot_exact(abs(num), static_cast<unsigned>(b));
        auto t = iroot_exact(den, static_cast<unsigned>(b));
        if (s && t && !(neg && b % 2 == 0)) {
            std::vector<Zint> signs;
            if (b % 2 == 1)
                signs.push_back(neg ? -*s : *s);
            else {
                signs.push_back(*s);
                signs.push_back(-*s);
            }
            for (const Zint& sn : signs) {
                Zint cu = mulmod(sn, invmod(*t, Zint(p)), Zint(p));
                if (cu == *chosen % Zint(p)) {
                    PadicScalar root = PadicScalar::from_ratio(p, sn, *t);
                    return (rv >= 0 ? root * PadicScalar::from_int(p, pow_zi(Zint(p), static_cast<std::uint64_t>(rv)))
                                    : root / PadicScalar::from_int(p, pow_zi(Zint(p), static_cast<std::uint64_t>(-rv))));
                }
            }
        }
    }

    Zint unit = *chosen % pow_zi(Zint(p), static_cast<std::uint64_t>(nret));
    return PadicScalar::approx(p, rv, unit, nret);
}

} // namespace padlex
