#include <padlex/prepared.hpp>

#include <algorithm>
#include <random>
#include <set>

namespace padlex {

namespace {

// Lattices of at most this many points are checked exhaustively; for
// p <= 7 the four-digit resolution p^4 always fits.
constexpr std::uint64_t kExhaustiveCap = 2500;

// Offsets t addressing the lattice x = w + p^{l+m} t, t < p^4.  Small
// lattices are enumerated in full; otherwise a seeded digit-wise draw
// picks a deterministic sorted sample.
std::vector<Zint> lattice_offsets(std::int64_t p, std::uint64_t samples, std::uint64_t seed) {
    Zint p4 = pow_zi(Zint(p), 4);
    if (p4 <= Zint(static_cast<std::int64_t>(kExhaustiveCap))) {
        std::vector<Zint> all;
        std::int64_t n = p4.to_int64();
        all.reserve(static_cast<std::size_t>(n));
        for (std::int64_t t = 0; t < n; ++t) all.emplace_back(t);
        return all;
    }
    if (samples == 0) samples = 256;
    std::mt19937_64 rng(seed);
    std::set<Zint> picked;
    std::uint64_t spins = 0;
    while (picked.size() < samples && spins < 40 * samples) {
        ++spins;
        Zint t(0);
        for (int digit = 0; digit < 4; ++digit)
            t = t * Zint(p) + Zint(static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(p)));
        picked.insert(t);
    }
    return std::vector<Zint>(picked.begin(), picked.end());
}

// The lattice points of B at four digits of resolution, paired with the
// values of g at a precision that keeps all pair differences determinate.
struct BallSample {
    std::vector<PadicScalar> xs, zs;
};

BallSample sample_ball(const PreparedFunction& g, const Ball& B, std::int32_t value_precision,
                       std::uint64_t samples, std::uint64_t seed) {
    std::int64_t p = g.prime();
    PadicScalar w = B.canonical_point();
    PadicScalar step = Ball::p_power_scalar(p, B.order() + B.depth());
    BallSample out;
    for (const Zint& t : lattice_offsets(p, samples, seed)) {
        PadicScalar x = w + step * PadicScalar::from_int(p, t);
        out.zs.push_back(g.eval(x, value_precision));
        out.xs.push_back(std::move(x));
    }
    return out;
}

void require_source_ball(const CellFiber& S, const Ball& B, const char* who) {
    if (S.is_zero_cell())
        throw std::invalid_argument(std::string(who) + ": point-fiber source has no balls");
    if (!S.admits_order(B.order()) || B != S.ball_at(B.order()))
        throw std::invalid_argument(std::string(who) + ": B is not a ball of the source fiber");
}

}  // namespace

std::int64_t DerivativeOrder::at_integer(std::int64_t l) const {
    Rat v = at(l);
    if (!rat_is_integer(v))
        throw NonIntegerOrder("derivative order " + rat_str(v) + " at l=" + std::to_string(l) +
                              " is not an integer");
    return rat_floor(v).to_int64();
}

void CheckReport::fail(const std::string& w) {
    pass = false;
    ++violations;
    if (witnesses.size() < 8) witnesses.push_back(w);
}

void CheckReport::merge(const CheckReport& other, const std::string& prefix) {
    pass = pass && other.pass;
    points += other.points;
    pairs += other.pairs;
    violations += other.violations;
    for (const auto& n : other.notes) notes.push_back(prefix + n);
    for (const auto& w : other.witnesses)
        if (witnesses.size() < 8) witnesses.push_back(prefix + w);
}

std::string CheckReport::str() const {
    std::string s = pass ? "PASS" : "FAIL";
    s += " (points=" + std::to_string(points) + ", pairs=" + std::to_string(pairs) +
         ", violations=" + std::to_string(violations) + ")";
    for (const auto& n : notes) s += "\n  note: " + n;
    for (const auto& w : witnesses) s += "\n  witness: " + w;
    return s;
}

PreparedFunction::PreparedFunction(std::int64_t a, std::int64_t b, PadicScalar e, PadicScalar c,
                                   PadicScalar c_prime, CellFiber source, CosetSpec target)
    : a_(a),
      b_(b),
      e_(std::move(e)),
      c_(std::move(c)),
      c_prime_(std::move(c_prime)),
      source_(std::move(source)),
      target_(std::move(target)) {
    if (b_ < 1) throw std::invalid_argument("PreparedFunction: need b >= 1");
    // gcd(0, b) = b, so this also forces b = 1 for constant rules
    if (gcd(Zint(a_), Zint(b_)) != Zint(1))
        throw std::invalid_argument("PreparedFunction: need gcd(a, b) = 1");
    if (!e_.is_exact() || !c_.is_exact() || !c_prime_.is_exact())
        throw std::invalid_argument("PreparedFunction: e, c, c' must be exact");
    if (e_.is_exact_zero()) throw std::invalid_argument("PreparedFunction: e must be nonzero");
    std::int64_t p = e_.prime();
    if (c_.prime() != p || c_prime_.prime() != p || source_.prime() != p || target_.prime() != p)
        throw std::invalid_argument("PreparedFunction: mixed primes");
    if (source_.center() != c_)
        throw std::invalid_argument("PreparedFunction: c must equal the source fiber center");
    if (source_.is_zero_cell() && a_ != 0)
        throw std::invalid_argument("PreparedFunction: point-fiber source needs a = 0");
    if (target_.is_zero())
        throw std::invalid_argument("PreparedFunction: target coset must be nonzero");
    if (a_ != 0) {
        // every admissible source order must map to an integer image order
        std::int64_t n = source_.coset().n;
        if (n % b_ != 0)
            throw std::invalid_argument("PreparedFunction: b must divide the source order step");
        Zint num = Zint(e_.ord().value()) + Zint(a_) * Zint(source_.coset().xi_ord());
        if (!(num % Zint(b_)).is_zero())
            throw std::invalid_argument(
                "PreparedFunction: ord(e) + a ord(xi) is not divisible by b");
    }
}

PadicScalar PreparedFunction::constant_value() const {
    if (a_ != 0) throw std::invalid_argument("constant_value(): rule is not constant");
    return c_prime_ + e_;
}

DerivativeOrder PreparedFunction::derivative() const {
    if (a_ == 0) throw std::invalid_argument("derivative(): constant rule (a = 0)");
    std::int64_t p = prime();
    Rat cp = make_rat(Zint(e_.ord().value()), Zint(b_)) +
             Rat(ord_in(Zint(a_), p) - ord_in(Zint(b_), p));
    Rat sl = make_rat(Zint(a_ - b_), Zint(b_));
    return DerivativeOrder{cp, sl};
}

std::int64_t PreparedFunction::derivative_order_at(std::int64_t l) const {
    return derivative().at_integer(l);
}

std::int64_t PreparedFunction::derivative_order_at(const PadicScalar& x) const {
    if (!source_.contains(x))
        throw OutsideDomain("derivative order: x = " + x.str() + " is not in the source fiber");
    return derivative_order_at((x - c_).ord().value());
}

std::int64_t PreparedFunction::image_order(std::int64_t l) const {
    if (a_ == 0) return e_.ord().value();
    Zint num = Zint(e_.ord().value()) + Zint(a_) * Zint(l);
    Zint q = num / Zint(b_);
    if (q * Zint(b_) != num)
        throw NonIntegerOrder("image order (ord(e) + a l)/b is not an integer at l=" +
                              std::to_string(l));
    return q.to_int64();
}

std::int32_t PreparedFunction::image_depth() const {
    if (a_ == 0) throw std::invalid_argument("image_depth(): constant rule");
    std::int64_t md = source_.depth() + ord_in(Zint(a_), prime()) - ord_in(Zint(b_), prime());
    if (md < 1)
        throw UnsupportedRamifiedRoot("image depth m + ord_p(a) - ord_p(b) = " +
                                      std::to_string(md) + " < 1 (p divides b)");
    return static_cast<std::int32_t>(md);
}

CellFiber PreparedFunction::target_fiber() const {
    return CellFiber(c_prime_, target_, std::nullopt, std::nullopt);
}

PadicScalar PreparedFunction::eval(const PadicScalar& x, std::int32_t precision) const {
    if (!source_.contains(x))
        throw OutsideDomain("eval: x = " + x.str() + " is not in the source fiber");
    PadicScalar t = e_ * pow(x - c_, a_);
    PadicScalar z = hensel_root(t, b_, target_.xi_class(), precision);
    return c_prime_ + z;
}

Ball PreparedFunction::image_ball(const Ball& B) const {
    require_source_ball(source_, B, "image_ball");
    if (a_ == 0) throw std::invalid_argument("image_ball: constant rule maps balls to a point");
    std::int64_t lp = image_order(B.order());
    std::int32_t mp = image_depth();
    PadicScalar z = eval(B.canonical_point(), mp + 2) - c_prime_;
    return Ball(lp, c_prime_, z.ac(mp));
}

std::string PreparedFunction::str() const {
    std::string s = "g(x) = ";
    if (!c_prime_.is_exact_zero()) s += c_prime_.str() + " + ";
    s += "(" + e_.str() + " (x - " + c_.str() + ")^" + std::to_string(a_) + ")";
    if (b_ != 1) s += "^(1/" + std::to_string(b_) + ")";
    return s + " on " + source_.str();
}

CosetSpec derive_target(std::int64_t a, std::int64_t b, const PadicScalar& e,
                        const CellFiber& source) {
    std::int64_t p = e.prime();
    if (a == 0) return CosetSpec{e, source.is_zero_cell() ? 1 : source.depth(), 1};
    if (source.is_zero_cell())
        throw std::invalid_argument("derive_target: point-fiber source needs a = 0");
    std::int64_t n = source.coset().n;
    if (b < 1 || n % b != 0)
        throw std::invalid_argument("derive_target: b must divide the source order step");
    std::int64_t ord_a = ord_in(Zint(a), p), ord_b = ord_in(Zint(b), p);
    std::int64_t md = source.depth() + ord_a - ord_b;
    if (md < 1) throw UnsupportedRamifiedRoot("derive_target: p divides b");
    std::int32_t mp = static_cast<std::int32_t>(md);
    std::int64_t np = std::max<std::int64_t>(1, (a < 0 ? -a : a) * n / b);

    // pick a representative order and evaluate one canonical point there,
    // selecting the branch with the smallest unit residue mod p
    std::int64_t l0 = source.coset().xi_ord();
    if (source.l_min() && *source.l_min() > l0) l0 = *source.l_min();
    if (source.l_max() && *source.l_max() < l0) l0 = *source.l_max();
    PadicScalar w = source.ball_at(l0).canonical_point();
    PadicScalar t = e * pow(w - source.center(), a);
    PadicScalar z = PadicScalar::zero(p);
    bool found = false;
    for (std::int64_t r = 1; r < p && !found; ++r) {
        try {
            z = hensel_root(t, b, AngularClass(p, 1, Zint(r)), mp + 2);
            found = true;
        } catch (const NoRoot&) {
        }
    }
    if (!found) throw NoRoot("derive_target: e (x-c)^a has no b-th root on the fiber");
    std::int64_t lp = z.ord().value();
    PadicScalar xi = Ball::p_power_scalar(p, lp) * PadicScalar::from_int(p, z.ac(mp).residue());
    return CosetSpec{xi, mp, np};
}

CheckReport check_jacobian(const PreparedFunction& g, const Ball& B, std::uint64_t samples,
                           std::uint64_t seed) {
    require_source_ball(g.source(), B, "check_jacobian");
    CheckReport rep;

    if (g.is_constant()) {
        PadicScalar v = g.constant_value();
        rep.points = 2;
        rep.notes.push_back("constant rule: every point maps to " + v.str());
        PadicScalar x0 = B.canonical_point();
        PadicScalar x1 = x0 + Ball::p_power_scalar(g.prime(), B.order() + B.depth());
        rep.fail("not injective: x=" + x0.str() + " and x=" + x1.str() + " share the value " +
                 v.str());
        return rep;
    }

    std::int64_t d = g.derivative_order_at(B.order());
    std::int32_t prec = g.image_depth() + 6;
    BallSample s;
    try {
        s = sample_ball(g, B, prec, samples, seed);
    } catch (const NoRoot& err) {
        rep.fail(std::string("evaluation failed on the ball: ") + err.what());
        return rep;
    }
    rep.points = s.xs.size();
    rep.notes.push_back("derivative order " + std::to_string(d) +
                        " (constant across the ball by the order formula)");

    for (std::size_t i = 0; i < s.xs.size(); ++i)
        for (std::size_t j = i + 1; j < s.xs.size(); ++j) {
            ++rep.pairs;
            std::int64_t ox = (s.xs[i] - s.xs[j]).ord().value();
            std::int64_t expect = d + ox;
            PadicScalar dz = s.zs[i] - s.zs[j];
            std::string at = "x=" + s.xs[i].str() + ", y=" + s.xs[j].str();
            if (dz.is_exact_zero()) {
                rep.fail("not injective at " + at);
                continue;
            }
            if (dz.is_indeterminate_zero()) {
                // value precision guarantees abs precision > expect here
                rep.fail("ord(g(x)-g(y)) >= " + std::to_string(dz.abs_precision().value()) +
                         " exceeds expected " + std::to_string(expect) + " at " + at);
                continue;
            }
            std::int64_t oz = dz.ord().value();
            if (oz != expect)
                rep.fail("order split fails at " + at + ": ord(x-y)=" + std::to_string(ox) +
                         ", ord(g(x)-g(y))=" + std::to_string(oz) + ", expected " +
                         std::to_string(expect));
        }
    return rep;
}

CheckReport check_compatible(const PreparedFunction& g, std::int64_t window_lo,
                             std::int64_t window_hi, std::uint64_t samples, std::uint64_t seed) {
    CheckReport rep;
    const CellFiber& S = g.source();
    if (S.is_zero_cell()) {
        rep.notes.push_back("point-fiber source: no balls to check");
        return rep;
    }
    std::vector<Ball> bs = S.balls(window_lo, window_hi);
    if (bs.empty()) {
        rep.notes.push_back("no source balls in the window");
        return rep;
    }

    for (const Ball& B : bs) {
        std::string tag = "l=" + std::to_string(B.order()) + ": ";
        CheckReport fwd = check_jacobian(g, B, samples, seed);
        rep.merge(fwd, tag);
        if (g.is_constant() || !fwd.pass) continue;

        Ball Bp = g.image_ball(B);
        CellFiber T = g.target_fiber();
        if (!T.admits_order(Bp.order()) || Bp != T.ball_at(Bp.order())) {
            rep.fail(tag + "image " + Bp.str() + " is not a ball of the target fiber");
            continue;
        }

        std::int64_t d = g.derivative_order_at(B.order());
        std::int32_t mp = g.image_depth();
        BallSample s = sample_ball(g, B, mp + 6, samples, seed);

        // every sampled image lies in the image ball
        for (std::size_t i = 0; i < s.xs.size(); ++i)
            if (!Bp.contains(s.zs[i]))
                rep.fail(tag + "g(" + s.xs[i].str() + ") lands outside the image ball");

        // inverse direction: preimages split with the negated order shift
        std::uint64_t inverse_pairs = 0;
        for (std::size_t i = 0; i < s.xs.size() && inverse_pairs < 64; ++i)
            for (std::size_t j = i + 1; j < s.xs.size() && inverse_pairs < 64; ++j) {
                ++inverse_pairs;
                ++rep.pairs;
                PadicScalar du = s.zs[i] - s.zs[j];
                if (du.is_exact_zero() || du.is_indeterminate_zero()) continue;  // flagged above
                std::int64_t ox = (s.xs[i] - s.xs[j]).ord().value();
                if (ox != -d + du.ord().value())
                    rep.fail(tag + "inverse order split fails at u=g(" + s.xs[i].str() +
                             "), v=g(" + s.xs[j].str() + ")");
            }

        // at full resolution the image must hit every residue class of the
        // image ball: lattice-to-lattice bijectivity
        if (s.xs.size() == static_cast<std::size_t>(pow_zi(Zint(g.prime()), 4).to_int64())) {
            std::int64_t p = g.prime();
            Zint mod = pow_zi(Zint(p), mp + 4);
            std::set<Zint> got;
            for (const auto& z : s.zs) got.insert((z - g.c_prime()).unit_mod(mp + 4));
            std::set<Zint> want;
            Zint lift = Bp.klass().residue();
            Zint stepu = pow_zi(Zint(p), mp);
            for (std::int64_t t = 0; t < pow_zi(Zint(p), 4).to_int64(); ++t)
                want.insert((lift + stepu * Zint(t)) % mod);
            if (got != want)
                rep.fail(tag + "image misses residue classes of the image ball at depth " +
                         std::to_string(mp + 4));
            else
                rep.notes.push_back(tag + "image covers the image ball at depth " +
                                    std::to_string(mp + 4));
        }
    }
    return rep;
}

}  // namespace padlex
