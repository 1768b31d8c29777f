#include <padlex/extension.hpp>

#include <algorithm>

namespace padlex {

namespace {

using Node = PiecewiseFunction::Node;
using Kind = PiecewiseFunction::Kind;

PadicScalar eval_node(const Node& n, const PadicScalar& x, std::int32_t precision);

PadicScalar eval_glue(const Node& n, const PadicScalar& x, std::int32_t precision) {
    Norm d_near = n.near_set->distance_to(x);
    Norm d_far = n.far_set->distance_to(x);
    const Node& branch = d_near <= d_far ? *n.left : *n.right;
    return eval_node(branch, x, precision);
}

PadicScalar eval_node(const Node& n, const PadicScalar& x, std::int32_t precision) {
    switch (n.kind) {
        case Kind::Constant:
            return *n.value;
        case Kind::CenterRule:
            return n.rule->source().contains(x) ? n.rule->eval(x, precision)
                                                : n.rule->c_prime();
        case Kind::Phi:
            return eval_node(*n.left, phi_rescale(*n.phi_domain, x), precision);
        case Kind::BallPatch:
            return n.patch->contains(x) ? n.rule->eval(x, precision) : *n.value;
        case Kind::Glue:
            return eval_glue(n, x, precision);
        case Kind::Scale:
            return *n.factor * eval_node(*n.left, x, precision);
    }
    throw std::logic_error("eval_node: unreachable");
}

std::string node_str(const Node& n) {
    switch (n.kind) {
        case Kind::Constant:
            return "const " + n.value->str();
        case Kind::CenterRule:
            return "center[" + n.rule->str() + "]";
        case Kind::Phi:
            return "phi[" + n.phi_domain->str() + "](" + node_str(*n.left) + ")";
        case Kind::BallPatch:
            return "patch[" + n.patch->str() + ": " + n.rule->str() + " else " +
                   n.value->str() + "]";
        case Kind::Glue:
            return "glue(near " + n.near_set->str() + ": " + node_str(*n.left) + " | " +
                   node_str(*n.right) + ")";
        case Kind::Scale:
            return n.factor->str() + " * (" + node_str(*n.left) + ")";
    }
    throw std::logic_error("node_str: unreachable");
}

// Reject root degrees sharing a factor with the prime before a construction
// bakes an unevaluable rule into a tree.
void require_unramified(const PreparedFunction& g) {
    if (!g.is_constant() && g.b() % g.prime() == 0)
        throw UnsupportedRamifiedRoot("root degree " + std::to_string(g.b()) +
                                      " is divisible by p = " + std::to_string(g.prime()));
}

// 1-Lipschitz certificate, in two affine conditions checked at their binding
// endpoints.  Within one order stratum differences scale by p^{-d(l)}, so the
// derivative order d(l) = const + slope*l must be nonnegative on every
// admissible order.  Across strata l1 < l2 the difference of images has the
// order min(l'(l1), l'(l2)), which must stay >= l1; depending on the sign of
// a this binds the image-order shift s(l) = l'(l) - l at one end of the
// fiber.
void require_unit_lipschitz(const PreparedFunction& g) {
    if (g.is_constant()) return;
    DerivativeOrder d = g.derivative();
    const CellFiber& S = g.source();
    if (d.slope > 0) {
        if (!S.l_min())
            throw NotUnitLipschitz("derivative order " + rat_str(d.at(0)) + " + " +
                                   rat_str(d.slope) + "*(l - 0) is unbounded below on a fiber "
                                   "with no least order");
        if (d.at(*S.l_min()) < 0)
            throw NotUnitLipschitz("derivative order " + rat_str(d.at(*S.l_min())) +
                                   " < 0 at l = " + std::to_string(*S.l_min()));
    } else if (d.slope < 0) {
        if (!S.l_max())
            throw NotUnitLipschitz("derivative order decreases without bound on a fiber "
                                   "with no greatest order");
        if (d.at(*S.l_max()) < 0)
            throw NotUnitLipschitz("derivative order " + rat_str(d.at(*S.l_max())) +
                                   " < 0 at l = " + std::to_string(*S.l_max()));
    } else {
        if (d.constant_part < 0)
            throw NotUnitLipschitz("derivative order is the constant " +
                                   rat_str(d.constant_part) + " < 0");
    }

    // Single-ball fibers have no cross-stratum pairs; a = b means the shift
    // equals the (already checked) constant derivative order.
    if (S.l_min() && S.l_max() && *S.l_min() == *S.l_max()) return;
    if (g.a() == g.b()) return;
    std::int64_t n = S.coset().n;
    auto shift = [&](std::int64_t l) {
        return make_rat(Zint(g.e().ord().value() + (g.a() - g.b()) * l), Zint(g.b()));
    };
    if (g.a() > g.b()) {
        // image orders increase: the pair (l_min, any higher order) binds
        if (shift(*S.l_min()) < 0)
            throw NotUnitLipschitz("image order " + rat_str(Rat(*S.l_min()) + shift(*S.l_min())) +
                                   " falls below the source order at l = " +
                                   std::to_string(*S.l_min()));
    } else if (g.a() > 0) {
        // still increasing, but the top order may lag; its predecessor binds
        std::int64_t l = *S.l_max() - n;
        if (shift(l) < 0)
            throw NotUnitLipschitz("image order " + rat_str(Rat(l) + shift(l)) +
                                   " falls below the source order at l = " + std::to_string(l));
    } else {
        // image orders decrease: the top order binds against its predecessor
        std::int64_t l = *S.l_max();
        if (shift(l) < Rat(-n))
            throw NotUnitLipschitz("image order " + rat_str(Rat(l) + shift(l)) +
                                   " falls below the preceding source order " +
                                   std::to_string(l - n));
    }
}

// Deterministic sample of each constituent: points themselves, ball canonical
// points, and canonical points of the first few balls of a fiber.
std::vector<PadicScalar> probe_points(const PointSet& X) {
    std::vector<PadicScalar> out;
    for (const auto& item : X.items()) {
        if (const auto* pt = std::get_if<PadicScalar>(&item)) {
            out.push_back(*pt);
        } else if (const auto* B = std::get_if<Ball>(&item)) {
            out.push_back(B->canonical_point());
        } else {
            const CellFiber& F = std::get<CellFiber>(item);
            if (F.is_zero_cell()) {
                out.push_back(F.center());
                continue;
            }
            std::int64_t start = F.l_min() ? *F.l_min() : F.coset().xi_ord();
            auto l = F.first_order_at_or_above(start);
            for (int taken = 0; l && taken < 4; ++taken) {
                out.push_back(F.ball_at(*l).canonical_point());
                l = F.first_order_at_or_above(*l + 1);
            }
        }
    }
    return out;
}

// The case-1 tree: the center rule pulled back along the coset rescaling of
// the rule's own fiber.
PiecewiseFunction phi_pullback(const PreparedFunction& g, const std::string& tag) {
    return PiecewiseFunction::composed_with_phi(g.source(),
                                                PiecewiseFunction::center_rule(g, tag), tag);
}

std::optional<std::int64_t> p_power_exponent(const Rat& lambda, std::int64_t p) {
    if (lambda <= 0) return std::nullopt;
    Zint num{BigInt(numerator(lambda))}, den{BigInt(denominator(lambda))};
    std::int64_t i = ord_in(num, p), j = ord_in(den, p);
    if (num != pow_zi(Zint(p), static_cast<std::uint64_t>(i)) ||
        den != pow_zi(Zint(p), static_cast<std::uint64_t>(j)))
        return std::nullopt;
    return i - j;
}

}  // namespace

PiecewiseFunction PiecewiseFunction::constant(PadicScalar v, std::string tag) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Constant;
    n->tag = std::move(tag);
    n->value = std::move(v);
    return PiecewiseFunction(n);
}

PiecewiseFunction PiecewiseFunction::center_rule(PreparedFunction g, std::string tag) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::CenterRule;
    n->tag = std::move(tag);
    n->rule = std::move(g);
    return PiecewiseFunction(n);
}

PiecewiseFunction PiecewiseFunction::composed_with_phi(CellFiber S, PiecewiseFunction inner,
                                                       std::string tag) {
    if (S.is_zero_cell())
        throw std::invalid_argument("composed_with_phi: point fiber has no coset to align with");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Phi;
    n->tag = std::move(tag);
    n->phi_domain = std::move(S);
    n->left = inner.root_;
    return PiecewiseFunction(n);
}

PiecewiseFunction PiecewiseFunction::ball_patch(Ball B, PreparedFunction g,
                                                PadicScalar off_value, std::string tag) {
    if (B.prime() != g.prime() || B.prime() != off_value.prime())
        throw std::invalid_argument("ball_patch: mixed primes");
    auto n = std::make_shared<Node>();
    n->kind = Kind::BallPatch;
    n->tag = std::move(tag);
    n->patch = std::move(B);
    n->rule = std::move(g);
    n->value = std::move(off_value);
    return PiecewiseFunction(n);
}

PiecewiseFunction PiecewiseFunction::glued(PointSet X1, PointSet X2, PiecewiseFunction near,
                                           PiecewiseFunction far, std::string tag) {
    if (X1.empty() || X2.empty())
        throw std::invalid_argument("glued: empty guard set");
    if (X1.prime() != X2.prime()) throw std::invalid_argument("glued: mixed primes");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Glue;
    n->tag = std::move(tag);
    n->near_set = std::move(X1);
    n->far_set = std::move(X2);
    n->left = near.root_;
    n->right = far.root_;
    return PiecewiseFunction(n);
}

PiecewiseFunction PiecewiseFunction::scaled(PadicScalar factor, PiecewiseFunction inner,
                                            std::string tag) {
    if (factor.is_exact_zero() || !factor.is_exact())
        throw std::invalid_argument("scaled: factor must be exact and nonzero");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Scale;
    n->tag = std::move(tag);
    n->factor = std::move(factor);
    n->left = inner.root_;
    return PiecewiseFunction(n);
}

PadicScalar PiecewiseFunction::eval(const PadicScalar& x, std::int32_t precision) const {
    return eval_node(*root_, x, precision);
}

std::string PiecewiseFunction::str() const { return node_str(*root_); }

std::int64_t PiecewiseFunction::prime() const {
    switch (root_->kind) {
        case Kind::Constant: return root_->value->prime();
        case Kind::CenterRule: return root_->rule->prime();
        case Kind::Phi: return root_->phi_domain->prime();
        case Kind::BallPatch: return root_->patch->prime();
        case Kind::Glue: return root_->near_set->prime();
        case Kind::Scale: return root_->factor->prime();
    }
    throw std::logic_error("prime: unreachable");
}

PadicScalar phi_rescale(const CellFiber& S, const PadicScalar& x) {
    if (S.is_zero_cell())
        throw std::invalid_argument("phi_rescale: point fiber has no coset to align with");
    if (x.prime() != S.prime()) throw std::invalid_argument("phi_rescale: mixed primes");
    PadicScalar t = x - S.center();
    if (t.is_exact_zero()) return S.center();
    // multiply by the lifted unit that rotates ac_m(x - c) onto the coset
    // class; members are fixed because the correction is then 1
    AngularClass u = t.ac(S.depth());
    PadicScalar factor = lift_ac(u.inverse() * S.coset().xi_class());
    return t * factor + S.center();
}

ExtendedFunction extend_by_center(const PreparedFunction& g) {
    require_unramified(g);
    require_unit_lipschitz(g);
    if (g.is_constant())
        return {PiecewiseFunction::constant(g.constant_value(), "center"), Norm::one(),
                "center"};
    return {PiecewiseFunction::center_rule(g, "center"), Norm::p_power(g.image_depth()),
            "center"};
}

ExtendedFunction extend_with_phi(const PreparedFunction& g) {
    require_unramified(g);
    require_unit_lipschitz(g);
    if (g.is_constant())
        return {PiecewiseFunction::constant(g.constant_value(), "phi"), Norm::one(), "phi"};
    std::int64_t drop = g.image_depth() - g.source().depth();
    return {phi_pullback(g, "phi"), Norm::p_power(drop), "phi"};
}

IsometricBounds isometric_bounds(const PreparedFunction& g) {
    if (g.is_constant()) throw std::invalid_argument("isometric_bounds: constant rule");
    DerivativeOrder d = g.derivative();
    if (d.slope == 0) throw std::invalid_argument("isometric_bounds: exponent ratio 1 has no threshold");
    Rat depth_gap = Rat(g.image_depth() - g.source().depth());
    // d(l) >= 0 and d(l) >= m' - m, solved for l; the slope's sign decides
    // whether they cap orders from below or above
    return {-d.constant_part / d.slope, (depth_gap - d.constant_part) / d.slope, d.slope < 0};
}

ExtendedFunction extend_isometric(const PreparedFunction& g, std::optional<std::int64_t> window_lo,
                                  std::optional<std::int64_t> window_hi, std::int32_t precision) {
    require_unramified(g);
    if (g.is_constant()) return extend_by_center(g);

    CellFiber S = g.source();
    if (window_lo || window_hi) {
        try {
            S = S.restricted(window_lo, window_hi);
        } catch (const std::invalid_argument&) {
            throw EmptyWindow("no admissible order in the requested window");
        }
    }
    PreparedFunction gw(g.a(), g.b(), g.e(), g.c(), g.c_prime(), S, g.target());
    require_unit_lipschitz(gw);

    if (gw.exp_ratio() == Rat(1)) {
        // matching depths: the coset pull-back is already isometric
        return {phi_pullback(gw, "iso-q1"), Norm::one(), "iso-q1"};
    }

    IsometricBounds bounds = isometric_bounds(gw);
    const std::string tag = bounds.upper ? "iso-qlt1" : "iso-qgt1";

    // split the fiber where image orders catch up with source orders; the
    // short side is a finite run of balls
    std::optional<CellFiber> good;
    std::vector<Ball> bad;
    if (!bounds.upper) {
        std::int64_t lg = rat_ceil(bounds.threshold).to_int64();
        std::int64_t lmin = *S.l_min();  // present: checked with the slope sign
        if (lg > lmin) bad = S.balls(lmin, lg - 1);
        if (auto first = S.first_order_at_or_above(lg)) good = S.restricted(*first, std::nullopt);
    } else {
        std::int64_t lg = rat_floor(bounds.threshold).to_int64();
        std::int64_t lmax = *S.l_max();
        if (lg < lmax) bad = S.balls(lg + 1, lmax);
        if (auto last = S.last_order_at_or_below(lg)) good = S.restricted(std::nullopt, *last);
    }

    std::vector<std::pair<PointSet, ExtendedFunction>> parts;
    if (good) {
        PreparedFunction gg(g.a(), g.b(), g.e(), g.c(), g.c_prime(), *good, g.target());
        parts.emplace_back(PointSet(PointSet::Constituent(*good)),
                           ExtendedFunction{phi_pullback(gg, tag), Norm::one(), tag});
    }
    for (const Ball& B : bad) {
        // one-ball rule: the function on the ball, its value at the
        // canonical point everywhere else
        PadicScalar off = gw.eval(B.canonical_point(), precision);
        parts.emplace_back(PointSet(PointSet::Constituent(B)),
                           ExtendedFunction{PiecewiseFunction::ball_patch(B, gw, off, tag),
                                            Norm::one(), tag});
    }

    ExtendedFunction out = glue(parts);
    return {out.pieces, Norm::one(), tag};
}

ExtendedFunction glue(const std::vector<std::pair<PointSet, ExtendedFunction>>& parts) {
    if (parts.empty()) throw std::invalid_argument("glue: no parts");
    for (const auto& [X, ext] : parts) {
        if (X.empty()) throw std::invalid_argument("glue: part with empty domain");
        if (X.prime() != parts[0].first.prime())
            throw std::invalid_argument("glue: mixed primes");
    }
    if (parts.size() == 1) return parts[0].second;

    // parts must describe one function: compare them at probe points that
    // land in more than one domain
    for (std::size_t j = 0; j < parts.size(); ++j) {
        for (const PadicScalar& x : probe_points(parts[j].first)) {
            PadicScalar vj = parts[j].second.eval(x, 24);
            for (std::size_t i = 0; i < parts.size(); ++i) {
                if (i == j || !parts[i].first.contains(x)) continue;
                if (!vj.agrees_with(parts[i].second.eval(x, 24)))
                    throw DisagreementOnSharedDomain(
                        "parts " + std::to_string(i) + " and " + std::to_string(j) +
                        " differ at x = " + x.str());
            }
        }
    }

    PointSet covered = parts[0].first;
    PiecewiseFunction tree = parts[0].second.pieces;
    Norm claimed = parts[0].second.claimed_lipschitz;
    for (std::size_t i = 1; i < parts.size(); ++i) {
        tree = PiecewiseFunction::glued(covered, parts[i].first, tree, parts[i].second.pieces,
                                        "glue");
        for (const auto& item : parts[i].first.items()) covered.add(item);
        claimed = max(claimed, parts[i].second.claimed_lipschitz);
    }
    return {tree, claimed, "glue"};
}

PreparedFunction rescale_outputs(const PreparedFunction& g, std::int64_t k) {
    std::int64_t p = g.prime();
    PadicScalar pk = Ball::p_power_scalar(p, k);
    PadicScalar pkb = Ball::p_power_scalar(p, k * g.b());
    CosetSpec target(g.target().xi * pk, g.target().m, g.target().n);
    return PreparedFunction(g.a(), g.b(), g.e() * pkb, g.c(), g.c_prime() * pk, g.source(),
                            target);
}

Family rescale_to_unit(const Family& f, const Rat& lambda) {
    if (f.members.empty()) throw std::invalid_argument("rescale_to_unit: empty family");
    std::int64_t p = f.members.front().g.prime();
    auto t = p_power_exponent(lambda, p);
    if (!t)
        throw UnsupportedLambda("lambda = " + rat_str(lambda) + " is not a power of " +
                                std::to_string(p));
    Family out;
    out.members.reserve(f.members.size());
    for (const auto& mem : f.members) out.members.push_back({mem.y, rescale_outputs(mem.g, -*t)});
    return out;
}

ExtendedFunction unscale(const ExtendedFunction& ext, std::int64_t p, const Rat& lambda) {
    auto t = p_power_exponent(lambda, p);
    if (!t)
        throw UnsupportedLambda("lambda = " + rat_str(lambda) + " is not a power of " +
                                std::to_string(p));
    if (*t == 0) return ext;
    // values return to the original scale; the constant picks the factor up
    PadicScalar factor = Ball::p_power_scalar(p, *t);
    return {PiecewiseFunction::scaled(factor, ext.pieces, ext.provenance),
            ext.claimed_lipschitz * Norm::p_power(*t), ext.provenance};
}

}  // namespace padlex
