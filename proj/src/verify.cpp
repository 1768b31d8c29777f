#include <padlex/verify.hpp>

#include <random>
#include <set>

namespace padlex {

namespace {

// p^k if it stays under limit, otherwise nullopt
std::optional<std::uint64_t> pow_under(std::int64_t p, std::int64_t k, std::uint64_t limit) {
    std::uint64_t r = 1;
    for (std::int64_t i = 0; i < k; ++i) {
        if (r > limit / static_cast<std::uint64_t>(p)) return std::nullopt;
        r *= static_cast<std::uint64_t>(p);
    }
    return r;
}

// one seeded unit: leading digit in [1, p), then depth - 1 digits in [0, p)
Zint draw_unit(std::mt19937_64& rng, std::int64_t p, std::int32_t depth) {
    Zint u(1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(p - 1)));
    Zint scale(p);
    for (std::int32_t i = 1; i < depth; ++i) {
        u = u + scale * Zint(static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(p)));
        scale = scale * Zint(p);
    }
    return u;
}

std::string pair_str(const PadicScalar& x, const PadicScalar& y, std::int64_t p, const Norm& dx,
                     const Norm& df) {
    return "x=" + x.str() + ", y=" + y.str() + ", |x-y|=" + dx.str(p) +
           ", |f(x)-f(y)|=" + df.str(p);
}

// Lattice of one ball at cfg.depth digits of resolution: x = w + p^{l+m} t.
// Exhaustive in t below the cap, otherwise seeded draws salted per ball.
std::vector<PadicScalar> ball_lattice(const Ball& B, const SampleConfig& cfg,
                                      std::uint64_t salt) {
    std::int64_t p = B.prime();
    std::vector<PadicScalar> xs;
    PadicScalar w = B.canonical_point();
    PadicScalar step = Ball::p_power_scalar(p, B.order() + B.depth());
    if (auto count = pow_under(p, cfg.depth, cfg.exhaustive_cap)) {
        xs.reserve(*count);
        for (std::uint64_t t = 0; t < *count; ++t)
            xs.push_back(w + step * PadicScalar::from_int(p, Zint(static_cast<std::int64_t>(t))));
        return xs;
    }
    xs.push_back(w);
    std::mt19937_64 rng(cfg.seed ^ salt);
    std::set<Zint> offs;
    std::uint64_t spins = 0;
    while (offs.size() < cfg.samples && spins < 40 * cfg.samples) {
        ++spins;
        offs.insert(draw_unit(rng, p, cfg.depth));
    }
    for (const Zint& t : offs) xs.push_back(w + step * PadicScalar::from_int(p, t));
    return xs;
}

}  // namespace

WindowSample sample_window(std::int64_t p, std::int64_t order_lo, std::int64_t order_hi,
                           const SampleConfig& cfg) {
    if (p < 2) throw std::invalid_argument("sample_window: prime must be >= 2");
    if (order_hi < order_lo) throw std::invalid_argument("sample_window: crossed orders");
    WindowSample out;
    std::int64_t span = order_hi - order_lo + 1;
    PadicScalar base = Ball::p_power_scalar(p, order_lo);
    if (auto count = pow_under(p, span, cfg.exhaustive_cap)) {
        out.exhaustive = true;
        out.points.reserve(*count);
        for (std::uint64_t t = 0; t < *count; ++t)
            out.points.push_back(PadicScalar::from_int(p, Zint(static_cast<std::int64_t>(t))) *
                                 base);
        return out;
    }
    out.points.push_back(PadicScalar::zero(p));
    std::mt19937_64 rng(cfg.seed);
    for (std::int64_t l = order_lo; l <= order_hi; ++l) {
        std::set<Zint> units;
        std::uint64_t spins = 0;
        while (units.size() < cfg.samples && spins < 40 * cfg.samples) {
            ++spins;
            units.insert(draw_unit(rng, p, cfg.depth));
        }
        PadicScalar pl = Ball::p_power_scalar(p, l);
        for (const Zint& u : units) out.points.push_back(PadicScalar::from_int(p, u) * pl);
    }
    return out;
}

WindowSample sample_fiber(const CellFiber& S, std::int64_t order_lo, std::int64_t order_hi,
                          const SampleConfig& cfg) {
    WindowSample out;
    if (S.is_zero_cell()) {
        out.exhaustive = true;
        out.points.push_back(S.center());
        return out;
    }
    out.exhaustive = pow_under(S.prime(), cfg.depth, cfg.exhaustive_cap).has_value();
    for (const Ball& B : S.balls(order_lo, order_hi))
        for (auto& x : ball_lattice(B, cfg, static_cast<std::uint64_t>(B.order() + (1 << 20))))
            out.points.push_back(std::move(x));
    return out;
}

LipschitzEstimate estimate_lipschitz(const Evaluator& f, const WindowSample& sample) {
    LipschitzEstimate est;
    est.exhaustive = sample.exhaustive;
    est.points = sample.points.size();
    if (sample.points.empty()) {
        est.notes.push_back("no points to compare");
        return est;
    }
    std::int64_t p = sample.points.front().prime();
    std::vector<PadicScalar> vals;
    vals.reserve(sample.points.size());
    for (const auto& x : sample.points) vals.push_back(f(x));

    std::uint64_t dark = 0;
    for (std::size_t i = 0; i < sample.points.size(); ++i)
        for (std::size_t j = i + 1; j < sample.points.size(); ++j) {
            PadicScalar dx = sample.points[i] - sample.points[j];
            if (dx.is_exact_zero()) continue;
            ++est.pairs;
            PadicScalar dv = vals[i] - vals[j];
            if (dv.is_exact_zero()) continue;
            if (dv.is_indeterminate_zero()) {
                // the ratio is at most p^{-A} / |x-y|; rank that bound and
                // drop determinacy only if it could beat the current sup
                Norm cap = Norm::p_power(-dv.abs_precision().value()) / dx.norm();
                if (est.sup_ratio < cap) {
                    est.determinate = false;
                    ++dark;
                }
                continue;
            }
            Norm r = dv.norm() / dx.norm();
            if (est.sup_ratio < r) {
                est.sup_ratio = r;
                est.worst = pair_str(sample.points[i], sample.points[j], p, dx.norm(), dv.norm());
            }
        }
    if (dark > 0)
        est.notes.push_back(std::to_string(dark) +
                            " difference(s) vanished below working precision");
    return est;
}

std::string LipschitzEstimate::str(std::int64_t p) const {
    std::string s = "sup ratio " + sup_ratio.str(p);
    s += exhaustive ? " (exhaustive" : " (sampled";
    s += ", points=" + std::to_string(points) + ", pairs=" + std::to_string(pairs) + ")";
    if (!determinate) s += "\n  indeterminate: some ratios were undecidable at this precision";
    if (!worst.empty()) s += "\n  attained: " + worst;
    for (const auto& n : notes) s += "\n  note: " + n;
    return s;
}

LipschitzEstimate estimate_extension(const ExtendedFunction& ext, std::int64_t order_lo,
                                     std::int64_t order_hi, const SampleConfig& cfg,
                                     std::int32_t precision) {
    WindowSample w = sample_window(ext.pieces.prime(), order_lo, order_hi, cfg);
    auto f = [&](const PadicScalar& x) { return ext.eval(x, precision); };
    return estimate_lipschitz(f, w);
}

CheckReport check_retraction_bound(const ExtendedFunction& ext, const PointSet& domain,
                                   const WindowSample& sample, std::int32_t precision) {
    CheckReport rep;
    std::uint64_t skipped = 0;
    for (const PadicScalar& x : sample.points) {
        PadicScalar r = x;
        try {
            r = domain.nearest_point(x);
        } catch (const std::invalid_argument&) {
            ++skipped;  // infimum not attained at this point
            continue;
        }
        ++rep.points;
        PadicScalar dv = ext.eval(x, precision) - ext.eval(r, precision);
        Norm bound = ext.claimed_lipschitz * (x - r).norm();
        if (dv.is_exact_zero()) continue;
        if (dv.is_indeterminate_zero()) {
            if (Norm::p_power(-dv.abs_precision().value()) <= bound) continue;
            rep.fail("x=" + x.str() + ": difference below precision but bound is " +
                     bound.str(x.prime()));
            continue;
        }
        if (!(dv.norm() <= bound))
            rep.fail("x=" + x.str() + ": |f(x)-f(r)| = " + dv.norm().str(x.prime()) +
                     " exceeds " + bound.str(x.prime()) + " at r=" + r.str());
    }
    if (skipped > 0)
        rep.notes.push_back(std::to_string(skipped) + " point(s) with unattained nearest point");
    return rep;
}

Evaluator nearest_point_oracle(const PointSet& X, Evaluator f) {
    if (X.empty()) throw EmptyDomain("nearest-point oracle over an empty set");
    return [X, f = std::move(f)](const PadicScalar& x) { return f(X.nearest_point(x)); };
}

std::string VerificationReport::str() const {
    return "derivative orders: " + derivative_orders.str() + "\nimage depths: " +
           image_depths.str() + "\nimage orders: " + image_orders.str() + "\nchain rule: " +
           chain_rule.str();
}

VerificationReport verify_identities(const PreparedFunction& g, std::int64_t window_lo,
                                     std::int64_t window_hi, const SampleConfig& cfg) {
    VerificationReport R;
    std::int64_t p = g.prime();

    if (g.is_constant()) {
        PadicScalar v = g.constant_value();
        for (CheckReport* r :
             {&R.derivative_orders, &R.image_depths, &R.image_orders, &R.chain_rule})
            r->notes.push_back("constant rule: differences vanish identically");
        if (!g.source().is_zero_cell()) {
            for (const Ball& B : g.source().balls(window_lo, window_hi)) {
                ++R.image_orders.points;
                if (g.eval(B.canonical_point(), 8) != v)
                    R.image_orders.fail("constant value mismatch on ball at order " +
                                        std::to_string(B.order()));
            }
        } else {
            ++R.image_orders.points;
            if (g.eval(g.source().center(), 8) != v)
                R.image_orders.fail("constant value mismatch at the point fiber");
        }
        return R;
    }

    std::vector<Ball> balls = g.source().balls(window_lo, window_hi);
    if (balls.empty()) {
        for (CheckReport* r :
             {&R.derivative_orders, &R.image_depths, &R.image_orders, &R.chain_rule})
            r->notes.push_back("window misses the fiber");
        return R;
    }

    std::int32_t m = g.source().depth();
    std::int32_t mp = g.image_depth();
    std::int32_t prec = mp + 6;
    CellFiber T = g.target_fiber();

    for (const Ball& B : balls) {
        std::int64_t l = B.order();
        std::int64_t d = g.derivative_order_at(l);
        std::int64_t lp = g.image_order(l);
        std::string tag = "l=" + std::to_string(l) + ": ";

        // chain rule in orders: ord(e a (x-c)^{a-1}) = ord(b) + (b-1) l' + d
        ++R.chain_rule.points;
        std::int64_t lhs = g.e().ord().value() + ord_in(Zint(g.a()), p) + (g.a() - 1) * l;
        std::int64_t rhs = ord_in(Zint(g.b()), p) + (g.b() - 1) * lp + d;
        if (lhs != rhs)
            R.chain_rule.fail(tag + std::to_string(lhs) + " != " + std::to_string(rhs));

        // depth bookkeeping: the image order and depth split d + l + m, and
        // the computed image ball is the target fiber's ball there
        ++R.image_depths.points;
        if (lp + mp != d + l + m)
            R.image_depths.fail(tag + "l' + m' = " + std::to_string(lp + mp) +
                                " differs from d + l + m = " + std::to_string(d + l + m));
        try {
            Ball Bp = g.image_ball(B);
            if (Bp.order() != lp || !T.admits_order(lp) || Bp != T.ball_at(lp))
                R.image_depths.fail(tag + "image " + Bp.str() + " is not the target ball");
        } catch (const Error& err) {
            R.image_depths.fail(tag + "image ball failed: " + err.what());
            continue;
        }

        std::vector<PadicScalar> xs =
            ball_lattice(B, cfg, static_cast<std::uint64_t>(l + (1 << 20)));

        std::vector<PadicScalar> zs;
        zs.reserve(xs.size());
        try {
            for (const auto& x : xs) zs.push_back(g.eval(x, prec));
        } catch (const Error& err) {
            R.image_orders.fail(tag + "evaluation failed: " + err.what());
            continue;
        }

        // every image sits in the target fiber at the predicted order
        for (std::size_t i = 0; i < xs.size(); ++i) {
            ++R.image_orders.points;
            PadicScalar z = zs[i] - g.c_prime();
            if (z.is_exact_zero() || z.is_indeterminate_zero()) {
                R.image_orders.fail(tag + "g(x) - c' vanished at x=" + xs[i].str());
                continue;
            }
            if (z.ord() != Valuation(lp)) {
                R.image_orders.fail(tag + "ord(g(x) - c') = " + z.ord().str() + " != " +
                                    std::to_string(lp) + " at x=" + xs[i].str());
                continue;
            }
            try {
                if (!T.contains(zs[i]))
                    R.image_orders.fail(tag + "g(x) leaves the target fiber at x=" + xs[i].str());
            } catch (const Error& err) {
                R.image_orders.fail(tag + "membership undecidable: " + err.what());
            }
        }

        // measured difference orders against the derivative formula, over a
        // deterministic prefix of pairs
        std::uint64_t budget = 2048;
        for (std::size_t i = 0; i < xs.size() && budget > 0; ++i)
            for (std::size_t j = i + 1; j < xs.size() && budget > 0; ++j) {
                --budget;
                ++R.derivative_orders.pairs;
                PadicScalar du = xs[i] - xs[j];
                PadicScalar dz = zs[i] - zs[j];
                if (dz.is_exact_zero()) {
                    R.derivative_orders.fail(tag + "g is not injective: " + xs[i].str() +
                                             " and " + xs[j].str());
                    continue;
                }
                if (dz.is_indeterminate_zero()) {
                    R.derivative_orders.fail(tag + "difference vanished below precision " +
                                             std::to_string(dz.abs_precision().value()));
                    continue;
                }
                if (dz.ord().value() != d + du.ord().value())
                    R.derivative_orders.fail(
                        tag + "ord split " + dz.ord().str() + " != " + std::to_string(d) +
                        " + " + du.ord().str() + " for x=" + xs[i].str() + ", y=" + xs[j].str());
            }
        R.derivative_orders.points += xs.size();
    }

    std::string window_note = "checked " + std::to_string(balls.size()) + " ball(s) in [" +
                              std::to_string(window_lo) + ", " + std::to_string(window_hi) + "]";
    for (CheckReport* r : {&R.derivative_orders, &R.image_depths, &R.image_orders, &R.chain_rule})
        r->notes.push_back(window_note);
    return R;
}

}  // namespace padlex
