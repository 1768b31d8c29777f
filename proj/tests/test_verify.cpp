#include "doctest.h"

#include <padlex/verify.hpp>

#include <set>
#include <string>

using namespace padlex;

namespace {

PadicScalar Q(std::int64_t p, const std::string& s) { return PadicScalar::parse(p, s); }

CellFiber coset_fiber(std::int64_t p, const std::string& xi, std::int32_t m, std::int64_t n,
                      std::optional<std::int64_t> lo = std::nullopt,
                      std::optional<std::int64_t> hi = std::nullopt) {
    return CellFiber(PadicScalar::zero(p), CosetSpec(Q(p, xi), m, n), lo, hi);
}

PreparedFunction power_rule(std::int64_t a, std::int64_t b, const std::string& e,
                            const CellFiber& S) {
    std::int64_t p = S.prime();
    return PreparedFunction(a, b, Q(p, e), S.center(), PadicScalar::zero(p), S,
                            derive_target(a, b, Q(p, e), S));
}

std::set<std::string> rendered(const WindowSample& w) {
    std::set<std::string> out;
    for (const auto& x : w.points) out.insert(x.str());
    return out;
}

}  // namespace

TEST_CASE("window sampling walks small lattices in full") {
    SampleConfig cfg;
    WindowSample w = sample_window(3, 0, 2, cfg);
    CHECK(w.exhaustive);
    CHECK(w.points.size() == 27);
    CHECK(w.points.front().is_exact_zero());
    CHECK(rendered(w).size() == 27);
    for (const auto& x : w.points)
        if (!x.is_exact_zero()) {
            CHECK(x.ord() >= Valuation(0));
            CHECK(x.ord() <= Valuation(2));
        }

    WindowSample neg = sample_window(3, -1, 1, cfg);
    CHECK(neg.exhaustive);
    CHECK(neg.points.size() == 27);
    bool saw_pole = false;
    for (const auto& x : neg.points)
        if (!x.is_exact_zero() && x.ord() == Valuation(-1)) saw_pole = true;
    CHECK(saw_pole);

    CHECK_THROWS_AS(sample_window(3, 2, 0, cfg), std::invalid_argument);
    CHECK_THROWS_AS(sample_window(1, 0, 2, cfg), std::invalid_argument);
}

TEST_CASE("window sampling strides strata above the cap") {
    SampleConfig cfg;
    WindowSample w = sample_window(3, 0, 7, cfg);  // 3^8 lattice points is too many
    CHECK(!w.exhaustive);
    CHECK(w.points.front().is_exact_zero());
    CHECK(rendered(w).size() == w.points.size());
    std::set<std::int64_t> orders;
    for (const auto& x : w.points)
        if (!x.is_exact_zero()) {
            std::int64_t o = x.ord().value();
            CHECK(o >= 0);
            CHECK(o <= 7);
            orders.insert(o);
        }
    CHECK(orders.size() == 8);  // every stratum is represented

    // at p = 3 only 54 four-digit units exist, so strata saturate below `samples`
    CHECK(w.points.size() == 1 + 8 * 54);

    WindowSample w2 = sample_window(3, 0, 7, cfg);
    REQUIRE(w2.points.size() == w.points.size());
    for (std::size_t i = 0; i < w.points.size(); ++i) CHECK(w.points[i] == w2.points[i]);

    // at p = 5 the unit pool is deep enough that seeds pick different subsets
    WindowSample five = sample_window(5, 0, 4, cfg);
    CHECK(!five.exhaustive);
    SampleConfig other = cfg;
    other.seed = 17;
    WindowSample five2 = sample_window(5, 0, 4, other);
    CHECK(rendered(five) != rendered(five2));
}

TEST_CASE("pair ratios rank exactly") {
    SampleConfig cfg;
    WindowSample w = sample_window(3, 0, 2, cfg);

    auto est = estimate_lipschitz([](const PadicScalar& x) { return x; }, w);
    CHECK(est.sup_ratio == Norm::one());
    CHECK(est.points == 27);
    CHECK(est.pairs == 351);
    CHECK(est.exhaustive);
    CHECK(est.determinate);
    CHECK(est.worst == "x=0, y=1, |x-y|=1, |f(x)-f(y)|=1");
    CHECK(est.certifies(Norm::one()));
    CHECK(est.certifies(Norm::p_power(3)));
    CHECK(!est.certifies(Norm::p_power(-1)));

    auto sq = estimate_lipschitz([](const PadicScalar& x) { return x * x; }, w);
    CHECK(sq.sup_ratio == Norm::one());  // |x + y| <= 1 on integer points

    auto tripled = estimate_lipschitz(
        [](const PadicScalar& x) { return PadicScalar::from_int(3, Zint(3)) * x; }, w);
    CHECK(tripled.sup_ratio == Norm::p_power(-1));
    CHECK(tripled.certifies(Norm::p_power(-1)));

    auto flat = estimate_lipschitz([](const PadicScalar& x) { return PadicScalar::one(x.prime()); },
                                   w);
    CHECK(flat.sup_ratio == Norm::zero());
    CHECK(flat.pairs == 351);
    CHECK(flat.certifies(Norm::zero()));

    auto empty = estimate_lipschitz([](const PadicScalar& x) { return x; }, WindowSample{});
    CHECK(empty.points == 0);
    CHECK(!empty.notes.empty());
}

TEST_CASE("undecidable differences spoil certification") {
    SampleConfig cfg;
    WindowSample w = sample_window(3, 0, 2, cfg);

    // every value is only known to vanish: no ratio can be ranked
    auto fuzz = estimate_lipschitz(
        [](const PadicScalar&) { return PadicScalar::approx_zero(3, 10); }, w);
    CHECK(fuzz.sup_ratio == Norm::zero());
    CHECK(!fuzz.determinate);
    CHECK(!fuzz.certifies(Norm::one()));
    CHECK(!fuzz.certifies(Norm::zero()));
    CHECK(!fuzz.notes.empty());

    // ample stored precision keeps every difference decidable
    auto shifted = estimate_lipschitz(
        [](const PadicScalar& x) { return x + PadicScalar::approx_zero(3, 50); }, w);
    CHECK(shifted.determinate);
    CHECK(shifted.sup_ratio == Norm::one());
    CHECK(shifted.certifies(Norm::one()));
}

TEST_CASE("extension claims hold up under sampling") {
    SampleConfig cfg;
    PreparedFunction g = power_rule(2, 1, "1", coset_fiber(3, "1", 1, 1, 0, std::nullopt));

    ExtendedFunction byc = extend_by_center(g);
    auto ec = estimate_extension(byc, 0, 3, cfg, 32);
    CHECK(ec.exhaustive);
    CHECK(ec.sup_ratio == Norm::one());
    CHECK(ec.certifies(byc.claimed_lipschitz));

    ExtendedFunction byphi = extend_with_phi(g);
    CHECK(byphi.claimed_lipschitz == Norm::one());
    auto ep = estimate_extension(byphi, 0, 3, cfg, 32);
    CHECK(ep.sup_ratio == Norm::one());
    CHECK(ep.certifies(byphi.claimed_lipschitz));
}

TEST_CASE("sampling separates the center and rescaling claims at depth two") {
    SampleConfig cfg;
    PreparedFunction g = power_rule(2, 1, "1", coset_fiber(3, "1", 2, 1, 0, std::nullopt));

    ExtendedFunction byc = extend_by_center(g);
    CHECK(byc.claimed_lipschitz == Norm::p_power(2));
    auto ec = estimate_extension(byc, 0, 4, cfg, 32);
    CHECK(ec.sup_ratio == Norm::p_power(1));  // attained just outside a depth-2 ball
    CHECK(ec.certifies(byc.claimed_lipschitz));
    CHECK(!ec.certifies(Norm::one()));

    ExtendedFunction byphi = extend_with_phi(g);
    CHECK(byphi.claimed_lipschitz == Norm::one());
    auto ep = estimate_extension(byphi, 0, 4, cfg, 32);
    CHECK(ep.sup_ratio == Norm::one());
    CHECK(ep.certifies(byphi.claimed_lipschitz));
}

TEST_CASE("isometric extension stays within ratio one on a patched fiber") {
    SampleConfig cfg;
    // cubing over 3Z* scaled by 1/3: the sole ball gets a one-ball patch
    PreparedFunction g = power_rule(3, 1, "1/3", coset_fiber(3, "1", 1, 1, 0, 0));
    ExtendedFunction iso = extend_isometric(g);
    CHECK(iso.claimed_lipschitz == Norm::one());
    auto est = estimate_extension(iso, -1, 3, cfg, 32);
    CHECK(est.exhaustive);
    CHECK(est.sup_ratio == Norm::one());
    CHECK(est.certifies(iso.claimed_lipschitz));
}

TEST_CASE("retraction bound holds for honest claims") {
    SampleConfig cfg;
    WindowSample w = sample_window(3, 0, 3, cfg);

    CellFiber S = coset_fiber(3, "1", 1, 1, 0, 2);
    ExtendedFunction ext = extend_with_phi(power_rule(2, 1, "1", S));
    CheckReport rep = check_retraction_bound(ext, PointSet(S), w, 32);
    CHECK(rep.pass);
    CHECK(rep.points == w.points.size());
    CHECK(rep.notes.empty());

    // orders unbounded above: zero's infimum is not attained, noted and skipped
    CellFiber Su = coset_fiber(3, "1", 1, 1, 0, std::nullopt);
    ExtendedFunction extu = extend_with_phi(power_rule(2, 1, "1", Su));
    CheckReport repu = check_retraction_bound(extu, PointSet(Su), w, 32);
    CHECK(repu.pass);
    CHECK(repu.points == w.points.size() - 1);
    REQUIRE(repu.notes.size() == 1);
    CHECK(repu.notes[0] == "1 point(s) with unattained nearest point");

    // a deflated constant is caught
    ExtendedFunction fake{extu.pieces, Norm::p_power(-3), extu.provenance};
    CheckReport bad = check_retraction_bound(fake, PointSet(Su), w, 32);
    CHECK(!bad.pass);
    CHECK(bad.violations > 0);
    CHECK(!bad.witnesses.empty());

    CHECK_THROWS_AS(check_retraction_bound(ext, PointSet(), w, 32), EmptyDomain);
}

TEST_CASE("order identities verify on power rules") {
    SampleConfig cfg;
    PreparedFunction g = power_rule(2, 1, "1", coset_fiber(3, "1", 1, 1));
    VerificationReport R = verify_identities(g, 0, 3, cfg);
    CHECK(R.pass());
    CHECK(R.chain_rule.points == 4);
    CHECK(R.image_depths.points == 4);
    CHECK(R.image_orders.points > 0);
    CHECK(R.derivative_orders.pairs > 0);
    CHECK(R.str() == verify_identities(g, 0, 3, cfg).str());

    // negative exponent: image orders decrease as source orders grow
    PreparedFunction inv = power_rule(-3, 1, "27", coset_fiber(3, "1", 1, 1, 0, 1));
    VerificationReport Ri = verify_identities(inv, 0, 1, cfg);
    CHECK(Ri.pass());
    CHECK(Ri.image_depths.points == 2);
}

TEST_CASE("order identities verify on a root rule") {
    SampleConfig cfg;
    PreparedFunction r = power_rule(1, 2, "1", coset_fiber(5, "1", 1, 2));
    VerificationReport R = verify_identities(r, 0, 4, cfg);
    CHECK(R.pass());
    CHECK(R.image_depths.points == 3);  // orders 0, 2, 4
    CHECK(R.derivative_orders.pairs > 0);
}

TEST_CASE("a misdeclared target breaks the image sections") {
    SampleConfig cfg;
    CellFiber S = coset_fiber(3, "1", 1, 1);
    PadicScalar z = PadicScalar::zero(3);

    // wrong angular class: every evaluation lands outside the declared branch
    PreparedFunction bad(2, 1, Q(3, "1"), z, z, S, CosetSpec(Q(3, "2"), 1, 2));
    VerificationReport Rb = verify_identities(bad, 0, 2, cfg);
    CHECK(!Rb.pass());
    CHECK(!Rb.image_depths.pass);
    CHECK(Rb.chain_rule.pass);  // pure order bookkeeping is unaffected

    // wrong order step: evaluations work but images miss the declared fiber
    PreparedFunction off(2, 1, Q(3, "1"), z, z, S, CosetSpec(Q(3, "1"), 1, 4));
    VerificationReport Ro = verify_identities(off, 0, 2, cfg);
    CHECK(!Ro.pass());
    CHECK(!Ro.image_depths.pass);
    CHECK(!Ro.image_orders.pass);
    CHECK(Ro.derivative_orders.pass);  // differences still split against the formula
    CHECK(Ro.chain_rule.pass);
}

TEST_CASE("constant rules report vacuous order sections") {
    SampleConfig cfg;
    PreparedFunction k = power_rule(0, 1, "5", coset_fiber(3, "1", 1, 1, 0, 2));
    VerificationReport R = verify_identities(k, 0, 4, cfg);
    CHECK(R.pass());
    CHECK(R.image_orders.points == 3);  // the window holds balls at orders 0, 1, 2
    CHECK(R.derivative_orders.pairs == 0);
    CHECK(!R.derivative_orders.notes.empty());

    CellFiber pt(PadicScalar::zero(3), CosetSpec(PadicScalar::zero(3), 1, 1), std::nullopt,
                 std::nullopt);
    PreparedFunction kp = power_rule(0, 1, "7", pt);
    VerificationReport Rp = verify_identities(kp, -2, 2, cfg);
    CHECK(Rp.pass());
    CHECK(Rp.image_orders.points == 1);
}

TEST_CASE("a window missing the fiber is reported, not failed") {
    SampleConfig cfg;
    PreparedFunction g = power_rule(2, 1, "1", coset_fiber(3, "1", 1, 2));
    VerificationReport R = verify_identities(g, 1, 1, cfg);  // only odd orders, none admissible
    CHECK(R.pass());
    CHECK(R.image_depths.points == 0);
    REQUIRE(!R.image_depths.notes.empty());
    CHECK(R.image_depths.notes[0] == "window misses the fiber");
}

TEST_CASE("fiber sampling stays inside the fiber") {
    SampleConfig cfg;
    CellFiber S = coset_fiber(3, "1", 1, 2, 0, 4);
    WindowSample w = sample_fiber(S, 0, 4, cfg);
    CHECK(w.exhaustive);
    CHECK(w.points.size() == 3 * 81);  // balls at orders 0, 2, 4 walked at four digits
    for (const auto& x : w.points) CHECK(S.contains(x));

    CellFiber pt(Q(3, "5"), CosetSpec(PadicScalar::zero(3), 1, 1), std::nullopt, std::nullopt);
    WindowSample wp = sample_fiber(pt, -5, 5, cfg);
    REQUIRE(wp.points.size() == 1);
    CHECK(wp.points[0] == Q(3, "5"));

    CHECK(sample_fiber(S, 5, 9, cfg).points.empty());  // no admissible orders there
}

TEST_CASE("nearest-point oracle extends without inflating ratios") {
    SampleConfig cfg;
    Ball B1 = coset_fiber(3, "1", 1, 1, 0, 0).ball_at(0);
    Ball B2 = coset_fiber(3, "2", 1, 1, 0, 0).ball_at(0);
    PointSet X(B1);
    X.add(B2);
    Evaluator f = [&](const PadicScalar& x) {
        return B1.contains(x) ? PadicScalar::zero(3) : PadicScalar::one(3);
    };
    Evaluator tilde = nearest_point_oracle(X, f);
    CHECK(tilde(Q(3, "1")) == PadicScalar::zero(3));  // members keep their value
    CHECK(tilde(Q(3, "2")) == PadicScalar::one(3));
    // 0 is equidistant from both balls; the tie goes to the first constituent
    CHECK(tilde(PadicScalar::zero(3)) == PadicScalar::zero(3));

    auto est = estimate_lipschitz(tilde, sample_window(3, 0, 3, cfg));
    CHECK(est.exhaustive);
    CHECK(est.certifies(Norm::one()));

    PointSet single(Q(3, "7"));
    Evaluator c = nearest_point_oracle(single, [](const PadicScalar& x) { return x; });
    CHECK(c(Q(3, "100")) == Q(3, "7"));
    CHECK(c(PadicScalar::zero(3)) == Q(3, "7"));

    CHECK_THROWS_AS(nearest_point_oracle(PointSet(), f), EmptyDomain);
}

TEST_CASE("reports render stably") {
    SampleConfig cfg;
    PreparedFunction g = power_rule(2, 1, "1", coset_fiber(3, "1", 1, 1, 0, std::nullopt));
    ExtendedFunction ext = extend_with_phi(g);

    auto a = estimate_extension(ext, 0, 3, cfg, 32);
    auto b = estimate_extension(ext, 0, 3, cfg, 32);
    CHECK(a.str(3) == b.str(3));
    CHECK(a.str(3).find("sup ratio 1") == 0);
    CHECK(a.str(3).find("exhaustive") != std::string::npos);

    VerificationReport R = verify_identities(g, 0, 2, cfg);
    CHECK(R.str().find("derivative orders: PASS") == 0);
    CHECK(R.str().find("chain rule: PASS") != std::string::npos);
}
