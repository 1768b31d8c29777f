#pragma once

#include <padlex/extension.hpp>

#include <functional>
#include <vector>

namespace padlex {

using Evaluator = std::function<PadicScalar(const PadicScalar&)>;

// Deterministic sampling plan shared by the estimators.  Runs are a pure
// function of these fields: same config, same points, same report bytes.
struct SampleConfig {
    std::uint64_t seed = 0;
    std::uint64_t samples = 64;       // per order stratum when not exhaustive
    std::int32_t depth = 4;           // unit digits drawn per sampled point
    std::uint64_t exhaustive_cap = 2500;  // largest lattice walked in full
};

// Point cloud over a window of valuations, with zero included.  Below the
// cap this is the full lattice {t p^lo : 0 <= t < p^(hi-lo+1)}; otherwise
// each order stratum gets `samples` seeded draws.
struct WindowSample {
    std::vector<PadicScalar> points;
    bool exhaustive = false;
};

WindowSample sample_window(std::int64_t p, std::int64_t order_lo, std::int64_t order_hi,
                           const SampleConfig& cfg);

// Points of the fiber's balls over a window of orders, at cfg.depth digits
// of resolution per ball (exhaustive below the cap).  A point fiber yields
// its center.
WindowSample sample_fiber(const CellFiber& S, std::int64_t order_lo, std::int64_t order_hi,
                          const SampleConfig& cfg);

// Largest |f(x)-f(y)| / |x-y| seen over all pairs of the sample.  Ratios are
// exact powers of p throughout; a difference that vanishes below its working
// precision cannot be ranked and flips `determinate` instead of guessing.
struct LipschitzEstimate {
    Norm sup_ratio = Norm::zero();
    std::uint64_t points = 0;
    std::uint64_t pairs = 0;
    bool exhaustive = false;
    bool determinate = true;
    std::string worst;  // first pair attaining the sup, empty when none
    std::vector<std::string> notes;

    // The estimate certifies a claim only when every ratio was decidable.
    bool certifies(const Norm& claimed) const { return determinate && !(claimed < sup_ratio); }

    std::string str(std::int64_t p) const;
};

LipschitzEstimate estimate_lipschitz(const Evaluator& f, const WindowSample& sample);

// Sample the extension over a valuation window and rank it against its own
// claim.
LipschitzEstimate estimate_extension(const ExtendedFunction& ext, std::int64_t order_lo,
                                     std::int64_t order_hi, const SampleConfig& cfg,
                                     std::int32_t precision);

// Retraction oracle: an extension with constant L must stay within
// L * d(x, X) of the value at the nearest domain point.  Sample points whose
// nearest point is not attained (the center of an unbounded fiber) are
// noted and skipped.
CheckReport check_retraction_bound(const ExtendedFunction& ext, const PointSet& domain,
                                   const WindowSample& sample, std::int32_t precision);

// Independent extension oracle: the value of f at the nearest point of X.
// With the deterministic tie-breaking of PointSet::nearest_point this is
// 1-Lipschitz whenever f is, so it certifies that an instance admits a
// unit-constant extension at all without borrowing any construction.
// Constituents must be closed (order-bounded fibers) for the nearest point
// to exist everywhere.
Evaluator nearest_point_oracle(const PointSet& X, Evaluator f);

// The order identities of one rule, bundled: measured difference orders
// against the derivative formula, image membership and depth bookkeeping,
// image orders, and the chain rule.  Deterministic for a fixed config.
struct VerificationReport {
    CheckReport derivative_orders;
    CheckReport image_depths;
    CheckReport image_orders;
    CheckReport chain_rule;

    bool pass() const {
        return derivative_orders.pass && image_depths.pass && image_orders.pass &&
               chain_rule.pass;
    }
    std::string str() const;
};

VerificationReport verify_identities(const PreparedFunction& g, std::int64_t window_lo,
                                     std::int64_t window_hi, const SampleConfig& cfg);

}  // namespace padlex
