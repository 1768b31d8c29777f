#include "padlex/geometry.hpp"

#include <algorithm>

namespace padlex {

bool Ball::contains(const PadicScalar& x) const {
    if (x.prime() != prime()) throw std::invalid_argument("Ball::contains: mixed primes");
    PadicScalar d = x - center_;
    if (d.is_exact_zero()) return false;
    if (d.is_indeterminate_zero()) {
        // ord(d) >= A; beyond l the order can no longer equal l.
        if (d.abs_precision().value() > l_) return false;
        throw InsufficientPrecision("membership test below working precision");
    }
    if (d.ord().value() != l_) return false;
    return d.ac(depth()) == klass_;
}

Norm Ball::distance_to(const PadicScalar& x) const {
    if (x.prime() != prime()) throw std::invalid_argument("Ball::distance_to: mixed primes");
    PadicScalar t = x - canonical_point();
    std::int64_t radius_ord = l_ + depth();
    if (t.is_exact_zero()) return Norm::zero();
    if (t.is_indeterminate_zero()) {
        if (t.abs_precision().value() >= radius_ord) return Norm::zero();
        throw InsufficientPrecision("distance test below working precision");
    }
    std::int64_t o = t.ord().value();
    return o >= radius_ord ? Norm::zero() : Norm::p_power(-o);
}

std::string Ball::str() const {
    return "B{l=" + std::to_string(l_) + ", c=" + center_.str() + ", " + klass_.str() + "}";
}

CellFiber::CellFiber(PadicScalar center, CosetSpec coset,
                     std::optional<std::int64_t> l_min, std::optional<std::int64_t> l_max)
    : center_(std::move(center)), coset_(std::move(coset)), l_min_(l_min), l_max_(l_max) {
    if (!center_.is_exact()) throw std::invalid_argument("CellFiber: center must be exact");
    if (center_.prime() != coset_.prime()) throw std::invalid_argument("CellFiber: mixed primes");
    if (is_zero_cell()) {
        if (l_min_ || l_max_)
            throw std::invalid_argument("CellFiber: a point fiber takes no order bounds");
        return;
    }
    // Normalize the bounds to admissible orders so emptiness is visible.
    std::int64_t xo = coset_.xi_ord();
    std::int64_t n = coset_.n;
    if (l_min_) *l_min_ = xo + n * ceil_div64(*l_min_ - xo, n);
    if (l_max_) *l_max_ = xo + n * floor_div64(*l_max_ - xo, n);
    if (l_min_ && l_max_ && *l_min_ > *l_max_)
        throw std::invalid_argument("CellFiber: no admissible order between the bounds");
}

std::optional<std::int64_t> CellFiber::first_order_at_or_above(std::int64_t l) const {
    std::int64_t xo = coset_.xi_ord();
    std::int64_t n = coset_.n;
    std::int64_t cand = xo + n * ceil_div64(l - xo, n);
    if (l_min_ && cand < *l_min_) cand = *l_min_;
    if (l_max_ && cand > *l_max_) return std::nullopt;
    return cand;
}

std::optional<std::int64_t> CellFiber::last_order_at_or_below(std::int64_t l) const {
    std::int64_t xo = coset_.xi_ord();
    std::int64_t n = coset_.n;
    std::int64_t cand = xo + n * floor_div64(l - xo, n);
    if (l_max_ && cand > *l_max_) cand = *l_max_;
    if (l_min_ && cand < *l_min_) return std::nullopt;
    return cand;
}

bool CellFiber::contains(const PadicScalar& x) const {
    if (x.prime() != prime()) throw std::invalid_argument("CellFiber::contains: mixed primes");
    if (is_zero_cell()) return x.definitely_equal(center_);
    PadicScalar d = x - center_;
    if (d.is_exact_zero()) return false;
    if (d.is_indeterminate_zero()) {
        if (l_max_ && d.abs_precision().value() > *l_max_) return false;
        throw InsufficientPrecision("membership test below working precision");
    }
    std::int64_t l = d.ord().value();
    if (!admits_order(l)) return false;
    return d.ac(depth()) == coset_.xi_class();
}

Ball CellFiber::ball_at(std::int64_t l) const {
    if (is_zero_cell()) throw ZeroCellHasNoBalls("point fiber has no balls");
    if (!admits_order(l))
        throw std::invalid_argument("ball_at: order " + std::to_string(l) + " is not admissible");
    return Ball(l, center_, coset_.xi_class());
}

std::vector<Ball> CellFiber::balls(std::int64_t window_lo, std::int64_t window_hi) const {
    if (is_zero_cell()) throw ZeroCellHasNoBalls("point fiber has no balls");
    std::vector<Ball> out;
    std::int64_t lo = window_lo;
    if (l_min_) lo = std::max(lo, *l_min_);
    std::int64_t hi = window_hi;
    if (l_max_) hi = std::min(hi, *l_max_);
    auto first = first_order_at_or_above(lo);
    if (!first) return out;
    for (std::int64_t l = *first; l <= hi; l += coset_.n) out.push_back(ball_at(l));
    return out;
}

Proximity CellFiber::proximity(const PadicScalar& x) const {
    if (x.prime() != prime()) throw std::invalid_argument("CellFiber::proximity: mixed primes");
    Proximity r;
    if (is_zero_cell()) {
        PadicScalar d = x - center_;
        if (d.is_exact_zero()) {
            r.member = true;
            return r;
        }
        if (d.is_indeterminate_zero())
            throw InsufficientPrecision("distance test below working precision");
        r.dist = d.norm();
        return r;
    }

    PadicScalar d = x - center_;
    bool near_center = d.is_exact_zero();
    if (d.is_indeterminate_zero()) {
        // Beyond every admissible order the fiber looks the same from x as
        // from the center itself.
        if (l_max_ && d.abs_precision().value() > *l_max_)
            near_center = true;
        else
            throw InsufficientPrecision("distance test below working precision");
    }
    if (near_center) {
        if (!l_max_) {
            r.at_center = true; // infimum 0, not attained
            return r;
        }
        r.dist = Norm::p_power(-*l_max_);
        r.ball_l = *l_max_;
        return r;
    }

    std::int64_t d0 = d.ord().value();
    bool have = false;
    Norm best = Norm::zero();
    std::int64_t best_l = 0;
    auto consider = [&](Norm dist, std::int64_t l) {
        if (!have || dist < best || (dist == best && l < best_l)) {
            have = true;
            best = dist;
            best_l = l;
        }
    };

    if (admits_order(d0)) {
        std::int32_t t = agreement_depth(d.ac(depth()), coset_.xi_class());
        if (t == depth()) {
            r.member = true;
            r.ball_l = d0;
            return r;
        }
        consider(Norm::p_power(-(d0 + t)), d0);
    }
    if (auto above = first_order_at_or_above(d0 + 1)) consider(Norm::p_power(-d0), *above);
    if (auto below = last_order_at_or_below(d0 - 1)) consider(Norm::p_power(-*below), *below);

    if (!have)
        throw EmptyDomain("cell fiber admits no order at all"); // unreachable for valid fibers
    r.dist = best;
    r.ball_l = best_l;
    return r;
}

PadicScalar CellFiber::nearest_point(const PadicScalar& x) const {
    Proximity pr = proximity(x);
    if (pr.member) return x;
    if (pr.at_center)
        throw std::invalid_argument(
            "nearest point does not exist: x is the center of a fiber with unbounded orders");
    if (!pr.ball_l) return center_; // zero cell
    return ball_at(*pr.ball_l).canonical_point();
}

CellFiber CellFiber::restricted(std::optional<std::int64_t> lo, std::optional<std::int64_t> hi) const {
    std::optional<std::int64_t> nlo = l_min_, nhi = l_max_;
    if (lo) nlo = nlo ? std::max(*nlo, *lo) : *lo;
    if (hi) nhi = nhi ? std::min(*nhi, *hi) : *hi;
    return CellFiber(center_, coset_, nlo, nhi);
}

std::string CellFiber::str() const {
    if (is_zero_cell()) return "{" + center_.str() + "}";
    std::string s = "Fiber{c=" + center_.str() + ", xi=" + coset_.xi.str() +
                    ", m=" + std::to_string(coset_.m) + ", n=" + std::to_string(coset_.n);
    if (l_min_) s += ", l>=" + std::to_string(*l_min_);
    if (l_max_) s += ", l<=" + std::to_string(*l_max_);
    return s + "}";
}

void PointSet::add(Constituent c) {
    if (!items_.empty()) {
        std::int64_t p = prime();
        std::int64_t q = std::visit([](const auto& v) { return v.prime(); }, c);
        if (p != q) throw std::invalid_argument("PointSet: mixed primes");
    }
    if (auto* pt = std::get_if<PadicScalar>(&c))
        if (!pt->is_exact()) throw std::invalid_argument("PointSet: points must be exact");
    items_.push_back(std::move(c));
}

std::int64_t PointSet::prime() const {
    if (items_.empty()) throw EmptyDomain("empty point set has no prime");
    return std::visit([](const auto& v) { return v.prime(); }, items_.front());
}

bool PointSet::contains(const PadicScalar& x) const {
    for (const auto& c : items_) {
        bool in = std::visit(
            [&](const auto& v) -> bool {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, PadicScalar>)
                    return x.definitely_equal(v);
                else
                    return v.contains(x);
            },
            c);
        if (in) return true;
    }
    return false;
}

namespace {

Norm point_distance(const PadicScalar& x, const PadicScalar& v) {
    PadicScalar d = x - v;
    if (d.is_exact_zero()) return Norm::zero();
    if (d.is_indeterminate_zero())
        throw InsufficientPrecision("distance test below working precision");
    return d.norm();
}

} // namespace

Norm PointSet::distance_to(const PadicScalar& x) const {
    if (items_.empty()) throw EmptyDomain("distance to an empty point set");
    bool have = false;
    Norm best = Norm::zero();
    for (const auto& c : items_) {
        Norm d = std::visit(
            [&](const auto& v) -> Norm {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, PadicScalar>)
                    return point_distance(x, v);
                else
                    return v.distance_to(x);
            },
            c);
        if (!have || d < best) {
            have = true;
            best = d;
        }
        if (best.is_zero()) break;
    }
    return best;
}

PadicScalar PointSet::nearest_point(const PadicScalar& x) const {
    if (items_.empty()) throw EmptyDomain("nearest point of an empty point set");
    if (contains(x)) return x;
    bool have = false;
    Norm best = Norm::zero();
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < items_.size(); ++i) {
        Norm d = std::visit(
            [&](const auto& v) -> Norm {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, PadicScalar>)
                    return point_distance(x, v);
                else
                    return v.distance_to(x);
            },
            items_[i]);
        if (!have || d < best) {
            have = true;
            best = d;
            best_i = i;
        }
    }
    return std::visit(
        [&](const auto& v) -> PadicScalar {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, PadicScalar>)
                return v;
            else if constexpr (std::is_same_v<T, Ball>)
                return v.canonical_point();
            else
                return v.nearest_point(x);
        },
        items_[best_i]);
}

bool operator==(const PointSet& a, const PointSet& b) {
    return a.items_ == b.items_;
}

std::string PointSet::str() const {
    std::string s = "{";
    for (std::size_t i = 0; i < items_.size(); ++i) {
        if (i) s += ", ";
        s += std::visit([](const auto& v) { return v.str(); }, items_[i]);
    }
    return s + "}";
}

} // namespace padlex
