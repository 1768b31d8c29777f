#ifndef PADLEX_GEOMETRY_HPP
#define PADLEX_GEOMETRY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "padlex/errors.hpp"
#include "padlex/scalar.hpp"
#include "padlex/valuation.hpp"

namespace padlex {

// The set {x : ord(x - center) = l, ac_m(x - center) = klass}.  Equivalently
// the closed ball of radius p^-(l+m) around its canonical point, which makes
// exterior distances a single norm computation.
class Ball {
public:
    Ball(std::int64_t l, PadicScalar center, AngularClass klass)
        : l_(l), center_(std::move(center)), klass_(std::move(klass)) {
        if (!center_.is_exact()) throw std::invalid_argument("Ball: center must be exact");
        if (klass_.is_zero()) throw std::invalid_argument("Ball: angular class must be nonzero");
        if (center_.prime() != klass_.prime()) throw std::invalid_argument("Ball: mixed primes");
    }

    std::int64_t order() const { return l_; }
    const PadicScalar& center() const { return center_; }
    const AngularClass& klass() const { return klass_; }
    std::int32_t depth() const { return klass_.depth(); }
    std::int64_t prime() const { return center_.prime(); }

    Norm diameter() const { return Norm::p_power(-(l_ + depth())); }

    PadicScalar canonical_point() const {
        return center_ + lift_ac(klass_) * p_power_scalar(prime(), l_);
    }

    bool contains(const PadicScalar& x) const;

    // 0 for members, the exact exterior norm otherwise.
    Norm distance_to(const PadicScalar& x) const;

    friend bool operator==(const Ball& a, const Ball& b) {
        return a.l_ == b.l_ && a.center_ == b.center_ && a.klass_ == b.klass_;
    }
    friend bool operator!=(const Ball& a, const Ball& b) { return !(a == b); }

    std::string str() const;

    // p^k as an exact scalar.
    static PadicScalar p_power_scalar(std::int64_t p, std::int64_t k) {
        if (k >= 0)
            return PadicScalar::from_int(p, pow_zi(Zint(p), static_cast<std::uint64_t>(k)));
        return PadicScalar::one(p) / PadicScalar::from_int(p, pow_zi(Zint(p), static_cast<std::uint64_t>(-k)));
    }

private:
    std::int64_t l_;
    PadicScalar center_;
    AngularClass klass_;
};

// How a point sits relative to a fiber: its exact distance, whether it is a
// member, and the order of a nearest ball when one exists.  `at_center` marks
// the one case with no nearest ball: x = center against a fiber with balls of
// arbitrarily high order, where the infimum 0 is not attained.
struct Proximity {
    Norm dist = Norm::zero();
    bool member = false;
    bool at_center = false;
    std::optional<std::int64_t> ball_l;
};

// One fiber of a cell: center plus a coset condition on x - center, with
// optional inclusive bounds on the admissible orders.  A zero coset makes it
// the singleton {center}.
class CellFiber {
public:
    CellFiber(PadicScalar center, CosetSpec coset,
              std::optional<std::int64_t> l_min, std::optional<std::int64_t> l_max);

    const PadicScalar& center() const { return center_; }
    const CosetSpec& coset() const { return coset_; }
    bool is_zero_cell() const { return coset_.is_zero(); }
    std::int64_t prime() const { return center_.prime(); }
    std::int32_t depth() const { return coset_.m; }

    // Normalized inclusive bounds (admissible orders themselves).
    std::optional<std::int64_t> l_min() const { return l_min_; }
    std::optional<std::int64_t> l_max() const { return l_max_; }

    bool admits_order(std::int64_t l) const {
        if (!coset_.admits_order(l)) return false;
        if (l_min_ && l < *l_min_) return false;
        if (l_max_ && l > *l_max_) return false;
        return true;
    }

    // Smallest admissible order >= l, if any.
    std::optional<std::int64_t> first_order_at_or_above(std::int64_t l) const;
    // Largest admissible order <= l, if any.
    std::optional<std::int64_t> last_order_at_or_below(std::int64_t l) const;

    bool contains(const PadicScalar& x) const;

    Ball ball_at(std::int64_t l) const;

    // All balls with order in [window_lo, window_hi], ascending.
    std::vector<Ball> balls(std::int64_t window_lo, std::int64_t window_hi) const;

    Proximity proximity(const PadicScalar& x) const;

    Norm distance_to(const PadicScalar& x) const { return proximity(x).dist; }

    // A member realizing the distance (x itself for members).  Fails for the
    // unattained-infimum case, which callers needing points must exclude.
    PadicScalar nearest_point(const PadicScalar& x) const;

    // Copy with tighter order bounds (intersection); throws if empty.
    CellFiber restricted(std::optional<std::int64_t> lo, std::optional<std::int64_t> hi) const;

    friend bool operator==(const CellFiber& a, const CellFiber& b) {
        return a.center_ == b.center_ && a.coset_ == b.coset_ && a.l_min_ == b.l_min_ &&
               a.l_max_ == b.l_max_;
    }
    friend bool operator!=(const CellFiber& a, const CellFiber& b) { return !(a == b); }

    std::string str() const;

private:
    PadicScalar center_;
    CosetSpec coset_;
    std::optional<std::int64_t> l_min_, l_max_;
};

// Finite union of points, balls, and cell fibers; the domain representation
// used by gluing and the retraction oracle.
class PointSet {
public:
    using Constituent = std::variant<PadicScalar, Ball, CellFiber>;

    PointSet() = default;
    explicit PointSet(Constituent c) { add(std::move(c)); }

    void add(Constituent c);

    bool empty() const { return items_.empty(); }
    std::size_t size() const { return items_.size(); }
    const Constituent& at(std::size_t i) const { return items_.at(i); }
    const std::vector<Constituent>& items() const { return items_; }

    std::int64_t prime() const;

    bool contains(const PadicScalar& x) const;

    Norm distance_to(const PadicScalar& x) const;

    // Nearest member with deterministic tie-breaking: members return
    // themselves; otherwise the first constituent (in stored order) at
    // minimal distance supplies its canonical nearest point.
    PadicScalar nearest_point(const PadicScalar& x) const;

    friend bool operator==(const PointSet& a, const PointSet& b);
    friend bool operator!=(const PointSet& a, const PointSet& b) { return !(a == b); }

    std::string str() const;

private:
    std::vector<Constituent> items_;
};

inline Norm distance_to_ball(const PadicScalar& x, const Ball& B) { return B.distance_to(x); }
inline Norm distance_to_set(const PadicScalar& x, const PointSet& A) { return A.distance_to(x); }

} // namespace padlex

#endif
