#pragma once

#include <padlex/prepared.hpp>

#include <memory>
#include <optional>
#include <utility>
#include <vector>

namespace padlex {

// Evaluation tree for piecewise rules assembled by the extension
// constructions.  Nodes are immutable and shared; every node kind is total
// (defined on all of Q_p), so the tree evaluates any point.
class PiecewiseFunction {
public:
    enum class Kind { Constant, CenterRule, Phi, BallPatch, Glue, Scale };

    struct Node {
        Kind kind;
        std::string tag;  // which construction produced this node

        std::optional<PadicScalar> value;       // Constant; BallPatch off-value
        std::optional<PreparedFunction> rule;   // CenterRule, BallPatch
        std::optional<Ball> patch;              // BallPatch
        std::optional<CellFiber> phi_domain;    // Phi
        std::optional<PointSet> near_set;       // Glue: X1
        std::optional<PointSet> far_set;        // Glue: X2
        std::optional<PadicScalar> factor;      // Scale
        std::shared_ptr<const Node> left;       // Phi/Scale child; Glue near branch
        std::shared_ptr<const Node> right;      // Glue far branch
    };

    // the value v everywhere
    static PiecewiseFunction constant(PadicScalar v, std::string tag);
    // g on its source fiber, c' off it
    static PiecewiseFunction center_rule(PreparedFunction g, std::string tag);
    // inner evaluated at the coset-aligned rescaling of x
    static PiecewiseFunction composed_with_phi(CellFiber S, PiecewiseFunction inner,
                                               std::string tag);
    // g on one ball, a fixed value off it
    static PiecewiseFunction ball_patch(Ball B, PreparedFunction g, PadicScalar off_value,
                                        std::string tag);
    // near on {x : d(x, X1) <= d(x, X2)}, far elsewhere (ties go near)
    static PiecewiseFunction glued(PointSet X1, PointSet X2, PiecewiseFunction near,
                                   PiecewiseFunction far, std::string tag);
    // child values multiplied by an exact p-power factor
    static PiecewiseFunction scaled(PadicScalar factor, PiecewiseFunction inner, std::string tag);

    PadicScalar eval(const PadicScalar& x, std::int32_t precision) const;

    std::int64_t prime() const;

    const Node& node() const { return *root_; }
    const std::string& tag() const { return root_->tag; }
    std::string str() const;

private:
    explicit PiecewiseFunction(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
    std::shared_ptr<const Node> root_;
};

// A total function certified by construction: the rule tree, the claimed
// Lipschitz constant (an exact p-power), and the construction that made it.
struct ExtendedFunction {
    PiecewiseFunction pieces;
    Norm claimed_lipschitz;
    std::string provenance;

    PadicScalar eval(const PadicScalar& x, std::int32_t precision) const {
        return pieces.eval(x, precision);
    }
};

// One parametrized instance: the parameter tuple y it came from plus its
// fiber data.  Extension constructions act on members independently.
struct FamilyMember {
    std::vector<Rat> y;
    PreparedFunction g;
};

struct Family {
    std::vector<FamilyMember> members;
};

// Rescaling of x toward the fiber's coset: multiplies x - c by the lifted
// unit that corrects the angular class, and fixes the center.  Identity on
// the coset, order preserving, 1-Lipschitz.
PadicScalar phi_rescale(const CellFiber& S, const PadicScalar& x);

// f on S, the target center off S.  Requires the rule to be 1-Lipschitz on
// its fiber; claims p^{m'} where m' is the image depth.
ExtendedFunction extend_by_center(const PreparedFunction& g);

// The center extension composed with phi_rescale; claims p^{m' - m}.
ExtendedFunction extend_with_phi(const PreparedFunction& g);

// The constant-preserving unit extension.  Dispatches on a/b: for a/b = 1
// the phi composition already has matching depths; otherwise the fiber is
// split at the exact threshold where image orders catch up with source
// orders, the tail of at most finitely many balls is patched with one-ball
// constant extensions, and the pieces are glued.  Claims 1.
ExtendedFunction extend_isometric(const PreparedFunction& g,
                                  std::optional<std::int64_t> window_lo = std::nullopt,
                                  std::optional<std::int64_t> window_hi = std::nullopt,
                                  std::int32_t precision = 32);

// Left fold of the two-set glue: each step keeps the earlier parts on the
// half nearer their domains.  Parts must agree where domains meet; the
// result claims the maximum of the parts' constants.
ExtendedFunction glue(const std::vector<std::pair<PointSet, ExtendedFunction>>& parts);

// Exact threshold data for the isometric split, exposed for reports.
struct IsometricBounds {
    Rat validity;   // orders beyond this bound cannot be 1-Lipschitz
    Rat threshold;  // orders past this have image order >= source order
    bool upper;     // true when the bounds cap orders from above (a/b < 1)
};
IsometricBounds isometric_bounds(const PreparedFunction& g);

// Outputs multiplied by p^k so that a p^{-k}-Lipschitz family becomes
// 1-Lipschitz.  lambda must be an exact power of p.
Family rescale_to_unit(const Family& f, const Rat& lambda);
PreparedFunction rescale_outputs(const PreparedFunction& g, std::int64_t k);

// Undo the rescaling on a finished extension: values are multiplied by
// p^{-k} and the claimed constant picks up the factor lambda.
ExtendedFunction unscale(const ExtendedFunction& ext, std::int64_t p, const Rat& lambda);

}  // namespace padlex
