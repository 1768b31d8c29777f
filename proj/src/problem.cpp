#include <padlex/problem.hpp>

#include "json.hpp"

#include <sstream>
#include <utility>

namespace padlex {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& msg) { throw SpecParseError(msg); }

bool small_prime(std::int64_t p) {
    if (p < 2) return false;
    for (std::int64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

const json& field(const json& j, const char* key, const std::string& ctx) {
    if (!j.is_object()) bad(ctx + " must be an object");
    auto it = j.find(key);
    if (it == j.end()) bad(ctx + " is missing \"" + key + "\"");
    return *it;
}

std::int64_t int_field(const json& j, const char* key, const std::string& ctx) {
    const json& v = field(j, key, ctx);
    if (!v.is_number_integer()) bad(ctx + ": \"" + key + "\" must be an integer");
    return v.get<std::int64_t>();
}

std::string str_field(const json& j, const char* key, const std::string& ctx) {
    const json& v = field(j, key, ctx);
    if (!v.is_string()) bad(ctx + ": \"" + key + "\" must be a string");
    return v.get<std::string>();
}

Rat rat_from_json(std::int64_t p, const json& j, const std::string& ctx) {
    if (!j.is_string()) bad(ctx + " must be a rational string");
    try {
        return PadicScalar::parse(p, j.get<std::string>()).exact_rational();
    } catch (const std::exception& err) {
        bad(ctx + ": " + err.what());
    }
}

json scalar_to_json(const PadicScalar& x) {
    if (x.is_exact()) return json(rat_str(x.exact_rational()));
    if (x.is_indeterminate_zero()) return json{{"vanishes_to", x.abs_precision().value()}};
    std::int32_t d = x.rel_precision_or(0);
    return json{{"digits", d}, {"ord", x.ord().value()}, {"unit", x.unit_mod(d).str()}};
}

PadicScalar scalar_from_json(std::int64_t p, const json& j, const std::string& ctx) {
    try {
        if (j.is_string()) return PadicScalar::parse(p, j.get<std::string>());
        if (j.is_object() && j.contains("vanishes_to"))
            return PadicScalar::approx_zero(p, int_field(j, "vanishes_to", ctx));
        if (j.is_object())
            return PadicScalar::approx(p, int_field(j, "ord", ctx),
                                       Zint::from_string(str_field(j, "unit", ctx)),
                                       static_cast<std::int32_t>(int_field(j, "digits", ctx)));
    } catch (const SpecParseError&) {
        throw;
    } catch (const std::exception& err) {
        bad(ctx + ": " + err.what());
    }
    bad(ctx + " must be a rational string or an approximate-value object");
}

json fiber_to_json(const CellFiber& S) {
    json j;
    j["center"] = scalar_to_json(S.center());
    j["xi"] = scalar_to_json(S.coset().xi);
    j["m"] = S.coset().m;
    j["n"] = S.coset().n;
    j["l_min"] = S.l_min() ? json(*S.l_min()) : json(nullptr);
    j["l_max"] = S.l_max() ? json(*S.l_max()) : json(nullptr);
    return j;
}

std::optional<std::int64_t> opt_int_field(const json& j, const char* key, const std::string& ctx) {
    const json& v = field(j, key, ctx);
    if (v.is_null()) return std::nullopt;
    if (!v.is_number_integer()) bad(ctx + ": \"" + key + "\" must be an integer or null");
    return v.get<std::int64_t>();
}

CellFiber fiber_from_json(std::int64_t p, const json& j, const std::string& ctx) {
    PadicScalar center = scalar_from_json(p, field(j, "center", ctx), ctx + ".center");
    PadicScalar xi = scalar_from_json(p, field(j, "xi", ctx), ctx + ".xi");
    std::int64_t m = int_field(j, "m", ctx);
    std::int64_t n = int_field(j, "n", ctx);
    auto lo = opt_int_field(j, "l_min", ctx);
    auto hi = opt_int_field(j, "l_max", ctx);
    try {
        return CellFiber(center, CosetSpec(xi, static_cast<std::int32_t>(m), n), lo, hi);
    } catch (const std::invalid_argument& err) {
        bad(ctx + ": " + err.what());
    }
}

json coset_to_json(const CosetSpec& t) {
    json j;
    j["xi"] = scalar_to_json(t.xi);
    j["m"] = t.m;
    j["n"] = t.n;
    return j;
}

CosetSpec coset_from_json(std::int64_t p, const json& j, const std::string& ctx) {
    PadicScalar xi = scalar_from_json(p, field(j, "xi", ctx), ctx + ".xi");
    std::int64_t m = int_field(j, "m", ctx);
    std::int64_t n = int_field(j, "n", ctx);
    try {
        return CosetSpec(xi, static_cast<std::int32_t>(m), n);
    } catch (const std::invalid_argument& err) {
        bad(ctx + ": " + err.what());
    }
}

json rule_to_json(const PreparedFunction& g) {
    json j;
    j["a"] = g.a();
    j["b"] = g.b();
    j["e"] = scalar_to_json(g.e());
    j["c"] = scalar_to_json(g.c());
    j["c_prime"] = scalar_to_json(g.c_prime());
    j["source"] = fiber_to_json(g.source());
    j["target"] = coset_to_json(g.target());
    return j;
}

PreparedFunction rule_from_json(std::int64_t p, const json& j, const std::string& ctx) {
    std::int64_t a = int_field(j, "a", ctx);
    std::int64_t b = int_field(j, "b", ctx);
    PadicScalar e = scalar_from_json(p, field(j, "e", ctx), ctx + ".e");
    PadicScalar c = scalar_from_json(p, field(j, "c", ctx), ctx + ".c");
    PadicScalar cp = scalar_from_json(p, field(j, "c_prime", ctx), ctx + ".c_prime");
    CellFiber source = fiber_from_json(p, field(j, "source", ctx), ctx + ".source");
    CosetSpec target = coset_from_json(p, field(j, "target", ctx), ctx + ".target");
    try {
        return PreparedFunction(a, b, e, c, cp, source, target);
    } catch (const std::invalid_argument& err) {
        bad(ctx + ": " + err.what());
    } catch (const Error& err) {
        bad(ctx + ": " + err.what());
    }
}

json ball_to_json(const Ball& B) {
    json j;
    j["l"] = B.order();
    j["center"] = scalar_to_json(B.center());
    j["m"] = B.depth();
    j["residue"] = B.klass().residue().str();
    return j;
}

Ball ball_from_json(std::int64_t p, const json& j, const std::string& ctx) {
    std::int64_t l = int_field(j, "l", ctx);
    PadicScalar center = scalar_from_json(p, field(j, "center", ctx), ctx + ".center");
    std::int64_t m = int_field(j, "m", ctx);
    try {
        AngularClass k(p, static_cast<std::int32_t>(m),
                       Zint::from_string(str_field(j, "residue", ctx)));
        return Ball(l, center, k);
    } catch (const std::invalid_argument& err) {
        bad(ctx + ": " + err.what());
    }
}

json point_set_to_json(const PointSet& X) {
    json arr = json::array();
    for (const auto& item : X.items()) {
        json j;
        if (const auto* x = std::get_if<PadicScalar>(&item)) {
            j["kind"] = "point";
            j["x"] = scalar_to_json(*x);
        } else if (const auto* b = std::get_if<Ball>(&item)) {
            j["kind"] = "ball";
            j["ball"] = ball_to_json(*b);
        } else {
            j["kind"] = "fiber";
            j["fiber"] = fiber_to_json(std::get<CellFiber>(item));
        }
        arr.push_back(std::move(j));
    }
    return arr;
}

PointSet point_set_from_json(std::int64_t p, const json& j, const std::string& ctx) {
    if (!j.is_array()) bad(ctx + " must be an array");
    PointSet X;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const json& item = j[i];
        std::string here = ctx + "[" + std::to_string(i) + "]";
        std::string kind = str_field(item, "kind", here);
        if (kind == "point")
            X.add(scalar_from_json(p, field(item, "x", here), here + ".x"));
        else if (kind == "ball")
            X.add(ball_from_json(p, field(item, "ball", here), here + ".ball"));
        else if (kind == "fiber")
            X.add(fiber_from_json(p, field(item, "fiber", here), here + ".fiber"));
        else
            bad(here + ": unknown constituent kind \"" + kind + "\"");
    }
    return X;
}

const char* kind_name(PiecewiseFunction::Kind k) {
    switch (k) {
        case PiecewiseFunction::Kind::Constant: return "constant";
        case PiecewiseFunction::Kind::CenterRule: return "center-rule";
        case PiecewiseFunction::Kind::Phi: return "phi";
        case PiecewiseFunction::Kind::BallPatch: return "ball-patch";
        case PiecewiseFunction::Kind::Glue: return "glue";
        case PiecewiseFunction::Kind::Scale: return "scale";
    }
    return "?";
}

json node_to_json(const PiecewiseFunction::Node& n) {
    json j;
    j["kind"] = kind_name(n.kind);
    j["tag"] = n.tag;
    switch (n.kind) {
        case PiecewiseFunction::Kind::Constant:
            j["value"] = scalar_to_json(*n.value);
            break;
        case PiecewiseFunction::Kind::CenterRule:
            j["rule"] = rule_to_json(*n.rule);
            break;
        case PiecewiseFunction::Kind::Phi:
            j["domain"] = fiber_to_json(*n.phi_domain);
            j["child"] = node_to_json(*n.left);
            break;
        case PiecewiseFunction::Kind::BallPatch:
            j["ball"] = ball_to_json(*n.patch);
            j["rule"] = rule_to_json(*n.rule);
            j["off_value"] = scalar_to_json(*n.value);
            break;
        case PiecewiseFunction::Kind::Glue:
            j["near_set"] = point_set_to_json(*n.near_set);
            j["far_set"] = point_set_to_json(*n.far_set);
            j["near"] = node_to_json(*n.left);
            j["far"] = node_to_json(*n.right);
            break;
        case PiecewiseFunction::Kind::Scale:
            j["factor"] = scalar_to_json(*n.factor);
            j["child"] = node_to_json(*n.left);
            break;
    }
    return j;
}

PiecewiseFunction node_from_json(std::int64_t p, const json& j, const std::string& ctx) {
    std::string kind = str_field(j, "kind", ctx);
    std::string tag = str_field(j, "tag", ctx);
    if (kind == "constant")
        return PiecewiseFunction::constant(scalar_from_json(p, field(j, "value", ctx), ctx), tag);
    if (kind == "center-rule")
        return PiecewiseFunction::center_rule(rule_from_json(p, field(j, "rule", ctx), ctx), tag);
    if (kind == "phi")
        return PiecewiseFunction::composed_with_phi(
            fiber_from_json(p, field(j, "domain", ctx), ctx + ".domain"),
            node_from_json(p, field(j, "child", ctx), ctx + ".child"), tag);
    if (kind == "ball-patch")
        return PiecewiseFunction::ball_patch(
            ball_from_json(p, field(j, "ball", ctx), ctx + ".ball"),
            rule_from_json(p, field(j, "rule", ctx), ctx + ".rule"),
            scalar_from_json(p, field(j, "off_value", ctx), ctx + ".off_value"), tag);
    if (kind == "glue")
        return PiecewiseFunction::glued(
            point_set_from_json(p, field(j, "near_set", ctx), ctx + ".near_set"),
            point_set_from_json(p, field(j, "far_set", ctx), ctx + ".far_set"),
            node_from_json(p, field(j, "near", ctx), ctx + ".near"),
            node_from_json(p, field(j, "far", ctx), ctx + ".far"), tag);
    if (kind == "scale")
        return PiecewiseFunction::scaled(
            scalar_from_json(p, field(j, "factor", ctx), ctx + ".factor"),
            node_from_json(p, field(j, "child", ctx), ctx + ".child"), tag);
    bad(ctx + ": unknown piece kind \"" + kind + "\"");
}

Norm norm_from_rat(std::int64_t p, const Rat& r, const std::string& ctx) {
    if (r.is_zero()) return Norm::zero();
    if (r < 0) bad(ctx + " must be nonnegative");
    auto power_of = [p](Zint x) -> std::optional<std::int64_t> {
        std::int64_t e = 0;
        Zint q(p);
        while ((x % q).is_zero()) {
            x = x / q;
            ++e;
        }
        if (x == Zint(1)) return e;
        return std::nullopt;
    };
    Zint num(numerator(r)), den(denominator(r));
    auto en = power_of(num), ed = power_of(den);
    if (!en || !ed) bad(ctx + " must be a power of " + std::to_string(p));
    return Norm::p_power(*en - *ed);
}

std::string norm_rat_str(const Norm& n, std::int64_t p) {
    return n.is_zero() ? "0" : rat_str(n.to_rational(p));
}

json task_to_json(const TaskSpec& t) {
    json j;
    j["task"] = t.kind;
    if (!t.method.empty()) j["method"] = t.method;
    if (t.claimed) j["claimed"] = rat_str(*t.claimed);
    j["seed"] = t.cfg.seed;
    j["samples"] = t.cfg.samples;
    j["depth"] = t.cfg.depth;
    j["exhaustive_cap"] = t.cfg.exhaustive_cap;
    return j;
}

TaskSpec task_from_json(std::int64_t p, const json& j, const std::string& ctx) {
    TaskSpec t;
    t.kind = str_field(j, "task", ctx);
    bool known = t.kind == "check-jacobian" || t.kind == "verify-identities" ||
                 t.kind == "verify-lipschitz" || t.kind == "extend" || t.kind == "glue";
    if (!known) bad(ctx + ": unknown task \"" + t.kind + "\"");
    if (t.kind == "extend" || t.kind == "glue") {
        t.method = j.contains("method") ? str_field(j, "method", ctx) : "";
        if (t.method.empty()) {
            if (t.kind == "extend") bad(ctx + ": extend task needs a method");
            t.method = "isometric";
        }
        if (t.method != "center" && t.method != "phi" && t.method != "isometric")
            bad(ctx + ": unknown method \"" + t.method + "\"");
    } else if (j.contains("method")) {
        bad(ctx + ": \"" + t.kind + "\" does not take a method");
    }
    if (t.kind == "verify-lipschitz") {
        if (!j.contains("claimed")) bad(ctx + ": verify-lipschitz needs a claimed constant");
        t.claimed = rat_from_json(p, j["claimed"], ctx + ".claimed");
        if (!(*t.claimed > 0)) bad(ctx + ": claimed constant must be positive");
    } else if (j.contains("claimed")) {
        bad(ctx + ": only verify-lipschitz takes a claimed constant");
    }
    if (j.contains("seed")) {
        const json& s = j["seed"];
        if (!s.is_number_integer() || (!s.is_number_unsigned() && s.get<std::int64_t>() < 0))
            bad(ctx + ": \"seed\" must be a nonnegative integer");
        t.cfg.seed = s.get<std::uint64_t>();
    }
    if (j.contains("samples")) {
        std::int64_t v = int_field(j, "samples", ctx);
        if (v < 1) bad(ctx + ": \"samples\" must be positive");
        t.cfg.samples = static_cast<std::uint64_t>(v);
    }
    if (j.contains("depth")) {
        std::int64_t v = int_field(j, "depth", ctx);
        if (v < 1) bad(ctx + ": \"depth\" must be positive");
        t.cfg.depth = static_cast<std::int32_t>(v);
    }
    if (j.contains("exhaustive_cap")) {
        std::int64_t v = int_field(j, "exhaustive_cap", ctx);
        if (v < 1) bad(ctx + ": \"exhaustive_cap\" must be positive");
        t.cfg.exhaustive_cap = static_cast<std::uint64_t>(v);
    }
    return t;
}

std::string indent(const std::string& s, const char* pad) {
    std::string out;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line)) out += pad + line + "\n";
    return out;
}

// Smallest power of p at or above lam.
Rat p_power_at_or_above(std::int64_t p, const Rat& lam) {
    Rat pw(1);
    while (pw < lam) pw *= p;
    while (pw / p >= lam) pw /= p;
    return pw;
}

std::string task_label(const TaskSpec& t) {
    std::string name = t.kind;
    if (!t.method.empty()) name += ":" + t.method;
    return name;
}

ExtendedFunction build_extension(const ProblemSpec& spec, const TaskSpec& t, const Family& fam,
                                 std::size_t member) {
    const PreparedFunction& g = fam.members.at(member).g;
    if (t.method == "center") return extend_by_center(g);
    if (t.method == "phi") return extend_with_phi(g);
    return extend_isometric(g, spec.window_lo, spec.window_hi, spec.precision);
}

}  // namespace

ProblemSpec parse_problem(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& err) {
        bad(std::string("spec is not valid JSON: ") + err.what());
    }
    if (int_field(j, "schema", "spec") != 1) bad("spec: unsupported schema version");

    ProblemSpec spec;
    spec.p = int_field(j, "p", "spec");
    if (!small_prime(spec.p)) bad("spec: p = " + std::to_string(spec.p) + " is not prime");

    std::int64_t prec = int_field(j, "precision", "spec");
    spec.precision = static_cast<std::int32_t>(prec);

    const json& w = field(j, "window", "spec");
    if (!w.is_array() || w.size() != 2 || !w[0].is_number_integer() || !w[1].is_number_integer())
        bad("spec: \"window\" must be [lo, hi]");
    spec.window_lo = w[0].get<std::int64_t>();
    spec.window_hi = w[1].get<std::int64_t>();
    if (spec.window_lo > spec.window_hi) bad("spec: window is empty (lo > hi)");

    spec.lambda = j.contains("lambda") ? rat_from_json(spec.p, j["lambda"], "spec.lambda") : Rat(1);
    if (!(spec.lambda > 0)) bad("spec: lambda must be positive");

    const json& fam = field(j, "family", "spec");
    if (!fam.is_array() || fam.empty()) bad("spec: \"family\" must be a nonempty array");
    for (std::size_t i = 0; i < fam.size(); ++i) {
        std::string ctx = "family[" + std::to_string(i) + "]";
        const json& y = field(fam[i], "y", ctx);
        if (!y.is_array()) bad(ctx + ": \"y\" must be an array of rationals");
        std::vector<Rat> ys;
        for (std::size_t k = 0; k < y.size(); ++k)
            ys.push_back(rat_from_json(spec.p, y[k], ctx + ".y[" + std::to_string(k) + "]"));
        spec.family.members.push_back(
            {std::move(ys), rule_from_json(spec.p, field(fam[i], "rule", ctx), ctx + ".rule")});
    }

    std::int32_t need = 0;
    for (const auto& m : spec.family.members) {
        std::int32_t depth = m.g.source().depth();
        try {
            depth = std::max(depth, m.g.image_depth());
        } catch (const Error&) {
            // constant rules have no image depth; the source bound stands
        }
        need = std::max(need, depth + 4);
    }
    if (spec.precision < need)
        bad("spec: precision " + std::to_string(spec.precision) + " is below the required " +
            std::to_string(need));

    const json& tasks = field(j, "tasks", "spec");
    if (!tasks.is_array()) bad("spec: \"tasks\" must be an array");
    for (std::size_t i = 0; i < tasks.size(); ++i)
        spec.tasks.push_back(
            task_from_json(spec.p, tasks[i], "tasks[" + std::to_string(i) + "]"));
    return spec;
}

std::string problem_to_json(const ProblemSpec& spec) {
    json j;
    j["schema"] = 1;
    j["p"] = spec.p;
    j["precision"] = spec.precision;
    j["window"] = {spec.window_lo, spec.window_hi};
    j["lambda"] = rat_str(spec.lambda);
    json fam = json::array();
    for (const auto& m : spec.family.members) {
        json jm;
        json y = json::array();
        for (const auto& r : m.y) y.push_back(rat_str(r));
        jm["y"] = std::move(y);
        jm["rule"] = rule_to_json(m.g);
        fam.push_back(std::move(jm));
    }
    j["family"] = std::move(fam);
    json ts = json::array();
    for (const auto& t : spec.tasks) ts.push_back(task_to_json(t));
    j["tasks"] = std::move(ts);
    return j.dump(2) + "\n";
}

std::string extension_to_json(const ExtendedFunction& ext, std::int64_t p) {
    json j;
    j["schema"] = 1;
    j["p"] = p;
    j["claimed"] = norm_rat_str(ext.claimed_lipschitz, p);
    j["provenance"] = ext.provenance;
    j["pieces"] = node_to_json(ext.pieces.node());
    return j.dump(2) + "\n";
}

ExtendedFunction extension_from_json(const std::string& text, std::int64_t p) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& err) {
        bad(std::string("extension file is not valid JSON: ") + err.what());
    }
    if (int_field(j, "schema", "extension") != 1) bad("extension: unsupported schema version");
    if (int_field(j, "p", "extension") != p)
        bad("extension: stored prime " + std::to_string(int_field(j, "p", "extension")) +
            " does not match the requested " + std::to_string(p));
    Norm claimed =
        norm_from_rat(p, rat_from_json(p, field(j, "claimed", "extension"), "extension.claimed"),
                      "extension.claimed");
    std::string provenance = str_field(j, "provenance", "extension");
    PiecewiseFunction pieces =
        node_from_json(p, field(j, "pieces", "extension"), "extension.pieces");
    return ExtendedFunction{std::move(pieces), claimed, std::move(provenance)};
}

std::string RunReport::text() const {
    std::string out = "p=" + std::to_string(p) + (pass ? "  overall PASS" : "  overall FAIL") + "\n";
    for (const auto& n : notes) out += "note: " + n + "\n";
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const TaskOutcome& t = tasks[i];
        out += "[" + std::to_string(i + 1) + "] " + t.name + ": " + (t.pass ? "PASS" : "FAIL") +
               "\n";
        if (!t.report.empty()) out += indent(t.report, "    ");
        for (const auto& a : t.artifacts) out += "    wrote " + a.name + "\n";
    }
    return out;
}

std::string RunReport::json_doc() const {
    json j;
    j["schema"] = 1;
    j["p"] = p;
    j["pass"] = pass;
    j["notes"] = notes;
    json ts = json::array();
    for (const auto& t : tasks) {
        json jt;
        jt["name"] = t.name;
        jt["pass"] = t.pass;
        jt["report"] = t.report;
        json names = json::array();
        for (const auto& a : t.artifacts) names.push_back(a.name);
        jt["artifacts"] = std::move(names);
        ts.push_back(std::move(jt));
    }
    j["tasks"] = std::move(ts);
    return j.dump(2) + "\n";
}

RunReport run_problem(const ProblemSpec& spec) {
    RunReport rep;
    rep.p = spec.p;

    Rat lam_hat = p_power_at_or_above(spec.p, spec.lambda);
    if (lam_hat != spec.lambda)
        rep.notes.push_back("lambda " + rat_str(spec.lambda) +
                            " is not a power of p; constructions use " + rat_str(lam_hat));

    // Built on first use so a family the rescaling rejects still lets the
    // verification tasks run.
    std::optional<Family> scaled;
    auto working_family = [&]() -> const Family& {
        if (lam_hat == 1) return spec.family;
        if (!scaled) scaled = rescale_to_unit(spec.family, lam_hat);
        return *scaled;
    };

    for (std::size_t ti = 0; ti < spec.tasks.size(); ++ti) {
        const TaskSpec& t = spec.tasks[ti];
        TaskOutcome out;
        out.name = task_label(t);
        const std::size_t count = spec.family.members.size();

        if (t.kind == "check-jacobian") {
            CheckReport all;
            for (std::size_t i = 0; i < count; ++i) {
                const PreparedFunction& g = spec.family.members[i].g;
                if (g.source().is_zero_cell()) {
                    all.notes.push_back("member " + std::to_string(i) +
                                        ": point fiber, nothing to pair");
                    continue;
                }
                auto balls = g.source().balls(spec.window_lo, spec.window_hi);
                if (balls.empty()) {
                    all.notes.push_back("member " + std::to_string(i) +
                                        ": window misses the fiber");
                    continue;
                }
                for (const Ball& B : balls) {
                    CheckReport r = check_jacobian(g, B, t.cfg.samples, t.cfg.seed);
                    all.merge(r, "member " + std::to_string(i) + ", order " +
                                     std::to_string(B.order()) + ": ");
                }
            }
            out.pass = all.pass;
            out.report = all.str();
        } else if (t.kind == "verify-identities") {
            for (std::size_t i = 0; i < count; ++i) {
                VerificationReport r = verify_identities(spec.family.members[i].g, spec.window_lo,
                                                         spec.window_hi, t.cfg);
                if (!r.pass()) out.pass = false;
                out.report += "member " + std::to_string(i) + ":\n" + indent(r.str(), "  ");
            }
        } else if (t.kind == "verify-lipschitz") {
            for (std::size_t i = 0; i < count; ++i) {
                const PreparedFunction& g = spec.family.members[i].g;
                WindowSample ws = sample_fiber(g.source(), spec.window_lo, spec.window_hi, t.cfg);
                LipschitzEstimate est = estimate_lipschitz(
                    [&](const PadicScalar& x) { return g.eval(x, spec.precision); }, ws);
                bool ok = est.determinate && norm_leq_rat(est.sup_ratio, spec.p, *t.claimed);
                if (!ok) out.pass = false;
                out.report += "member " + std::to_string(i) + ": claimed " +
                              rat_str(*t.claimed) + " " + (ok ? "holds" : "fails") + "\n" +
                              indent(est.str(spec.p), "  ");
            }
        } else if (t.kind == "extend") {
            for (std::size_t i = 0; i < count; ++i) {
                try {
                    ExtendedFunction ext = build_extension(spec, t, working_family(), i);
                    if (lam_hat != 1) ext = unscale(ext, spec.p, lam_hat);
                    out.report += "member " + std::to_string(i) + ": claims " +
                                  ext.claimed_lipschitz.str(spec.p) + " (" + ext.provenance +
                                  ")\n";
                    out.artifacts.push_back(
                        {"task" + std::to_string(ti + 1) + "_member" + std::to_string(i) +
                             ".json",
                         extension_to_json(ext, spec.p)});
                } catch (const Error& err) {
                    out.pass = false;
                    out.report += "member " + std::to_string(i) + ": " + err.what() + "\n";
                }
            }
        } else {  // glue
            try {
                std::vector<std::pair<PointSet, ExtendedFunction>> parts;
                for (std::size_t i = 0; i < count; ++i)
                    parts.emplace_back(PointSet(spec.family.members[i].g.source()),
                                       build_extension(spec, t, working_family(), i));
                ExtendedFunction ext = glue(parts);
                if (lam_hat != 1) ext = unscale(ext, spec.p, lam_hat);
                out.report += "glued " + std::to_string(count) +
                              " member part(s) in spec order; claims " +
                              ext.claimed_lipschitz.str(spec.p) + "\n";
                out.artifacts.push_back({"task" + std::to_string(ti + 1) + "_glued.json",
                                         extension_to_json(ext, spec.p)});
            } catch (const Error& err) {
                out.pass = false;
                out.report += err.what() + std::string("\n");
            }
        }

        if (!out.pass) rep.pass = false;
        rep.tasks.push_back(std::move(out));
    }
    return rep;
}

ExtendedFunction build_task_extension(const ProblemSpec& spec, std::size_t task_index,
                                      std::size_t member_index) {
    if (task_index >= spec.tasks.size())
        throw std::invalid_argument("task index out of range");
    const TaskSpec& t = spec.tasks[task_index];
    if (t.kind != "extend" && t.kind != "glue")
        throw std::invalid_argument("task " + std::to_string(task_index + 1) +
                                    " (" + t.kind + ") builds no extension");
    if (t.kind == "extend" && member_index >= spec.family.members.size())
        throw std::invalid_argument("member index out of range");

    Rat lam_hat = p_power_at_or_above(spec.p, spec.lambda);
    const Family& fam = lam_hat == 1 ? spec.family : rescale_to_unit(spec.family, lam_hat);

    ExtendedFunction ext = [&] {
        if (t.kind == "extend") return build_extension(spec, t, fam, member_index);
        std::vector<std::pair<PointSet, ExtendedFunction>> parts;
        for (std::size_t i = 0; i < spec.family.members.size(); ++i)
            parts.emplace_back(PointSet(spec.family.members[i].g.source()),
                               build_extension(spec, t, fam, i));
        return glue(parts);
    }();
    if (lam_hat != 1) ext = unscale(ext, spec.p, lam_hat);
    return ext;
}

PadicScalar eval_in_window(const ExtendedFunction& ext, const PadicScalar& x,
                           std::int64_t window_lo, std::int64_t window_hi,
                           std::int32_t precision) {
    if (!x.is_exact_zero() && !x.is_indeterminate_zero()) {
        std::int64_t o = x.ord().value();
        if (o < window_lo - precision || o > window_hi + precision)
            throw OutsideRepresentablePrecision(
                "ord(x) = " + std::to_string(o) + " lies outside the representable range [" +
                std::to_string(window_lo - precision) + ", " +
                std::to_string(window_hi + precision) + "]");
    }
    return ext.eval(x, precision);
}

}  // namespace padlex