// Python face of the library: exact scalars with their arithmetic, root
// lifting, and the spec-driven problem runner.  Everything heavier (fibers,
// rules, extensions) is reached through spec documents, same as the CLI.

#include <padlex/problem.hpp>

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <string>

namespace py = pybind11;
using namespace padlex;

namespace {

py::int_ to_int(const Zint& z) { return py::int_(py::str(z.str())); }

// first extend or glue task, mirroring the CLI's default for `eval`
std::size_t default_task(const ProblemSpec& spec) {
    for (std::size_t i = 0; i < spec.tasks.size(); ++i)
        if (spec.tasks[i].kind == "extend" || spec.tasks[i].kind == "glue") return i;
    throw std::invalid_argument("the spec has no extend or glue task to evaluate");
}

}  // namespace

PYBIND11_MODULE(_padlex, m) {
    m.doc() = "exact p-adic scalars, prepared power rules, certified Lipschitz extensions";

    py::register_exception<SpecParseError>(m, "SpecError", PyExc_ValueError);
    py::register_exception<DivisionByZero>(m, "DivisionError", PyExc_ZeroDivisionError);
    // remaining library errors derive from std::runtime_error -> RuntimeError

    py::class_<PadicScalar>(m, "Scalar")
        .def(py::init([](std::int64_t p, const std::string& text) {
                 return PadicScalar::parse(p, text);
             }),
             py::arg("p"), py::arg("text"), "exact rational, e.g. Scalar(3, \"-7/250\")")
        .def_static("zero", &PadicScalar::zero, py::arg("p"))
        .def_static("one", &PadicScalar::one, py::arg("p"))
        .def_property_readonly("p", &PadicScalar::prime)
        .def_property_readonly("exact", &PadicScalar::is_exact)
        .def("ord",
             [](const PadicScalar& x) -> std::optional<std::int64_t> {
                 Valuation v = x.ord();  // indeterminate zeros raise
                 if (!v.is_finite()) return std::nullopt;
                 return v.value();
             },
             "valuation of x; None for exact zero")
        .def("norm", [](const PadicScalar& x) { return x.norm().str(x.prime()); })
        .def("ac",
             [](const PadicScalar& x, std::int32_t m) { return to_int(x.ac(m).residue()); },
             py::arg("m") = 1, "angular component: the first m unit digits, as a residue")
        .def("pow", &PadicScalar::pow, py::arg("e"))
        .def(py::self + py::self)
        .def(py::self - py::self)
        .def(py::self * py::self)
        .def(py::self / py::self)
        .def(-py::self)
        .def(py::self == py::self)
        .def(py::self != py::self)
        .def("__str__", &PadicScalar::str)
        .def("__repr__", [](const PadicScalar& x) {
            return "Scalar(" + std::to_string(x.prime()) + ", \"" + x.str() + "\")";
        });

    m.def(
        "nth_root",
        [](const PadicScalar& x, std::int64_t b, std::optional<std::int64_t> branch,
           std::int32_t precision) {
            std::optional<AngularClass> cls;
            if (branch) cls = AngularClass(x.prime(), 1, Zint(*branch));
            return hensel_root(x, b, cls, precision);
        },
        py::arg("x"), py::arg("b"), py::arg("branch") = std::nullopt, py::arg("precision") = 24,
        "b-th root of x; `branch` picks the root's first unit digit when there are several");

    m.def(
        "canonical",
        [](const std::string& spec_text) { return problem_to_json(parse_problem(spec_text)); },
        py::arg("spec_text"), "validate a spec document and return its canonical form");

    m.def(
        "run",
        [](const std::string& spec_text) {
            RunReport rep = run_problem(parse_problem(spec_text));
            py::dict artifacts;
            for (const auto& task : rep.tasks)
                for (const auto& a : task.artifacts) artifacts[py::str(a.name)] = a.content;
            py::dict out;
            out["pass"] = rep.pass;
            out["report"] = rep.json_doc();
            out["text"] = rep.text();
            out["artifacts"] = artifacts;
            return out;
        },
        py::arg("spec_text"), "run every task of a spec; report and artifacts as strings");

    m.def(
        "eval_task",
        [](const std::string& spec_text, const std::string& x, std::optional<std::size_t> task,
           std::size_t member, std::optional<std::int32_t> precision) {
            ProblemSpec spec = parse_problem(spec_text);
            std::size_t ti = task ? *task : default_task(spec);
            ExtendedFunction ext = build_task_extension(spec, ti, member);
            PadicScalar at = PadicScalar::parse(spec.p, x);
            return eval_in_window(ext, at, spec.window_lo, spec.window_hi,
                                  precision.value_or(spec.precision))
                .str();
        },
        py::arg("spec_text"), py::arg("x"), py::arg("task") = std::nullopt,
        py::arg("member") = 0, py::arg("precision") = std::nullopt,
        "evaluate a spec's extension (default: its first extend or glue task, 0-based "
        "otherwise) at the exact rational x");

    m.attr("__version__") = "0.1.0";
}
