#include <padlex/problem.hpp>

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw padlex::SpecParseError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spill(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::pair<std::int64_t, std::int64_t> parse_window_flag(const std::string& w) {
    auto pos = w.find(':');
    if (pos == std::string::npos)
        throw padlex::SpecParseError("--window wants lo:hi, got \"" + w + "\"");
    try {
        return {std::stoll(w.substr(0, pos)), std::stoll(w.substr(pos + 1))};
    } catch (const std::exception&) {
        throw padlex::SpecParseError("--window wants lo:hi, got \"" + w + "\"");
    }
}

// 1-based --task flag, or the first extend/glue task when unset.
std::size_t resolve_task(const padlex::ProblemSpec& spec, std::int64_t flag) {
    if (flag > 0) return static_cast<std::size_t>(flag - 1);
    for (std::size_t i = 0; i < spec.tasks.size(); ++i)
        if (spec.tasks[i].kind == "extend" || spec.tasks[i].kind == "glue") return i;
    throw std::invalid_argument("the spec has no extend or glue task to evaluate");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact p-adic cell workbench: prepared rules, extensions, seeded checks"};
    app.require_subcommand(1);

    std::string spec_path, x_text, ext_path, out_dir = ".", format = "json";
    std::optional<std::uint64_t> seed, samples;
    std::optional<std::int64_t> precision;
    std::optional<std::string> window;
    std::int64_t task_flag = 0;
    std::size_t member = 0;

    CLI::App* cmd_run = app.add_subcommand("run", "execute the task list of a problem file");
    cmd_run->add_option("spec", spec_path, "problem file")->required();
    cmd_run->add_option("--seed", seed, "override every task's sampling seed");
    cmd_run->add_option("--samples", samples, "override every task's per-stratum budget");
    cmd_run->add_option("--precision", precision, "override the working precision");
    cmd_run->add_option("--window", window, "override the order window, as lo:hi");
    cmd_run->add_option("--out", out_dir, "directory for the report and artifacts");
    cmd_run->add_option("--format", format, "report format")
        ->check(CLI::IsMember({"json", "text"}));

    CLI::App* cmd_eval =
        app.add_subcommand("eval", "evaluate a constructed extension at one point");
    cmd_eval->add_option("spec", spec_path, "problem file")->required();
    cmd_eval->add_option("x", x_text, "evaluation point, as a rational")->required();
    cmd_eval->add_option("--task", task_flag,
                         "1-based index of the extend or glue task (default: first)");
    cmd_eval->add_option("--member", member, "family member for extend tasks");
    cmd_eval->add_option("--ext", ext_path, "saved extension file instead of rebuilding");
    cmd_eval->add_option("--precision", precision, "override the working precision");
    cmd_eval->add_option("--window", window, "override the order window, as lo:hi");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        padlex::ProblemSpec spec = padlex::parse_problem(slurp(spec_path));
        if (seed)
            for (auto& t : spec.tasks) t.cfg.seed = *seed;
        if (samples)
            for (auto& t : spec.tasks) t.cfg.samples = *samples;
        if (precision) spec.precision = static_cast<std::int32_t>(*precision);
        if (window) std::tie(spec.window_lo, spec.window_hi) = parse_window_flag(*window);
        // overrides go back through the validator so a flag can't smuggle in
        // a precision the family can't support
        spec = padlex::parse_problem(padlex::problem_to_json(spec));

        if (cmd_run->parsed()) {
            padlex::RunReport rep = padlex::run_problem(spec);
            fs::create_directories(out_dir);
            if (format == "json")
                spill(fs::path(out_dir) / "report.json", rep.json_doc());
            else
                spill(fs::path(out_dir) / "report.txt", rep.text());
            for (const auto& t : rep.tasks)
                for (const auto& a : t.artifacts) spill(fs::path(out_dir) / a.name, a.content);
            std::cout << rep.text();
            return rep.pass ? 0 : 1;
        }

        padlex::ExtendedFunction ext =
            ext_path.empty()
                ? padlex::build_task_extension(spec, resolve_task(spec, task_flag), member)
                : padlex::extension_from_json(slurp(ext_path), spec.p);
        padlex::PadicScalar x = padlex::PadicScalar::parse(spec.p, x_text);
        std::cout << padlex::eval_in_window(ext, x, spec.window_lo, spec.window_hi,
                                            spec.precision)
                         .str()
                  << "\n";
        return 0;
    } catch (const padlex::SpecParseError& err) {
        std::cerr << "spec error: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
}