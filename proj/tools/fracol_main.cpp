// fracol: command-line front end for the spline collocation solver.
//
//   fracol solve <config> [--out DIR] [--n N] [--refinements R] [--tol X]
//   fracol eoc <config> [--out DIR] [--n N] [--refinements R] [--tol X]
//   fracol benchmarks [--run] [--out DIR] [--only NAME]

#include "fracol/benchmarks.hpp"
#include "fracol/config.hpp"
#include "fracol/error.hpp"
#include "fracol/runner.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct Overrides {
    std::optional<std::size_t> intervals;
    std::optional<std::size_t> refinements;
    std::optional<double> tol;

    void apply(fracol::ProblemConfig& c) const {
        if (intervals) c.solver.intervals = *intervals;
        if (refinements) c.solver.refinements = *refinements;
        if (tol) c.solver.tol = *tol;
    }
};

void add_overrides(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--n", o.intervals, "Number of subintervals N")->check(CLI::PositiveNumber);
    cmd->add_option("--refinements", o.refinements, "Refinement levels for the EOC study");
    cmd->add_option("--tol", o.tol, "Nonlinear solve tolerance")->check(CLI::PositiveNumber);
}

void print_warnings(const fracol::RunOutput& out) {
    for (const auto& line : out.log) {
        if (line.rfind("warning: ", 0) == 0) std::cerr << line << '\n';
    }
}

int guarded(const std::function<void()>& body) {
    try {
        body();
        return 0;
    } catch (const std::exception& e) {
        const auto code = fracol::classify(e);
        std::cerr << "fracol: error: " << e.what() << '\n';
        return static_cast<int>(code);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spline collocation solver for nonlinear multi-term fractional differential equations"};
    app.require_subcommand(1);

    std::string config_path;
    std::filesystem::path out_dir = "out";
    Overrides overrides;

    auto* solve = app.add_subcommand("solve", "Solve a configured problem");
    solve->add_option("config", config_path, "Problem configuration file")->required();
    solve->add_option("--out", out_dir, "Output directory (default: out)");
    add_overrides(solve, overrides);

    auto* eoc = app.add_subcommand("eoc", "Run a refinement study only");
    eoc->add_option("config", config_path, "Problem configuration file")->required();
    eoc->add_option("--out", out_dir, "Output directory (default: out)");
    add_overrides(eoc, overrides);

    bool run_all = false;
    std::string only;
    auto* bench = app.add_subcommand("benchmarks", "List, or run, the built-in benchmark problems");
    bench->add_flag("--run", run_all, "Solve every benchmark into <out>/<name>/");
    bench->add_option("--out", out_dir, "Output directory root (default: out)");
    bench->add_option("--only", only, "Restrict --run to one benchmark");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : static_cast<int>(fracol::ExitCode::ConfigError);
    }

    if (solve->parsed()) {
        return guarded([&] {
            auto config = fracol::load_config(config_path);
            overrides.apply(config);
            const auto out = fracol::run(config, out_dir);
            print_warnings(out);
            std::cout << "wrote " << out_dir.string() << '\n';
        });
    }

    if (eoc->parsed()) {
        return guarded([&] {
            auto config = fracol::load_config(config_path);
            overrides.apply(config);
            const auto out = fracol::compute_eoc(config);
            fracol::write_outputs(out, out_dir);
            std::cout << fracol::eoc_csv(out);
        });
    }

    if (!run_all) {
        if (!only.empty()) {
            std::cerr << "fracol: --only requires --run\n";
            return static_cast<int>(fracol::ExitCode::ConfigError);
        }
        std::cout << fracol::list_benchmarks();
        return 0;
    }
    return guarded([&] {
        if (!only.empty() && fracol::find_benchmark(only) == nullptr) {
            throw fracol::ConfigError(0, "unknown benchmark '" + only + "'");
        }
        const auto start = std::chrono::steady_clock::now();
        for (const auto& b : fracol::benchmark_registry()) {
            if (!only.empty() && b.name != only) continue;
            const auto out = fracol::run(b.config, out_dir / b.name);
            print_warnings(out);
            std::cout << b.name << ": " << out.solution.size() << " rows, " << out.eoc.size() << " eoc levels\n";
        }
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        std::cout << "elapsed " << elapsed.count() << " s\n";
    });
}
