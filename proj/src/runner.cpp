#include "fracol/runner.hpp"

#include "fracol/error.hpp"
#include "fracol/format.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <system_error>

namespace fracol {

namespace {

constexpr std::size_t kProbesPerInterval = 4;
constexpr std::size_t kMinimumEocLevels = 5;

void append_eoc(const ProblemConfig& config, std::size_t levels, RunOutput& out) {
    const auto eq = to_equation(config);
    const auto exact_y = exact_solution(config.exact_y);
    EocOptions options;
    options.base_intervals = config.solver.intervals;
    options.levels = levels;
    const auto report = eoc_study(eq, exact_y, options, to_collocation_config(config));
    for (const auto& level : report.levels) {
        out.eoc.push_back({level.intervals, level.step, level.sup_error, level.eoc});
    }
    out.log.push_back("eoc.reference: " + std::string(report.exact_reference ? "exact_y" : "finest level N = " +
                      std::to_string(config.solver.intervals << levels)));
    if (!report.rates_meaningful) {
        out.log.push_back("eoc.note: every error is at roundoff; rates are not meaningful");
    }
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
    os << content;
    os.flush();
    if (!os) throw IoError("error while writing '" + path.string() + "'");
}

}  // namespace

ExitCode classify(const std::exception& error) noexcept {
    if (dynamic_cast<const ConfigError*>(&error) || dynamic_cast<const InvalidProblem*>(&error) ||
        dynamic_cast<const ParseError*>(&error)) {
        return ExitCode::ConfigError;
    }
    if (dynamic_cast<const IoError*>(&error) || dynamic_cast<const std::filesystem::filesystem_error*>(&error)) {
        return ExitCode::IoError;
    }
    return ExitCode::SolverFailure;
}

RunOutput compute(const ProblemConfig& config) {
    RunOutput out;
    const auto eq = to_equation(config);
    const auto cfg = to_collocation_config(config);
    const auto sol = solve(eq, cfg);

    const auto& grid = sol.y.grid();
    const double h = grid.step();
    for (std::size_t i = 0; i < grid.node_count(); ++i) {
        const std::size_t probes = i == grid.intervals() ? 0 : kProbesPerInterval;
        for (std::size_t k = 0; k <= probes; ++k) {
            const double t = k == 0 ? grid.node(i)
                                    : grid.node(i) + h * static_cast<double>(k) / static_cast<double>(probes + 1);
            out.solution.push_back({t, sol.y(t), (*sol.x)(t)});
        }
    }

    auto& log = out.log;
    log.push_back("kind: " + std::string(to_string(config.kind)));
    log.push_back("rhs: " + config.rhs);
    log.push_back("N: " + std::to_string(grid.intervals()));
    log.push_back("horizon: " + format_number(eq.horizon));
    log.push_back("lipschitz_estimate: " + format_number(sol.lipschitz_estimate) + " (sampled lower bound on box [" +
                  format_number(config.solver.lipschitz_box.lo) + ", " + format_number(config.solver.lipschitz_box.hi) +
                  "])");
    log.push_back("contraction_constant: " + format_number(sol.contraction) + " (L * sum T^beta/Gamma(beta+1))");
    log.push_back("contraction_constant_unit_horizon: " + format_number(sol.contraction_unit_horizon) +
                  " (L * sum 1/Gamma(beta+1); equals the above only for T = 1)");
    if (eq.has_nonlocal_terms()) {
        log.push_back("solver: picard sweeps");
        log.push_back("sweeps: " + std::to_string(sol.iterations.front()));
    } else {
        log.push_back("solver: node marching");
        const auto [lo, hi] = std::minmax_element(sol.iterations.begin(), sol.iterations.end());
        const auto total = std::accumulate(sol.iterations.begin(), sol.iterations.end(), std::size_t{0});
        log.push_back("iterations_per_node: min " + std::to_string(*lo) + ", max " + std::to_string(*hi) + ", total " +
                      std::to_string(total));
    }
    log.push_back("observed_ratio: " + format_number(sol.observed_ratio));
    log.push_back("residual_supnorm: " + format_number(sol.residual));
    if (config.kind == ProblemKind::Bvp) {
        const auto r = sol.x->boundary_residuals();
        log.push_back("boundary_residuals: " + format_number(r.left) + " " + format_number(r.right));
    }
    if (const auto exact_x = exact_solution(config.exact_x)) {
        double err = 0.0;
        for (const auto& row : out.solution) err = std::max(err, std::abs(row.x - (*exact_x)(row.t)));
        log.push_back("exact_x_max_error: " + format_number(err));
    }
    for (const auto& w : sol.warnings) log.push_back("warning: " + w);

    if (config.solver.refinements >= 2) append_eoc(config, config.solver.refinements, out);
    return out;
}

RunOutput compute_eoc(const ProblemConfig& config) {
    RunOutput out;
    out.log.push_back("kind: " + std::string(to_string(config.kind)));
    out.log.push_back("rhs: " + config.rhs);
    append_eoc(config, std::max(config.solver.refinements, kMinimumEocLevels), out);
    return out;
}

std::string solution_csv(const RunOutput& out) {
    std::string s = "t,y,x\n";
    for (const auto& row : out.solution) {
        s += format_number(row.t) + ',' + format_number(row.y) + ',' + format_number(row.x) + '\n';
    }
    return s;
}

std::string eoc_csv(const RunOutput& out) {
    std::string s = "N,h,sup_error,eoc\n";
    for (const auto& row : out.eoc) {
        s += std::to_string(row.intervals) + ',' + format_number(row.step) + ',' + format_number(row.sup_error) + ',' +
             (row.eoc ? format_number(*row.eoc) : std::string()) + '\n';
    }
    return s;
}

std::string run_log(const RunOutput& out) {
    std::string s;
    for (const auto& line : out.log) s += line + '\n';
    return s;
}

void write_outputs(const RunOutput& out, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
    if (!out.solution.empty()) write_file(dir / "solution.csv", solution_csv(out));
    if (!out.eoc.empty()) write_file(dir / "eoc.csv", eoc_csv(out));
    write_file(dir / "run.log", run_log(out));
}

RunOutput run(const ProblemConfig& config, const std::filesystem::path& dir) {
    auto out = compute(config);
    write_outputs(out, dir);
    return out;
}

}  // namespace fracol
