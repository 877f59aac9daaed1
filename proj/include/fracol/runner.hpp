#pragma once

#include "fracol/config.hpp"

#include <cstddef>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace fracol {

/// Process exit statuses of the command-line front end.
enum class ExitCode : int {
    Success = 0,
    ConfigError = 2,
    SolverFailure = 3,
    IoError = 4,
};

/// Map an exception escaping a run to its exit status.
[[nodiscard]] ExitCode classify(const std::exception& error) noexcept;

struct SolutionRow {
    double t;
    double y;
    double x;
};

struct EocRow {
    std::size_t intervals;
    double step;
    double sup_error;
    std::optional<double> eoc;
};

struct RunOutput {
    /// Nodes plus 4 interior probes per subinterval, sorted by t.
    std::vector<SolutionRow> solution;
    /// Sorted by N; empty when fewer than two refinement levels were run.
    std::vector<EocRow> eoc;
    std::vector<std::string> log;
};

/// Solve the configured problem and, with refinements >= 2, run the
/// refinement study. No files are touched.
[[nodiscard]] RunOutput compute(const ProblemConfig& config);

/// Refinement study only (at least two levels).
[[nodiscard]] RunOutput compute_eoc(const ProblemConfig& config);

[[nodiscard]] std::string solution_csv(const RunOutput& out);
[[nodiscard]] std::string eoc_csv(const RunOutput& out);
[[nodiscard]] std::string run_log(const RunOutput& out);

/// Write solution.csv (when present), eoc.csv (when present) and run.log
/// into `dir`, creating it. Throws IoError.
void write_outputs(const RunOutput& out, const std::filesystem::path& dir);

/// compute + write_outputs.
RunOutput run(const ProblemConfig& config, const std::filesystem::path& dir);

}  // namespace fracol
