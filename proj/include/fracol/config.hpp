#pragma once

#include "fracol/collocation_solver.hpp"
#include "fracol/problem_transform.hpp"
#include "fracol/rhs_expr.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fracol {

enum class ProblemKind { IvpCaputo, IvpRl, Bvp };

[[nodiscard]] std::string_view to_string(ProblemKind kind);

struct SolverSettings {
    std::size_t intervals = 64;
    double tol = 1e-12;
    std::size_t max_iter = 500;
    std::size_t refinements = 1;
    Interval lipschitz_box{-10.0, 10.0};
    std::size_t lipschitz_samples = 20000;
    bool strict = false;

    bool operator==(const SolverSettings&) const = default;
};

/// Contents of a problem file. Fields that do not belong to `kind` keep their
/// defaults.
struct ProblemConfig {
    ProblemKind kind = ProblemKind::IvpCaputo;
    /// alpha for the initial-value kinds, q for bvp.
    double order = 0.0;
    /// alphas / qs.
    std::vector<double> orders;
    /// x0 (ivp_caputo only).
    std::vector<double> initial;
    /// T (initial-value kinds; bvp is fixed to [0, 1]).
    double horizon = 1.0;
    double a = 1.0;
    double b = 0.0;
    double eta1 = 0.0;
    double eta2 = 0.0;
    std::string rhs;
    /// Closed forms in t, used as the refinement reference when present.
    std::optional<std::string> exact_y;
    std::optional<std::string> exact_x;
    SolverSettings solver;

    bool operator==(const ProblemConfig&) const = default;
};

/// Parse the line-oriented `key = value` format; errors carry the line
/// number.
[[nodiscard]] ProblemConfig parse_config(std::string_view text);

/// Throws IoError when the file cannot be read, ConfigError when invalid.
[[nodiscard]] ProblemConfig load_config(const std::filesystem::path& path);

/// Canonical text form; parse_config(write_config(c)) == c.
[[nodiscard]] std::string write_config(const ProblemConfig& config);

[[nodiscard]] IntegralEquation to_equation(const ProblemConfig& config);
[[nodiscard]] CollocationConfig to_collocation_config(const ProblemConfig& config);

/// exact_y / exact_x compiled as functions of t, if present.
[[nodiscard]] std::optional<ScalarFunction> exact_solution(const std::optional<std::string>& source);

}  // namespace fracol
