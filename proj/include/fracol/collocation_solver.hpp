#pragma once

#include "fracol/problem_transform.hpp"
#include "fracol/rhs_expr.hpp"
#include "fracol/spline_space.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace fracol {

struct CollocationConfig {
    std::size_t intervals = 64;
    /// Mixed test |Δ| <= tol · (1 + |y|).
    double tol = 1e-12;
    std::size_t max_iter = 500;
    /// Every state slot is probed over this interval, time over [0, T].
    Interval lipschitz_box{-10.0, 10.0};
    std::size_t lipschitz_samples = 20000;
    /// Abort instead of warning when the contraction constant is >= 1.
    bool strict_contraction = false;
};

/// Stable prefixes for run-log warnings.
namespace warning_tag {
inline constexpr const char* contraction = "[contraction]";
inline constexpr const char* secant_fallback = "[secant-fallback]";
inline constexpr const char* moment_singularity = "[moment-singularity]";
}  // namespace warning_tag

struct CollocationSolution {
    LinearSpline y;
    std::optional<SolutionFunction> x{};
    /// Right-hand-side evaluations per node (Volterra) or sweeps (Fredholm,
    /// same count at every node).
    std::vector<std::size_t> iterations{};
    /// Sup-norm change of each Fredholm sweep; empty for node marching.
    std::vector<double> sweep_deltas{};
    /// Largest ratio of successive iterate changes seen after the first step.
    double observed_ratio = 0.0;
    /// Residual of the collocation equations at the nodes.
    double residual = 0.0;
    double lipschitz_estimate = 0.0;
    /// L · Σ T^β/Γ(β+1) plus nonlocal operator norms.
    double contraction = 0.0;
    /// L · Σ 1/Γ(β+1), the unit-horizon form.
    double contraction_unit_horizon = 0.0;
    std::vector<std::string> warnings{};
};

/// Fixed-point contraction constant of the integral equation for a rhs with
/// Lipschitz constant L (in the Σ|Δz_i| metric) on [0, T].
[[nodiscard]] double contraction_constant(const IntegralEquation& eq, double lipschitz);

/// Same without the horizon factors: L · Σ_j 1/Γ(β_j + 1).
[[nodiscard]] double contraction_constant_unit_horizon(const IntegralEquation& eq, double lipschitz);

/// Node-marching collocation for equations without nonlocal terms.
[[nodiscard]] CollocationSolution solve_volterra(const IntegralEquation& eq, const CollocationConfig& cfg);

/// Global Picard sweeps on the nodal vector; handles nonlocal terms.
[[nodiscard]] CollocationSolution solve_fredholm(const IntegralEquation& eq, const CollocationConfig& cfg);

/// solve_fredholm when the equation has nonlocal terms, solve_volterra otherwise.
[[nodiscard]] CollocationSolution solve(const IntegralEquation& eq, const CollocationConfig& cfg);

/// max |y(t) - f(t, z(t))| over the nodes plus `probes_per_interval` interior
/// points of every subinterval.
[[nodiscard]] double residual_supnorm(const IntegralEquation& eq, const LinearSpline& y,
                                      std::size_t probes_per_interval = 0);

struct EocLevel {
    std::size_t intervals;
    double step;
    double sup_error;
    /// log2(e_l / e_{l+1}) against the previous level; empty for the first
    /// level or when either error is at roundoff.
    std::optional<double> eoc;
    /// ω(y, h) of the exact solution, when requested.
    std::optional<double> modulus;
};

struct ConvergenceReport {
    std::vector<EocLevel> levels;
    /// False when every error sits at roundoff (the scheme is exact).
    bool rates_meaningful = true;
    bool exact_reference = true;
};

using LevelSolver = std::function<LinearSpline(std::size_t intervals)>;

struct EocOptions {
    std::size_t base_intervals = 16;
    std::size_t levels = 5;
    bool measure_modulus = false;
    /// Sup norm over nodes plus this many interior points per subinterval.
    std::size_t probes_per_interval = 10;
};

/// Refinement study over N_0 · 2^l. Without an exact y, one extra halving
/// serves as the reference. Levels are solved concurrently.
[[nodiscard]] ConvergenceReport eoc_study(const LevelSolver& solver, double horizon,
                                          const std::optional<ScalarFunction>& exact_y, const EocOptions& options);

[[nodiscard]] ConvergenceReport eoc_study(const IntegralEquation& eq, const std::optional<ScalarFunction>& exact_y,
                                          const EocOptions& options, CollocationConfig cfg = {});

}  // namespace fracol
