#pragma once

#include "fracol/config.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fracol {

/// Built-in problem with a known solution. `config.exact_y` and
/// `config.exact_x` hold the closed forms in expression syntax.
struct Benchmark {
    std::string name;
    std::string description;
    /// How the exact solution was obtained.
    std::string oracle;
    /// Expected refinement rate; empty when the scheme is exact.
    std::optional<double> expected_eoc;
    ProblemConfig config;
};

[[nodiscard]] const std::vector<Benchmark>& benchmark_registry();

[[nodiscard]] const Benchmark* find_benchmark(std::string_view name);

/// Human-readable listing of the registry.
[[nodiscard]] std::string list_benchmarks();

/// Partial sum Σ_{k<terms} t^(k/2) / Γ(k/2 + 1) of E_{1/2}(√t), written in
/// expression syntax.
[[nodiscard]] std::string mittag_leffler_half_series(std::size_t terms);

}  // namespace fracol
