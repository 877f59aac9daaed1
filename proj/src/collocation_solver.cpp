#include "fracol/collocation_solver.hpp"

#include "fracol/compensated_sum.hpp"
#include "fracol/error.hpp"
#include "fracol/fractional_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>

namespace fracol {

namespace {

// Below this relative size an iterate change is roundoff and says nothing
// about the contraction rate.
constexpr double kRatioFloor = 1e-11;
constexpr double kMomentSingularityOrder = 0.1;
constexpr std::size_t kKappaSamples = 65;

bool converged(double change, double value, double tol) { return std::abs(change) <= tol * (1.0 + std::abs(value)); }

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

double kappa_sup(const NonlocalTerm& term, double horizon) {
    double sup = 0.0;
    for (std::size_t k = 0; k < kKappaSamples; ++k) {
        const double t = horizon * static_cast<double>(k) / static_cast<double>(kKappaSamples - 1);
        sup = std::max(sup, std::abs(term.coefficient(t)));
    }
    return sup;
}

/// Lipschitz probe, contraction constants, warnings. Throws under strict mode.
void precheck(const IntegralEquation& eq, const CollocationConfig& cfg, CollocationSolution& out) {
    if (eq.rhs.depends_on_state()) {
        ProbeBox box{{0.0, eq.horizon}, std::vector<Interval>(eq.arguments.size(), cfg.lipschitz_box)};
        out.lipschitz_estimate = lipschitz_probe(eq.rhs, box, std::max<std::size_t>(cfg.lipschitz_samples, 2));
    }
    out.contraction = contraction_constant(eq, out.lipschitz_estimate);
    out.contraction_unit_horizon = contraction_constant_unit_horizon(eq, out.lipschitz_estimate);
    if (out.contraction >= 1.0) {
        const std::string message = std::string(warning_tag::contraction) + " estimated contraction constant " +
                                    format_double(out.contraction) +
                                    " >= 1; existence of a unique fixed point is not guaranteed";
        if (cfg.strict_contraction) throw SolverError(message, 0, out.contraction);
        out.warnings.push_back(message);
    }
    for (const auto& arg : eq.arguments) {
        for (const auto& term : arg.nonlocal) {
            if (term.moment_order < kMomentSingularityOrder) {
                out.warnings.push_back(std::string(warning_tag::moment_singularity) + " moment order " +
                                       format_double(term.moment_order) +
                                       " is close to 0; the moment kernel is nearly non-integrable");
            }
        }
    }
}

void check_config(const CollocationConfig& cfg) {
    if (cfg.intervals < 1) throw DomainError("collocation: N must be at least 1");
    if (!(cfg.tol > 0.0)) throw DomainError("collocation: tol must be positive");
    if (cfg.max_iter < 1) throw DomainError("collocation: max_iter must be at least 1");
}

void finish(const IntegralEquation& eq, CollocationSolution& sol) {
    sol.residual = residual_supnorm(eq, sol.y, 0);
    if (eq.reconstruct) sol.x.emplace(eq.reconstruct(sol.y));
}

/// Scalar solve of v = F(v) at one node: damped fixed point, then secant.
class NodeSolver {
public:
    NodeSolver(const CollocationConfig& cfg, std::size_t node) : cfg_(cfg), node_(node) {}

    template <typename Map>
    double solve(Map&& map, double guess) {
        double v = guess;
        double theta = 1.0;
        double previous = std::numeric_limits<double>::infinity();
        const std::size_t fixed_point_budget = std::max<std::size_t>(cfg_.max_iter / 2, 1);
        for (std::size_t k = 0; k < fixed_point_budget; ++k) {
            const double fv = evaluate(map, v);
            const double r = fv - v;
            if (converged(r, fv, cfg_.tol)) return fv;
            if (theta == 1.0 && std::isfinite(previous) && std::abs(previous) > kRatioFloor * (1.0 + std::abs(v))) {
                ratio_ = std::max(ratio_, std::abs(r) / std::abs(previous));
            }
            if (std::abs(r) >= std::abs(previous)) theta *= 0.5;
            previous = r;
            v += theta * r;
        }
        used_secant_ = true;
        return secant(map, v);
    }

    [[nodiscard]] std::size_t evaluations() const noexcept { return evaluations_; }
    [[nodiscard]] double ratio() const noexcept { return ratio_; }
    [[nodiscard]] bool used_secant() const noexcept { return used_secant_; }

private:
    template <typename Map>
    double evaluate(Map& map, double v) {
        ++evaluations_;
        return map(v);
    }

    template <typename Map>
    double secant(Map& map, double start) {
        double a = start;
        double fa = evaluate(map, a);
        double ra = fa - a;
        if (converged(ra, fa, cfg_.tol)) return fa;
        double b = a + 0.5 * ra;
        while (evaluations_ < cfg_.max_iter) {
            const double fb = evaluate(map, b);
            const double rb = fb - b;
            if (converged(rb, fb, cfg_.tol)) return fb;
            const double denom = rb - ra;
            double step = (denom != 0.0) ? -rb * (b - a) / denom : 0.5 * rb;
            // Keep the secant step within a few multiples of the local scale.
            const double cap = 10.0 * (std::abs(b - a) + std::abs(rb));
            if (!std::isfinite(step) || std::abs(step) > cap) step = 0.5 * rb;
            a = b;
            ra = rb;
            b += step;
            last_residual_ = std::abs(rb);
        }
        throw SolverError("no convergence at node " + std::to_string(node_) + " after " +
                              std::to_string(evaluations_) + " evaluations (last residual " +
                              format_double(last_residual_) + ")",
                          node_, last_residual_);
    }

    const CollocationConfig& cfg_;
    std::size_t node_;
    std::size_t evaluations_ = 0;
    double ratio_ = 0.0;
    double last_residual_ = std::numeric_limits<double>::infinity();
    bool used_secant_ = false;
};

/// Σ κ(t) Φ_μ[y] for one argument.
double nonlocal_value(const EquationArgument& arg, const std::vector<double>& moments, double t) {
    double sum = 0.0;
    for (std::size_t k = 0; k < arg.nonlocal.size(); ++k) sum += arg.nonlocal[k].coefficient(t) * moments[k];
    return sum;
}

std::vector<double> moments_of(const EquationArgument& arg, const LinearSpline& y) {
    std::vector<double> out;
    out.reserve(arg.nonlocal.size());
    for (const auto& term : arg.nonlocal) out.push_back(spline_moment(y, term.moment_order));
    return out;
}

}  // namespace

double contraction_constant(const IntegralEquation& eq, double lipschitz) {
    if (!(lipschitz >= 0.0)) throw DomainError("contraction_constant: L must be nonnegative");
    double sum = 0.0;
    for (const auto& arg : eq.arguments) {
        sum += std::pow(eq.horizon, arg.order) / gamma_fn(arg.order + 1.0);
        for (const auto& term : arg.nonlocal) {
            // ‖Φ_μ‖ = ∫_0^T (T-s)^(μ-1) ds = T^μ / μ
            sum += kappa_sup(term, eq.horizon) * std::pow(eq.horizon, term.moment_order) / term.moment_order;
        }
    }
    return lipschitz * sum;
}

double contraction_constant_unit_horizon(const IntegralEquation& eq, double lipschitz) {
    if (!(lipschitz >= 0.0)) throw DomainError("contraction_constant: L must be nonnegative");
    double sum = 0.0;
    for (const auto& arg : eq.arguments) sum += 1.0 / gamma_fn(arg.order + 1.0);
    return lipschitz * sum;
}

CollocationSolution solve_volterra(const IntegralEquation& eq, const CollocationConfig& cfg) {
    check_config(cfg);
    if (eq.has_nonlocal_terms()) throw DomainError("solve_volterra: equation has nonlocal terms");
    const UniformGrid grid(eq.horizon, cfg.intervals);
    const std::size_t nodes = grid.node_count();
    const std::size_t dim = eq.arguments.size();

    CollocationSolution sol{.y = LinearSpline(grid, std::vector<double>(nodes, 0.0))};
    precheck(eq, cfg, sol);

    std::vector<std::shared_ptr<const WeightTable>> tables;
    std::vector<double> scales;
    std::vector<std::vector<double>> forcing(dim, std::vector<double>(nodes));
    for (std::size_t j = 0; j < dim; ++j) {
        tables.push_back(weight_table(eq.arguments[j].order, nodes));
        scales.push_back(tables.back()->scale(grid.step()));
        for (std::size_t i = 0; i < nodes; ++i) forcing[j][i] = eq.arguments[j].forcing(grid.node(i));
    }

    std::vector<double> y(nodes, 0.0);
    std::vector<double> z(dim);
    std::vector<double> lag(dim);
    std::vector<double> diag(dim);
    sol.iterations.assign(nodes, 0);

    // Every I^β y vanishes at t = 0.
    for (std::size_t j = 0; j < dim; ++j) z[j] = forcing[j][0];
    y[0] = eq.rhs(grid.node(0), z);
    sol.iterations[0] = 1;

    for (std::size_t i = 1; i < nodes; ++i) {
        const double t = grid.node(i);
        for (std::size_t j = 0; j < dim; ++j) {
            CompensatedSum acc;
            for (std::size_t k = 0; k < i; ++k) acc += tables[j]->coefficient(i, k) * y[k];
            lag[j] = forcing[j][i] + scales[j] * acc.value();
            diag[j] = scales[j] * tables[j]->coefficient(i, i);
        }
        auto map = [&](double v) {
            for (std::size_t j = 0; j < dim; ++j) z[j] = lag[j] + diag[j] * v;
            return eq.rhs(t, z);
        };
        NodeSolver node(cfg, i);
        y[i] = node.solve(map, y[i - 1]);
        sol.iterations[i] = node.evaluations();
        sol.observed_ratio = std::max(sol.observed_ratio, node.ratio());
        if (node.used_secant()) {
            sol.warnings.push_back(std::string(warning_tag::secant_fallback) + " node " + std::to_string(i) +
                                   " needed the secant fallback after " + std::to_string(cfg.max_iter / 2) +
                                   " fixed-point steps");
        }
    }

    sol.y = LinearSpline(grid, std::move(y));
    finish(eq, sol);
    return sol;
}

CollocationSolution solve_fredholm(const IntegralEquation& eq, const CollocationConfig& cfg) {
    check_config(cfg);
    const UniformGrid grid(eq.horizon, cfg.intervals);
    const std::size_t nodes = grid.node_count();
    const std::size_t dim = eq.arguments.size();

    CollocationSolution sol{.y = LinearSpline(grid, std::vector<double>(nodes, 0.0))};
    precheck(eq, cfg, sol);

    std::vector<std::vector<double>> forcing(dim, std::vector<double>(nodes));
    std::vector<std::vector<double>> kappa(dim);
    for (std::size_t j = 0; j < dim; ++j) {
        const auto& arg = eq.arguments[j];
        for (std::size_t i = 0; i < nodes; ++i) forcing[j][i] = arg.forcing(grid.node(i));
        for (const auto& term : arg.nonlocal) {
            for (std::size_t i = 0; i < nodes; ++i) kappa[j].push_back(term.coefficient(grid.node(i)));
        }
    }

    LinearSpline current(grid, std::vector<double>(nodes, 0.0));
    std::vector<double> next(nodes);
    std::vector<double> z(dim);
    std::vector<std::vector<double>> integrals(dim);
    std::vector<std::vector<double>> moments(dim);
    double previous_delta = std::numeric_limits<double>::infinity();

    for (std::size_t sweep = 1; sweep <= cfg.max_iter; ++sweep) {
        for (std::size_t j = 0; j < dim; ++j) {
            integrals[j] = frac_integral_at_nodes(current, eq.arguments[j].order);
            moments[j] = moments_of(eq.arguments[j], current);
        }
        double delta = 0.0;
        double scaled = 0.0;
        for (std::size_t i = 0; i < nodes; ++i) {
            for (std::size_t j = 0; j < dim; ++j) {
                double nonlocal = 0.0;
                for (std::size_t k = 0; k < moments[j].size(); ++k) nonlocal += kappa[j][k * nodes + i] * moments[j][k];
                z[j] = forcing[j][i] + integrals[j][i] + nonlocal;
            }
            next[i] = eq.rhs(grid.node(i), z);
            const double change = std::abs(next[i] - current.value(i));
            delta = std::max(delta, change);
            scaled = std::max(scaled, change / (1.0 + std::abs(next[i])));
        }
        sol.sweep_deltas.push_back(delta);
        if (sweep > 1 && previous_delta > kRatioFloor * (1.0 + delta)) {
            sol.observed_ratio = std::max(sol.observed_ratio, delta / previous_delta);
        }
        previous_delta = delta;
        current = LinearSpline(grid, next);
        if (scaled <= cfg.tol) {
            sol.iterations.assign(nodes, sweep);
            sol.y = current;
            finish(eq, sol);
            return sol;
        }
    }
    throw SolverError("Picard sweeps did not converge after " + std::to_string(cfg.max_iter) +
                          " sweeps (last change " + format_double(previous_delta) + ", observed ratio " +
                          format_double(sol.observed_ratio) + ")",
                      0, previous_delta);
}

CollocationSolution solve(const IntegralEquation& eq, const CollocationConfig& cfg) {
    return eq.has_nonlocal_terms() ? solve_fredholm(eq, cfg) : solve_volterra(eq, cfg);
}

double residual_supnorm(const IntegralEquation& eq, const LinearSpline& y, std::size_t probes_per_interval) {
    const auto& grid = y.grid();
    std::vector<std::vector<double>> moments;
    for (const auto& arg : eq.arguments) moments.push_back(moments_of(arg, y));
    std::vector<double> z(eq.arguments.size());
    double worst = 0.0;
    auto probe = [&](double t) {
        for (std::size_t j = 0; j < eq.arguments.size(); ++j) {
            const auto& arg = eq.arguments[j];
            z[j] = arg.forcing(t) + frac_integral_at(y, arg.order, t) + nonlocal_value(arg, moments[j], t);
        }
        worst = std::max(worst, std::abs(y(t) - eq.rhs(t, z)));
    };
    const double h = grid.step();
    for (std::size_t i = 0; i < grid.node_count(); ++i) {
        probe(grid.node(i));
        if (i == grid.intervals()) break;
        for (std::size_t k = 1; k <= probes_per_interval; ++k) {
            probe(grid.node(i) + h * static_cast<double>(k) / static_cast<double>(probes_per_interval + 1));
        }
    }
    return worst;
}

ConvergenceReport eoc_study(const LevelSolver& solver, double horizon, const std::optional<ScalarFunction>& exact_y,
                            const EocOptions& options) {
    if (options.levels < 2) throw DomainError("eoc_study needs at least two levels");
    if (options.base_intervals < 1) throw DomainError("eoc_study: base N must be at least 1");
    const std::size_t solves = exact_y ? options.levels : options.levels + 1;

    std::vector<std::future<LinearSpline>> pending;
    for (std::size_t l = 0; l < solves; ++l) {
        pending.push_back(std::async(std::launch::async, solver, options.base_intervals << l));
    }
    std::vector<LinearSpline> splines;
    for (auto& f : pending) splines.push_back(f.get());

    ConvergenceReport report;
    report.exact_reference = exact_y.has_value();
    const auto reference = [&](double t) { return exact_y ? (*exact_y)(t) : splines.back()(t); };

    double scale = 0.0;
    for (std::size_t l = 0; l < options.levels; ++l) {
        const auto& s = splines[l];
        const auto& grid = s.grid();
        if (grid.horizon() != horizon) throw DomainError("eoc_study: level solution has the wrong horizon");
        double err = 0.0;
        const double h = grid.step();
        for (std::size_t i = 0; i < grid.node_count(); ++i) {
            const double t0 = grid.node(i);
            const std::size_t probes = i == grid.intervals() ? 0 : options.probes_per_interval;
            for (std::size_t k = 0; k <= probes; ++k) {
                const double t = k == 0 ? t0 : t0 + h * static_cast<double>(k) / static_cast<double>(probes + 1);
                const double ref = reference(t);
                scale = std::max(scale, std::abs(ref));
                err = std::max(err, std::abs(s(t) - ref));
            }
        }
        EocLevel level{grid.intervals(), h, err, std::nullopt, std::nullopt};
        if (options.measure_modulus && exact_y) {
            // 40N sample steps, so h spans a whole number of them.
            level.modulus = modulus_of_continuity(*exact_y, horizon, h, 40 * grid.intervals() + 1);
        }
        report.levels.push_back(level);
    }

    const double roundoff = 1e-11 * (1.0 + scale);
    bool any_meaningful = false;
    for (std::size_t l = 1; l < report.levels.size(); ++l) {
        const double coarse = report.levels[l - 1].sup_error;
        const double fine = report.levels[l].sup_error;
        if (coarse > roundoff && fine > roundoff) {
            report.levels[l].eoc = std::log2(coarse / fine);
            any_meaningful = true;
        }
    }
    report.rates_meaningful = any_meaningful;
    return report;
}

ConvergenceReport eoc_study(const IntegralEquation& eq, const std::optional<ScalarFunction>& exact_y,
                            const EocOptions& options, CollocationConfig cfg) {
    auto solver = [&eq, cfg](std::size_t n) {
        auto level = cfg;
        level.intervals = n;
        return solve(eq, level).y;
    };
    return eoc_study(solver, eq.horizon, exact_y, options);
}

}  // namespace fracol
