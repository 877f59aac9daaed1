#pragma once

#include "fracol/fractional_kernel.hpp"
#include "fracol/rhs_expr.hpp"
#include "fracol/spline_space.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

namespace fracol {

/// D_*^α x = f(t, x, D_*^{α_1} x, ..., D_*^{α_m} x) on (0, T] with
/// x^(j)(0) = x_j, j < ⌈α⌉, and α > α_1 > ... > α_m > 0.
struct CaputoIvp {
    double alpha;
    std::vector<double> orders;
    InitialData initial;
    double horizon;
    RhsFunction rhs;
};

/// D^α x = f(t, x, D^{α_1} x, ..., D^{α_m} x), x(0) = 0, 1 > α > α_1 > ... > 0.
struct RlIvp {
    double alpha;
    std::vector<double> orders;
    double horizon;
    RhsFunction rhs;
};

/// D_*^q x = f(t, x, D_*^{q_1} x, ...) on (0, 1) with 2 >= q > q_1 > ... > 1 and
/// A x(0) + B x'(0) = η_1, A x(1) + B x'(1) = η_2, A != 0.
struct CaputoBvp {
    double q;
    std::vector<double> orders;
    double a;
    double b;
    double eta1;
    double eta2;
    RhsFunction rhs;
};

/// Throw InvalidProblem when a structural invariant fails.
void validate(const CaputoIvp& p);
void validate(const RlIvp& p);
void validate(const CaputoBvp& p);

struct BoundaryResiduals {
    double left;
    double right;
};

/// x(t) rebuilt from a solved y_N.
class SolutionFunction {
public:
    /// x = I^α y + Σ x_k t^k/k! (no polynomial for the Riemann-Liouville case).
    struct IvpRule {
        double alpha;
        std::optional<InitialData> initial;
    };
    /// Boundary data shared by the two BVP representations.
    struct BoundaryData {
        double q;
        double a;
        double b;
        double eta1;
        double eta2;
    };
    /// x = I^q y + κ_1(t) Φ_1 + κ_2(t) Φ_2 + affine, moments precomputed.
    struct MomentRule {
        BoundaryData data;
        double phi1;
        double phi2;
    };
    /// x = ∫ G(t,s) y(s) ds + affine, integrated segment by segment.
    struct GreenRule {
        BoundaryData data;
    };
    using Rule = std::variant<IvpRule, MomentRule, GreenRule>;

    SolutionFunction(LinearSpline y, Rule rule);

    [[nodiscard]] double operator()(double t) const;

    /// x'(t); only defined for the boundary-value rules.
    [[nodiscard]] double derivative(double t) const;

    /// |A x(0) + B x'(0) - η_1| and |A x(1) + B x'(1) - η_2|.
    [[nodiscard]] BoundaryResiduals boundary_residuals() const;

    [[nodiscard]] const LinearSpline& y() const noexcept { return y_; }
    [[nodiscard]] const Rule& rule() const noexcept { return rule_; }

private:
    LinearSpline y_;
    Rule rule_;
};

/// κ(t) · ∫_0^T (T-s)^(μ-1) y(s) ds
struct NonlocalTerm {
    ScalarFunction coefficient;
    double moment_order;
};

/// One argument slot z_j = g_j(t) + I^{β_j} y(t) + Σ κ(t) Φ_μ[y].
struct EquationArgument {
    double order;
    ScalarFunction forcing;
    std::vector<NonlocalTerm> nonlocal;
};

/// y(t) = f(t, z_0(t), ..., z_m(t)) on [0, T], the common form every problem
/// class reduces to. `reconstruct` maps a solved y back to x.
struct IntegralEquation {
    double horizon;
    std::vector<EquationArgument> arguments;
    RhsFunction rhs;
    std::function<SolutionFunction(const LinearSpline&)> reconstruct;

    [[nodiscard]] std::size_t arity() const noexcept { return arguments.size() - 1; }
    [[nodiscard]] bool has_nonlocal_terms() const noexcept;
};

[[nodiscard]] IntegralEquation reduce_ivp_caputo(const CaputoIvp& p);
[[nodiscard]] SolutionFunction reconstruct_ivp(const LinearSpline& y, const CaputoIvp& p);

[[nodiscard]] IntegralEquation reduce_ivp_rl(const RlIvp& p);
[[nodiscard]] SolutionFunction reconstruct_ivp_rl(const LinearSpline& y, const RlIvp& p);

/// Green's function of D_*^q with the Robin conditions above on [0, 1].
[[nodiscard]] double green_function(double q, double a, double b, double t, double s);

/// Affine part [(A(1-t)+B)η_1 + (At-B)η_2] / A².
[[nodiscard]] double boundary_affine(double a, double b, double eta1, double eta2, double t);

/// Solution of the linear problem D_*^q x = v via the Green's representation.
[[nodiscard]] SolutionFunction bvp_linear_solve(double q, double a, double b, double eta1, double eta2,
                                                const LinearSpline& v);

[[nodiscard]] IntegralEquation reduce_bvp(const CaputoBvp& p);
[[nodiscard]] SolutionFunction reconstruct_bvp(const LinearSpline& y, const CaputoBvp& p);

}  // namespace fracol
