#include "fracol/problem_transform.hpp"

#include "fracol/compensated_sum.hpp"
#include "fracol/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fracol {

namespace {

void require(bool condition, const std::string& message) {
    if (!condition) throw InvalidProblem(message);
}

void require_descending(double top, const std::vector<double>& orders, double floor, const char* what) {
    double previous = top;
    for (std::size_t i = 0; i < orders.size(); ++i) {
        require(std::isfinite(orders[i]) && orders[i] < previous,
                std::string(what) + ": order chain not strictly descending at entry " + std::to_string(i + 1));
        previous = orders[i];
    }
    if (!orders.empty()) {
        require(orders.back() > floor, std::string(what) + ": smallest order must exceed " + std::to_string(floor));
    }
}

void require_arity(const RhsFunction& rhs, std::size_t m, const char* what) {
    require(rhs.arity() == m, std::string(what) + ": rhs arity " + std::to_string(rhs.arity()) +
                                  " does not match " + std::to_string(m) + " derivative orders");
}

// ∫_0^upper (c - s)^e v(s) ds for upper <= c, exact on each linear piece.
double kernel_integral(const LinearSpline& v, double c, double e, double upper) {
    const auto& grid = v.grid();
    const double h = grid.step();
    const auto y = v.values();
    CompensatedSum acc;
    for (std::size_t j = 0; j < grid.intervals(); ++j) {
        const double lo = grid.node(j);
        if (lo >= upper) break;
        const double hi = std::min(grid.node(j + 1), upper);
        const double slope = (y[j + 1] - y[j]) / h;
        const double far = c - lo;
        const double near = std::max(c - hi, 0.0);
        const double f1 = (std::pow(far, e + 1.0) - std::pow(near, e + 1.0)) / (e + 1.0);
        const double f2 = (std::pow(far, e + 2.0) - std::pow(near, e + 2.0)) / (e + 2.0);
        acc += (y[j] + slope * far) * f1 - slope * f2;
    }
    return acc.value();
}

double nonlocal_coefficient_1(const SolutionFunction::BoundaryData& d, double t) {
    return (d.b - d.a * t) / (d.a * gamma_fn(d.q));
}

double nonlocal_coefficient_2(const SolutionFunction::BoundaryData& d, double t) {
    return d.b * (d.b - d.a * t) / (d.a * d.a * gamma_fn(d.q - 1.0));
}

void require_unit_interval(const LinearSpline& y) {
    if (y.grid().horizon() != 1.0) throw InvalidProblem("boundary-value splines must live on [0, 1]");
}

SolutionFunction::BoundaryData boundary_data(const CaputoBvp& p) { return {p.q, p.a, p.b, p.eta1, p.eta2}; }

}  // namespace

void validate(const CaputoIvp& p) {
    require(std::isfinite(p.alpha) && p.alpha > 0.0, "ivp_caputo: alpha must be positive");
    require(std::isfinite(p.horizon) && p.horizon > 0.0, "ivp_caputo: horizon T must be positive");
    require(p.initial.order() == ceil_order(p.alpha),
            "ivp_caputo: expected " + std::to_string(ceil_order(p.alpha)) + " initial values, got " +
                std::to_string(p.initial.order()));
    require_descending(p.alpha, p.orders, 0.0, "ivp_caputo");
    require_arity(p.rhs, p.orders.size(), "ivp_caputo");
}

void validate(const RlIvp& p) {
    require(p.alpha > 0.0 && p.alpha < 1.0, "ivp_rl: alpha must lie in (0, 1)");
    require(std::isfinite(p.horizon) && p.horizon > 0.0, "ivp_rl: horizon T must be positive");
    require_descending(p.alpha, p.orders, 0.0, "ivp_rl");
    require_arity(p.rhs, p.orders.size(), "ivp_rl");
}

void validate(const CaputoBvp& p) {
    require(p.q > 1.0 && p.q <= 2.0, "bvp: q must lie in (1, 2]");
    require(p.a != 0.0 && std::isfinite(p.a), "bvp: boundary coefficient A must be nonzero");
    require(std::isfinite(p.b) && std::isfinite(p.eta1) && std::isfinite(p.eta2), "bvp: boundary data must be finite");
    require_descending(p.q, p.orders, 1.0, "bvp");
    require_arity(p.rhs, p.orders.size(), "bvp");
}

bool IntegralEquation::has_nonlocal_terms() const noexcept {
    return std::any_of(arguments.begin(), arguments.end(), [](const auto& a) { return !a.nonlocal.empty(); });
}

SolutionFunction::SolutionFunction(LinearSpline y, Rule rule) : y_(std::move(y)), rule_(std::move(rule)) {
    if (!std::holds_alternative<IvpRule>(rule_)) require_unit_interval(y_);
}

double SolutionFunction::operator()(double t) const {
    if (const auto* ivp = std::get_if<IvpRule>(&rule_)) {
        const double integral = frac_integral_at(y_, ivp->alpha, t);
        return ivp->initial ? integral + initial_polynomial(*ivp->initial, t) : integral;
    }
    if (const auto* m = std::get_if<MomentRule>(&rule_)) {
        const auto& d = m->data;
        return frac_integral_at(y_, d.q, t) + nonlocal_coefficient_1(d, t) * m->phi1 +
               nonlocal_coefficient_2(d, t) * m->phi2 + boundary_affine(d.a, d.b, d.eta1, d.eta2, t);
    }
    const auto& d = std::get<GreenRule>(rule_).data;
    // Split ∫ G(t,s) v(s) ds by the kernel's three power factors.
    const double local = kernel_integral(y_, t, d.q - 1.0, t) / gamma_fn(d.q);
    const double far1 = kernel_integral(y_, 1.0, d.q - 1.0, 1.0);
    const double far2 = kernel_integral(y_, 1.0, d.q - 2.0, 1.0);
    return local + (d.b - d.a * t) * far1 / (d.a * gamma_fn(d.q)) +
           d.b * (d.b - d.a * t) * far2 / (d.a * d.a * gamma_fn(d.q - 1.0)) +
           boundary_affine(d.a, d.b, d.eta1, d.eta2, t);
}

double SolutionFunction::derivative(double t) const {
    if (std::holds_alternative<IvpRule>(rule_)) {
        throw DomainError("SolutionFunction::derivative is only available for boundary-value solutions");
    }
    if (const auto* m = std::get_if<MomentRule>(&rule_)) {
        const auto& d = m->data;
        return frac_integral_derivative_at(y_, d.q, t) - m->phi1 / gamma_fn(d.q) -
               d.b * m->phi2 / (d.a * gamma_fn(d.q - 1.0)) + (d.eta2 - d.eta1) / d.a;
    }
    const auto& d = std::get<GreenRule>(rule_).data;
    const double local = (d.q - 1.0) * kernel_integral(y_, t, d.q - 2.0, t) / gamma_fn(d.q);
    const double far1 = kernel_integral(y_, 1.0, d.q - 1.0, 1.0);
    const double far2 = kernel_integral(y_, 1.0, d.q - 2.0, 1.0);
    return local - far1 / gamma_fn(d.q) - d.b * far2 / (d.a * gamma_fn(d.q - 1.0)) + (d.eta2 - d.eta1) / d.a;
}

BoundaryResiduals SolutionFunction::boundary_residuals() const {
    const SolutionFunction::BoundaryData* d = nullptr;
    if (const auto* m = std::get_if<MomentRule>(&rule_)) d = &m->data;
    if (const auto* g = std::get_if<GreenRule>(&rule_)) d = &g->data;
    if (!d) throw DomainError("boundary residuals are only defined for boundary-value solutions");
    return {std::abs(d->a * (*this)(0.0) + d->b * derivative(0.0) - d->eta1),
            std::abs(d->a * (*this)(1.0) + d->b * derivative(1.0) - d->eta2)};
}

IntegralEquation reduce_ivp_caputo(const CaputoIvp& p) {
    validate(p);
    IntegralEquation eq{p.horizon, {}, p.rhs, {}};
    eq.arguments.push_back({p.alpha, [data = p.initial](double t) { return initial_polynomial(data, t); }, {}});
    for (const double order : p.orders) {
        const std::size_t n_i = ceil_order(order);
        eq.arguments.push_back({p.alpha - order,
                                [order, n_i, data = p.initial](double t) {
                                    return caputo_tail_derivative(order, n_i, data, t);
                                },
                                {}});
    }
    eq.reconstruct = [p](const LinearSpline& y) { return reconstruct_ivp(y, p); };
    return eq;
}

SolutionFunction reconstruct_ivp(const LinearSpline& y, const CaputoIvp& p) {
    return {y, SolutionFunction::IvpRule{p.alpha, p.initial}};
}

IntegralEquation reduce_ivp_rl(const RlIvp& p) {
    validate(p);
    const auto zero = [](double) { return 0.0; };
    IntegralEquation eq{p.horizon, {}, p.rhs, {}};
    eq.arguments.push_back({p.alpha, zero, {}});
    for (const double order : p.orders) eq.arguments.push_back({p.alpha - order, zero, {}});
    eq.reconstruct = [p](const LinearSpline& y) { return reconstruct_ivp_rl(y, p); };
    return eq;
}

SolutionFunction reconstruct_ivp_rl(const LinearSpline& y, const RlIvp& p) {
    return {y, SolutionFunction::IvpRule{p.alpha, std::nullopt}};
}

double green_function(double q, double a, double b, double t, double s) {
    if (a == 0.0) throw DomainError("green_function: A must be nonzero");
    if (!(q > 1.0 && q <= 2.0)) throw DomainError("green_function: q must lie in (1, 2]");
    if (!(t >= 0.0 && t <= 1.0 && s >= 0.0 && s <= 1.0)) throw DomainError("green_function: t, s must lie in [0, 1]");
    const double lever = b - a * t;
    double value = lever * std::pow(1.0 - s, q - 1.0) / (a * gamma_fn(q));
    const double singular_weight = b * lever / (a * a * gamma_fn(q - 1.0));
    if (singular_weight != 0.0) {
        if (s == 1.0 && q < 2.0) throw DomainError("green_function: kernel is singular at s = 1");
        value += singular_weight * std::pow(1.0 - s, q - 2.0);
    }
    if (s <= t) value += std::pow(t - s, q - 1.0) / gamma_fn(q);
    return value;
}

double boundary_affine(double a, double b, double eta1, double eta2, double t) {
    return ((a * (1.0 - t) + b) * eta1 + (a * t - b) * eta2) / (a * a);
}

SolutionFunction bvp_linear_solve(double q, double a, double b, double eta1, double eta2, const LinearSpline& v) {
    if (a == 0.0) throw InvalidProblem("bvp: boundary coefficient A must be nonzero");
    if (!(q > 1.0 && q <= 2.0)) throw InvalidProblem("bvp: q must lie in (1, 2]");
    return {v, SolutionFunction::GreenRule{{q, a, b, eta1, eta2}}};
}

IntegralEquation reduce_bvp(const CaputoBvp& p) {
    validate(p);
    const auto data = boundary_data(p);
    IntegralEquation eq{1.0, {}, p.rhs, {}};
    EquationArgument state{p.q,
                           [data](double t) { return boundary_affine(data.a, data.b, data.eta1, data.eta2, t); },
                           {}};
    state.nonlocal.push_back({[data](double t) { return nonlocal_coefficient_1(data, t); }, p.q});
    state.nonlocal.push_back({[data](double t) { return nonlocal_coefficient_2(data, t); }, p.q - 1.0});
    eq.arguments.push_back(std::move(state));
    // Caputo orders above 1 annihilate the affine and nonlocal parts of x.
    for (const double order : p.orders) eq.arguments.push_back({p.q - order, [](double) { return 0.0; }, {}});
    eq.reconstruct = [p](const LinearSpline& y) { return reconstruct_bvp(y, p); };
    return eq;
}

SolutionFunction reconstruct_bvp(const LinearSpline& y, const CaputoBvp& p) {
    require_unit_interval(y);
    return {y, SolutionFunction::MomentRule{boundary_data(p), spline_moment(y, p.q), spline_moment(y, p.q - 1.0)}};
}

}  // namespace fracol
