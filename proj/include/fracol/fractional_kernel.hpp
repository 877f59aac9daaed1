#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace fracol {

/// Euler gamma function. Exact for positive integers up to 171, Lanczos
/// (g = 607/128) elsewhere, reflection below 1/2.
/// Throws DomainError at 0, -1, -2, ...
[[nodiscard]] double gamma_fn(double x);

/// 1/Γ(x), defined as 0 at the poles of Γ.
[[nodiscard]] double reciprocal_gamma(double x);

/// c · t^exponent on t >= 0. The exponent must stay above -1 so the term is
/// integrable at the origin.
struct PowerTerm {
    double coefficient = 1.0;
    double exponent = 0.0;

    [[nodiscard]] double operator()(double t) const;
};

/// Values x_0..x_{n-1} of x and its first n-1 derivatives at t = 0.
class InitialData {
public:
    InitialData(std::initializer_list<double> values);
    explicit InitialData(std::vector<double> values);

    [[nodiscard]] std::size_t order() const noexcept { return values_.size(); }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] double operator[](std::size_t k) const { return values_.at(k); }

    bool operator==(const InitialData&) const = default;

private:
    std::vector<double> values_;
};

/// I^alpha t^gamma = Γ(γ+1)/Γ(γ+1+α) · t^(γ+α).
[[nodiscard]] double frac_integral_power(double alpha, double gamma, double t);

/// Riemann-Liouville D^alpha t^gamma = Γ(γ+1)/Γ(γ+1-α) · t^(γ-α); exactly 0
/// when γ+1-α is a pole of Γ.
[[nodiscard]] double rl_derivative_power(double alpha, double gamma, double t);

/// The same two maps lifted to PowerTerm.
[[nodiscard]] PowerTerm frac_integral(const PowerTerm& term, double alpha);
[[nodiscard]] PowerTerm rl_derivative(const PowerTerm& term, double alpha);

/// Σ_{k<n} x_k t^k / k!
[[nodiscard]] double initial_polynomial(const InitialData& data, double t);

/// D^alpha_i applied to the tail Σ_{k=n_i}^{n-1} x_k t^k / k!, where
/// n_i - 1 < alpha_i <= n_i.
[[nodiscard]] double caputo_tail_derivative(double alpha_i, std::size_t n_i,
                                            const InitialData& data, double t);

/// ⌈alpha⌉ for alpha > 0, the integer n with n-1 < alpha <= n.
[[nodiscard]] std::size_t ceil_order(double alpha);

}  // namespace fracol
