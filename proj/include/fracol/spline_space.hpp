#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace fracol {

/// Uniform partition 0 = t_0 < ... < t_N = T with t_i = i·h.
class UniformGrid {
public:
    UniformGrid(double horizon, std::size_t intervals);

    [[nodiscard]] double horizon() const noexcept { return horizon_; }
    [[nodiscard]] std::size_t intervals() const noexcept { return intervals_; }
    [[nodiscard]] std::size_t node_count() const noexcept { return intervals_ + 1; }
    [[nodiscard]] double step() const noexcept { return step_; }
    [[nodiscard]] double node(std::size_t i) const;

    /// t/h, snapped to the nearest integer when within roundoff of a node.
    /// Throws DomainError outside [0, T].
    [[nodiscard]] double scaled_position(double t) const;

    bool operator==(const UniformGrid& other) const noexcept {
        return horizon_ == other.horizon_ && intervals_ == other.intervals_;
    }

private:
    double horizon_;
    std::size_t intervals_;
    double step_;
};

/// Continuous piecewise-linear function on a UniformGrid, stored by its
/// nodal values.
class LinearSpline {
public:
    LinearSpline(UniformGrid grid, std::vector<double> values);

    [[nodiscard]] const UniformGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] double value(std::size_t i) const { return values_.at(i); }

    /// Linear interpolation between the bracketing nodes; exact at nodes.
    [[nodiscard]] double operator()(double t) const;

private:
    UniformGrid grid_;
    std::vector<double> values_;
};

using ScalarFunction = std::function<double(double)>;

/// P_N f: the spline that interpolates f at every node.
[[nodiscard]] LinearSpline interpolate(const ScalarFunction& f, const UniformGrid& grid);

[[nodiscard]] inline double eval(const LinearSpline& s, double t) { return s(t); }

/// Unscaled product-trapezoid coefficients for one order alpha. Row i of the
/// weight matrix is h^α/Γ(α+2) · [start(i), interior(i-1), ..., interior(0)].
class WeightTable {
public:
    WeightTable(double alpha, std::size_t rows);

    [[nodiscard]] double alpha() const noexcept { return alpha_; }
    [[nodiscard]] std::size_t rows() const noexcept { return interior_.size(); }

    /// Coefficient of y_j in row i (0 <= j <= i, i >= 1), without the h^α/Γ(α+2) factor.
    [[nodiscard]] double coefficient(std::size_t i, std::size_t j) const {
        return j == 0 ? start_[i] : interior_[i - j];
    }

    /// h^α / Γ(α+2).
    [[nodiscard]] double scale(double step) const;

private:
    double alpha_;
    double inv_gamma_alpha_2_;
    std::vector<double> interior_;
    std::vector<double> start_;
};

/// Shared, thread-safe cache of weight tables keyed by order. The returned
/// table has at least `rows` rows.
[[nodiscard]] std::shared_ptr<const WeightTable> weight_table(double alpha, std::size_t rows);

/// Weights w_{i,0..i} with I^α y(t_i) = Σ_j w_{i,j} y_j for every spline y on
/// a grid of step h. Row 0 is empty.
[[nodiscard]] std::vector<double> frac_integral_weights(double alpha, std::size_t i, double step);

/// I^α s at every node (entry 0 is 0).
[[nodiscard]] std::vector<double> frac_integral_at_nodes(const LinearSpline& s, double alpha);

/// I^α s at an arbitrary t in [0, T], exact for the piecewise-linear s.
[[nodiscard]] double frac_integral_at(const LinearSpline& s, double alpha, double t);

/// d/dt I^α s at t, i.e. I^(α-1) s for α > 1.
[[nodiscard]] double frac_integral_derivative_at(const LinearSpline& s, double alpha, double t);

/// ∫_0^T (T - τ)^(μ-1) s(τ) dτ, computed exactly as Γ(μ) · I^μ s(T).
[[nodiscard]] double spline_moment(const LinearSpline& s, double mu);

/// Sampled estimate (from below) of ω(f, h) = sup |f(t+d) - f(t)|, |d| <= h,
/// on an M-point uniform sample of [0, T].
[[nodiscard]] double modulus_of_continuity(const ScalarFunction& f, double horizon, double h,
                                           std::size_t samples);

namespace detail {

/// (x+1)_+^p - 2 x_+^p + (x-1)_+^p, with a binomial series for large x.
double second_difference(double p, double x);

/// p s^(p-1) - s^p + (s-1)_+^p, the left-end hat response.
double start_response(double p, double s);

}  // namespace detail

}  // namespace fracol
