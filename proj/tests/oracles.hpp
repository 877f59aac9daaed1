#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the library's fractional machinery: integrals go through boost's
// tanh-sinh quadrature and gamma values through std::tgamma.

#include "fracol/spline_space.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

inline double gamma(double x) { return std::tgamma(x); }

// (1/Γ(α)) ∫_a^b (t-τ)^(α-1) f(τ) dτ with b <= t. tanh-sinh tolerates the
// endpoint singularities; the complement argument keeps t-τ accurate near b.
inline double weighted_segment(const std::function<double(double)>& f, double alpha, double t, double a,
                               double b) {
    if (b <= a) return 0.0;
    thread_local boost::math::quadrature::tanh_sinh<double> rule(15);
    auto integrand = [&](double tau, double tau_c) {
        double dist = t - tau;
        if (b == t && tau_c > 0.0) dist = tau_c;
        if (dist <= 0.0) return 0.0;
        return std::pow(dist, alpha - 1.0) * f(tau);
    };
    return rule.integrate(integrand, a, b, 1e-15) / std::tgamma(alpha);
}

// I^α f(t) for f smooth on (0, t), possibly with an integrable power
// singularity at 0.
inline double frac_integral(const std::function<double(double)>& f, double alpha, double t) {
    if (t == 0.0) return 0.0;
    return weighted_segment(f, alpha, t, 0.0, t);
}

// I^α f(t) with f(t) split off: f(t) t^α/Γ(α+1) + (1/Γ(α)) ∫ (t-τ)^(α-1) (f(τ) - f(t)) dτ.
// For small α the kernel is nearly non-integrable and the plain rule loses
// digits; the remainder integrand here vanishes at τ = t.
inline double frac_integral_subtracted(const std::function<double(double)>& f, double alpha, double t) {
    if (t == 0.0) return 0.0;
    const double ft = f(t);
    const double rest = weighted_segment([&](double tau) { return f(tau) - ft; }, alpha, t, 0.0, t);
    return ft * std::pow(t, alpha) / std::tgamma(alpha + 1.0) + rest;
}

// I^α of a piecewise-linear function given by nodal values on a uniform
// grid, integrated one segment at a time so every integrand is smooth
// inside its segment.
inline double spline_frac_integral(const std::vector<double>& values, double horizon, double alpha, double t) {
    const std::size_t n = values.size() - 1;
    const double h = horizon / static_cast<double>(n);
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double a = h * static_cast<double>(j);
        if (a >= t) break;
        const double b = std::min(h * static_cast<double>(j + 1), t);
        const double y0 = values[j];
        const double y1 = values[j + 1];
        auto piece = [=](double tau) { return y0 + (y1 - y0) * (tau - a) / h; };
        sum += weighted_segment(piece, alpha, t, a, b);
    }
    return sum;
}

// ∫_0^1 (1-s)^(μ-1) f(s) ds by quadrature.
inline double right_moment(const std::function<double(double)>& f, double mu) {
    return weighted_segment(f, mu, 1.0, 0.0, 1.0) * std::tgamma(mu);
}

// Grünwald-Letnikov approximation of the Riemann-Liouville derivative of
// order q of g at t, step d. First order accurate.
inline double grunwald_letnikov(const std::function<double(double)>& g, double q, double t, double d) {
    const auto steps = static_cast<std::size_t>(std::floor(t / d + 1e-9));
    double weight = 1.0;
    double sum = 0.0;
    for (std::size_t k = 0; k <= steps; ++k) {
        sum += weight * g(t - static_cast<double>(k) * d);
        weight *= (static_cast<double>(k) - q) / static_cast<double>(k + 1);
    }
    return sum / std::pow(d, q);
}

// Caputo derivative of order q in (1, 2] via GL applied to x minus its
// first-order Taylor polynomial at 0.
inline double caputo_gl(const std::function<double(double)>& x, double x0, double dx0, double q, double t,
                        double d) {
    return grunwald_letnikov([&](double s) { return x(s) - x0 - dx0 * s; }, q, t, d);
}

// Σ_{k<terms} t^(k/2) / Γ(k/2 + 1), evaluated directly.
inline double mittag_leffler_half(double t, std::size_t terms = 30) {
    double sum = 0.0;
    for (std::size_t k = 0; k < terms; ++k) {
        const double e = static_cast<double>(k) / 2.0;
        sum += std::pow(t, e) / std::tgamma(e + 1.0);
    }
    return sum;
}

inline double central_difference(const std::function<double(double)>& f, double t, double d) {
    return (f(t + d) - f(t - d)) / (2.0 * d);
}

// Plain sup-norm sampling on [0, T].
inline double sup_distance(const std::function<double(double)>& f, const std::function<double(double)>& g,
                           double horizon, std::size_t samples) {
    double err = 0.0;
    for (std::size_t k = 0; k <= samples; ++k) {
        const double t = horizon * static_cast<double>(k) / static_cast<double>(samples);
        err = std::max(err, std::abs(f(t) - g(t)));
    }
    return err;
}

inline std::vector<double> random_values(std::mt19937_64& rng, std::size_t count, double lo = -1.0,
                                         double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(count);
    for (auto& x : v) x = u(rng);
    return v;
}

}  // namespace oracle
