#include "fracol/fractional_kernel.hpp"

#include "fracol/error.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace fracol {

namespace {

// Godfrey's coefficients for g = 607/128, 15 terms.
constexpr double kLanczosG = 607.0 / 128.0;
constexpr std::array<double, 15> kLanczosCoeffs = {
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
};

constexpr int kMaxFactorialArg = 171;

const std::array<double, kMaxFactorialArg>& factorial_table() {
    static const std::array<double, kMaxFactorialArg> table = [] {
        std::array<double, kMaxFactorialArg> f{};
        f[0] = 1.0;
        for (int k = 1; k < kMaxFactorialArg; ++k) f[k] = f[k - 1] * k;
        return f;
    }();
    return table;
}

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

// Γ(x) for x >= 1/2.
double lanczos_gamma(double x) {
    const double z = x - 1.0;
    double sum = kLanczosCoeffs[0];
    for (std::size_t i = 1; i < kLanczosCoeffs.size(); ++i) {
        sum += kLanczosCoeffs[i] / (z + static_cast<double>(i));
    }
    const double t = z + kLanczosG + 0.5;
    // Split the power so large arguments do not overflow before exp(-t) lands.
    const double half = std::pow(t, 0.5 * (z + 0.5));
    return std::sqrt(2.0 * std::numbers::pi) * half * (half * std::exp(-t)) * sum;
}

}  // namespace

double gamma_fn(double x) {
    if (std::isnan(x)) throw DomainError("gamma_fn: NaN argument");
    if (is_nonpositive_integer(x)) {
        throw DomainError("gamma_fn: pole at x = " + std::to_string(x));
    }
    if (x == std::floor(x) && x <= kMaxFactorialArg) {
        return factorial_table()[static_cast<std::size_t>(x) - 1];
    }
    if (x < 0.5) {
        return std::numbers::pi / (std::sin(std::numbers::pi * x) * lanczos_gamma(1.0 - x));
    }
    return lanczos_gamma(x);
}

double reciprocal_gamma(double x) {
    if (is_nonpositive_integer(x)) return 0.0;
    return 1.0 / gamma_fn(x);
}

double PowerTerm::operator()(double t) const { return coefficient * std::pow(t, exponent); }

InitialData::InitialData(std::initializer_list<double> values)
    : InitialData(std::vector<double>(values)) {}

InitialData::InitialData(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw InvalidProblem("initial data needs at least one value");
}

double frac_integral_power(double alpha, double gamma, double t) {
    if (!(alpha > 0.0)) throw DomainError("frac_integral_power: order must be positive");
    if (!(gamma > -1.0)) throw DomainError("frac_integral_power: exponent must exceed -1");
    if (!(t >= 0.0)) throw DomainError("frac_integral_power: time must be nonnegative");
    const double power = gamma + alpha;
    if (t == 0.0) {
        if (power < 0.0) throw DomainError("frac_integral_power: singular at t = 0");
        if (power > 0.0) return 0.0;
    }
    return gamma_fn(gamma + 1.0) / gamma_fn(gamma + 1.0 + alpha) * std::pow(t, power);
}

double rl_derivative_power(double alpha, double gamma, double t) {
    if (!(alpha > 0.0)) throw DomainError("rl_derivative_power: order must be positive");
    if (!(gamma > -1.0)) throw DomainError("rl_derivative_power: exponent must exceed -1");
    if (!(t >= 0.0)) throw DomainError("rl_derivative_power: time must be nonnegative");
    const double rg = reciprocal_gamma(gamma + 1.0 - alpha);
    if (rg == 0.0) return 0.0;
    const double power = gamma - alpha;
    if (t == 0.0) {
        if (power < 0.0) throw DomainError("rl_derivative_power: singular at t = 0");
        if (power > 0.0) return 0.0;
    }
    return gamma_fn(gamma + 1.0) * rg * std::pow(t, power);
}

PowerTerm frac_integral(const PowerTerm& term, double alpha) {
    if (!(alpha > 0.0)) throw DomainError("frac_integral: order must be positive");
    if (!(term.exponent > -1.0)) throw DomainError("frac_integral: exponent must exceed -1");
    const double scale = gamma_fn(term.exponent + 1.0) / gamma_fn(term.exponent + 1.0 + alpha);
    return {term.coefficient * scale, term.exponent + alpha};
}

PowerTerm rl_derivative(const PowerTerm& term, double alpha) {
    if (!(alpha > 0.0)) throw DomainError("rl_derivative: order must be positive");
    if (!(term.exponent > -1.0)) throw DomainError("rl_derivative: exponent must exceed -1");
    const double scale = gamma_fn(term.exponent + 1.0) * reciprocal_gamma(term.exponent + 1.0 - alpha);
    return {term.coefficient * scale, term.exponent - alpha};
}

double initial_polynomial(const InitialData& data, double t) {
    // Horner on x_k / k!.
    const auto x = data.values();
    double acc = 0.0;
    for (std::size_t k = x.size(); k-- > 0;) {
        acc = acc * t / static_cast<double>(k + 1) + x[k];
    }
    return acc;
}

double caputo_tail_derivative(double alpha_i, std::size_t n_i, const InitialData& data, double t) {
    if (!(alpha_i > 0.0)) throw DomainError("caputo_tail_derivative: order must be positive");
    if (ceil_order(alpha_i) != n_i) {
        throw DomainError("caputo_tail_derivative: n_i must equal ceil(alpha_i)");
    }
    const std::size_t n = data.order();
    if (n_i > n) throw DomainError("caputo_tail_derivative: n_i exceeds the number of initial values");
    double sum = 0.0;
    for (std::size_t k = n_i; k < n; ++k) {
        const double kd = static_cast<double>(k);
        if (t == 0.0 && kd < alpha_i) {
            throw DomainError("caputo_tail_derivative: singular term at t = 0");
        }
        sum += data[k] / gamma_fn(kd + 1.0) * rl_derivative_power(alpha_i, kd, t);
    }
    return sum;
}

std::size_t ceil_order(double alpha) {
    if (!(alpha > 0.0)) throw DomainError("fractional order must be positive");
    return static_cast<std::size_t>(std::ceil(alpha));
}

}  // namespace fracol
