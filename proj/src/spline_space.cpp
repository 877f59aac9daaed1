#include "fracol/spline_space.hpp"

#include "fracol/compensated_sum.hpp"
#include "fracol/error.hpp"
#include "fracol/fractional_kernel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <string>

namespace fracol {

namespace {

// Beyond this distance the closed-form differences lose more digits to
// cancellation than the binomial series needs terms.
constexpr double kSeriesThreshold = 16.0;
constexpr int kMaxSeriesTerms = 80;

double positive_power(double x, double p) { return x > 0.0 ? std::pow(x, p) : 0.0; }

void require_order(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw DomainError("fractional order must be positive and finite");
    }
}

}  // namespace

namespace detail {

double second_difference(double p, double x) {
    if (x <= -1.0) return 0.0;
    if (x < kSeriesThreshold) {
        return positive_power(x + 1.0, p) - 2.0 * positive_power(x, p) + positive_power(x - 1.0, p);
    }
    // 2 Σ_{m>=1} C(p, 2m) x^(p-2m)
    double binom = 1.0;  // C(p, r)
    double sum = 0.0;
    for (int r = 0; r < 2 * kMaxSeriesTerms; ++r) {
        binom *= (p - r) / (r + 1.0);
        if ((r + 1) % 2 != 0) continue;
        const double term = binom * std::pow(x, p - (r + 1));
        sum += term;
        if (term == 0.0 || std::abs(term) <= 1e-18 * std::abs(sum)) break;
    }
    return 2.0 * sum;
}

double start_response(double p, double s) {
    if (s <= 0.0) return 0.0;
    if (s < kSeriesThreshold) {
        return p * std::pow(s, p - 1.0) - std::pow(s, p) + positive_power(s - 1.0, p);
    }
    // s^p [(1 - 1/s)^p - 1 + p/s] = Σ_{r>=2} C(p, r) (-1)^r s^(p-r)
    double binom = p * (p - 1.0) / 2.0;
    double sum = 0.0;
    for (int r = 2; r < kMaxSeriesTerms + 2; ++r) {
        const double term = (r % 2 == 0 ? binom : -binom) * std::pow(s, p - r);
        sum += term;
        if (term == 0.0 || std::abs(term) <= 1e-18 * std::abs(sum)) break;
        binom *= (p - r) / (r + 1.0);
    }
    return sum;
}

}  // namespace detail

UniformGrid::UniformGrid(double horizon, std::size_t intervals)
    : horizon_(horizon), intervals_(intervals), step_(horizon / static_cast<double>(intervals)) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw DomainError("grid horizon must be positive and finite");
    }
    if (intervals < 1) throw DomainError("grid needs at least one subinterval");
}

double UniformGrid::node(std::size_t i) const {
    if (i > intervals_) throw DomainError("grid node index out of range");
    return i == intervals_ ? horizon_ : static_cast<double>(i) * step_;
}

double UniformGrid::scaled_position(double t) const {
    const double slack = 1e-12 * horizon_;
    if (!(t >= -slack && t <= horizon_ + slack)) {
        throw DomainError("time " + std::to_string(t) + " outside [0, " + std::to_string(horizon_) + "]");
    }
    const double n = static_cast<double>(intervals_);
    double s = std::clamp(t / step_, 0.0, n);
    const double r = std::round(s);
    if (std::abs(s - r) <= 1e-12 * std::max(1.0, s)) s = r;
    return s;
}

LinearSpline::LinearSpline(UniformGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.node_count()) {
        throw DomainError("spline needs one value per grid node");
    }
}

double LinearSpline::operator()(double t) const {
    const double s = grid_.scaled_position(t);
    const double floor_s = std::floor(s);
    const auto i = static_cast<std::size_t>(floor_s);
    if (s == floor_s) return values_[i];
    const double theta = s - floor_s;
    return (1.0 - theta) * values_[i] + theta * values_[i + 1];
}

LinearSpline interpolate(const ScalarFunction& f, const UniformGrid& grid) {
    std::vector<double> values(grid.node_count());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = f(grid.node(i));
    return {grid, std::move(values)};
}

WeightTable::WeightTable(double alpha, std::size_t rows)
    : alpha_(alpha), inv_gamma_alpha_2_(1.0 / gamma_fn(alpha + 2.0)), interior_(rows), start_(rows) {
    require_order(alpha);
    const double p = alpha + 1.0;
    for (std::size_t k = 0; k < rows; ++k) {
        const double x = static_cast<double>(k);
        interior_[k] = detail::second_difference(p, x);
        start_[k] = detail::start_response(p, x);
    }
}

double WeightTable::scale(double step) const { return std::pow(step, alpha_) * inv_gamma_alpha_2_; }

std::shared_ptr<const WeightTable> weight_table(double alpha, std::size_t rows) {
    static std::mutex mutex;
    static std::map<std::uint64_t, std::shared_ptr<const WeightTable>> cache;
    require_order(alpha);
    const auto key = std::bit_cast<std::uint64_t>(alpha);
    const std::lock_guard lock(mutex);
    auto& slot = cache[key];
    if (!slot || slot->rows() < rows) {
        // Grow geometrically so refinement studies do not rebuild every level.
        const std::size_t target = std::max(rows, slot ? 2 * slot->rows() : rows);
        slot = std::make_shared<const WeightTable>(alpha, target);
    }
    return slot;
}

std::vector<double> frac_integral_weights(double alpha, std::size_t i, double step) {
    if (i == 0) return {};
    const auto table = weight_table(alpha, i + 1);
    const double c = table->scale(step);
    std::vector<double> w(i + 1);
    for (std::size_t j = 0; j <= i; ++j) w[j] = c * table->coefficient(i, j);
    return w;
}

std::vector<double> frac_integral_at_nodes(const LinearSpline& s, double alpha) {
    const auto& grid = s.grid();
    const std::size_t n = grid.node_count();
    const auto table = weight_table(alpha, n);
    const double c = table->scale(grid.step());
    const auto y = s.values();
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        CompensatedSum acc;
        acc += table->coefficient(i, 0) * y[0];
        for (std::size_t j = 1; j <= i; ++j) acc += table->coefficient(i, j) * y[j];
        out[i] = c * acc.value();
    }
    return out;
}

double frac_integral_at(const LinearSpline& s, double alpha, double t) {
    require_order(alpha);
    const auto& grid = s.grid();
    const double pos = grid.scaled_position(t);
    if (pos == 0.0) return 0.0;
    const double p = alpha + 1.0;
    const auto y = s.values();
    // Hats centred beyond t + h contribute nothing.
    const auto last = std::min(grid.intervals(), static_cast<std::size_t>(std::ceil(pos)));
    CompensatedSum acc;
    acc += detail::start_response(p, pos) * y[0];
    for (std::size_t j = 1; j <= last; ++j) {
        acc += detail::second_difference(p, pos - static_cast<double>(j)) * y[j];
    }
    return std::pow(grid.step(), alpha) / gamma_fn(alpha + 2.0) * acc.value();
}

double frac_integral_derivative_at(const LinearSpline& s, double alpha, double t) {
    if (alpha == 1.0) return s(t);
    if (!(alpha > 1.0)) throw DomainError("frac_integral_derivative_at: order must be at least 1");
    return frac_integral_at(s, alpha - 1.0, t);
}

double spline_moment(const LinearSpline& s, double mu) {
    require_order(mu);
    return gamma_fn(mu) * frac_integral_at(s, mu, s.grid().horizon());
}

double modulus_of_continuity(const ScalarFunction& f, double horizon, double h, std::size_t samples) {
    if (samples < 2) throw DomainError("modulus_of_continuity needs at least two samples");
    if (!(horizon > 0.0)) throw DomainError("modulus_of_continuity: horizon must be positive");
    const double spacing = horizon / static_cast<double>(samples - 1);
    std::vector<double> values(samples);
    for (std::size_t k = 0; k < samples; ++k) {
        values[k] = f(k + 1 == samples ? horizon : static_cast<double>(k) * spacing);
    }
    const double reach = h * (1.0 + 1e-12);
    double omega = 0.0;
    for (std::size_t k = 0; k < samples; ++k) {
        for (std::size_t l = k + 1; l < samples && static_cast<double>(l - k) * spacing <= reach; ++l) {
            omega = std::max(omega, std::abs(values[l] - values[k]));
        }
    }
    return omega;
}

}  // namespace fracol
