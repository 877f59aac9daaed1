#include "fracol/error.hpp"
#include "fracol/fractional_kernel.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace fracol;
using doctest::Approx;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("gamma_fn: small identities") {
    CHECK(gamma_fn(1.0) == 1.0);
    CHECK(gamma_fn(5.0) == 24.0);
    CHECK(rel(gamma_fn(0.5), std::sqrt(std::numbers::pi)) < 1e-15);
    // Exact integers all the way up.
    double f = 1.0;
    for (int n = 1; n <= 170; ++n) {
        CHECK(gamma_fn(n + 1.0) == doctest::Approx(f * n).epsilon(1e-15));
        f *= n;
    }
}

TEST_CASE("gamma_fn: frozen high-precision values") {
    struct Case {
        double x;
        double value;
    };
    // 30-digit reference values.
    const Case cases[] = {
        {0.5, 1.77245385090551602729816748334},  {1.5, 0.886226925452758013649083741671},
        {2.5, 1.32934038817913702047362561251},  {3.7, 4.17065178379660316539360299862},
        {10.1, 454760.751441585950867335836832}, {29.5, 1.63481251982742664443788078069e+30},
        {0.01, 99.4325851191506037135329888705}, {25.0, 620448401733239439360000.0},
        {-0.5, -3.54490770181103205459633496668}, {-1.5, 2.36327180120735470306422331112},
        {-2.3, -1.44710739425591726385860778055},
    };
    for (const auto& c : cases) {
        INFO("x = " << c.x);
        CHECK(rel(gamma_fn(c.x), c.value) < 1e-13);
    }
}

TEST_CASE("gamma_fn: accuracy against tgamma on (0, 30]") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(1e-3, 30.0);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const double x = u(rng);
        worst = std::max(worst, rel(gamma_fn(x), oracle::gamma(x)));
    }
    CHECK(worst < 1e-13);
}

TEST_CASE("gamma_fn: recurrence on 1000 points of (0.1, 20)") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.1, 20.0);
    for (int k = 0; k < 1000; ++k) {
        const double x = u(rng);
        INFO("x = " << x);
        REQUIRE(rel(gamma_fn(x + 1.0), x * gamma_fn(x)) < 1e-13);
    }
}

TEST_CASE("gamma_fn: poles") {
    CHECK_THROWS_AS((void)gamma_fn(0.0), DomainError);
    CHECK_THROWS_AS((void)gamma_fn(-1.0), DomainError);
    CHECK_THROWS_AS((void)gamma_fn(-7.0), DomainError);
    CHECK_THROWS_AS((void)gamma_fn(std::nan("")), DomainError);
    CHECK(reciprocal_gamma(0.0) == 0.0);
    CHECK(reciprocal_gamma(-3.0) == 0.0);
    CHECK(reciprocal_gamma(4.0) == Approx(1.0 / 6.0));
}

TEST_CASE("frac_integral_power: examples") {
    for (double t : {0.0, 0.3, 1.0, 2.5}) CHECK(frac_integral_power(1.0, 1.0, t) == Approx(t * t / 2).epsilon(1e-15));
    // Quadrature values, 30 digits.
    CHECK(rel(frac_integral_power(0.5, 0.0, 1.0), 1.1283791670955125659319570258) < 1e-14);
    CHECK(rel(frac_integral_power(0.5, 0.5, 4.0), 3.54490770181103202273952745739) < 1e-14);
    CHECK_THROWS_AS((void)frac_integral_power(0.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS((void)frac_integral_power(0.5, -1.0, 1.0), DomainError);
    CHECK_THROWS_AS((void)frac_integral_power(0.5, 1.0, -0.1), DomainError);
}

TEST_CASE("frac_integral_power: live quadrature on random triples") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> ua(0.05, 3.0);
    std::uniform_real_distribution<double> ug(-0.9, 4.0);
    std::uniform_real_distribution<double> ut(0.0, 2.0);
    for (int k = 0; k < 50; ++k) {
        const double a = ua(rng), g = ug(rng), t = ut(rng);
        INFO("alpha=" << a << " gamma=" << g << " t=" << t);
        const double ref = oracle::frac_integral([g](double s) { return std::pow(s, g); }, a, t);
        CHECK(std::abs(frac_integral_power(a, g, t) - ref) < 1e-8);
    }
}

TEST_CASE("rl_derivative_power: examples") {
    for (double t : {0.1, 0.5, 2.0}) {
        CHECK(rl_derivative_power(0.5, 1.0, t) == Approx(std::sqrt(t) / oracle::gamma(1.5)).epsilon(1e-14));
        CHECK(rl_derivative_power(1.0, 2.0, t) == Approx(2.0 * t).epsilon(1e-15));
    }
    CHECK(rl_derivative_power(0.5, -0.5, 1.0) == 0.0);
    CHECK(rl_derivative_power(1.5, 0.5, 3.0) == 0.0);
    CHECK(rl_derivative_power(2.0, 1.0, 0.7) == 0.0);
    CHECK_THROWS_AS((void)rl_derivative_power(0.8, 0.3, 0.0), DomainError);
    CHECK(rl_derivative_power(0.5, 1.0, 0.0) == 0.0);
}

TEST_CASE("rl_derivative_power: d/dt of I^(1-a) by central differences") {
    // D^a t^g = d/dt I^(1-a) t^g, with the integral from quadrature.
    const double a = 0.5, g = 1.0, t = 0.7, d = 1e-4;
    auto integral = [&](double s) { return oracle::frac_integral([g](double u) { return std::pow(u, g); }, 1 - a, s); };
    CHECK(rl_derivative_power(a, g, t) == Approx(oracle::central_difference(integral, t, d)).epsilon(1e-7));
}

TEST_CASE("power calculus invariants") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ua(0.05, 2.5);
    std::uniform_real_distribution<double> ug(-0.9, 3.0);
    std::uniform_real_distribution<double> ut(0.01, 3.0);
    for (int k = 0; k < 500; ++k) {
        const double a = ua(rng), b = ua(rng), g = ug(rng), t = ut(rng);
        const PowerTerm term{1.7, g};
        INFO("a=" << a << " b=" << b << " g=" << g << " t=" << t);
        const auto ab = frac_integral(frac_integral(term, a), b);
        const auto ba = frac_integral(frac_integral(term, b), a);
        const auto once = frac_integral(term, a + b);
        CHECK(rel(ab(t), once(t)) < 1e-12);
        CHECK(rel(ab(t), ba(t)) < 1e-12);
        const auto back = rl_derivative(frac_integral(term, a), a);
        CHECK(rel(back(t), term(t)) < 1e-12);
        if (g >= 0) CHECK(frac_integral_power(a, g, 0.0) == 0.0);
    }
}

TEST_CASE("initial_polynomial") {
    CHECK(initial_polynomial({1.0}, 5.0) == 1.0);
    CHECK(initial_polynomial({1.0, 2.0}, 3.0) == 7.0);
    CHECK(initial_polynomial({0.0, 0.0, 4.0}, 2.0) == 8.0);
    CHECK(initial_polynomial({1.0, -1.0, 2.0, 6.0}, 0.5) == Approx(1.0 - 0.5 + 0.25 + 0.125));
    CHECK_THROWS_AS(InitialData(std::vector<double>{}), InvalidProblem);
}

TEST_CASE("caputo_tail_derivative") {
    const InitialData data{7.0, 2.0};
    CHECK(caputo_tail_derivative(1.5, 2, data, 0.4) == 0.0);
    // D_*^0.5 (2t) at t = 0.64 is 2·0.8/Γ(1.5) = 1.80540666...
    CHECK(caputo_tail_derivative(0.5, 1, data, 0.64) == Approx(1.80540666735282011823).epsilon(1e-14));
    CHECK(caputo_tail_derivative(1.0, 1, InitialData{0.0, 3.0}, 0.9) == Approx(3.0).epsilon(1e-15));
    // Cross-check with the Caputo definition I^(1-a) of the derivative.
    const double t = 0.37;
    const double ref = oracle::frac_integral([](double) { return 2.0; }, 0.5, t);
    CHECK(caputo_tail_derivative(0.5, 1, data, t) == Approx(ref).epsilon(1e-10));
    CHECK(caputo_tail_derivative(0.5, 1, data, 0.0) == 0.0);
}

TEST_CASE("ceil_order") {
    CHECK(ceil_order(0.3) == 1);
    CHECK(ceil_order(1.0) == 1);
    CHECK(ceil_order(1.0000001) == 2);
    CHECK(ceil_order(2.0) == 2);
    CHECK_THROWS_AS((void)ceil_order(0.0), DomainError);
}
