#include "fracol/error.hpp"
#include "fracol/problem_transform.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace fracol;
using doctest::Approx;

namespace {

// z_j(t) assembled the way the solver does it.
double argument_value(const EquationArgument& arg, const LinearSpline& y, double t) {
    double v = arg.forcing(t) + frac_integral_at(y, arg.order, t);
    for (const auto& term : arg.nonlocal) v += term.coefficient(t) * spline_moment(y, term.moment_order);
    return v;
}

CaputoBvp make_bvp(double q, double a, double b, double e1, double e2, std::vector<double> orders = {}) {
    const std::size_t m = orders.size();
    return CaputoBvp{q, std::move(orders), a, b, e1, e2, RhsFunction("0", m)};
}

}  // namespace

TEST_CASE("validate: structural invariants") {
    CHECK_NOTHROW(validate(CaputoIvp{0.5, {}, InitialData{1.0}, 1.0, RhsFunction("x", 0)}));
    CHECK_THROWS_AS(validate(CaputoIvp{1.5, {}, InitialData{1.0}, 1.0, RhsFunction("x", 0)}), InvalidProblem);
    CHECK_THROWS_AS(validate(CaputoIvp{1.2, {0.5, 0.7}, InitialData{1.0, 0.0}, 1.0, RhsFunction("x", 2)}),
                    InvalidProblem);
    CHECK_THROWS_AS(validate(CaputoIvp{1.2, {1.2}, InitialData{1.0, 0.0}, 1.0, RhsFunction("x", 1)}), InvalidProblem);
    CHECK_THROWS_AS(validate(CaputoIvp{0.5, {0.2}, InitialData{1.0}, 1.0, RhsFunction("x", 0)}), InvalidProblem);
    CHECK_THROWS_AS(validate(CaputoIvp{0.5, {}, InitialData{1.0}, 0.0, RhsFunction("x", 0)}), InvalidProblem);
    CHECK_THROWS_AS(validate(RlIvp{1.2, {}, 1.0, RhsFunction("x", 0)}), InvalidProblem);
    CHECK_THROWS_AS(validate(RlIvp{0.5, {0.6}, 1.0, RhsFunction("x", 1)}), InvalidProblem);
    CHECK_NOTHROW(validate(make_bvp(2.0, 1.0, 0.0, 0.0, 0.0)));
    CHECK_THROWS_AS(validate(make_bvp(1.5, 0.0, 1.0, 0.0, 0.0)), InvalidProblem);
    CHECK_THROWS_AS(validate(make_bvp(2.5, 1.0, 0.0, 0.0, 0.0)), InvalidProblem);
    CHECK_THROWS_AS(validate(make_bvp(1.0, 1.0, 0.0, 0.0, 0.0)), InvalidProblem);
    CHECK_THROWS_AS(validate(make_bvp(1.5, 1.0, 0.0, 0.0, 0.0, {0.9})), InvalidProblem);
    CHECK_THROWS_AS((void)reduce_bvp(make_bvp(1.5, 0.0, 1.0, 0.0, 0.0)), InvalidProblem);
}

TEST_CASE("reduce_ivp_caputo: forcing terms") {
    const auto eq0 = reduce_ivp_caputo(CaputoIvp{0.5, {}, InitialData{0.0}, 1.0, RhsFunction("x", 0)});
    REQUIRE(eq0.arguments.size() == 1);
    CHECK(eq0.arguments[0].order == 0.5);
    for (double t : {0.0, 0.3, 1.0}) CHECK(eq0.arguments[0].forcing(t) == 0.0);
    CHECK_FALSE(eq0.has_nonlocal_terms());

    const auto eq1 = reduce_ivp_caputo(CaputoIvp{1.5, {0.5}, InitialData{1.0, 2.0}, 2.0, RhsFunction("x + d1", 1)});
    REQUIRE(eq1.arguments.size() == 2);
    CHECK(eq1.arguments[0].order == 1.5);
    CHECK(eq1.arguments[1].order == Approx(1.0));
    CHECK(eq1.arity() == 1);
    for (double t : {0.1, 0.64, 1.9}) {
        CHECK(eq1.arguments[0].forcing(t) == Approx(1 + 2 * t).epsilon(1e-15));
        CHECK(eq1.arguments[1].forcing(t) == Approx(2 * std::sqrt(t) / oracle::gamma(1.5)).epsilon(1e-14));
        // Caputo derivative of 1 + 2t as I^0.5 of its derivative, by quadrature.
        const double ref = oracle::frac_integral([](double) { return 2.0; }, 0.5, t);
        CHECK(eq1.arguments[1].forcing(t) == Approx(ref).epsilon(1e-10));
    }

    const auto eq2 = reduce_ivp_caputo(CaputoIvp{2.0, {1.0}, InitialData{0.3, -0.7}, 1.0, RhsFunction("d1", 1)});
    for (double t : {0.0, 0.25, 1.0}) CHECK(eq2.arguments[1].forcing(t) == -0.7);
}

TEST_CASE("reconstruct_ivp") {
    const UniformGrid g(1.0, 16);
    const CaputoIvp p{0.5, {}, InitialData{0.0}, 1.0, RhsFunction("x", 0)};
    const auto one = reconstruct_ivp(LinearSpline(g, std::vector<double>(17, 1.0)), p);
    for (double t : {0.0, 0.1, 0.5, 1.0}) CHECK(one(t) == Approx(std::sqrt(t) / oracle::gamma(1.5)).epsilon(1e-13));

    const CaputoIvp p2{1.5, {}, InitialData{0.4, -1.0}, 1.0, RhsFunction("x", 0)};
    const auto zero = reconstruct_ivp(LinearSpline(g, std::vector<double>(17, 0.0)), p2);
    for (double t : {0.0, 0.3, 0.9}) CHECK(zero(t) == Approx(0.4 - t).epsilon(1e-15));
}

TEST_CASE("reconstruct_ivp: manufactured round trip") {
    // x = 1 + 2t + t^2 with α = 1.5, so y = D_*^1.5 x = 2 t^0.5 / Γ(1.5).
    const CaputoIvp p{1.5, {}, InitialData{1.0, 2.0}, 1.0, RhsFunction("x", 0)};
    double prev = 1.0;
    for (std::size_t n : {16u, 32u, 64u}) {
        const UniformGrid g(1.0, n);
        const auto y = interpolate([](double t) { return 2 * std::sqrt(t) / oracle::gamma(1.5); }, g);
        const auto x = reconstruct_ivp(y, p);
        CHECK(std::abs(x(0.0) - 1.0) <= 1e-13);
        const double err = oracle::sup_distance([&](double t) { return x(t); },
                                                [](double t) { return 1 + 2 * t + t * t; }, 1.0, 1000);
        CHECK(err < prev);
        CHECK(err < 0.2 * g.step());
        prev = err;
    }
    // Forward differences at 0 converge to x_1 at rate O(d).
    const UniformGrid g(1.0, 64);
    const auto x = reconstruct_ivp(interpolate([](double t) { return 2 * std::sqrt(t) / oracle::gamma(1.5); }, g), p);
    double last = 1.0;
    for (double d : {1e-2, 1e-3, 1e-4}) {
        const double e = std::abs((x(d) - x(0.0)) / d - 2.0);
        CHECK(e < last);
        CHECK(e < 10 * d);
        last = e;
    }
}

TEST_CASE("reduce_ivp_rl") {
    const RlIvp p{0.9, {0.3}, 1.0, RhsFunction("x + d1", 1)};
    const auto eq = reduce_ivp_rl(p);
    REQUIRE(eq.arguments.size() == 2);
    CHECK(eq.arguments[0].order == 0.9);
    CHECK(eq.arguments[1].order == Approx(0.6).epsilon(1e-15));
    for (const auto& arg : eq.arguments) {
        for (double t : {0.0, 0.4, 1.0}) CHECK(arg.forcing(t) == 0.0);
        CHECK(arg.nonlocal.empty());
    }
    std::mt19937_64 rng(3);
    const auto x = reconstruct_ivp_rl(LinearSpline(UniformGrid(1.0, 8), oracle::random_values(rng, 9)), p);
    CHECK(x(0.0) == 0.0);
}

TEST_CASE("green_function: examples") {
    CHECK(green_function(2.0, 1.0, 0.0, 0.5, 0.25) == Approx(-0.125).epsilon(1e-15));
    for (double t : {0.1, 0.35, 0.8}) {
        for (double s : {0.05, 0.5, 0.95}) {
            CHECK(green_function(2.0, 1.0, 0.0, t, s) == Approx(s <= t ? -s * (1 - t) : -t * (1 - s)).epsilon(1e-14));
        }
        static boost::math::quadrature::tanh_sinh<double> rule;
        const double integral = rule.integrate([t](double s) { return green_function(2.0, 1.0, 0.0, t, s); }, 0.0, t) +
                                rule.integrate([t](double s) { return green_function(2.0, 1.0, 0.0, t, s); }, t, 1.0);
        CHECK(integral == Approx(t * (t - 1) / 2).epsilon(1e-12));
    }
    CHECK_THROWS_AS((void)green_function(1.5, 1.0, 0.5, 0.3, 1.0), DomainError);
    CHECK(std::isfinite(green_function(1.5, 1.0, 0.0, 0.3, 1.0)));
    CHECK_THROWS_AS((void)green_function(1.5, 0.0, 0.5, 0.3, 0.2), DomainError);
}

TEST_CASE("green_function: branch continuity at s = t") {
    std::mt19937_64 rng(1000);
    std::uniform_real_distribution<double> uq(1.05, 2.0);
    std::uniform_real_distribution<double> uab(-2.0, 2.0);
    std::uniform_real_distribution<double> ut(0.01, 0.99);
    for (int k = 0; k < 1000; ++k) {
        const double q = uq(rng), t = ut(rng);
        double a = uab(rng);
        if (std::abs(a) < 0.1) a = 0.1;
        const double b = uab(rng);
        const double at = green_function(q, a, b, t, t);
        const double above = green_function(q, a, b, t, std::nextafter(t, 1.0));
        INFO("q=" << q << " a=" << a << " b=" << b << " t=" << t);
        CHECK(std::abs(above - at) <= 1e-9 * std::max(1.0, std::abs(at)));
        // From below the jump is (t-s)^(q-1)/Γ(q), Hölder rather than Lipschitz;
        // what remains is smooth in s with slope bounded at s = t.
        const double lever = std::abs(b - a * t);
        const double slope = lever * (q - 1) * std::pow(1 - t, q - 2) / (std::abs(a) * oracle::gamma(q)) +
                             std::abs(b) * lever * (2 - q) * std::pow(1 - t, q - 3) / (a * a * oracle::gamma(q - 1));
        for (double gap : {1e-3, 1e-6, 1e-9}) {
            const double s = t - gap;
            const double below = green_function(q, a, b, t, s);
            const double jump = std::pow(t - s, q - 1) / oracle::gamma(q);
            CHECK(std::abs(below - at - jump) <= 2 * slope * gap + 1e-12 * std::max(1.0, std::abs(at)));
        }
    }
}

TEST_CASE("boundary_affine") {
    CHECK(boundary_affine(1.0, 0.0, 0.3, -0.8, 0.0) == Approx(0.3));
    CHECK(boundary_affine(1.0, 0.0, 0.3, -0.8, 1.0) == Approx(-0.8));
    // A x + B x' reproduces the data at both ends.
    const double a = 1.7, b = -0.6, e1 = 0.25, e2 = 1.5;
    const double slope = boundary_affine(a, b, e1, e2, 1.0) - boundary_affine(a, b, e1, e2, 0.0);
    CHECK(a * boundary_affine(a, b, e1, e2, 0.0) + b * slope == Approx(e1).epsilon(1e-14));
    CHECK(a * boundary_affine(a, b, e1, e2, 1.0) + b * slope == Approx(e2).epsilon(1e-14));
}

TEST_CASE("bvp_linear_solve: examples") {
    const UniformGrid g(1.0, 10);
    const auto x0 = bvp_linear_solve(1.5, 1.0, 0.0, 0.4, -0.2, LinearSpline(g, std::vector<double>(11, 0.0)));
    CHECK(x0(0.0) == Approx(0.4).epsilon(1e-15));
    CHECK(x0(1.0) == Approx(-0.2).epsilon(1e-15));
    CHECK(x0(0.3) == Approx(0.4 * 0.7 - 0.2 * 0.3).epsilon(1e-15));

    const auto x = bvp_linear_solve(2.0, 1.0, 0.0, 0.0, 0.0, LinearSpline(g, std::vector<double>(11, -1.0)));
    for (double t : {0.0, 0.1, 0.33, 0.5, 0.9, 1.0}) CHECK(std::abs(x(t) - t * (1 - t) / 2) < 1e-15);

    const auto r = bvp_linear_solve(2.0, 1.0, 1.0, 1.0, 1.0, LinearSpline(g, std::vector<double>(11, 0.0)));
    CHECK(r.boundary_residuals().left < 1e-14);
    CHECK(r.boundary_residuals().right < 1e-14);
}

TEST_CASE("bvp_linear_solve: quadrature of the Green's representation") {
    std::mt19937_64 rng(12);
    const UniformGrid g(1.0, 8);
    const auto values = oracle::random_values(rng, 9);
    const LinearSpline v(g, values);
    static boost::math::quadrature::tanh_sinh<double> rule;
    for (double q : {1.3, 1.75, 2.0}) {
        const double a = 1.2, b = 0.4, e1 = 0.1, e2 = -0.5;
        const auto x = bvp_linear_solve(q, a, b, e1, e2, v);
        for (double t : {0.125, 0.4, 0.875}) {
            double ref = boundary_affine(a, b, e1, e2, t);
            for (std::size_t j = 0; j < 8; ++j) {
                const double lo = g.node(j), hi = g.node(j + 1);
                // Near s = 1 the (1-s)^(q-2) part of G is rebuilt from the exact
                // complement xc, since 1 - s rounds away there.
                const double singular = b * (b - a * t) / (a * a * oracle::gamma(q - 1));
                auto integrand = [&](double s, double xc) {
                    if (hi < 1.0 || s < 0.5 * (lo + hi) || q == 2.0) return green_function(q, a, b, t, s) * v(s);
                    const double fixed = s >= 1.0 ? 0.0 : green_function(q, a, b, t, s) - singular * std::pow(1 - s, q - 2);
                    return (fixed + singular * std::pow(xc, q - 2)) * v(s);
                };
                if (lo < t && t < hi) {
                    ref += rule.integrate(integrand, lo, t, 1e-15) + rule.integrate(integrand, t, hi, 1e-15);
                } else {
                    ref += rule.integrate(integrand, lo, hi, 1e-15);
                }
            }
            INFO("q=" << q << " t=" << t);
            CHECK(x(t) == Approx(ref).epsilon(1e-9));
        }
    }
}

TEST_CASE("reduce_bvp: structure") {
    const auto eq = reduce_bvp(make_bvp(1.5, 1.0, 0.0, 0.0, 0.0, {1.2}));
    REQUIRE(eq.arguments.size() == 2);
    CHECK(eq.horizon == 1.0);
    CHECK(eq.has_nonlocal_terms());
    CHECK(eq.arguments[0].order == 1.5);
    REQUIRE(eq.arguments[0].nonlocal.size() >= 1);
    CHECK(eq.arguments[1].order == Approx(0.3));
    CHECK(eq.arguments[1].nonlocal.empty());
    for (double t : {0.0, 0.5}) CHECK(eq.arguments[1].forcing(t) == 0.0);

    // B = 0, η = 0: z_0 = I^q y - t/Γ(q) ∫(1-s)^(q-1) y.
    std::mt19937_64 rng(21);
    const auto values = oracle::random_values(rng, 13);
    const LinearSpline y(UniformGrid(1.0, 12), values);
    const double phi = oracle::spline_frac_integral(values, 1.0, 1.5, 1.0) * oracle::gamma(1.5);
    for (double t : {0.0, 0.2, 0.7, 1.0}) {
        const double ref = frac_integral_at(y, 1.5, t) - t / oracle::gamma(1.5) * phi;
        CHECK(argument_value(eq.arguments[0], y, t) == Approx(ref).epsilon(1e-9));
    }

    const auto full = reduce_bvp(make_bvp(1.5, 1.0, 0.5, 0.2, 0.3));
    std::vector<double> orders;
    for (const auto& term : full.arguments[0].nonlocal) orders.push_back(term.moment_order);
    REQUIRE(orders.size() == 2);
    CHECK(orders[0] == 1.5);
    CHECK(orders[1] == 0.5);
}

TEST_CASE("reduce_bvp: q = 2 without state dependence decouples") {
    auto p = make_bvp(2.0, 1.0, 0.0, 0.0, 0.0);
    p.rhs = RhsFunction("sin(t)", 0);
    const auto eq = reduce_bvp(p);
    CHECK_FALSE(eq.rhs.depends_on_state());
}

TEST_CASE("reconstruct_bvp agrees with bvp_linear_solve on random splines") {
    std::mt19937_64 rng(100);
    std::uniform_real_distribution<double> uq(1.1, 2.0);
    std::uniform_real_distribution<double> ua(0.3, 2.0);
    std::uniform_real_distribution<double> ub(-1.0, 1.0);
    std::uniform_int_distribution<std::size_t> un(1, 40);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const double q = uq(rng), a = ua(rng) * (k % 2 ? -1.0 : 1.0), b = ub(rng), e1 = ub(rng), e2 = ub(rng);
        const std::size_t n = un(rng);
        const LinearSpline y(UniformGrid(1.0, n), oracle::random_values(rng, n + 1, -3.0, 3.0));
        const auto p = make_bvp(q, a, b, e1, e2);
        const auto lhs = reconstruct_bvp(y, p);
        const auto rhs = bvp_linear_solve(q, a, b, e1, e2, y);
        double scale = 1.0;
        for (double v : y.values()) scale = std::max(scale, std::abs(v));
        for (int s = 0; s <= 50; ++s) {
            const double t = s / 50.0;
            worst = std::max(worst, std::abs(lhs(t) - rhs(t)) / scale);
            worst = std::max(worst, std::abs(lhs.derivative(t) - rhs.derivative(t)) / scale);
        }
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("reconstruct_bvp: classical degeneration and affine closure") {
    const UniformGrid g(1.0, 16);
    const auto x = reconstruct_bvp(LinearSpline(g, std::vector<double>(17, -1.0)), make_bvp(2.0, 1.0, 0.0, 0.0, 0.0));
    for (std::size_t i = 0; i <= 16; ++i) {
        const double t = g.node(i);
        CHECK(std::abs(x(t) - t * (1 - t) / 2) < 1e-15);
    }

    for (double q : {1.2, 1.5, 2.0}) {
        const auto p = make_bvp(q, 0.8, 0.3, -0.4, 0.9);
        const auto z = reconstruct_bvp(LinearSpline(g, std::vector<double>(17, 0.0)), p);
        const double d = 0.05;
        for (double t = d; t < 1.0 - d / 2; t += d) {
            CHECK(std::abs(z(t + d) - 2 * z(t) + z(t - d)) < 1e-14);
            CHECK(z(t) == Approx(boundary_affine(0.8, 0.3, -0.4, 0.9, t)).epsilon(1e-14));
        }
        CHECK(z.boundary_residuals().left < 1e-14);
        CHECK(z.boundary_residuals().right < 1e-14);
    }
}

TEST_CASE("reconstruct_bvp: boundary residuals for arbitrary y") {
    std::mt19937_64 rng(55);
    for (double q : {1.1, 1.5, 1.9, 2.0}) {
        const LinearSpline y(UniformGrid(1.0, 20), oracle::random_values(rng, 21));
        const auto x = reconstruct_bvp(y, make_bvp(q, 1.3, 0.7, 0.5, -1.0));
        CHECK(x.boundary_residuals().left < 1e-12);
        CHECK(x.boundary_residuals().right < 1e-12);
        // x' against central differences, away from the ends and the kinks of y.
        for (double t : {0.225, 0.525, 0.825}) {
            CHECK(x.derivative(t) == Approx(oracle::central_difference([&](double s) { return x(s); }, t, 1e-5)).epsilon(1e-6));
        }
    }
}
