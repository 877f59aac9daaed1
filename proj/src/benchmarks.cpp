#include "fracol/benchmarks.hpp"

#include "fracol/format.hpp"

#include <sstream>

namespace fracol {

namespace {

constexpr std::size_t kSeriesTerms = 30;

SolverSettings study_settings() {
    SolverSettings s;
    s.intervals = 16;
    s.refinements = 5;
    s.tol = 1e-13;
    return s;
}

ProblemConfig ivp_caputo(double alpha, std::vector<double> orders, std::vector<double> x0, std::string rhs,
                         std::string exact_y, std::string exact_x) {
    ProblemConfig c;
    c.kind = ProblemKind::IvpCaputo;
    c.order = alpha;
    c.orders = std::move(orders);
    c.initial = std::move(x0);
    c.horizon = 1.0;
    c.rhs = std::move(rhs);
    c.exact_y = std::move(exact_y);
    c.exact_x = std::move(exact_x);
    c.solver = study_settings();
    return c;
}

std::vector<Benchmark> build_registry() {
    std::vector<Benchmark> r;

    r.push_back({"const_rhs", "D_*^0.5 x = 1, x(0) = 1",
                 "I^a 1 = t^a / Gamma(a+1) (power rule with gamma = 0)", std::nullopt,
                 ivp_caputo(0.5, {}, {1.0}, "1", "1", "1 + t^0.5/gamma(1.5)")});

    const auto ml = mittag_leffler_half_series(kSeriesTerms);
    r.push_back({"ml_linear", "D_*^0.5 x = x, x(0) = 1, i.e. y = I^0.5 y + 1",
                 "30-term Mittag-Leffler series sum t^(k/2)/Gamma(k/2+1)", 0.5,
                 ivp_caputo(0.5, {}, {1.0}, "x", ml, ml)});

    r.push_back({"smooth_m0", "D_*^0.5 x = f(t, x) with x = t^2.5",
                 "manufactured: D_*^0.5 t^2.5 = Gamma(3.5)/Gamma(3) t^2 (power rule)", 2.0,
                 ivp_caputo(0.5, {}, {0.0}, "gamma(3.5)/2*t^2 + 0.5*sin(x) - 0.5*sin(t^2.5)",
                            "gamma(3.5)/2*t^2", "t^2.5")});

    r.push_back({"smooth_m1", "D_*^1.5 x = f(t, x, D_*^0.5 x) with x = 1 + 2t + t^3.5",
                 "manufactured: power rule termwise for y = Gamma(4.5)/2 t^2 and D_*^0.5 x", 2.0,
                 ivp_caputo(1.5, {0.5}, {1.0, 2.0},
                            "gamma(4.5)/2*t^2 + 0.3*sin(x) - 0.3*sin(1 + 2*t + t^3.5)"
                            " + 0.2*cos(d1) - 0.2*cos(2*t^0.5/gamma(1.5) + gamma(4.5)/6*t^3)",
                            "gamma(4.5)/2*t^2", "1 + 2*t + t^3.5")});

    r.push_back({"smooth_m2", "D_*^1.8 x = f(t, x, D_*^1.2 x, D_*^0.4 x) with x = 0.5 - t + t^3.8",
                 "manufactured: power rule termwise for y = Gamma(4.8)/2 t^2 and both derivative terms", 2.0,
                 ivp_caputo(1.8, {1.2, 0.4}, {0.5, -1.0},
                            "gamma(4.8)/2*t^2 + 0.25*sin(x) - 0.25*sin(0.5 - t + t^3.8)"
                            " + 0.1*d1 - 0.1*gamma(4.8)/gamma(3.6)*t^2.6"
                            " + 0.1*cos(d2) - 0.1*cos(gamma(4.8)/gamma(4.4)*t^3.4 - t^0.6/gamma(1.6))",
                            "gamma(4.8)/2*t^2", "0.5 - t + t^3.8")});

    r.push_back({"rough_y08", "D_*^0.6 x = f(t, x) with y = t^0.8 (continuous, not C^1 at 0)",
                 "manufactured: x = I^0.6 t^0.8 = Gamma(1.8)/Gamma(2.4) t^1.4; rate follows omega(y, h) ~ h^0.8",
                 0.8,
                 ivp_caputo(0.6, {}, {0.0}, "t^0.8 + 0.5*sin(x) - 0.5*sin(gamma(1.8)/gamma(2.4)*t^1.4)", "t^0.8",
                            "gamma(1.8)/gamma(2.4)*t^1.4")});

    {
        ProblemConfig c;
        c.kind = ProblemKind::IvpRl;
        c.order = 0.7;
        c.orders = {0.3};
        c.horizon = 1.0;
        c.rhs = "t^2 + 0.5*(x - 2/gamma(3.7)*t^2.7) - 0.3*sin(d1 - 2/gamma(3.4)*t^2.4)";
        c.exact_y = "t^2";
        c.exact_x = "2/gamma(3.7)*t^2.7";
        c.solver = study_settings();
        r.push_back({"rl_multi", "D^0.7 x = f(t, x, D^0.3 x), x(0) = 0, with D^0.7 x = t^2",
                     "manufactured: x = I^0.7 t^2 and D^0.3 x = I^0.4 t^2 (power rule)", 2.0, c});
    }

    {
        ProblemConfig c;
        c.kind = ProblemKind::Bvp;
        c.order = 2.0;
        c.a = 1.0;
        c.b = 0.0;
        c.eta1 = 0.0;
        c.eta2 = 0.0;
        c.rhs = "-1";
        c.exact_y = "-1";
        c.exact_x = "t*(1 - t)/2";
        c.solver = study_settings();
        r.push_back({"bvp_classical", "x'' = -1, x(0) = x(1) = 0",
                     "classical two-point problem, x = t(1-t)/2", std::nullopt, c});
    }

    {
        ProblemConfig c;
        c.kind = ProblemKind::Bvp;
        c.order = 1.5;
        c.orders = {1.2};
        c.a = 1.0;
        c.b = 0.5;
        c.eta1 = 0.2;
        c.eta2 = -0.3;
        const std::string x =
            "2/gamma(4.5)*t^3.5 + (0.5 - t)*2/gamma(4.5) + 0.5*(0.5 - t)*2/gamma(3.5)"
            " + (1.5 - t)*0.2 + (t - 0.5)*(-0.3)";
        c.rhs = "t^2 + 0.2*(x - (" + x + ")) + 0.1*(d1 - 2/gamma(3.3)*t^2.3)";
        c.exact_y = "t^2";
        c.exact_x = x;
        c.solver = study_settings();
        r.push_back({"bvp_fractional", "D_*^1.5 x = f(t, x, D_*^1.2 x), x(0) + 0.5x'(0) = 0.2, x(1) + 0.5x'(1) = -0.3",
                     "manufactured: y = t^2, x from the Green's representation with Beta-function moments", 2.0, c});
    }
    return r;
}

}  // namespace

std::string mittag_leffler_half_series(std::size_t terms) {
    std::string s = "1";
    for (std::size_t k = 1; k < terms; ++k) {
        const double half = static_cast<double>(k) / 2.0;
        s += " + t^" + format_number(half) + "/gamma(" + format_number(half + 1.0) + ")";
    }
    return s;
}

const std::vector<Benchmark>& benchmark_registry() {
    static const std::vector<Benchmark> registry = build_registry();
    return registry;
}

const Benchmark* find_benchmark(std::string_view name) {
    for (const auto& b : benchmark_registry()) {
        if (b.name == name) return &b;
    }
    return nullptr;
}

std::string list_benchmarks() {
    std::ostringstream os;
    for (const auto& b : benchmark_registry()) {
        os << b.name << " [" << to_string(b.config.kind) << "]\n";
        os << "  problem:      " << b.description << '\n';
        os << "  rhs:          " << b.config.rhs << '\n';
        os << "  exact y:      " << b.config.exact_y.value_or("-") << '\n';
        os << "  exact x:      " << b.config.exact_x.value_or("-") << '\n';
        os << "  expected eoc: " << (b.expected_eoc ? format_number(*b.expected_eoc) : std::string("exact")) << '\n';
        os << "  oracle:       " << b.oracle << '\n';
    }
    return os.str();
}

}  // namespace fracol
