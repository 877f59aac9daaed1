#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fracol {

/// Immutable syntax tree of a right-hand-side expression in the variables
/// `t`, `x` (state slot 0) and `d1`..`dm` (state slots 1..m).
///
/// Grammar, loosest binding first:
///
///     expr    := term (('+' | '-') term)*
///     term    := unary (('*' | '/') unary)*
///     unary   := '-' unary | power
///     power   := primary ('^' unary)?          right associative
///     primary := number | variable | func '(' expr ')' | '(' expr ')'
///     func    := sin | cos | exp | ln | sqrt | abs | gamma
class Expr {
public:
    enum class Kind { Number, Time, State, Negate, Add, Subtract, Multiply, Divide, Power, Call };
    enum class Function { Sin, Cos, Exp, Ln, Sqrt, Abs, Gamma };

    /// Throws ParseError on malformed input, unknown identifiers, or a state
    /// index above `arity`.
    static Expr parse(std::string_view source, std::size_t arity);

    static Expr number(double value);
    static Expr time();
    static Expr state(std::size_t index);
    static Expr negate(Expr operand);
    static Expr binary(Kind kind, Expr lhs, Expr rhs);
    static Expr call(Function function, Expr argument);

    [[nodiscard]] Kind kind() const noexcept;

    /// Throws EvalError on domain faults or non-finite intermediate values.
    [[nodiscard]] double evaluate(double t, std::span<const double> state) const;

    /// Fully parenthesised rendering that parses back to the same tree.
    [[nodiscard]] std::string to_string() const;

    /// One past the highest state slot referenced (0 when none).
    [[nodiscard]] std::size_t state_extent() const noexcept;

    bool operator==(const Expr& other) const;

    struct Node;

private:
    explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
    std::shared_ptr<const Node> root_;
};

[[nodiscard]] inline Expr parse(std::string_view source, std::size_t arity) {
    return Expr::parse(source, arity);
}

/// f(t, z_0, ..., z_m) with its source text retained for reporting.
class RhsFunction {
public:
    RhsFunction(std::string source, std::size_t arity);

    [[nodiscard]] std::size_t arity() const noexcept { return arity_; }
    [[nodiscard]] const std::string& source() const noexcept { return source_; }
    [[nodiscard]] const Expr& expr() const noexcept { return expr_; }
    [[nodiscard]] bool depends_on_state() const noexcept { return expr_.state_extent() > 0; }

    /// z must hold arity + 1 values.
    [[nodiscard]] double operator()(double t, std::span<const double> z) const;

private:
    std::string source_;
    std::size_t arity_;
    Expr expr_;
};

[[nodiscard]] double eval_rhs(const RhsFunction& f, double t, std::span<const double> z);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool operator==(const Interval&) const = default;
};

/// Sampling region for the Lipschitz probe: a time range and one interval
/// per state slot.
struct ProbeBox {
    Interval time;
    std::vector<Interval> state;
};

/// Empirical lower bound on L in |f(t,z) - f(t,z')| <= L Σ|z_i - z_i'|:
/// the largest difference quotient seen over random pairs and
/// coordinate-aligned pairs sharing the same t. Deterministic for a seed.
[[nodiscard]] double lipschitz_probe(const RhsFunction& f, const ProbeBox& box, std::size_t samples,
                                     std::uint64_t seed = 0x5eed'f00dULL);

}  // namespace fracol
