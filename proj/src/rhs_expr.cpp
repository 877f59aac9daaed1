#include "fracol/rhs_expr.hpp"

#include "fracol/error.hpp"
#include "fracol/fractional_kernel.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <random>
#include <utility>

namespace fracol {

struct Expr::Node {
    Kind kind = Kind::Number;
    double number = 0.0;
    std::size_t index = 0;
    Function function = Function::Sin;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

struct FunctionName {
    std::string_view name;
    Expr::Function function;
};

constexpr std::array<FunctionName, 7> kFunctions = {{
    {"sin", Expr::Function::Sin},
    {"cos", Expr::Function::Cos},
    {"exp", Expr::Function::Exp},
    {"ln", Expr::Function::Ln},
    {"sqrt", Expr::Function::Sqrt},
    {"abs", Expr::Function::Abs},
    {"gamma", Expr::Function::Gamma},
}};

std::string_view function_name(Expr::Function f) {
    for (const auto& entry : kFunctions) {
        if (entry.function == f) return entry.name;
    }
    return "?";
}

class Parser {
public:
    Parser(std::string_view src, std::size_t arity) : src_(src), arity_(arity) {}

    NodePtr parse() {
        auto root = parse_expr();
        skip_space();
        if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

    void skip_space() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    static NodePtr make_binary(Expr::Kind kind, NodePtr lhs, NodePtr rhs) {
        auto n = std::make_shared<Expr::Node>();
        n->kind = kind;
        n->lhs = std::move(lhs);
        n->rhs = std::move(rhs);
        return n;
    }

    NodePtr parse_expr() {
        auto lhs = parse_term();
        for (;;) {
            if (accept('+')) {
                lhs = make_binary(Expr::Kind::Add, lhs, parse_term());
            } else if (accept('-')) {
                lhs = make_binary(Expr::Kind::Subtract, lhs, parse_term());
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_term() {
        auto lhs = parse_unary();
        for (;;) {
            if (accept('*')) {
                lhs = make_binary(Expr::Kind::Multiply, lhs, parse_unary());
            } else if (accept('/')) {
                lhs = make_binary(Expr::Kind::Divide, lhs, parse_unary());
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_unary() {
        if (accept('-')) {
            auto n = std::make_shared<Expr::Node>();
            n->kind = Expr::Kind::Negate;
            n->lhs = parse_unary();
            return n;
        }
        return parse_power();
    }

    NodePtr parse_power() {
        auto base = parse_primary();
        if (accept('^')) return make_binary(Expr::Kind::Power, base, parse_unary());
        return base;
    }

    NodePtr parse_primary() {
        skip_space();
        if (pos_ >= src_.size()) fail("unexpected end of expression");
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            auto inner = parse_expr();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
        fail("unexpected '" + std::string(1, c) + "'");
    }

    NodePtr parse_number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        };
        digits();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            digits();
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t look = pos_ + 1;
            if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
            if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
                pos_ = look;
                digits();
            }
        }
        double value = 0.0;
        const auto* first = src_.data() + start;
        const auto* last = src_.data() + pos_;
        const auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc() || ptr != last) {
            pos_ = start;
            fail("malformed number");
        }
        auto n = std::make_shared<Expr::Node>();
        n->kind = Expr::Kind::Number;
        n->number = value;
        return n;
    }

    NodePtr parse_identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
            ++pos_;
        }
        const std::string_view name = src_.substr(start, pos_ - start);
        auto n = std::make_shared<Expr::Node>();
        if (name == "t") {
            n->kind = Expr::Kind::Time;
            return n;
        }
        if (name == "x") {
            n->kind = Expr::Kind::State;
            n->index = 0;
            return n;
        }
        if (name.size() >= 2 && name[0] == 'd' &&
            std::all_of(name.begin() + 1, name.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }) &&
            name[1] != '0') {
            std::size_t index = 0;
            std::from_chars(name.data() + 1, name.data() + name.size(), index);
            if (index > arity_) {
                pos_ = start;
                fail("variable '" + std::string(name) + "' exceeds arity " + std::to_string(arity_));
            }
            n->kind = Expr::Kind::State;
            n->index = index;
            return n;
        }
        for (const auto& entry : kFunctions) {
            if (entry.name == name) {
                if (!accept('(')) fail("expected '(' after " + std::string(name));
                n->kind = Expr::Kind::Call;
                n->function = entry.function;
                n->lhs = parse_expr();
                if (!accept(')')) fail("expected ')'");
                return n;
            }
        }
        pos_ = start;
        fail("unknown identifier '" + std::string(name) + "'");
    }

    std::string_view src_;
    std::size_t arity_;
    std::size_t pos_ = 0;
};

double checked(double value, const char* what) {
    if (!std::isfinite(value)) throw EvalError(std::string("non-finite result in ") + what);
    return value;
}

double evaluate_node(const Expr::Node& n, double t, std::span<const double> z) {
    switch (n.kind) {
        case Expr::Kind::Number: return n.number;
        case Expr::Kind::Time: return t;
        case Expr::Kind::State:
            if (n.index >= z.size()) throw EvalError("state slot out of range");
            return z[n.index];
        case Expr::Kind::Negate: return -evaluate_node(*n.lhs, t, z);
        case Expr::Kind::Add: return checked(evaluate_node(*n.lhs, t, z) + evaluate_node(*n.rhs, t, z), "+");
        case Expr::Kind::Subtract: return checked(evaluate_node(*n.lhs, t, z) - evaluate_node(*n.rhs, t, z), "-");
        case Expr::Kind::Multiply: return checked(evaluate_node(*n.lhs, t, z) * evaluate_node(*n.rhs, t, z), "*");
        case Expr::Kind::Divide: {
            const double num = evaluate_node(*n.lhs, t, z);
            const double den = evaluate_node(*n.rhs, t, z);
            if (den == 0.0) throw EvalError("division by zero");
            return checked(num / den, "/");
        }
        case Expr::Kind::Power:
            return checked(std::pow(evaluate_node(*n.lhs, t, z), evaluate_node(*n.rhs, t, z)), "^");
        case Expr::Kind::Call: {
            const double a = evaluate_node(*n.lhs, t, z);
            switch (n.function) {
                case Expr::Function::Sin: return std::sin(a);
                case Expr::Function::Cos: return std::cos(a);
                case Expr::Function::Exp: return checked(std::exp(a), "exp");
                case Expr::Function::Ln:
                    if (!(a > 0.0)) throw EvalError("ln of nonpositive value");
                    return std::log(a);
                case Expr::Function::Sqrt:
                    if (a < 0.0) throw EvalError("sqrt of negative value");
                    return std::sqrt(a);
                case Expr::Function::Abs: return std::abs(a);
                case Expr::Function::Gamma:
                    try {
                        return checked(gamma_fn(a), "gamma");
                    } catch (const DomainError& e) {
                        throw EvalError(e.what());
                    }
            }
        }
    }
    throw EvalError("corrupt expression tree");
}

void render(const Expr::Node& n, std::string& out) {
    switch (n.kind) {
        case Expr::Kind::Number: {
            std::array<char, 32> buf{};
            const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), n.number);
            out.append(buf.data(), ptr);
            return;
        }
        case Expr::Kind::Time: out += 't'; return;
        case Expr::Kind::State:
            out += n.index == 0 ? std::string("x") : "d" + std::to_string(n.index);
            return;
        case Expr::Kind::Negate:
            out += "(-";
            render(*n.lhs, out);
            out += ')';
            return;
        case Expr::Kind::Call:
            out += function_name(n.function);
            out += '(';
            render(*n.lhs, out);
            out += ')';
            return;
        default: break;
    }
    static constexpr std::array<char, 5> symbols = {'+', '-', '*', '/', '^'};
    const auto op = symbols[static_cast<int>(n.kind) - static_cast<int>(Expr::Kind::Add)];
    out += '(';
    render(*n.lhs, out);
    out += ' ';
    out += op;
    out += ' ';
    render(*n.rhs, out);
    out += ')';
}

std::size_t extent(const Expr::Node& n) {
    std::size_t e = n.kind == Expr::Kind::State ? n.index + 1 : 0;
    if (n.lhs) e = std::max(e, extent(*n.lhs));
    if (n.rhs) e = std::max(e, extent(*n.rhs));
    return e;
}

bool same_tree(const Expr::Node* a, const Expr::Node* b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Expr::Kind::Number:
            if (std::bit_cast<std::uint64_t>(a->number) != std::bit_cast<std::uint64_t>(b->number)) return false;
            break;
        case Expr::Kind::State:
            if (a->index != b->index) return false;
            break;
        case Expr::Kind::Call:
            if (a->function != b->function) return false;
            break;
        default: break;
    }
    return same_tree(a->lhs.get(), b->lhs.get()) && same_tree(a->rhs.get(), b->rhs.get());
}

}  // namespace

Expr Expr::parse(std::string_view source, std::size_t arity) { return Expr(Parser(source, arity).parse()); }

Expr Expr::number(double value) {
    auto n = std::make_shared<Node>();
    n->number = value;
    return Expr(std::move(n));
}

Expr Expr::time() {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Time;
    return Expr(std::move(n));
}

Expr Expr::state(std::size_t index) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::State;
    n->index = index;
    return Expr(std::move(n));
}

Expr Expr::negate(Expr operand) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Negate;
    n->lhs = std::move(operand.root_);
    return Expr(std::move(n));
}

Expr Expr::binary(Kind kind, Expr lhs, Expr rhs) {
    if (kind < Kind::Add || kind > Kind::Power) throw DomainError("Expr::binary: not a binary operator");
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->lhs = std::move(lhs.root_);
    n->rhs = std::move(rhs.root_);
    return Expr(std::move(n));
}

Expr Expr::call(Function function, Expr argument) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Call;
    n->function = function;
    n->lhs = std::move(argument.root_);
    return Expr(std::move(n));
}

Expr::Kind Expr::kind() const noexcept { return root_->kind; }

double Expr::evaluate(double t, std::span<const double> state) const { return evaluate_node(*root_, t, state); }

std::string Expr::to_string() const {
    std::string out;
    render(*root_, out);
    return out;
}

std::size_t Expr::state_extent() const noexcept { return extent(*root_); }

bool Expr::operator==(const Expr& other) const { return same_tree(root_.get(), other.root_.get()); }

RhsFunction::RhsFunction(std::string source, std::size_t arity)
    : source_(std::move(source)), arity_(arity), expr_(Expr::parse(source_, arity)) {}

double RhsFunction::operator()(double t, std::span<const double> z) const {
    if (z.size() != arity_ + 1) {
        throw EvalError("rhs expects " + std::to_string(arity_ + 1) + " state values, got " +
                        std::to_string(z.size()));
    }
    return expr_.evaluate(t, z);
}

double eval_rhs(const RhsFunction& f, double t, std::span<const double> z) { return f(t, z); }

double lipschitz_probe(const RhsFunction& f, const ProbeBox& box, std::size_t samples, std::uint64_t seed) {
    if (samples < 2) throw DomainError("lipschitz_probe needs at least two samples");
    const std::size_t dim = f.arity() + 1;
    if (box.state.size() != dim) {
        throw DomainError("lipschitz_probe: box has " + std::to_string(box.state.size()) +
                          " state intervals, rhs needs " + std::to_string(dim));
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto draw = [&](const Interval& iv) { return iv.lo + (iv.hi - iv.lo) * unit(rng); };

    std::vector<double> z(dim);
    std::vector<double> w(dim);
    double best = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        const double t = draw(box.time);
        for (std::size_t i = 0; i < dim; ++i) z[i] = draw(box.state[i]);
        w = z;
        switch (s % 3) {
            case 0:  // independent pair
                for (std::size_t i = 0; i < dim; ++i) w[i] = draw(box.state[i]);
                break;
            case 1: {  // chord along one coordinate
                const auto i = static_cast<std::size_t>(unit(rng) * static_cast<double>(dim)) % dim;
                w[i] = draw(box.state[i]);
                break;
            }
            default: {  // short step along one coordinate
                const auto i = static_cast<std::size_t>(unit(rng) * static_cast<double>(dim)) % dim;
                const double width = box.state[i].hi - box.state[i].lo;
                w[i] = std::clamp(z[i] + 1e-4 * width, box.state[i].lo, box.state[i].hi);
                if (w[i] == z[i]) w[i] = z[i] - 1e-4 * width;
                break;
            }
        }
        double dist = 0.0;
        for (std::size_t i = 0; i < dim; ++i) dist += std::abs(z[i] - w[i]);
        if (dist == 0.0) continue;
        try {
            best = std::max(best, std::abs(f(t, z) - f(t, w)) / dist);
        } catch (const EvalError&) {
            // Pairs outside the rhs domain say nothing about L.
        }
    }
    return best;
}

}  // namespace fracol
