#include "fracol/config.hpp"

#include "fracol/error.hpp"
#include "fracol/format.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace fracol {

namespace {

struct Entry {
    std::string value;
    std::size_t line;
};

using Section = std::map<std::string, Entry, std::less<>>;

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string_view strip_comment(std::string_view line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

bool is_key(std::string_view key) {
    return !key.empty() && std::all_of(key.begin(), key.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
}

double parse_real(const Entry& e, std::string_view key) {
    const auto text = trim(e.value);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty() || !std::isfinite(value)) {
        throw ConfigError(e.line, "'" + std::string(key) + "' expects a finite number, got '" + std::string(text) + "'");
    }
    return value;
}

std::size_t parse_count(const Entry& e, std::string_view key) {
    const auto text = trim(e.value);
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw ConfigError(e.line, "'" + std::string(key) + "' expects a nonnegative integer, got '" +
                                      std::string(text) + "'");
    }
    return value;
}

bool parse_bool(const Entry& e, std::string_view key) {
    const auto text = trim(e.value);
    if (text == "true") return true;
    if (text == "false") return false;
    throw ConfigError(e.line, "'" + std::string(key) + "' expects true or false");
}

std::vector<double> parse_list(const Entry& e, std::string_view key) {
    const auto text = trim(e.value);
    if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
        throw ConfigError(e.line, "'" + std::string(key) + "' expects a list like [a, b]");
    }
    std::vector<double> out;
    auto body = trim(text.substr(1, text.size() - 2));
    if (body.empty()) return out;
    for (;;) {
        const auto comma = body.find(',');
        const Entry item{std::string(trim(body.substr(0, comma))), e.line};
        out.push_back(parse_real(item, key));
        if (comma == std::string_view::npos) break;
        body = body.substr(comma + 1);
    }
    return out;
}

std::string parse_text(const Entry& e, std::string_view key) {
    const auto text = trim(e.value);
    if (!text.empty() && text.front() == '"') {
        if (text.size() < 2 || text.back() != '"' || text.substr(1, text.size() - 2).find('"') != std::string_view::npos) {
            throw ConfigError(e.line, "'" + std::string(key) + "' has an unterminated string");
        }
        return std::string(text.substr(1, text.size() - 2));
    }
    if (text.empty()) throw ConfigError(e.line, "'" + std::string(key) + "' is empty");
    return std::string(text);
}

const Entry* find(const Section& s, std::string_view key) {
    const auto it = s.find(key);
    return it == s.end() ? nullptr : &it->second;
}

void check_chain(double top, const std::vector<double>& orders, double floor, const Entry& where,
                 std::string_view key) {
    double previous = top;
    for (const double o : orders) {
        if (!(o < previous)) throw ConfigError(where.line, "'" + std::string(key) + "': order chain not descending");
        previous = o;
    }
    if (!orders.empty() && !(orders.back() > floor)) {
        throw ConfigError(where.line, "'" + std::string(key) + "': every order must exceed " + format_number(floor));
    }
}

std::string format_list(const std::vector<double>& values) {
    std::string out = "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ", ";
        out += format_number(values[i]);
    }
    return out + "]";
}

ProblemKind parse_kind(const Entry& e) {
    const auto text = trim(e.value);
    if (text == "ivp_caputo") return ProblemKind::IvpCaputo;
    if (text == "ivp_rl") return ProblemKind::IvpRl;
    if (text == "bvp") return ProblemKind::Bvp;
    throw ConfigError(e.line, "unknown kind '" + std::string(text) + "' (expected ivp_caputo, ivp_rl or bvp)");
}

void check_exact(const std::optional<std::string>& src, const Entry* e, std::string_view key) {
    if (!src) return;
    try {
        const auto expr = Expr::parse(*src, 0);
        if (expr.state_extent() > 0) {
            throw ConfigError(e->line, "'" + std::string(key) + "' may only depend on t");
        }
    } catch (const ParseError& err) {
        throw ConfigError(e->line, "'" + std::string(key) + "': " + err.what());
    }
}

}  // namespace

std::string_view to_string(ProblemKind kind) {
    switch (kind) {
        case ProblemKind::IvpCaputo: return "ivp_caputo";
        case ProblemKind::IvpRl: return "ivp_rl";
        case ProblemKind::Bvp: return "bvp";
    }
    return "?";
}

ProblemConfig parse_config(std::string_view text) {
    Section problem;
    Section solver;
    Section* current = &problem;
    bool seen_solver = false;

    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto eol = text.find('\n');
        auto raw = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        const auto line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line != "[solver]") throw ConfigError(line_no, "unknown section '" + std::string(line) + "'");
            if (seen_solver) throw ConfigError(line_no, "duplicate [solver] section");
            seen_solver = true;
            current = &solver;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(line_no, "expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        if (!is_key(key)) throw ConfigError(line_no, "malformed key '" + std::string(key) + "'");
        if (current->count(key) > 0) throw ConfigError(line_no, "duplicate field '" + std::string(key) + "'");
        current->emplace(std::string(key), Entry{std::string(trim(line.substr(eq + 1))), line_no});
    }

    ProblemConfig c;
    const Entry* kind_entry = find(problem, "kind");
    if (!kind_entry) throw ConfigError(0, "missing field 'kind'");
    c.kind = parse_kind(*kind_entry);

    static const std::map<ProblemKind, std::set<std::string, std::less<>>> allowed = {
        {ProblemKind::IvpCaputo, {"kind", "alpha", "alphas", "x0", "T", "rhs", "exact_y", "exact_x"}},
        {ProblemKind::IvpRl, {"kind", "alpha", "alphas", "T", "rhs", "exact_y", "exact_x"}},
        {ProblemKind::Bvp, {"kind", "q", "qs", "A", "B", "eta1", "eta2", "rhs", "exact_y", "exact_x"}},
    };
    static const std::map<ProblemKind, std::vector<std::string>> required = {
        {ProblemKind::IvpCaputo, {"alpha", "x0", "T", "rhs"}},
        {ProblemKind::IvpRl, {"alpha", "T", "rhs"}},
        {ProblemKind::Bvp, {"q", "A", "B", "eta1", "eta2", "rhs"}},
    };
    const auto kind_name = std::string(to_string(c.kind));
    for (const auto& [key, entry] : problem) {
        if (allowed.at(c.kind).count(key) == 0) {
            throw ConfigError(entry.line, "field '" + key + "' is not valid for kind " + kind_name);
        }
    }
    for (const auto& key : required.at(c.kind)) {
        if (!find(problem, key)) {
            throw ConfigError(kind_entry->line, "missing field '" + key + "' required by kind " + kind_name);
        }
    }

    const bool bvp = c.kind == ProblemKind::Bvp;
    const char* order_key = bvp ? "q" : "alpha";
    const char* chain_key = bvp ? "qs" : "alphas";
    const Entry& order_entry = *find(problem, order_key);
    c.order = parse_real(order_entry, order_key);
    const Entry* chain_entry = find(problem, chain_key);
    if (chain_entry) c.orders = parse_list(*chain_entry, chain_key);

    switch (c.kind) {
        case ProblemKind::IvpCaputo: {
            if (!(c.order > 0.0)) throw ConfigError(order_entry.line, "'alpha' must be positive");
            const Entry& x0 = *find(problem, "x0");
            c.initial = parse_list(x0, "x0");
            const auto n = static_cast<std::size_t>(std::ceil(c.order));
            if (c.initial.size() != n) {
                throw ConfigError(x0.line, "'x0' needs " + std::to_string(n) + " values for alpha = " +
                                               format_number(c.order));
            }
            if (chain_entry) check_chain(c.order, c.orders, 0.0, *chain_entry, chain_key);
            break;
        }
        case ProblemKind::IvpRl:
            if (!(c.order > 0.0 && c.order < 1.0)) throw ConfigError(order_entry.line, "'alpha' must lie in (0, 1)");
            if (chain_entry) check_chain(c.order, c.orders, 0.0, *chain_entry, chain_key);
            break;
        case ProblemKind::Bvp: {
            if (!(c.order > 1.0 && c.order <= 2.0)) throw ConfigError(order_entry.line, "'q' must lie in (1, 2]");
            if (chain_entry) check_chain(c.order, c.orders, 1.0, *chain_entry, chain_key);
            const Entry& a = *find(problem, "A");
            c.a = parse_real(a, "A");
            if (c.a == 0.0) throw ConfigError(a.line, "'A' must be nonzero (boundary conditions require A != 0)");
            c.b = parse_real(*find(problem, "B"), "B");
            c.eta1 = parse_real(*find(problem, "eta1"), "eta1");
            c.eta2 = parse_real(*find(problem, "eta2"), "eta2");
            break;
        }
    }
    if (!bvp) {
        const Entry& horizon = *find(problem, "T");
        c.horizon = parse_real(horizon, "T");
        if (!(c.horizon > 0.0)) throw ConfigError(horizon.line, "'T' must be positive");
    }

    const Entry& rhs = *find(problem, "rhs");
    c.rhs = parse_text(rhs, "rhs");
    try {
        (void)Expr::parse(c.rhs, c.orders.size());
    } catch (const ParseError& err) {
        throw ConfigError(rhs.line, std::string("'rhs': ") + err.what());
    }
    for (const char* key : {"exact_y", "exact_x"}) {
        if (const Entry* e = find(problem, key)) {
            auto& slot = std::string_view(key) == "exact_y" ? c.exact_y : c.exact_x;
            slot = parse_text(*e, key);
            check_exact(slot, e, key);
        }
    }

    for (const auto& [key, entry] : solver) {
        auto& s = c.solver;
        if (key == "N") {
            s.intervals = parse_count(entry, key);
            if (s.intervals < 1) throw ConfigError(entry.line, "'N' must be at least 1");
        } else if (key == "tol") {
            s.tol = parse_real(entry, key);
            if (!(s.tol > 0.0)) throw ConfigError(entry.line, "'tol' must be positive");
        } else if (key == "max_iter") {
            s.max_iter = parse_count(entry, key);
            if (s.max_iter < 1) throw ConfigError(entry.line, "'max_iter' must be at least 1");
        } else if (key == "refinements") {
            s.refinements = parse_count(entry, key);
            if (s.refinements < 1) throw ConfigError(entry.line, "'refinements' must be at least 1");
        } else if (key == "lipschitz_box") {
            const auto box = parse_list(entry, key);
            if (box.size() != 2 || !(box[0] < box[1])) {
                throw ConfigError(entry.line, "'lipschitz_box' expects [lo, hi] with lo < hi");
            }
            s.lipschitz_box = {box[0], box[1]};
        } else if (key == "lipschitz_samples") {
            s.lipschitz_samples = parse_count(entry, key);
            if (s.lipschitz_samples < 2) throw ConfigError(entry.line, "'lipschitz_samples' must be at least 2");
        } else if (key == "strict") {
            s.strict = parse_bool(entry, key);
        } else {
            throw ConfigError(entry.line, "unknown solver field '" + key + "'");
        }
    }

    // Anything the field-level checks missed surfaces here.
    try {
        (void)to_equation(c);
    } catch (const InvalidProblem& err) {
        throw ConfigError(kind_entry->line, err.what());
    }
    return c;
}

ProblemConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("error while reading '" + path.string() + "'");
    return parse_config(buf.str());
}

std::string write_config(const ProblemConfig& c) {
    std::ostringstream os;
    os << "kind = " << to_string(c.kind) << '\n';
    if (c.kind == ProblemKind::Bvp) {
        os << "q = " << format_number(c.order) << '\n';
        os << "qs = " << format_list(c.orders) << '\n';
        os << "A = " << format_number(c.a) << '\n';
        os << "B = " << format_number(c.b) << '\n';
        os << "eta1 = " << format_number(c.eta1) << '\n';
        os << "eta2 = " << format_number(c.eta2) << '\n';
    } else {
        os << "alpha = " << format_number(c.order) << '\n';
        os << "alphas = " << format_list(c.orders) << '\n';
        if (c.kind == ProblemKind::IvpCaputo) os << "x0 = " << format_list(c.initial) << '\n';
        os << "T = " << format_number(c.horizon) << '\n';
    }
    os << "rhs = \"" << c.rhs << "\"\n";
    if (c.exact_y) os << "exact_y = \"" << *c.exact_y << "\"\n";
    if (c.exact_x) os << "exact_x = \"" << *c.exact_x << "\"\n";
    const auto& s = c.solver;
    os << "\n[solver]\n";
    os << "N = " << s.intervals << '\n';
    os << "tol = " << format_number(s.tol) << '\n';
    os << "max_iter = " << s.max_iter << '\n';
    os << "refinements = " << s.refinements << '\n';
    os << "lipschitz_box = " << format_list({s.lipschitz_box.lo, s.lipschitz_box.hi}) << '\n';
    os << "lipschitz_samples = " << s.lipschitz_samples << '\n';
    os << "strict = " << (s.strict ? "true" : "false") << '\n';
    return os.str();
}

IntegralEquation to_equation(const ProblemConfig& c) {
    RhsFunction rhs(c.rhs, c.orders.size());
    switch (c.kind) {
        case ProblemKind::IvpCaputo:
            return reduce_ivp_caputo(CaputoIvp{c.order, c.orders, InitialData(c.initial), c.horizon, rhs});
        case ProblemKind::IvpRl:
            return reduce_ivp_rl(RlIvp{c.order, c.orders, c.horizon, rhs});
        case ProblemKind::Bvp:
            return reduce_bvp(CaputoBvp{c.order, c.orders, c.a, c.b, c.eta1, c.eta2, rhs});
    }
    throw InvalidProblem("unknown problem kind");
}

CollocationConfig to_collocation_config(const ProblemConfig& c) {
    CollocationConfig cfg;
    cfg.intervals = c.solver.intervals;
    cfg.tol = c.solver.tol;
    cfg.max_iter = c.solver.max_iter;
    cfg.lipschitz_box = c.solver.lipschitz_box;
    cfg.lipschitz_samples = c.solver.lipschitz_samples;
    cfg.strict_contraction = c.solver.strict;
    return cfg;
}

std::optional<ScalarFunction> exact_solution(const std::optional<std::string>& source) {
    if (!source) return std::nullopt;
    auto expr = Expr::parse(*source, 0);
    return ScalarFunction([expr](double t) {
        const double z = 0.0;
        return expr.evaluate(t, std::span<const double>(&z, 1));
    });
}

}  // namespace fracol
