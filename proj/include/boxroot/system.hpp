#pragma once

// FunctionSystem: a square system f = (f_1 ... f_n) with machine-derived
// partial tables, plus the line-oriented input grammar:
//
//   # comment
//   vars x, y
//   f1 = x^2 + y^2 - 1
//   f2 = x - y
//   roi = [-2, 2] x [-2, 2]
//   max_depth = 40            (options as key = value)
//   root = (0.7071, 0.7071)   (hint for diagnose)
//
// Decimal literals that are not exactly dyadic (e.g. 0.1) parse to a quotient
// node so evaluation stays a certified enclosure of the written value.

#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "boxroot/dyadic.hpp"
#include "boxroot/errors.hpp"
#include "boxroot/evaluate.hpp"
#include "boxroot/expression.hpp"
#include "boxroot/interval.hpp"

namespace boxroot {

struct FunctionSystem {
    std::vector<std::string> variables;
    std::vector<Expr> components;
    std::vector<std::vector<Expr>> first_partials;               // [i][j]
    std::vector<std::vector<std::vector<Expr>>> second_partials; // [i][j][k]
    std::vector<MeanValueForm> component_forms;
    std::vector<std::vector<MeanValueForm>> partial_forms;
    Expr jacobian_det; // symbolic determinant, cofactor expansion
    MeanValueForm jacobian_det_form;

    std::size_t dimension() const { return components.size(); }

    static FunctionSystem from_components(std::vector<std::string> vars,
                                          std::vector<Expr> comps) {
        if (vars.empty()) throw DimensionMismatch("system needs at least one variable");
        if (vars.size() != comps.size())
            throw DimensionMismatch("system must be square: " + std::to_string(comps.size()) +
                                    " components for " + std::to_string(vars.size()) +
                                    " variables");
        FunctionSystem sys;
        sys.variables = std::move(vars);
        sys.components = std::move(comps);
        std::size_t n = sys.components.size();
        sys.first_partials.resize(n);
        sys.second_partials.resize(n);
        sys.component_forms.reserve(n);
        sys.partial_forms.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            sys.component_forms.emplace_back(sys.components[i], n);
            sys.first_partials[i] = sys.component_forms[i].partials;
            sys.second_partials[i].resize(n);
            sys.partial_forms[i].reserve(n);
            for (std::size_t j = 0; j < n; ++j) {
                sys.partial_forms[i].emplace_back(sys.first_partials[i][j], n);
                sys.second_partials[i][j] = sys.partial_forms[i][j].partials;
            }
        }
        sys.jacobian_det = det_expression(sys.first_partials);
        sys.jacobian_det_form = MeanValueForm(sys.jacobian_det, n);
        return sys;
    }

private:
    static Expr det_expression(const std::vector<std::vector<Expr>>& m) {
        std::size_t n = m.size();
        if (n == 1) return m[0][0];
        Expr det = Expression::constant(Dyadic());
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<std::vector<Expr>> minor;
            minor.reserve(n - 1);
            for (std::size_t r = 1; r < n; ++r) {
                std::vector<Expr> row;
                row.reserve(n - 1);
                for (std::size_t c = 0; c < n; ++c)
                    if (c != j) row.push_back(m[r][c]);
                minor.push_back(std::move(row));
            }
            Expr term = Expression::mul(m[0][j], det_expression(minor));
            det = (j % 2 == 0) ? Expression::add(det, term) : Expression::sub(det, term);
        }
        return det;
    }
};

// --- tokenizer / expression parser -----------------------------------------

namespace detail {

struct Lexer {
    std::string_view src;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < src.size() && (src[pos] == ' ' || src[pos] == '\t')) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= src.size();
    }
    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }
    bool consume(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }
    std::string ident() {
        skip_ws();
        std::size_t start = pos;
        while (pos < src.size() && (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
            ++pos;
        return std::string(src.substr(start, pos - start));
    }
};

// digits * 10^dec_exp as an exact constant or a quotient node.
inline Expr number_expr(const mpz_class& digits, long dec_exp) {
    mpz_class m = digits;
    if (dec_exp >= 0) {
        mpz_class p10;
        mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(dec_exp));
        return Expression::constant(Dyadic(m * p10, 0));
    }
    mpz_class p5;
    mpz_ui_pow_ui(p5.get_mpz_t(), 5, static_cast<unsigned long>(-dec_exp));
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), m.get_mpz_t(), p5.get_mpz_t());
    m /= g;
    p5 /= g;
    Expr num = Expression::constant(Dyadic(m, dec_exp));
    if (p5 == 1) return num;
    return Expression::div(num, Expression::constant(Dyadic(p5, 0)));
}

inline Expr parse_number(Lexer& lx) {
    lx.skip_ws();
    std::size_t start = lx.pos;
    std::string digits;
    while (lx.pos < lx.src.size() && std::isdigit(static_cast<unsigned char>(lx.src[lx.pos])))
        digits += lx.src[lx.pos++];
    long frac = 0;
    if (lx.pos < lx.src.size() && lx.src[lx.pos] == '.') {
        ++lx.pos;
        while (lx.pos < lx.src.size() && std::isdigit(static_cast<unsigned char>(lx.src[lx.pos]))) {
            digits += lx.src[lx.pos++];
            ++frac;
        }
    }
    if (digits.empty()) throw SyntaxError("expected number at offset " + std::to_string(start));
    long ten_exp = -frac;
    if (lx.pos < lx.src.size() && (lx.src[lx.pos] == 'e' || lx.src[lx.pos] == 'E')) {
        std::size_t save = lx.pos++;
        long sign = 1;
        if (lx.pos < lx.src.size() && (lx.src[lx.pos] == '+' || lx.src[lx.pos] == '-')) {
            if (lx.src[lx.pos] == '-') sign = -1;
            ++lx.pos;
        }
        std::string es;
        while (lx.pos < lx.src.size() && std::isdigit(static_cast<unsigned char>(lx.src[lx.pos])))
            es += lx.src[lx.pos++];
        if (es.empty()) {
            lx.pos = save; // 'e' belonged to something else
        } else {
            ten_exp += sign * std::stol(es);
        }
    }
    return number_expr(mpz_class(digits, 10), ten_exp);
}

struct ExprParser {
    Lexer& lx;
    const std::vector<std::string>& vars;

    Expr parse() {
        Expr e = sum();
        if (!lx.eof()) throw SyntaxError("trailing input in expression");
        return e;
    }

    Expr sum() {
        Expr e = term();
        for (;;) {
            if (lx.consume('+')) e = Expression::add(e, term());
            else if (lx.consume('-')) e = Expression::sub(e, term());
            else return e;
        }
    }

    Expr term() {
        Expr e = factor();
        for (;;) {
            if (lx.consume('*')) e = Expression::mul(e, factor());
            else if (lx.consume('/')) e = Expression::div(e, factor());
            else return e;
        }
    }

    Expr factor() {
        if (lx.consume('-')) return Expression::neg(factor());
        if (lx.consume('+')) return factor();
        return power();
    }

    Expr power() {
        Expr base = atom();
        if (lx.consume('^')) {
            long sign = 1;
            if (lx.consume('-')) sign = -1;
            lx.skip_ws();
            std::string digits;
            while (lx.pos < lx.src.size() && std::isdigit(static_cast<unsigned char>(lx.src[lx.pos])))
                digits += lx.src[lx.pos++];
            if (digits.empty()) throw SyntaxError("power wants an integer exponent");
            return Expression::pow(base, sign * std::stol(digits));
        }
        return base;
    }

    Expr atom() {
        char c = lx.peek();
        if (c == '(') {
            lx.consume('(');
            Expr e = sum();
            if (!lx.consume(')')) throw SyntaxError("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number(lx);
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string name = lx.ident();
            if (lx.consume('(')) {
                Expr arg = sum();
                if (!lx.consume(')')) throw SyntaxError("expected ')' after " + name);
                if (name == "sin") return Expression::sin(arg);
                if (name == "cos") return Expression::cos(arg);
                if (name == "exp") return Expression::exp(arg);
                throw UnknownFunction("unknown function '" + name + "'");
            }
            for (std::size_t i = 0; i < vars.size(); ++i)
                if (vars[i] == name) return Expression::variable(i);
            throw SyntaxError("unknown variable '" + name + "'");
        }
        throw SyntaxError(std::string("unexpected character '") + c + "'");
    }
};

} // namespace detail

inline Expr parse_expression(const std::string& text, const std::vector<std::string>& vars) {
    detail::Lexer lx{text};
    detail::ExprParser p{lx, vars};
    return p.parse();
}

// --- input files ------------------------------------------------------------

struct ParsedInput {
    FunctionSystem system;
    std::optional<IntervalVector> roi;
    bool roi_rounded = false; // non-dyadic corners were outward-rounded once
    std::map<std::string, std::string> options;
    std::vector<DyadicVector> root_hints;
};

namespace detail {

// Evaluates a numeric literal (possibly a quotient node) to an interval.
inline Interval literal_interval(const std::string& text, long bits) {
    Lexer lx{text};
    std::vector<std::string> no_vars;
    ExprParser p{lx, no_vars};
    Expr e = p.parse();
    return eval_natural(e, IntervalVector(0), RoundingContext{bits, bits});
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// "[a,b] x [c,d]" -> intervals; non-dyadic endpoints rounded outward.
inline IntervalVector parse_roi_text(const std::string& text, bool& rounded) {
    std::vector<Interval> comps;
    std::size_t pos = 0;
    rounded = false;
    while (pos < text.size()) {
        std::size_t open = text.find('[', pos);
        if (open == std::string::npos) break;
        std::size_t close = text.find(']', open);
        if (close == std::string::npos) throw SyntaxError("roi: missing ']'");
        std::string body = text.substr(open + 1, close - open - 1);
        auto parts = split(body, ',');
        if (parts.size() != 2) throw SyntaxError("roi: expected [lo, hi]");
        Interval lo_iv = literal_interval(trim(parts[0]), 128);
        Interval hi_iv = literal_interval(trim(parts[1]), 128);
        if (!(lo_iv.width().is_zero() && hi_iv.width().is_zero())) rounded = true;
        Dyadic lo = lo_iv.lo, hi = hi_iv.hi; // outward
        if (!(lo < hi)) throw SyntaxError("roi: empty side");
        comps.emplace_back(lo, hi);
        pos = close + 1;
    }
    if (comps.empty()) throw SyntaxError("roi: no intervals");
    return IntervalVector(std::move(comps));
}

inline DyadicVector parse_point_text(const std::string& text) {
    std::string body = trim(text);
    if (!body.empty() && body.front() == '(') {
        if (body.back() != ')') throw SyntaxError("root: missing ')'");
        body = body.substr(1, body.size() - 2);
    }
    DyadicVector p;
    for (const auto& part : split(body, ',')) {
        Interval iv = literal_interval(trim(part), 128);
        p.push_back(iv.midpoint());
    }
    return p;
}

} // namespace detail

inline ParsedInput parse_input_text(const std::string& text) {
    std::vector<std::string> vars;
    std::vector<std::pair<long, Expr>> comps;
    ParsedInput out;
    bool saw_system_line = false;

    std::size_t line_no = 0;
    for (const auto& raw : detail::split(text, '\n')) {
        ++line_no;
        std::string line = detail::trim(raw);
        auto hash = line.find('#');
        if (hash != std::string::npos) line = detail::trim(line.substr(0, hash));
        if (line.empty()) continue;
        try {
            if (line.rfind("vars", 0) == 0 &&
                (line.size() == 4 || line[4] == ' ' || line[4] == '\t')) {
                for (auto& v : detail::split(line.substr(4), ',')) {
                    std::string name = detail::trim(v);
                    if (name.empty()) throw SyntaxError("empty variable name");
                    vars.push_back(name);
                }
                saw_system_line = true;
                continue;
            }
            auto eq = line.find('=');
            if (eq == std::string::npos) throw SyntaxError("expected 'key = value'");
            std::string key = detail::trim(line.substr(0, eq));
            std::string value = detail::trim(line.substr(eq + 1));
            if (key.size() >= 2 && key[0] == 'f' &&
                std::isdigit(static_cast<unsigned char>(key[1]))) {
                long idx = std::stol(key.substr(1));
                if (vars.empty()) throw SyntaxError("component before 'vars' line");
                comps.emplace_back(idx, parse_expression(value, vars));
                saw_system_line = true;
            } else if (key == "roi") {
                out.roi = detail::parse_roi_text(value, out.roi_rounded);
            } else if (key == "root") {
                out.root_hints.push_back(detail::parse_point_text(value));
            } else {
                out.options[key] = value;
            }
        } catch (const UnknownFunction& e) {
            throw UnknownFunction("line " + std::to_string(line_no) + ": " + e.what());
        } catch (const DimensionMismatch&) {
            throw;
        } catch (const Error& e) {
            throw SyntaxError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!saw_system_line) throw SyntaxError("no system found in input");

    std::vector<Expr> ordered(comps.size());
    for (auto& [idx, e] : comps) {
        if (idx < 1 || idx > static_cast<long>(comps.size()) || ordered[idx - 1])
            throw SyntaxError("components must be f1..fn without gaps");
        ordered[idx - 1] = std::move(e);
    }
    out.system = FunctionSystem::from_components(std::move(vars), std::move(ordered));
    if (out.roi && out.roi->size() != out.system.dimension())
        throw DimensionMismatch("roi dimension does not match system");
    for (const auto& hint : out.root_hints)
        if (hint.size() != out.system.dimension())
            throw DimensionMismatch("root hint dimension does not match system");
    return out;
}

// Convenience used by tests: parse a system given as source text.
inline FunctionSystem parse_system(const std::string& text) {
    return parse_input_text(text).system;
}

// Entrywise certified upper bounds on K(region)_ij = sum_k |d2 f_i / dx_j
// dx_k (region)|, the curvature matrix behind the sure-success radii.
inline DyadicMatrix k_matrix(const FunctionSystem& sys, const IntervalVector& region,
                             const RoundingContext& ctx) {
    std::size_t n = sys.dimension();
    DyadicMatrix k(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Dyadic sum;
            for (std::size_t m = 0; m < n; ++m)
                sum += eval_natural(sys.second_partials[i][j][m], region, ctx).magnitude();
            k.at(i, j) = sum;
        }
    return k;
}

// Interval Jacobian with natural-form entries (used for point anchors and
// root-enclosure bounds; the predicates use mean value forms instead).
inline IntervalMatrix jacobian_natural(const FunctionSystem& sys, const IntervalVector& region,
                                       const RoundingContext& ctx) {
    std::size_t n = sys.dimension();
    IntervalMatrix j(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < n; ++c)
            j.at(i, c) = eval_natural(sys.first_partials[i][c], region, ctx);
    return j;
}

} // namespace boxroot
