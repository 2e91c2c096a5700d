#pragma once

// Immutable expression trees over {variables, dyadic constants, +, -, *, /,
// integer powers, sin, cos, exp} with symbolic differentiation and light
// simplification (0/1 absorption and exact constant folding).

#include <memory>
#include <string>
#include <vector>

#include "boxroot/dyadic.hpp"
#include "boxroot/errors.hpp"

namespace boxroot {

enum class ExprKind { Constant, Variable, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp };

class Expression;
using Expr = std::shared_ptr<const Expression>;

class Expression {
public:
    ExprKind kind;
    Dyadic value;      // Constant
    std::size_t var = 0; // Variable index
    long power = 0;    // Pow exponent, >= 2 after simplification
    Expr a, b;         // children

    static Expr constant(Dyadic v) {
        auto e = std::make_shared<Expression>();
        e->kind = ExprKind::Constant;
        e->value = std::move(v);
        return e;
    }

    static Expr variable(std::size_t i) {
        auto e = std::make_shared<Expression>();
        e->kind = ExprKind::Variable;
        e->var = i;
        return e;
    }

    static Expr add(Expr l, Expr r) {
        if (is_const(l) && is_const(r)) return constant(l->value + r->value);
        if (is_zero(l)) return r;
        if (is_zero(r)) return l;
        return binary(ExprKind::Add, std::move(l), std::move(r));
    }

    static Expr sub(Expr l, Expr r) {
        if (is_const(l) && is_const(r)) return constant(l->value - r->value);
        if (is_zero(r)) return l;
        if (is_zero(l)) return neg(std::move(r));
        return binary(ExprKind::Sub, std::move(l), std::move(r));
    }

    static Expr mul(Expr l, Expr r) {
        if (is_const(l) && is_const(r)) return constant(l->value * r->value);
        if (is_zero(l) || is_zero(r)) return constant(Dyadic());
        if (is_one(l)) return r;
        if (is_one(r)) return l;
        return binary(ExprKind::Mul, std::move(l), std::move(r));
    }

    static Expr div(Expr l, Expr r) {
        if (is_const(r)) {
            if (r->value.is_zero()) throw DomainError("division by constant zero");
            // Fold only when the divisor is a power of two, which is exact.
            if (r->value.mantissa() == 1 || r->value.mantissa() == -1) {
                Dyadic scale = Dyadic(r->value.mantissa(), -r->value.exponent());
                return mul(constant(scale), std::move(l));
            }
        }
        return binary(ExprKind::Div, std::move(l), std::move(r));
    }

    static Expr pow(Expr base, long k) {
        if (k < 0) return div(constant(Dyadic(1)), pow(std::move(base), -k));
        if (k == 0) return constant(Dyadic(1));
        if (k == 1) return base;
        if (is_const(base)) {
            Dyadic v(1);
            for (long i = 0; i < k; ++i) v = v * base->value;
            return constant(v);
        }
        auto e = std::make_shared<Expression>();
        e->kind = ExprKind::Pow;
        e->a = std::move(base);
        e->power = k;
        return e;
    }

    static Expr neg(Expr x) {
        if (is_const(x)) return constant(-x->value);
        if (x->kind == ExprKind::Neg) return x->a;
        return unary(ExprKind::Neg, std::move(x));
    }

    static Expr sin(Expr x) { return unary(ExprKind::Sin, std::move(x)); }
    static Expr cos(Expr x) { return unary(ExprKind::Cos, std::move(x)); }
    static Expr exp(Expr x) { return unary(ExprKind::Exp, std::move(x)); }

private:
    static bool is_const(const Expr& e) { return e->kind == ExprKind::Constant; }
    static bool is_zero(const Expr& e) { return is_const(e) && e->value.is_zero(); }
    static bool is_one(const Expr& e) { return is_const(e) && e->value == Dyadic(1); }

    static Expr binary(ExprKind k, Expr l, Expr r) {
        auto e = std::make_shared<Expression>();
        e->kind = k;
        e->a = std::move(l);
        e->b = std::move(r);
        return e;
    }

    static Expr unary(ExprKind k, Expr x) {
        auto e = std::make_shared<Expression>();
        e->kind = k;
        e->a = std::move(x);
        return e;
    }
};

// Structural equality (pointer shortcut first).
inline bool equal(const Expr& x, const Expr& y) {
    if (x == y) return true;
    if (x->kind != y->kind) return false;
    switch (x->kind) {
    case ExprKind::Constant: return x->value == y->value;
    case ExprKind::Variable: return x->var == y->var;
    case ExprKind::Pow: return x->power == y->power && equal(x->a, y->a);
    case ExprKind::Neg:
    case ExprKind::Sin:
    case ExprKind::Cos:
    case ExprKind::Exp: return equal(x->a, y->a);
    default: return equal(x->a, y->a) && equal(x->b, y->b);
    }
}

inline Expr differentiate(const Expr& e, std::size_t var) {
    using E = Expression;
    switch (e->kind) {
    case ExprKind::Constant: return E::constant(Dyadic());
    case ExprKind::Variable: return E::constant(Dyadic(e->var == var ? 1 : 0));
    case ExprKind::Add: return E::add(differentiate(e->a, var), differentiate(e->b, var));
    case ExprKind::Sub: return E::sub(differentiate(e->a, var), differentiate(e->b, var));
    case ExprKind::Mul:
        return E::add(E::mul(differentiate(e->a, var), e->b),
                      E::mul(e->a, differentiate(e->b, var)));
    case ExprKind::Div:
        // (u'v - uv') / v^2
        return E::div(E::sub(E::mul(differentiate(e->a, var), e->b),
                             E::mul(e->a, differentiate(e->b, var))),
                      E::pow(e->b, 2));
    case ExprKind::Pow:
        return E::mul(E::mul(E::constant(Dyadic(e->power)), E::pow(e->a, e->power - 1)),
                      differentiate(e->a, var));
    case ExprKind::Neg: return E::neg(differentiate(e->a, var));
    case ExprKind::Sin: return E::mul(E::cos(e->a), differentiate(e->a, var));
    case ExprKind::Cos: return E::neg(E::mul(E::sin(e->a), differentiate(e->a, var)));
    case ExprKind::Exp: return E::mul(E::exp(e->a), differentiate(e->a, var));
    }
    throw Error("differentiate: unreachable");
}

inline std::string to_string(const Expr& e, const std::vector<std::string>* names = nullptr) {
    auto var_name = [&](std::size_t i) {
        if (names && i < names->size()) return (*names)[i];
        return "x" + std::to_string(i + 1);
    };
    switch (e->kind) {
    case ExprKind::Constant: return e->value.to_decimal_string();
    case ExprKind::Variable: return var_name(e->var);
    case ExprKind::Add: return "(" + to_string(e->a, names) + " + " + to_string(e->b, names) + ")";
    case ExprKind::Sub: return "(" + to_string(e->a, names) + " - " + to_string(e->b, names) + ")";
    case ExprKind::Mul: return "(" + to_string(e->a, names) + " * " + to_string(e->b, names) + ")";
    case ExprKind::Div: return "(" + to_string(e->a, names) + " / " + to_string(e->b, names) + ")";
    case ExprKind::Pow: return to_string(e->a, names) + "^" + std::to_string(e->power);
    case ExprKind::Neg: return "-(" + to_string(e->a, names) + ")";
    case ExprKind::Sin: return "sin(" + to_string(e->a, names) + ")";
    case ExprKind::Cos: return "cos(" + to_string(e->a, names) + ")";
    case ExprKind::Exp: return "exp(" + to_string(e->a, names) + ")";
    }
    return "?";
}

} // namespace boxroot
