#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "matfunc/errors.hpp"
#include "matfunc/matrix.hpp"

namespace matfunc {

// Scalar function mini-language.
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' nonneg-integer)?
//   base   := number | 'z' | 'i' | ident '(' expr ')' | '(' expr ')' | '-' base
//
// Whitespace insensitive.  log and sqrt use the principal branch (cut along
// the negative real axis; on the cut the value is the limit from above).

enum class ExprKind { constant, variable, negate, add, sub, mul, div, ipow, apply };

enum class Func { exp_f, sin_f, cos_f, log_f, sqrt_f, conj_f, re_f, im_f, abs_f };

struct Expr {
    ExprKind kind = ExprKind::constant;
    Complex value{0.0, 0.0};     // constant
    long exponent = 0;           // ipow, >= 0
    Func func = Func::exp_f;     // apply
    std::vector<Expr> kids;

    static Expr constant(Complex v) {
        Expr e;
        e.kind = ExprKind::constant;
        e.value = v;
        return e;
    }
    static Expr variable() {
        Expr e;
        e.kind = ExprKind::variable;
        return e;
    }
    static Expr unary(ExprKind k, Expr child) {
        Expr e;
        e.kind = k;
        e.kids.push_back(std::move(child));
        return e;
    }
    static Expr binary(ExprKind k, Expr a, Expr b) {
        Expr e;
        e.kind = k;
        e.kids.push_back(std::move(a));
        e.kids.push_back(std::move(b));
        return e;
    }
    static Expr power(Expr base, long n) {
        Expr e;
        e.kind = ExprKind::ipow;
        e.exponent = n;
        e.kids.push_back(std::move(base));
        return e;
    }
    static Expr call(Func f, Expr arg) {
        Expr e;
        e.kind = ExprKind::apply;
        e.func = f;
        e.kids.push_back(std::move(arg));
        return e;
    }

    bool is_const(Complex v) const { return kind == ExprKind::constant && value == v; }

    friend bool operator==(const Expr& a, const Expr& b) {
        if (a.kind != b.kind) return false;
        switch (a.kind) {
            case ExprKind::constant:
                if (a.value != b.value) return false;
                break;
            case ExprKind::ipow:
                if (a.exponent != b.exponent) return false;
                break;
            case ExprKind::apply:
                if (a.func != b.func) return false;
                break;
            default:
                break;
        }
        if (a.kids.size() != b.kids.size()) return false;
        for (std::size_t i = 0; i < a.kids.size(); ++i)
            if (!(a.kids[i] == b.kids[i])) return false;
        return true;
    }
};

namespace expr_detail {

inline const char* func_name(Func f) {
    switch (f) {
        case Func::exp_f: return "exp";
        case Func::sin_f: return "sin";
        case Func::cos_f: return "cos";
        case Func::log_f: return "log";
        case Func::sqrt_f: return "sqrt";
        case Func::conj_f: return "conj";
        case Func::re_f: return "re";
        case Func::im_f: return "im";
        case Func::abs_f: return "abs";
    }
    return "?";
}

struct Parser {
    std::string_view text;
    std::size_t pos = 0;

    [[noreturn]] void fail(std::size_t at) {
        raise_error("SyntaxError", "invalid token at offset " + std::to_string(at));
    }

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool peek_char(char c) {
        skip_ws();
        return pos < text.size() && text[pos] == c;
    }

    bool accept(char c) {
        if (peek_char(c)) {
            ++pos;
            return true;
        }
        return false;
    }

    Expr parse_expr() {
        Expr lhs = parse_term();
        for (;;) {
            if (accept('+'))
                lhs = Expr::binary(ExprKind::add, std::move(lhs), parse_term());
            else if (accept('-'))
                lhs = Expr::binary(ExprKind::sub, std::move(lhs), parse_term());
            else
                return lhs;
        }
    }

    Expr parse_term() {
        Expr lhs = parse_factor();
        for (;;) {
            if (accept('*'))
                lhs = Expr::binary(ExprKind::mul, std::move(lhs), parse_factor());
            else if (accept('/'))
                lhs = Expr::binary(ExprKind::div, std::move(lhs), parse_factor());
            else
                return lhs;
        }
    }

    Expr parse_factor() {
        Expr base = parse_base();
        if (accept('^')) {
            skip_ws();
            const std::size_t at = pos;
            if (at >= text.size() || !std::isdigit(static_cast<unsigned char>(text[at]))) fail(at);
            long n = 0;
            const auto* first = text.data() + pos;
            const auto* last = text.data() + text.size();
            const auto res = std::from_chars(first, last, n);
            if (res.ec != std::errc() || n < 0) fail(at);
            pos += static_cast<std::size_t>(res.ptr - first);
            return Expr::power(std::move(base), n);
        }
        return base;
    }

    Expr parse_base() {
        skip_ws();
        const std::size_t at = pos;
        if (at >= text.size()) fail(at);
        const char c = text[at];
        if (c == '-') {
            ++pos;
            return Expr::unary(ExprKind::negate, parse_base());
        }
        if (c == '(') {
            ++pos;
            Expr inner = parse_expr();
            skip_ws();
            if (!accept(')')) fail(pos);
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t end = at;
            while (end < text.size() && std::isalpha(static_cast<unsigned char>(text[end]))) ++end;
            const std::string_view word = text.substr(at, end - at);
            if (word == "z") {
                pos = end;
                return Expr::variable();
            }
            if (word == "i") {
                pos = end;
                return Expr::constant(Complex(0.0, 1.0));
            }
            Func f;
            if (word == "exp") f = Func::exp_f;
            else if (word == "sin") f = Func::sin_f;
            else if (word == "cos") f = Func::cos_f;
            else if (word == "log") f = Func::log_f;
            else if (word == "sqrt") f = Func::sqrt_f;
            else if (word == "conj") f = Func::conj_f;
            else if (word == "re") f = Func::re_f;
            else if (word == "im") f = Func::im_f;
            else if (word == "abs") f = Func::abs_f;
            else fail(at);
            pos = end;
            skip_ws();
            if (!accept('(')) fail(pos);
            Expr arg = parse_expr();
            skip_ws();
            if (!accept(')')) fail(pos);
            return Expr::call(f, std::move(arg));
        }
        fail(at);
    }

    Expr parse_number() {
        const std::size_t at = pos;
        std::size_t end = at;
        while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
        if (end < text.size() && text[end] == '.') {
            ++end;
            while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
        }
        if (end == at || (end == at + 1 && text[at] == '.')) fail(at);
        if (end < text.size() && (text[end] == 'e' || text[end] == 'E')) {
            std::size_t e = end + 1;
            if (e < text.size() && (text[e] == '+' || text[e] == '-')) ++e;
            std::size_t digits = e;
            while (digits < text.size() && std::isdigit(static_cast<unsigned char>(text[digits])))
                ++digits;
            if (digits > e) end = digits;
        }
        double v = 0.0;
        const auto res = std::from_chars(text.data() + at, text.data() + end, v);
        if (res.ec != std::errc()) fail(at);
        pos = at + static_cast<std::size_t>(res.ptr - (text.data() + at));
        return Expr::constant(Complex(v, 0.0));
    }
};

}  // namespace expr_detail

inline Expr parse(std::string_view text) {
    expr_detail::Parser p{text};
    Expr e = p.parse_expr();
    p.skip_ws();
    if (p.pos != text.size()) p.fail(p.pos);
    return e;
}

inline Complex integer_power(Complex base, long n) {
    Complex r(1.0, 0.0);
    Complex b = base;
    for (long e = n; e > 0; e >>= 1) {
        if (e & 1) r *= b;
        b *= b;
    }
    return r;
}

// Evaluate at z.  Division by an exactly-zero denominator is a pole
// (DomainError); log and sqrt at 0 are UndefinedValue.
inline Complex eval(const Expr& e, Complex z) {
    switch (e.kind) {
        case ExprKind::constant: return e.value;
        case ExprKind::variable: return z;
        case ExprKind::negate: return -eval(e.kids[0], z);
        case ExprKind::add: return eval(e.kids[0], z) + eval(e.kids[1], z);
        case ExprKind::sub: return eval(e.kids[0], z) - eval(e.kids[1], z);
        case ExprKind::mul: return eval(e.kids[0], z) * eval(e.kids[1], z);
        case ExprKind::div: {
            const Complex den = eval(e.kids[1], z);
            if (den == Complex(0.0, 0.0))
                raise_error("DomainError", "division by zero during evaluation");
            return eval(e.kids[0], z) / den;
        }
        case ExprKind::ipow: return integer_power(eval(e.kids[0], z), e.exponent);
        case ExprKind::apply: {
            const Complex v = eval(e.kids[0], z);
            switch (e.func) {
                case Func::exp_f: return std::exp(v);
                case Func::sin_f: return std::sin(v);
                case Func::cos_f: return std::cos(v);
                case Func::log_f:
                    if (v == Complex(0.0, 0.0))
                        raise_error("UndefinedValue", "log(0) is undefined");
                    return std::log(v);
                case Func::sqrt_f:
                    if (v == Complex(0.0, 0.0))
                        raise_error("UndefinedValue", "sqrt(0) is a branch point");
                    return std::sqrt(v);
                case Func::conj_f: return std::conj(v);
                case Func::re_f: return Complex(v.real(), 0.0);
                case Func::im_f: return Complex(v.imag(), 0.0);
                case Func::abs_f: return Complex(std::abs(v), 0.0);
            }
        }
    }
    raise_error("InvalidArgument", "malformed expression node");
}

inline bool is_holomorphic(const Expr& e) {
    if (e.kind == ExprKind::apply &&
        (e.func == Func::conj_f || e.func == Func::re_f || e.func == Func::im_f ||
         e.func == Func::abs_f))
        return false;
    for (const Expr& k : e.kids)
        if (!is_holomorphic(k)) return false;
    return true;
}

namespace expr_detail {

inline Expr simplify(Expr e) {
    for (Expr& k : e.kids) k = simplify(std::move(k));
    auto all_const = [&] {
        for (const Expr& k : e.kids)
            if (k.kind != ExprKind::constant) return false;
        return true;
    };
    switch (e.kind) {
        case ExprKind::negate:
            if (all_const()) return Expr::constant(-e.kids[0].value);
            break;
        case ExprKind::add:
            if (all_const()) return Expr::constant(e.kids[0].value + e.kids[1].value);
            if (e.kids[0].is_const(Complex(0, 0))) return e.kids[1];
            if (e.kids[1].is_const(Complex(0, 0))) return e.kids[0];
            break;
        case ExprKind::sub:
            if (all_const()) return Expr::constant(e.kids[0].value - e.kids[1].value);
            if (e.kids[1].is_const(Complex(0, 0))) return e.kids[0];
            if (e.kids[0].is_const(Complex(0, 0)))
                return Expr::unary(ExprKind::negate, e.kids[1]);
            break;
        case ExprKind::mul:
            if (all_const()) return Expr::constant(e.kids[0].value * e.kids[1].value);
            if (e.kids[0].is_const(Complex(0, 0)) || e.kids[1].is_const(Complex(0, 0)))
                return Expr::constant(Complex(0, 0));
            if (e.kids[0].is_const(Complex(1, 0))) return e.kids[1];
            if (e.kids[1].is_const(Complex(1, 0))) return e.kids[0];
            break;
        case ExprKind::div:
            if (e.kids[1].is_const(Complex(1, 0))) return e.kids[0];
            if (e.kids[0].is_const(Complex(0, 0)) && !e.kids[1].is_const(Complex(0, 0)))
                return Expr::constant(Complex(0, 0));
            break;
        case ExprKind::ipow:
            if (e.exponent == 0) return Expr::constant(Complex(1, 0));
            if (e.exponent == 1) return e.kids[0];
            if (all_const()) return Expr::constant(integer_power(e.kids[0].value, e.exponent));
            break;
        default:
            break;
    }
    return e;
}

inline Expr diff1(const Expr& e) {
    switch (e.kind) {
        case ExprKind::constant: return Expr::constant(Complex(0, 0));
        case ExprKind::variable: return Expr::constant(Complex(1, 0));
        case ExprKind::negate: return Expr::unary(ExprKind::negate, diff1(e.kids[0]));
        case ExprKind::add: return Expr::binary(ExprKind::add, diff1(e.kids[0]), diff1(e.kids[1]));
        case ExprKind::sub: return Expr::binary(ExprKind::sub, diff1(e.kids[0]), diff1(e.kids[1]));
        case ExprKind::mul:
            return Expr::binary(ExprKind::add,
                                Expr::binary(ExprKind::mul, diff1(e.kids[0]), e.kids[1]),
                                Expr::binary(ExprKind::mul, e.kids[0], diff1(e.kids[1])));
        case ExprKind::div: {
            Expr num = Expr::binary(ExprKind::sub,
                                    Expr::binary(ExprKind::mul, diff1(e.kids[0]), e.kids[1]),
                                    Expr::binary(ExprKind::mul, e.kids[0], diff1(e.kids[1])));
            return Expr::binary(ExprKind::div, std::move(num), Expr::power(e.kids[1], 2));
        }
        case ExprKind::ipow: {
            if (e.exponent == 0) return Expr::constant(Complex(0, 0));
            Expr scaled = Expr::binary(ExprKind::mul, Expr::constant(Complex(double(e.exponent), 0)),
                                       Expr::power(e.kids[0], e.exponent - 1));
            return Expr::binary(ExprKind::mul, std::move(scaled), diff1(e.kids[0]));
        }
        case ExprKind::apply: {
            Expr outer;
            switch (e.func) {
                case Func::exp_f: outer = Expr::call(Func::exp_f, e.kids[0]); break;
                case Func::sin_f: outer = Expr::call(Func::cos_f, e.kids[0]); break;
                case Func::cos_f:
                    outer = Expr::unary(ExprKind::negate, Expr::call(Func::sin_f, e.kids[0]));
                    break;
                case Func::log_f:
                    outer = Expr::binary(ExprKind::div, Expr::constant(Complex(1, 0)), e.kids[0]);
                    break;
                case Func::sqrt_f:
                    outer = Expr::binary(
                        ExprKind::div, Expr::constant(Complex(1, 0)),
                        Expr::binary(ExprKind::mul, Expr::constant(Complex(2, 0)),
                                     Expr::call(Func::sqrt_f, e.kids[0])));
                    break;
                default:
                    raise_error("NotDifferentiable",
                                std::string(func_name(e.func)) + " is not holomorphic");
            }
            return Expr::binary(ExprKind::mul, std::move(outer), diff1(e.kids[0]));
        }
    }
    raise_error("InvalidArgument", "malformed expression node");
}

}  // namespace expr_detail

// Symbolic derivative of the given order (>= 1); rejects expressions with
// non-holomorphic nodes.
inline Expr derivative(const Expr& e, int order) {
    if (order < 1) raise_error("InvalidArgument", "derivative order must be >= 1");
    if (!is_holomorphic(e))
        raise_error("NotDifferentiable", "expression contains a non-holomorphic node");
    Expr d = expr_detail::simplify(e);
    for (int i = 0; i < order; ++i) d = expr_detail::simplify(expr_detail::diff1(d));
    return d;
}

namespace expr_detail {

inline void format_double(std::string& out, double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, res.ptr);
}

inline void print_node(std::string& out, const Expr& e);

inline void print_child(std::string& out, const Expr& child, bool needs_parens) {
    if (needs_parens) out.push_back('(');
    print_node(out, child);
    if (needs_parens) out.push_back(')');
}

inline int precedence(const Expr& e) {
    switch (e.kind) {
        case ExprKind::add:
        case ExprKind::sub: return 1;
        case ExprKind::mul:
        case ExprKind::div: return 2;
        case ExprKind::negate: return 3;
        case ExprKind::ipow: return 4;
        default: return 5;
    }
}

inline void print_node(std::string& out, const Expr& e) {
    switch (e.kind) {
        case ExprKind::constant: {
            const Complex v = e.value;
            if (v.imag() == 0.0) {
                if (v.real() < 0.0) {
                    out.push_back('(');
                    out.push_back('-');
                    format_double(out, -v.real());
                    out.push_back(')');
                } else {
                    format_double(out, v.real());
                }
            } else if (v == Complex(0.0, 1.0)) {
                out.push_back('i');
            } else {
                out.push_back('(');
                format_double(out, v.real());
                out.append("+");
                format_double(out, v.imag());
                out.append("*i)");
            }
            return;
        }
        case ExprKind::variable: out.push_back('z'); return;
        case ExprKind::negate:
            out.push_back('-');
            print_child(out, e.kids[0], precedence(e.kids[0]) < 3);
            return;
        case ExprKind::add:
        case ExprKind::sub:
            print_child(out, e.kids[0], precedence(e.kids[0]) < 1);
            out.push_back(e.kind == ExprKind::add ? '+' : '-');
            print_child(out, e.kids[1], precedence(e.kids[1]) <= 1);
            return;
        case ExprKind::mul:
        case ExprKind::div:
            print_child(out, e.kids[0], precedence(e.kids[0]) < 2);
            out.push_back(e.kind == ExprKind::mul ? '*' : '/');
            print_child(out, e.kids[1], precedence(e.kids[1]) <= 2);
            return;
        case ExprKind::ipow:
            print_child(out, e.kids[0], precedence(e.kids[0]) < 5);
            out.push_back('^');
            out.append(std::to_string(e.exponent));
            return;
        case ExprKind::apply:
            out.append(func_name(e.func));
            out.push_back('(');
            print_node(out, e.kids[0]);
            out.push_back(')');
            return;
    }
}

}  // namespace expr_detail

inline std::string to_string(const Expr& e) {
    std::string out;
    expr_detail::print_node(out, e);
    return out;
}

}  // namespace matfunc
