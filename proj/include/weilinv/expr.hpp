#ifndef WEILINV_EXPR_HPP
#define WEILINV_EXPR_HPP

#include <cctype>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "weilinv/errors.hpp"
#include "weilinv/rational.hpp"
#include "weilinv/rings.hpp"

namespace weilinv {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable AST of a smooth function in named variables.
struct Expr {
    enum class Kind { Constant, Variable, Add, Sub, Mul, Div, Neg, IntPow, Sqrt, Det };

    Kind kind;
    Rational value;            // Constant
    std::string name;          // Variable
    std::vector<ExprPtr> args; // operands; Det stores n*n entries row-major
    int aux = 0;               // IntPow exponent / Det size
};

namespace ex {

inline ExprPtr c(Rational q) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Constant;
    e->value = std::move(q);
    return e;
}
inline ExprPtr c(long long n) { return c(Rational(n)); }

inline ExprPtr var(std::string name) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Variable;
    e->name = std::move(name);
    return e;
}

inline bool is_const(const ExprPtr& e, const Rational& q) {
    return e->kind == Expr::Kind::Constant && e->value == q;
}

inline ExprPtr make(Expr::Kind k, std::vector<ExprPtr> args, int aux = 0) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->args = std::move(args);
    e->aux  = aux;
    return e;
}

inline ExprPtr add(ExprPtr a, ExprPtr b) {
    if (is_const(a, 0)) return b;
    if (is_const(b, 0)) return a;
    if (a->kind == Expr::Kind::Constant && b->kind == Expr::Kind::Constant)
        return c(a->value + b->value);
    return make(Expr::Kind::Add, {std::move(a), std::move(b)});
}
inline ExprPtr neg(ExprPtr a) {
    if (a->kind == Expr::Kind::Constant) return c(-a->value);
    if (a->kind == Expr::Kind::Neg) return a->args[0];
    return make(Expr::Kind::Neg, {std::move(a)});
}
inline ExprPtr sub(ExprPtr a, ExprPtr b) {
    if (is_const(b, 0)) return a;
    if (is_const(a, 0)) return neg(std::move(b));
    if (a->kind == Expr::Kind::Constant && b->kind == Expr::Kind::Constant)
        return c(a->value - b->value);
    return make(Expr::Kind::Sub, {std::move(a), std::move(b)});
}
inline ExprPtr mul(ExprPtr a, ExprPtr b) {
    if (is_const(a, 0) || is_const(b, 0)) return c(0);
    if (is_const(a, 1)) return b;
    if (is_const(b, 1)) return a;
    if (a->kind == Expr::Kind::Constant && b->kind == Expr::Kind::Constant)
        return c(a->value * b->value);
    return make(Expr::Kind::Mul, {std::move(a), std::move(b)});
}
inline ExprPtr div(ExprPtr a, ExprPtr b) {
    if (is_const(b, 1)) return a;
    if (a->kind == Expr::Kind::Constant && b->kind == Expr::Kind::Constant && b->value != 0)
        return c(a->value / b->value);
    return make(Expr::Kind::Div, {std::move(a), std::move(b)});
}
inline ExprPtr ipow(ExprPtr base, int n) {
    if (n < 0) throw UnsupportedOperation("integer powers must be non-negative");
    if (n == 0) return c(1);
    if (n == 1) return base;
    if (base->kind == Expr::Kind::Constant) {
        Rational r = 1;
        for (int i = 0; i < n; ++i) r *= base->value;
        return c(r);
    }
    return make(Expr::Kind::IntPow, {std::move(base)}, n);
}
inline ExprPtr sqrt(ExprPtr a) { return make(Expr::Kind::Sqrt, {std::move(a)}); }
inline ExprPtr det(int n, std::vector<ExprPtr> entries) {
    if (n < 2 || n > 4) throw UnsupportedOperation("det supports sizes 2..4");
    if (entries.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
        throw UnsupportedOperation("det" + std::to_string(n) + " needs " + std::to_string(n * n) +
                                   " entries");
    return make(Expr::Kind::Det, std::move(entries), n);
}

} // namespace ex

inline ExprPtr operator+(const ExprPtr& a, const ExprPtr& b) { return ex::add(a, b); }
inline ExprPtr operator-(const ExprPtr& a, const ExprPtr& b) { return ex::sub(a, b); }
inline ExprPtr operator*(const ExprPtr& a, const ExprPtr& b) { return ex::mul(a, b); }
inline ExprPtr operator/(const ExprPtr& a, const ExprPtr& b) { return ex::div(a, b); }
inline ExprPtr operator-(const ExprPtr& a) { return ex::neg(a); }

// -- structural equality ---------------------------------------------------

inline bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a == b) return true;
    if (a->kind != b->kind || a->aux != b->aux) return false;
    switch (a->kind) {
    case Expr::Kind::Constant: return a->value == b->value;
    case Expr::Kind::Variable: return a->name == b->name;
    default:
        if (a->args.size() != b->args.size()) return false;
        for (std::size_t i = 0; i < a->args.size(); ++i)
            if (!structurally_equal(a->args[i], b->args[i])) return false;
        return true;
    }
}

// -- free variables / substitution -----------------------------------------

inline void collect_free_vars(const ExprPtr& e, std::set<std::string>& out) {
    if (e->kind == Expr::Kind::Variable) {
        out.insert(e->name);
        return;
    }
    for (const auto& a : e->args) collect_free_vars(a, out);
}

inline std::set<std::string> free_vars(const ExprPtr& e) {
    std::set<std::string> out;
    collect_free_vars(e, out);
    return out;
}

/// Replace variables by expressions; names missing from the map are kept.
inline ExprPtr substitute(const ExprPtr& e, const std::map<std::string, ExprPtr>& repl) {
    switch (e->kind) {
    case Expr::Kind::Constant: return e;
    case Expr::Kind::Variable: {
        auto it = repl.find(e->name);
        return it == repl.end() ? e : it->second;
    }
    default: {
        std::vector<ExprPtr> args;
        args.reserve(e->args.size());
        bool changed = false;
        for (const auto& a : e->args) {
            args.push_back(substitute(a, repl));
            changed = changed || args.back() != a;
        }
        if (!changed) return e;
        switch (e->kind) {
        case Expr::Kind::Add: return ex::add(args[0], args[1]);
        case Expr::Kind::Sub: return ex::sub(args[0], args[1]);
        case Expr::Kind::Mul: return ex::mul(args[0], args[1]);
        case Expr::Kind::Div: return ex::div(args[0], args[1]);
        case Expr::Kind::Neg: return ex::neg(args[0]);
        case Expr::Kind::IntPow: return ex::ipow(args[0], e->aux);
        case Expr::Kind::Sqrt: return ex::sqrt(args[0]);
        case Expr::Kind::Det: return ex::det(e->aux, std::move(args));
        default: return e;
        }
    }
    }
}

// -- rendering -------------------------------------------------------------

namespace detail {

// precedence: + - (1), * / (2), unary - (3), ^ (4), atoms (5)
inline void render_expr(const ExprPtr& e, int min_prec, std::ostringstream& os) {
    auto paren = [&](int prec, auto&& body) {
        if (prec < min_prec) {
            os << "(";
            body();
            os << ")";
        } else {
            body();
        }
    };
    switch (e->kind) {
    case Expr::Kind::Constant:
        if (e->value < 0)
            paren(3, [&] { os << weilinv::to_string(e->value); });
        else
            os << weilinv::to_string(e->value);
        break;
    case Expr::Kind::Variable: os << e->name; break;
    case Expr::Kind::Add:
        paren(1, [&] {
            render_expr(e->args[0], 1, os);
            os << " + ";
            render_expr(e->args[1], 2, os);
        });
        break;
    case Expr::Kind::Sub:
        paren(1, [&] {
            render_expr(e->args[0], 1, os);
            os << " - ";
            render_expr(e->args[1], 2, os);
        });
        break;
    case Expr::Kind::Mul:
        paren(2, [&] {
            render_expr(e->args[0], 2, os);
            os << "*";
            render_expr(e->args[1], 3, os);
        });
        break;
    case Expr::Kind::Div:
        paren(2, [&] {
            render_expr(e->args[0], 2, os);
            // spaces keep "x^3 / 5" from re-lexing as the literal 3/5
            os << " / ";
            render_expr(e->args[1], 3, os);
        });
        break;
    case Expr::Kind::Neg:
        paren(3, [&] {
            os << "-";
            render_expr(e->args[0], 3, os);
        });
        break;
    case Expr::Kind::IntPow:
        paren(4, [&] {
            render_expr(e->args[0], 5, os);
            os << "^" << e->aux;
        });
        break;
    case Expr::Kind::Sqrt:
        os << "sqrt(";
        render_expr(e->args[0], 1, os);
        os << ")";
        break;
    case Expr::Kind::Det:
        os << "det" << e->aux << "(";
        for (std::size_t i = 0; i < e->args.size(); ++i) {
            if (i) os << ", ";
            render_expr(e->args[i], 1, os);
        }
        os << ")";
        break;
    }
}

} // namespace detail

inline std::string render(const ExprPtr& e) {
    std::ostringstream os;
    detail::render_expr(e, 1, os);
    return os.str();
}

// -- parser ----------------------------------------------------------------

namespace detail {

struct Token {
    enum class Type { Number, Ident, Op, End };
    Type type;
    Rational number;
    std::string text;
    int line, col;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) bump();
        tok_.line = line_;
        tok_.col  = col_;
        if (pos_ >= src_.size()) {
            tok_.type = Token::Type::End;
            tok_.text = "<end of input>";
            return;
        }
        char ch = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            std::string digits = read_digits();
            // number := int ['/' uint]: the fraction fuses only when the
            // slash is directly followed by a digit
            if (pos_ + 1 < src_.size() && src_[pos_] == '/' &&
                std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
                bump();
                std::string den = read_digits();
                tok_.number = Rational(Integer(digits), Integer(den));
            } else {
                tok_.number = Rational(Integer(digits));
            }
            tok_.type = Token::Type::Number;
            tok_.text = "<number>";
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            std::string name;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                name.push_back(src_[pos_]);
                bump();
            }
            tok_.type = Token::Type::Ident;
            tok_.text = std::move(name);
            return;
        }
        if (std::string("+-*/^(),").find(ch) != std::string::npos) {
            tok_.type = Token::Type::Op;
            tok_.text = std::string(1, ch);
            bump();
            return;
        }
        throw ParseError(line_, col_, std::string("unexpected character '") + ch + "'");
    }

    std::string read_digits() {
        std::string out;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
            out.push_back(src_[pos_]);
            bump();
        }
        return out;
    }

    void bump() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_;
};

class Parser {
public:
    explicit Parser(const std::string& src) : lex_(src) {}

    ExprPtr parse() {
        ExprPtr e = parse_expr();
        const Token& t = lex_.peek();
        if (t.type != Token::Type::End)
            throw ParseError(t.line, t.col, "trailing input starting at '" + t.text + "'");
        return e;
    }

private:
    ExprPtr parse_expr() {
        ExprPtr e = parse_term();
        while (is_op("+") || is_op("-")) {
            bool plus = is_op("+");
            lex_.take();
            ExprPtr rhs = parse_term();
            e = plus ? ex::add(e, rhs) : ex::sub(e, rhs);
        }
        return e;
    }

    ExprPtr parse_term() {
        ExprPtr e = parse_unary();
        while (is_op("*") || is_op("/")) {
            bool times = is_op("*");
            lex_.take();
            ExprPtr rhs = parse_unary();
            e = times ? ex::mul(e, rhs) : ex::div(e, rhs);
        }
        return e;
    }

    ExprPtr parse_unary() {
        if (is_op("-")) {
            lex_.take();
            return ex::neg(parse_unary());
        }
        return parse_factor();
    }

    ExprPtr parse_factor() {
        ExprPtr base = parse_atom();
        if (is_op("^")) {
            lex_.take();
            const Token& t = lex_.peek();
            if (t.type != Token::Type::Number || denominator(t.number) != 1 || t.number < 0)
                throw ParseError(t.line, t.col, "exponent must be a non-negative integer");
            int n = static_cast<int>(numerator(t.number));
            lex_.take();
            return ex::ipow(base, n);
        }
        return base;
    }

    ExprPtr parse_atom() {
        const Token t = lex_.peek();
        if (t.type == Token::Type::Number) {
            lex_.take();
            return ex::c(t.number);
        }
        if (t.type == Token::Type::Ident) {
            lex_.take();
            if (t.text == "sqrt") return ex::sqrt(parse_call_args(1)[0]);
            if (t.text == "det2") return ex::det(2, parse_call_args(4));
            if (t.text == "det3") return ex::det(3, parse_call_args(9));
            if (t.text == "det4") return ex::det(4, parse_call_args(16));
            if (is_op("(")) throw ParseError(t.line, t.col, "unknown function '" + t.text + "'");
            return ex::var(t.text);
        }
        if (t.type == Token::Type::Op && t.text == "(") {
            lex_.take();
            ExprPtr e = parse_expr();
            expect(")");
            return e;
        }
        throw ParseError(t.line, t.col, "expected a number, variable or '(' but found '" + t.text + "'");
    }

    std::vector<ExprPtr> parse_call_args(std::size_t count) {
        expect("(");
        std::vector<ExprPtr> args;
        args.push_back(parse_expr());
        while (is_op(",")) {
            lex_.take();
            args.push_back(parse_expr());
        }
        const Token& t = lex_.peek();
        if (args.size() != count)
            throw ParseError(t.line, t.col,
                             "expected " + std::to_string(count) + " arguments, got " +
                                 std::to_string(args.size()));
        expect(")");
        return args;
    }

    bool is_op(const char* s) const {
        return lex_.peek().type == Token::Type::Op && lex_.peek().text == s;
    }
    void expect(const char* s) {
        const Token& t = lex_.peek();
        if (t.type != Token::Type::Op || t.text != s)
            throw ParseError(t.line, t.col, std::string("expected '") + s + "' but found '" + t.text + "'");
        lex_.take();
    }

    Lexer lex_;
};

} // namespace detail

inline ExprPtr parse(const std::string& text) { return detail::Parser(text).parse(); }

// -- evaluation ------------------------------------------------------------

namespace detail {

template <class S>
typename S::Elem det_cofactor(const S& alg, const std::vector<typename S::Elem>& m, int n) {
    if (n == 1) return m[0];
    typename S::Elem acc = alg.zero();
    for (int j = 0; j < n; ++j) {
        std::vector<typename S::Elem> minor;
        minor.reserve(static_cast<std::size_t>((n - 1) * (n - 1)));
        for (int r = 1; r < n; ++r)
            for (int c2 = 0; c2 < n; ++c2)
                if (c2 != j) minor.push_back(m[static_cast<std::size_t>(r * n + c2)]);
        typename S::Elem term = alg.mul(m[static_cast<std::size_t>(j)], det_cofactor(alg, minor, n - 1));
        acc = (j % 2 == 0) ? alg.add(acc, term) : alg.sub(acc, term);
    }
    return acc;
}

} // namespace detail

/// Structural evaluation of an expression over any ring structure. The
/// bound values supply the free variables; division goes through the
/// algebra's inverse, so over a Weil algebra a non-unit denominator raises
/// NotAUnit and callers may fall back to singular division.
template <class S>
typename S::Elem evaluate(const S& alg, const ExprPtr& e,
                          const std::map<std::string, typename S::Elem>& bind) {
    switch (e->kind) {
    case Expr::Kind::Constant: return alg.from_rational(e->value);
    case Expr::Kind::Variable: {
        auto it = bind.find(e->name);
        if (it == bind.end()) throw UnboundVariable("no binding for variable " + e->name);
        return it->second;
    }
    case Expr::Kind::Add: return alg.add(evaluate(alg, e->args[0], bind), evaluate(alg, e->args[1], bind));
    case Expr::Kind::Sub: return alg.sub(evaluate(alg, e->args[0], bind), evaluate(alg, e->args[1], bind));
    case Expr::Kind::Mul: return alg.mul(evaluate(alg, e->args[0], bind), evaluate(alg, e->args[1], bind));
    case Expr::Kind::Div: {
        auto num = evaluate(alg, e->args[0], bind);
        auto den = evaluate(alg, e->args[1], bind);
        try {
            return alg.mul(num, alg.inverse(den));
        } catch (const NotInvertible& err) {
            throw NotAUnit(std::string("denominator is not a unit (") + err.what() + ")");
        }
    }
    case Expr::Kind::Neg: return alg.neg(evaluate(alg, e->args[0], bind));
    case Expr::Kind::IntPow:
        return ring_pow(alg, evaluate(alg, e->args[0], bind), static_cast<unsigned>(e->aux));
    case Expr::Kind::Sqrt: {
        if constexpr (requires(const S s, typename S::Elem x) { s.sqrt(x); }) {
            return alg.sqrt(evaluate(alg, e->args[0], bind));
        } else {
            throw UnsupportedOperation("sqrt is only available over the float ring");
        }
    }
    case Expr::Kind::Det: {
        std::vector<typename S::Elem> entries;
        entries.reserve(e->args.size());
        for (const auto& a : e->args) entries.push_back(evaluate(alg, a, bind));
        return detail::det_cofactor(alg, entries, e->aux);
    }
    }
    throw UnsupportedOperation("unreachable expression kind");
}

// -- symbolic derivative ---------------------------------------------------

/// Symbolic partial derivative; determinants differentiate row by row via
/// multilinearity.
inline ExprPtr partial_derivative(const ExprPtr& e, const std::string& var) {
    using K = Expr::Kind;
    switch (e->kind) {
    case K::Constant: return ex::c(0);
    case K::Variable: return ex::c(e->name == var ? 1 : 0);
    case K::Add: return ex::add(partial_derivative(e->args[0], var), partial_derivative(e->args[1], var));
    case K::Sub: return ex::sub(partial_derivative(e->args[0], var), partial_derivative(e->args[1], var));
    case K::Mul: {
        const auto& u = e->args[0];
        const auto& v = e->args[1];
        return ex::add(ex::mul(partial_derivative(u, var), v), ex::mul(u, partial_derivative(v, var)));
    }
    case K::Div: {
        const auto& u = e->args[0];
        const auto& v = e->args[1];
        ExprPtr num = ex::sub(ex::mul(partial_derivative(u, var), v), ex::mul(u, partial_derivative(v, var)));
        return ex::div(num, ex::ipow(v, 2));
    }
    case K::Neg: return ex::neg(partial_derivative(e->args[0], var));
    case K::IntPow: {
        const auto& b = e->args[0];
        return ex::mul(ex::mul(ex::c(e->aux), ex::ipow(b, e->aux - 1)), partial_derivative(b, var));
    }
    case K::Sqrt:
        return ex::div(partial_derivative(e->args[0], var), ex::mul(ex::c(2), ex::sqrt(e->args[0])));
    case K::Det: {
        int n = e->aux;
        ExprPtr acc = ex::c(0);
        for (int row = 0; row < n; ++row) {
            std::vector<ExprPtr> entries = e->args;
            bool nonzero = false;
            for (int col = 0; col < n; ++col) {
                auto& entry = entries[static_cast<std::size_t>(row * n + col)];
                entry = partial_derivative(entry, var);
                nonzero = nonzero || !ex::is_const(entry, 0);
            }
            if (nonzero) acc = ex::add(acc, ex::det(n, std::move(entries)));
        }
        return acc;
    }
    }
    throw UnsupportedOperation("unreachable expression kind");
}

} // namespace weilinv

#endif
