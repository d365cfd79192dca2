#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "weilinv/expr.hpp"
#include "weilinv/random.hpp"
#include "weilinv/rings.hpp"

using namespace weilinv;

namespace {

const std::vector<std::string> kNames{"a", "b", "c", "d"};

ExprPtr random_expr(SplitRng& rng, int depth) {
    if (depth <= 0 || rng.next_int(0, 4) == 0) {
        if (rng.next_int(0, 1) == 0) return ex::c(rng.next_rational(9, 4));
        return ex::var(kNames[static_cast<std::size_t>(rng.next_int(0, 3))]);
    }
    switch (rng.next_int(0, 7)) {
    case 0: return ex::add(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 1: return ex::sub(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 2: return ex::mul(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 3: return ex::div(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 4: return ex::neg(random_expr(rng, depth - 1));
    case 5: return ex::ipow(random_expr(rng, depth - 1), static_cast<int>(rng.next_int(0, 3)));
    case 6: return ex::sqrt(random_expr(rng, depth - 1));
    default: {
        std::vector<ExprPtr> es;
        for (int i = 0; i < 4; ++i) es.push_back(random_expr(rng, depth - 2));
        return ex::det(2, std::move(es));
    }
    }
}

// polynomial-only expressions, safe to evaluate and differentiate anywhere
ExprPtr random_poly_expr(SplitRng& rng, int depth) {
    if (depth <= 0 || rng.next_int(0, 3) == 0) {
        if (rng.next_int(0, 1) == 0) return ex::c(rng.next_rational(5, 3));
        return ex::var(kNames[static_cast<std::size_t>(rng.next_int(0, 3))]);
    }
    switch (rng.next_int(0, 3)) {
    case 0: return ex::add(random_poly_expr(rng, depth - 1), random_poly_expr(rng, depth - 1));
    case 1: return ex::sub(random_poly_expr(rng, depth - 1), random_poly_expr(rng, depth - 1));
    case 2: return ex::mul(random_poly_expr(rng, depth - 1), random_poly_expr(rng, depth - 1));
    default: return ex::ipow(random_poly_expr(rng, depth - 1), static_cast<int>(rng.next_int(1, 3)));
    }
}

} // namespace

TEST_CASE("parse examples") {
    auto e = parse("x1_p1 + 2");
    CHECK(e->kind == Expr::Kind::Add);
    CHECK(e->args[0]->kind == Expr::Kind::Variable);
    CHECK(e->args[0]->name == "x1_p1");
    CHECK(e->args[1]->value == 2);

    auto area = parse("det2(x1_p2 - x1_p1, x1_p3 - x1_p1, x2_p2 - x2_p1, x2_p3 - x2_p1)");
    CHECK(area->kind == Expr::Kind::Det);
    CHECK(area->aux == 2);
    CHECK(area->args.size() == 4);

    // fused rational literals vs. spaced division
    CHECK(parse("1/2")->value == rat(1, 2));
    CHECK(parse("3/4*a")->args[0]->value == rat(3, 4));
    auto spaced = parse("1 / b");
    CHECK(spaced->kind == Expr::Kind::Div);

    // precedence: ^ over unary minus over * over +
    auto p = parse("-a^2");
    CHECK(p->kind == Expr::Kind::Neg);
    CHECK(p->args[0]->kind == Expr::Kind::IntPow);
    auto q = parse("2*a + b*c^2");
    CHECK(q->kind == Expr::Kind::Add);
    CHECK(q->args[1]->args[1]->kind == Expr::Kind::IntPow);
}

TEST_CASE("parse errors carry positions") {
    CHECK_THROWS_AS(parse("x1_p1 +"), ParseError);
    CHECK_THROWS_AS(parse("(a + b"), ParseError);
    CHECK_THROWS_AS(parse("a $ b"), ParseError);
    CHECK_THROWS_AS(parse("det2(a, b, c)"), ParseError);
    CHECK_THROWS_AS(parse("foo(a)"), ParseError);
    CHECK_THROWS_AS(parse("a^b"), ParseError);
    CHECK_THROWS_AS(parse("a^-2"), ParseError);
    try {
        parse("a +\n+ b");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 1);
    }
}

TEST_CASE("parse after render is identity (1000 generated ASTs)") {
    for (int i = 0; i < 1000; ++i) {
        SplitRng rng(1234, static_cast<std::uint64_t>(i));
        auto e = random_expr(rng, 4);
        CAPTURE(i);
        CAPTURE(render(e));
        CHECK(structurally_equal(parse(render(e)), e));
    }
}

TEST_CASE("evaluate examples") {
    RationalRing Q;
    std::map<std::string, Rational> pts{{"x1_p1", 0}, {"x2_p1", 0}, {"x1_p2", 3}, {"x2_p2", 4}};
    auto d2 = parse("(x1_p2 - x1_p1)^2 + (x2_p2 - x2_p1)^2");
    CHECK(evaluate(Q, d2, pts) == 25);

    auto anh = parse("((x1_p1 - x1_p3)*(x1_p2 - x1_p4))/((x1_p1 - x1_p2)*(x1_p3 - x1_p4))");
    std::map<std::string, Rational> line{{"x1_p1", 0}, {"x1_p2", 1}, {"x1_p3", 2}, {"x1_p4", 3}};
    CHECK(evaluate(Q, anh, line) == 4);

    std::map<std::string, Rational> dvals{{"a", 1}, {"b", 2}, {"c", 3}, {"d", 4},
                                          {"e", 5}, {"f", 6}, {"g", 7}, {"h", 8}, {"i", 10}};
    CHECK(evaluate(Q, parse("det3(a, b, c, d, e, f, g, h, i)"), dvals) == -3);
    std::map<std::string, Rational> id4;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            id4["m" + std::to_string(r) + std::to_string(c)] = r == c ? 2 : 0;
    std::string m4 = "det4(m00,m01,m02,m03,m10,m11,m12,m13,m20,m21,m22,m23,m30,m31,m32,m33)";
    CHECK(evaluate(Q, parse(m4), id4) == 16);

    CHECK_THROWS_AS(evaluate(Q, parse("nope"), {}), UnboundVariable);
    CHECK_THROWS_AS(evaluate(Q, parse("1/(a - a)"), {{"a", rat(2)}}), NotAUnit);
    CHECK_THROWS_AS(evaluate(Q, parse("sqrt(a)"), {{"a", rat(4)}}), UnsupportedOperation);
    Float64Ring F;
    CHECK(evaluate(F, parse("sqrt(a)"), {{"a", 2.25}}) == doctest::Approx(1.5));
}

TEST_CASE("evaluate is a ring morphism in the binding (1000 cases)") {
    RationalRing Q;
    for (int i = 0; i < 1000; ++i) {
        SplitRng rng(555, static_cast<std::uint64_t>(i));
        auto e1 = random_poly_expr(rng, 3);
        auto e2 = random_poly_expr(rng, 3);
        std::map<std::string, Rational> bind;
        for (const auto& n : kNames) bind[n] = rng.next_rational(6, 3);
        CAPTURE(i);
        CHECK(evaluate(Q, ex::add(e1, e2), bind) ==
              evaluate(Q, e1, bind) + evaluate(Q, e2, bind));
        CHECK(evaluate(Q, ex::mul(e1, e2), bind) ==
              evaluate(Q, e1, bind) * evaluate(Q, e2, bind));
    }
}

TEST_CASE("substitution and free variables") {
    auto e = parse("a*b + c^2");
    CHECK(free_vars(e) == std::set<std::string>{"a", "b", "c"});
    auto s = substitute(e, {{"a", parse("b + 1")}});
    CHECK(free_vars(s) == std::set<std::string>{"b", "c"});
    RationalRing Q;
    std::map<std::string, Rational> bind{{"b", 2}, {"c", 3}};
    CHECK(evaluate(Q, s, bind) == 15);
    // untouched names stay
    CHECK(structurally_equal(substitute(e, {{"zzz", parse("1")}}), e));
}

TEST_CASE("symbolic derivatives: examples") {
    auto e = partial_derivative(parse("x1_p1*x2_p1"), "x1_p1");
    CHECK(structurally_equal(e, parse("x2_p1")));
    auto f = partial_derivative(parse("a^2 + 3*a"), "a");
    RationalRing Q;
    for (int v = -3; v <= 3; ++v)
        CHECK(evaluate(Q, f, {{"a", Rational(v)}}) == 2 * v + 3);
    // quotient rule
    auto g = partial_derivative(parse("a/b"), "a");
    CHECK(evaluate(Q, g, {{"a", rat(5)}, {"b", rat(3)}}) == rat(1, 3));
}

TEST_CASE("derivatives match central finite differences") {
    Float64Ring F;
    auto exprs = {parse("det2(a, b, c, d)"), parse("a^3*b - c/(d^2 + 1)"),
                  parse("sqrt(a^2 + b^2 + 1)"), parse("det2(a*b, c, d, a + c)")};
    for (const auto& e : exprs) {
        for (const auto& v : free_vars(e)) {
            auto de = partial_derivative(e, v);
            for (int i = 0; i < 10; ++i) {
                SplitRng rng(808, static_cast<std::uint64_t>(i));
                std::map<std::string, double> pt;
                for (const auto& n : kNames) pt[n] = rng.next_double(0.5, 2.0);
                const double h = 1e-6;
                auto up = pt, dn = pt;
                up[v] += h;
                dn[v] -= h;
                double fd = (evaluate(F, e, up) - evaluate(F, e, dn)) / (2 * h);
                double sym = evaluate(F, de, pt);
                CAPTURE(render(e));
                CAPTURE(v);
                CHECK(sym == doctest::Approx(fd).epsilon(1e-6));
            }
        }
    }
}

TEST_CASE("determinant derivative uses multilinearity") {
    // d det2(a,b,c,d)/da = det2(1,0,c,d) = d
    auto e = partial_derivative(parse("det2(a, b, c, d)"), "a");
    RationalRing Q;
    std::map<std::string, Rational> pt{{"a", 1}, {"b", 2}, {"c", 3}, {"d", 7}};
    CHECK(evaluate(Q, e, pt) == 7);
}

TEST_CASE("partial_derivative commutes with polynomial evaluation (500 cases)") {
    auto vars = make_varset(kNames);
    PolynomialRing P(vars);
    std::map<std::string, Polynomial> bind;
    for (const auto& n : kNames) bind.emplace(n, P.variable(n));
    for (int i = 0; i < 500; ++i) {
        SplitRng rng(660, static_cast<std::uint64_t>(i));
        auto e = random_poly_expr(rng, 3);
        for (const auto& v : kNames) {
            CAPTURE(i);
            CHECK(poly_partial(evaluate(P, e, bind), v) ==
                  evaluate(P, partial_derivative(e, v), bind));
        }
    }
}
