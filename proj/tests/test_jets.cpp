#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "weilinv/jets.hpp"
#include "weilinv/presets.hpp"
#include "weilinv/random.hpp"

using namespace weilinv;

namespace {

const RationalRing kQ;

// Reference expansion that bypasses the truncated-algebra engine entirely:
// every point series is written as a plain polynomial in the jet variables
// and an extra variable "eps", the invariant is evaluated by full polynomial
// arithmetic, and the eps-coefficients are read off at the end.
Polynomial expansion_oracle(const ExprPtr& I, int n, int r, const std::vector<Rational>& twist) {
    std::vector<std::string> names{"eps"};
    for (int i = 1; i <= n; ++i)
        for (int o = 0; o <= r; ++o) names.push_back(jet_var_name(i, MultiIndex{o}));
    auto vars = make_varset(names);
    PolynomialRing P(vars);
    std::map<std::string, Polynomial> bind;
    auto eps = P.variable("eps");
    for (std::size_t j = 0; j < twist.size(); ++j)
        for (int i = 1; i <= n; ++i) {
            Polynomial s(vars);
            Polynomial epspow = P.one();
            Rational cpow = 1;
            for (int o = 0; o <= r; ++o) {
                s = s + (cpow / Rational(factorial(o))) *
                            (P.variable(jet_var_name(i, MultiIndex{o})) * epspow);
                epspow = epspow * eps;
                cpow *= twist[j];
            }
            bind.emplace(point_var_name(i, static_cast<int>(j) + 1), std::move(s));
        }
    Polynomial full = evaluate(P, I, bind);
    // truncate above eps^r
    Polynomial out(vars);
    for (const auto& [idx, c] : full.terms())
        if (idx[0] <= r) out = out + Polynomial::monomial(vars, idx, c);
    return out;
}

// eps^k coefficient of the oracle expansion, as a polynomial in jet variables
Polynomial eps_coefficient(const Polynomial& p, int k) {
    Polynomial out(p.vars());
    for (const auto& [idx, c] : p.terms())
        if (idx[0] == k) {
            MultiIndex d = idx;
            d[0] = 0;
            out = out + Polynomial::monomial(p.vars(), std::move(d), c);
        }
    return out;
}

bool rf_equals_poly(const RationalFunction& f, const Polynomial& p_other_ring) {
    // compare by evaluating both at shared variable names on random points
    for (int i = 0; i < 8; ++i) {
        SplitRng rng(4242, static_cast<std::uint64_t>(i));
        std::map<std::string, Rational> point;
        for (const auto& n : f.vars()->names()) point[n] = rng.next_rational(5, 3);
        for (const auto& n : p_other_ring.vars()->names())
            if (!point.count(n)) point[n] = rng.next_rational(5, 3);
        std::vector<Rational> fv, pv;
        for (const auto& n : f.vars()->names()) fv.push_back(point[n]);
        for (const auto& n : p_other_ring.vars()->names()) pv.push_back(point[n]);
        if (f.den().evaluate(fv) == 0) continue;
        if (f.evaluate(fv) != p_other_ring.evaluate(pv)) return false;
    }
    return true;
}

} // namespace

TEST_CASE("jet variable names round-trip") {
    CHECK(jet_var_name(1, {2}) == "x1_d2");
    CHECK(jet_var_name(3, {0}) == "x3_d0");
    CHECK(jet_var_name(2, {1, 2}) == "x2_a1_2");
    auto p = parse_jet_var("x1_d2", 1);
    REQUIRE(p.has_value());
    CHECK(p->first == 1);
    CHECK(p->second == MultiIndex{2});
    auto q = parse_jet_var("x2_a1_2", 2);
    REQUIRE(q.has_value());
    CHECK(q->first == 2);
    CHECK((q->second == MultiIndex{1, 2}));
    CHECK_FALSE(parse_jet_var("x1_p2", 1).has_value());
    CHECK_FALSE(parse_jet_var("x1_d2", 2).has_value());
    CHECK_FALSE(parse_jet_var("lam", 1).has_value());
}

TEST_CASE("universal jet matches the coordinate convention") {
    auto p = universal_jet(1, 1, 2);
    const auto& A = p.algebra;
    const auto& F = A.coeff_ring;
    CHECK(A.to_string(p.series[0]) == "x1_d0 + x1_d1*e1 + (x1_d2/2)*e1^2");
    CHECK(F.eq(A.coefficient(p.series[0], {2}),
               F.mul(F.variable("x1_d2"), F.from_rational(rat(1, 2)))));
    auto p0 = universal_jet(2, 1, 0);
    CHECK(p0.algebra.to_string(p0.series[1]) == "x2_d0");
    // m = 2 surface: coefficient of eps^(1,1) is x1_a1_1
    auto pm = universal_jet(1, 2, 2);
    CHECK(pm.algebra.coeff_ring.eq(pm.algebra.coefficient(pm.series[0], {1, 1}),
                                   pm.algebra.coeff_ring.variable("x1_a1_1")));
}

TEST_CASE("make_jet and jet_coordinates invert each other") {
    for (int i = 0; i < 50; ++i) {
        SplitRng rng(17, static_cast<std::uint64_t>(i));
        std::map<std::string, Rational> coords;
        for (int c = 1; c <= 2; ++c)
            for (int o = 0; o <= 3; ++o)
                coords.emplace(jet_var_name(c, {o}), rng.next_rational(7, 4));
        auto jet = make_jet(kQ, 2, 1, 3, coords);
        CHECK(jet_coordinates(jet) == coords);
    }
    CHECK_THROWS_AS(make_jet(kQ, 1, 1, 2, {}), UnboundVariable);
}

TEST_CASE("prolongation") {
    auto p = universal_jet(2, 1, 2);
    // coordinate functions prolong to the series themselves
    CHECK(p.algebra.eq(prolong(parse("x1_p1"), p), p.series[0]));
    CHECK(p.algebra.eq(prolong(parse("x2_p1"), p), p.series[1]));
    // multiplicativity (fg)^A = f^A g^A
    for (int i = 0; i < 200; ++i) {
        SplitRng rng(23, static_cast<std::uint64_t>(i));
        auto f = rng.next_int(0, 1) ? parse("x1_p1 + 2*x2_p1") : parse("x1_p1^2 - x2_p1");
        auto g = rng.next_int(0, 1) ? parse("x2_p1^2") : parse("x1_p1 - 1");
        CHECK(p.algebra.eq(prolong(ex::mul(f, g), p),
                           p.algebra.mul(prolong(f, p), prolong(g, p))));
    }
}

TEST_CASE("prolongation over a product algebra is the tuple of prolongations") {
    auto M = MultiWeilAlgebra<RationalRing>::power(WeilAlgebra<RationalRing>(kQ, 1, 2), 3);
    std::vector<NearPoint<RationalRing>> jets;
    for (int t = 0; t < 3; ++t) {
        SplitRng rng(91, static_cast<std::uint64_t>(t));
        std::map<std::string, Rational> coords;
        for (int o = 0; o <= 2; ++o) coords.emplace(jet_var_name(1, {o}), rng.next_rational());
        jets.push_back(make_jet(kQ, 1, 1, 2, coords));
    }
    auto f = parse("x1_p1^2 + 1");
    std::map<std::string, MultiWeilAlgebra<RationalRing>::Elem> bind;
    bind.emplace("x1_p1", MultiWeilAlgebra<RationalRing>::Elem{jets[0].series[0],
                                                               jets[1].series[0],
                                                               jets[2].series[0]});
    auto tuple = evaluate(M, f, bind);
    for (std::size_t t = 0; t < 3; ++t)
        CHECK(M.factors[t].eq(tuple[t], prolong(f, jets[t])));
}

TEST_CASE("twisted differential: arc-length element") {
    auto p  = universal_jet(2, 1, 2);
    auto tw = scaling_twist(p.algebra, {0, 1});
    auto d  = twisted_differential(square_distance(2, 1, 2), tw, p);
    const auto& F = d.algebra.coeff_ring;
    CHECK(F.is_zero(d.algebra.coefficient(d.element, {0})));
    CHECK(F.is_zero(d.algebra.coefficient(d.element, {1})));
    auto expect = parse("x1_d1^2 + x2_d1^2");
    std::map<std::string, RationalFunction> vb;
    for (const auto& n : F.vars->names()) vb.emplace(n, F.variable(n));
    CHECK(F.eq(d.algebra.coefficient(d.element, {2}), evaluate(F, expect, vb)));
    CHECK(d.lowest_component()->first == MultiIndex{2});
}

TEST_CASE("twisted differential: curvature determinant") {
    auto p  = universal_jet(2, 1, 3);
    auto tw = scaling_twist(p.algebra, {0, 1, 2});
    auto d  = twisted_differential(oriented_volume(2), tw, p);
    const auto& F = d.algebra.coeff_ring;
    std::map<std::string, RationalFunction> vb;
    for (const auto& n : F.vars->names()) vb.emplace(n, F.variable(n));
    CHECK(F.eq(d.algebra.coefficient(d.element, {3}),
               evaluate(F, parse("x1_d1*x2_d2 - x1_d2*x2_d1"), vb)));
    for (int k = 0; k <= 2; ++k) CHECK(F.is_zero(d.algebra.coefficient(d.element, {k})));
}

TEST_CASE("twisted differential of a constant is the constant") {
    auto p  = universal_jet(1, 1, 3);
    auto tw = scaling_twist(p.algebra, {0, 1});
    auto d  = twisted_differential(ex::c(5), tw, p);
    CHECK(p.algebra.eq(d.element, p.algebra.from_rational(rat(5))));
}

TEST_CASE("twisted differential agrees with the full polynomial expansion") {
    struct Case {
        ExprPtr I;
        int n, r;
        std::vector<Rational> twist;
    };
    std::vector<Case> cases{
        {square_distance(2, 1, 2), 2, 2, {Rational(0), Rational(1)}},
        {oriented_volume(2), 2, 3, {Rational(0), Rational(1), Rational(2)}},
        {oriented_volume(3), 3, 4, {Rational(0), Rational(1), Rational(2), Rational(3)}},
        {oriented_volume(3), 3, 6, {Rational(0), Rational(1), Rational(2), Rational(3)}},
    };
    for (const auto& cs : cases) {
        auto p  = universal_jet(cs.n, 1, cs.r);
        auto tw = scaling_twist(p.algebra, cs.twist);
        auto d  = twisted_differential(cs.I, tw, p);
        auto oracle = expansion_oracle(cs.I, cs.n, cs.r, cs.twist);
        for (int k = 0; k <= cs.r; ++k) {
            CAPTURE(cs.n);
            CAPTURE(cs.r);
            CAPTURE(k);
            CHECK(rf_equals_poly(d.algebra.coefficient(d.element, {k}),
                                 eps_coefficient(oracle, k)));
        }
    }
}

TEST_CASE("volume derivation: truncation at order 4 loses the Wronskian") {
    // the lowest nonvanishing eps-power of the n = 3 volume is 6 = 1+2+3, so
    // the order-4 derivation is identically zero and the Wronskian appears
    // only from order 6 on
    auto p4  = universal_jet(3, 1, 4);
    auto tw4 = scaling_twist(p4.algebra, {0, 1, 2, 3});
    auto d4  = twisted_differential(oriented_volume(3), tw4, p4);
    CHECK(p4.algebra.is_zero(d4.element));

    auto p6  = universal_jet(3, 1, 6);
    auto tw6 = scaling_twist(p6.algebra, {0, 1, 2, 3});
    auto d6  = twisted_differential(oriented_volume(3), tw6, p6);
    const auto& F = d6.algebra.coeff_ring;
    std::map<std::string, RationalFunction> vb;
    for (const auto& n : F.vars->names()) vb.emplace(n, F.variable(n));
    auto w = evaluate(F, wronskian(3), vb);
    auto lam = F.from_rational(lambda_constant(3));
    CHECK(F.eq(d6.algebra.coefficient(d6.element, {6}), F.mul(lam, w)));
    CHECK(d6.lowest_component()->first == MultiIndex{6});
}

TEST_CASE("lambda constants: direct cofactor oracle and the n <= 6 values") {
    // independent determinant: recursive cofactor expansion over rationals
    auto det = [](auto&& self, const std::vector<std::vector<Rational>>& m) -> Rational {
        std::size_t n = m.size();
        if (n == 1) return m[0][0];
        Rational acc = 0;
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<std::vector<Rational>> minor;
            for (std::size_t r = 1; r < n; ++r) {
                std::vector<Rational> row;
                for (std::size_t c = 0; c < n; ++c)
                    if (c != j) row.push_back(m[r][c]);
                minor.push_back(std::move(row));
            }
            Rational t = m[0][j] * self(self, minor);
            acc += (j % 2 == 0) ? t : -t;
        }
        return acc;
    };
    for (int n = 1; n <= 6; ++n) {
        std::vector<std::vector<Rational>> m(static_cast<std::size_t>(n),
                                             std::vector<Rational>(static_cast<std::size_t>(n)));
        Rational fact = 1;
        for (int i = 1; i <= n; ++i) {
            fact *= Rational(factorial(i));
            for (int j = 1; j <= n; ++j) {
                Rational p = 1;
                for (int t = 0; t < j; ++t) p *= i;
                m[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] = p;
            }
        }
        CAPTURE(n);
        CHECK(lambda_constant(n) == det(det, m) / fact);
        CHECK(lambda_constant(n) == 1);
    }
    CHECK(lambda_constant(2) == rat(2) / rat(2));
}

TEST_CASE("area coefficient equals Lambda_2 times the n = 2 Wronskian") {
    auto p  = universal_jet(2, 1, 3);
    auto tw = scaling_twist(p.algebra, {0, 1, 2});
    auto d  = twisted_differential(oriented_volume(2), tw, p);
    const auto& F = d.algebra.coeff_ring;
    std::map<std::string, RationalFunction> vb;
    for (const auto& n : F.vars->names()) vb.emplace(n, F.variable(n));
    auto w = evaluate(F, wronskian(2), vb);
    CHECK(F.eq(d.algebra.coefficient(d.element, {3}),
               F.mul(F.from_rational(lambda_constant(2)), w)));
}

TEST_CASE("singular quotient: affine ratio gives the logarithmic derivative") {
    auto p  = universal_jet(1, 1, 2);
    auto tw = scaling_twist(p.algebra, {0, 1, 2});
    auto r  = affine_ratio();
    auto q  = singular_twisted_quotient(r->args[0], r->args[1], tw, p);
    CHECK(q.order == 2);
    REQUIRE(q.reduced_order.has_value());
    CHECK(*q.reduced_order == 1);
    const auto& F = q.algebra.coeff_ring;
    std::map<std::string, RationalFunction> vb;
    for (const auto& n : F.vars->names()) vb.emplace(n, F.variable(n));
    // (x(2e)-x(0))/(x(e)-x(0)) = 2 + (x''/x') e exactly
    CHECK(F.eq(q.algebra.coefficient(q.element, {0}), F.from_rational(rat(2))));
    CHECK(F.eq(q.algebra.coefficient(q.element, {1}), evaluate(F, log_derivative(), vb)));
    // exactness back in the original algebra
    auto ti = twisted_differential(r->args[0], tw, p);
    auto tj = twisted_differential(r->args[1], tw, p);
    CHECK(p.algebra.eq(p.algebra.mul(p.algebra.lift(q.element), tj.element), ti.element));
}

TEST_CASE("singular quotient: anharmonic ratio gives the Schwarzian") {
    auto p  = universal_jet(1, 1, 4);
    auto tw = scaling_twist(p.algebra, {0, 1, 2, 3});
    auto r  = anharmonic_ratio();
    auto q  = singular_twisted_quotient(r->args[0], r->args[1], tw, p);
    REQUIRE(q.reduced_order.has_value());
    CHECK(*q.reduced_order == 2);
    const auto& F = q.algebra.coeff_ring;
    std::map<std::string, RationalFunction> vb;
    for (const auto& n : F.vars->names()) vb.emplace(n, F.variable(n));
    CHECK(F.eq(q.algebra.coefficient(q.element, {0}), F.from_rational(rat(4))));
    CHECK(F.is_zero(q.algebra.coefficient(q.element, {1})));
    CHECK(F.eq(q.algebra.coefficient(q.element, {2}), evaluate(F, schwarzian(), vb)));
    auto ti = twisted_differential(r->args[0], tw, p);
    auto tj = twisted_differential(r->args[1], tw, p);
    CHECK(p.algebra.eq(p.algebra.mul(p.algebra.lift(q.element), tj.element), ti.element));
}

TEST_CASE("singular quotient: I = J gives 1") {
    auto p  = universal_jet(1, 1, 3);
    auto tw = scaling_twist(p.algebra, {0, 1, 2});
    auto r  = affine_ratio();
    auto q  = singular_twisted_quotient(r->args[1], r->args[1], tw, p);
    CHECK(q.algebra.eq(q.element, q.algebra.one()));
}

TEST_CASE("singular quotient error messages name the failed hypothesis") {
    auto p  = universal_jet(1, 1, 2);
    // twist (1, 2): the denominator x(2e) - x(e) has a nonzero... it is still
    // divisible; use a denominator identically zero instead
    auto tw = scaling_twist(p.algebra, {0, 1, 2});
    auto r  = affine_ratio();
    CHECK_THROWS_AS(singular_twisted_quotient(r->args[0], ex::c(0), tw, p), DivisionByZero);
    // numerator below the denominator's order: hypothesis (d)
    try {
        singular_twisted_quotient(ex::c(1), r->args[1], tw, p);
        FAIL("expected NotDivisible");
    } catch (const NotDivisible& e) {
        CHECK(std::string(e.what()).find("hypothesis (d)") != std::string::npos);
    }
}

TEST_CASE("diagonal-vanishing invariants start at eps degree >= 1") {
    auto tests = {std::pair{square_distance(2, 1, 2), 2}, {oriented_volume(2), 2}};
    for (const auto& [I, n] : tests) {
        auto p  = universal_jet(n, 1, 3);
        std::vector<Rational> cs;
        for (int j = 0; j < (n == 2 && I->kind == Expr::Kind::Det ? 3 : 2); ++j)
            cs.push_back(Rational(j));
        auto tw = scaling_twist(p.algebra, cs);
        auto d  = twisted_differential(I, tw, p);
        CHECK(d.algebra.coeff_ring.is_zero(d.algebra.coefficient(d.element, {0})));
    }
}

TEST_CASE("symbolic and numeric derivations agree on 20 random jets") {
    auto p  = universal_jet(2, 1, 3);
    auto tw = scaling_twist(p.algebra, {0, 1, 2});
    auto I  = oriented_volume(2);
    auto sym = twisted_differential(I, tw, p);
    const auto& F = p.algebra.coeff_ring;
    for (int t = 0; t < 20; ++t) {
        SplitRng rng(314, static_cast<std::uint64_t>(t));
        std::map<std::string, Rational> coords;
        for (int i = 1; i <= 2; ++i)
            for (int o = 0; o <= 3; ++o) coords.emplace(jet_var_name(i, {o}), rng.next_rational());
        auto jet = make_jet(kQ, 2, 1, 3, coords);
        auto twq = scaling_twist(jet.algebra, {0, 1, 2});
        auto num = twisted_differential(I, twq, jet);
        std::vector<Rational> vals;
        for (const auto& n : F.vars->names()) vals.push_back(coords.at(n));
        for (int k = 0; k <= 3; ++k) {
            auto c = sym.algebra.coefficient(sym.element, {k});
            CAPTURE(t);
            CAPTURE(k);
            CHECK(c.evaluate(vals) == num.algebra.coefficient(num.element, {k}));
        }
    }
}

TEST_CASE("total derivatives") {
    CHECK(structurally_equal(total_derivative(parse("x1_d0"), 0, 1), parse("x1_d1")));
    auto d = total_derivative(parse("x1_d0^2"), 0, 1);
    RationalRing Q;
    std::map<std::string, Rational> v{{"x1_d0", 3}, {"x1_d1", 5}};
    CHECK(evaluate(Q, d, v) == 30);
    auto s = total_derivative(sum_squared_derivatives(2), 0, 1);
    std::map<std::string, Rational> w{{"x1_d1", 1}, {"x1_d2", 2}, {"x2_d1", 3}, {"x2_d2", 4}};
    CHECK(evaluate(Q, s, w) == 2 * (1 * 2 + 3 * 4));
    CHECK_THROWS_AS(total_derivative(parse("lam"), 0, 1), UnknownVariable);
    CHECK_THROWS_AS(total_derivative(parse("x1_d0"), 1, 1), UnsupportedOperation);
    // rank 2: directions shift different slots
    auto m2 = total_derivative(parse("x1_a0_0"), 1, 2);
    CHECK(structurally_equal(m2, parse("x1_a0_1")));
}
