#ifndef WEILINV_JETS_HPP
#define WEILINV_JETS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "weilinv/errors.hpp"
#include "weilinv/expr.hpp"
#include "weilinv/linalg.hpp"
#include "weilinv/multiindex.hpp"
#include "weilinv/weil.hpp"

namespace weilinv {

// -- jet variable naming ----------------------------------------------------
//
// x<i>_d<o>        : o-th derivative coefficient of coordinate i (m = 1)
// x<i>_a<a1>_<a2>… : coefficient of the multi-index (a1, a2, …)   (m > 1)
// x<i>_p<j>        : coordinate i of point j in a joint invariant

inline std::string jet_var_name(int i, const MultiIndex& alpha) {
    std::string s = "x" + std::to_string(i);
    if (alpha.size() == 1) return s + "_d" + std::to_string(alpha[0]);
    s += "_a";
    for (std::size_t j = 0; j < alpha.size(); ++j) {
        if (j) s += "_";
        s += std::to_string(alpha[j]);
    }
    return s;
}

inline std::string point_var_name(int i, int j) {
    return "x" + std::to_string(i) + "_p" + std::to_string(j);
}

/// Inverse of jet_var_name; returns (i, alpha) or nullopt when the name is
/// not a jet variable of rank m.
inline std::optional<std::pair<int, MultiIndex>> parse_jet_var(const std::string& name, int m) {
    if (name.size() < 4 || name[0] != 'x') return std::nullopt;
    std::size_t us = name.find('_');
    if (us == std::string::npos || us == 1) return std::nullopt;
    int i;
    try {
        std::size_t used;
        i = std::stoi(name.substr(1, us - 1), &used);
        if (used != us - 1) return std::nullopt;
    } catch (...) {
        return std::nullopt;
    }
    std::string rest = name.substr(us + 1);
    if (m == 1) {
        if (rest.size() < 2 || rest[0] != 'd') return std::nullopt;
        try {
            std::size_t used;
            int o = std::stoi(rest.substr(1), &used);
            if (used != rest.size() - 1 || o < 0) return std::nullopt;
            return std::make_pair(i, MultiIndex{o});
        } catch (...) {
            return std::nullopt;
        }
    }
    if (rest.size() < 2 || rest[0] != 'a') return std::nullopt;
    MultiIndex alpha;
    std::string body = rest.substr(1);
    std::size_t pos = 0;
    while (pos <= body.size()) {
        std::size_t next = body.find('_', pos);
        std::string piece = next == std::string::npos ? body.substr(pos) : body.substr(pos, next - pos);
        try {
            std::size_t used;
            int a = std::stoi(piece, &used);
            if (used != piece.size() || a < 0) return std::nullopt;
            alpha.push_back(a);
        } catch (...) {
            return std::nullopt;
        }
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    if (static_cast<int>(alpha.size()) != m) return std::nullopt;
    return std::make_pair(i, std::move(alpha));
}

// -- near-points ------------------------------------------------------------

/// An A-valued point of M = R^n: one Weil-algebra element per coordinate.
/// For jets, the coefficient of eps^alpha in series i is the coordinate
/// x_{i,alpha} divided by alpha!.
template <RingStructure R>
struct NearPoint {
    int n;
    WeilAlgebra<R> algebra;
    std::vector<WeilElement<typename R::Elem>> series;

    int rank() const { return algebra.spec->groups[0].m; }
    int order() const { return algebra.spec->groups[0].r; }
};

/// The universal jet: coordinates are free symbols of a rational-function
/// ring, so one symbolic derivation covers all jets at once.
inline NearPoint<RationalFunctionRing> universal_jet(int n, int m, int r) {
    std::vector<std::string> names;
    for (int i = 1; i <= n; ++i)
        for (const auto& alpha : indices_up_to(m, r)) names.push_back(jet_var_name(i, alpha));
    RationalFunctionRing ring(make_varset(names));
    WeilAlgebra<RationalFunctionRing> A(ring, m, r);
    NearPoint<RationalFunctionRing> p{n, A, {}};
    for (int i = 1; i <= n; ++i) {
        auto s = A.zero();
        for (const auto& alpha : indices_up_to(m, r)) {
            Rational inv_fact = Rational(1, index_factorial(alpha));
            auto coeff = ring.mul(ring.variable(jet_var_name(i, alpha)),
                                  ring.from_rational(inv_fact));
            s = A.add(s, A.monomial(alpha, coeff));
        }
        p.series.push_back(std::move(s));
    }
    return p;
}

/// Builds a jet from explicit coordinate values x_{i,alpha} (the jet
/// convention divides each by alpha!).
template <RingStructure R>
NearPoint<R> make_jet(const R& ring, int n, int m, int r,
                      const std::map<std::string, typename R::Elem>& coords) {
    WeilAlgebra<R> A(ring, m, r);
    NearPoint<R> p{n, A, {}};
    for (int i = 1; i <= n; ++i) {
        auto s = A.zero();
        for (const auto& alpha : indices_up_to(m, r)) {
            auto it = coords.find(jet_var_name(i, alpha));
            if (it == coords.end())
                throw UnboundVariable("missing jet coordinate " + jet_var_name(i, alpha));
            auto c = ring.mul(it->second, ring.from_rational(Rational(1, index_factorial(alpha))));
            s = A.add(s, A.monomial(alpha, c));
        }
        p.series.push_back(std::move(s));
    }
    return p;
}

/// Reads coordinates back out of a jet: x_{i,alpha} = alpha! * coefficient.
template <RingStructure R>
std::map<std::string, typename R::Elem> jet_coordinates(const NearPoint<R>& p) {
    std::map<std::string, typename R::Elem> out;
    const auto& ring = p.algebra.coeff_ring;
    for (int i = 1; i <= p.n; ++i)
        for (const auto& alpha : indices_up_to(p.rank(), p.order())) {
            auto c = p.algebra.coefficient(p.series[static_cast<std::size_t>(i - 1)], alpha);
            out.emplace(jet_var_name(i, alpha),
                        ring.mul(c, ring.from_rational(Rational(index_factorial(alpha)))));
        }
    return out;
}

/// Prolongation f^A: evaluate f with coordinate i bound to the jet's i-th
/// series. f's variables are x<i>_p1.
template <RingStructure R>
WeilElement<typename R::Elem> prolong(const ExprPtr& f, const NearPoint<R>& p) {
    std::map<std::string, WeilElement<typename R::Elem>> bind;
    for (int i = 1; i <= p.n; ++i)
        bind.emplace(point_var_name(i, 1), p.series[static_cast<std::size_t>(i - 1)]);
    return evaluate(p.algebra, f, bind);
}

// -- twists -----------------------------------------------------------------

/// A tuple of endomorphisms of one algebra: the data of a morphism
/// A -> A^k through which a k-point invariant is pulled back.
template <class C>
struct TwistSpec {
    int k;
    std::vector<Endomorphism<C>> endos;
};

/// tau_i : eps_j -> c_i * eps_j for each supplied constant.
template <RingStructure R>
TwistSpec<typename R::Elem> scaling_twist(const WeilAlgebra<R>& A, const std::vector<Rational>& cs) {
    TwistSpec<typename R::Elem> tw{static_cast<int>(cs.size()), {}};
    for (const Rational& c : cs) tw.endos.push_back(A.scaling_endomorphism(c));
    return tw;
}

// -- derivation results -----------------------------------------------------

template <RingStructure R>
struct DerivationResult {
    WeilAlgebra<R> algebra; // algebra of `element` (reduced after a quotient)
    WeilElement<typename R::Elem> element;
    int order;                        // requested jet order r
    std::optional<int> reduced_order; // r - s when singular division occurred

    /// All (alpha, coefficient) pairs of the element, including zero gaps up
    /// to the truncation bound; exactly reproduces the element.
    std::vector<std::pair<MultiIndex, typename R::Elem>> components() const {
        std::vector<std::pair<MultiIndex, typename R::Elem>> out;
        for (const auto& alpha : algebra.spec->basis())
            out.emplace_back(alpha, algebra.coefficient(element, alpha));
        return out;
    }

    std::optional<std::pair<MultiIndex, typename R::Elem>> lowest_component() const {
        if (element.coeffs.empty()) return std::nullopt;
        const auto& [idx, c] = *element.coeffs.begin();
        return std::make_pair(idx, c);
    }
};

/// D_sigma(I) = I^A composed with the induced M(A) -> M^k(A): point j of the
/// invariant is bound to the jet's coordinates pushed through the j-th twist
/// endomorphism, then I is evaluated over the Weil algebra.
template <RingStructure R>
DerivationResult<R> twisted_differential(const ExprPtr& I, const TwistSpec<typename R::Elem>& tw,
                                         const NearPoint<R>& p) {
    std::map<std::string, WeilElement<typename R::Elem>> bind;
    for (int j = 1; j <= tw.k; ++j)
        for (int i = 1; i <= p.n; ++i)
            bind.emplace(point_var_name(i, j),
                         p.algebra.apply_endo(tw.endos[static_cast<std::size_t>(j - 1)],
                                              p.series[static_cast<std::size_t>(i - 1)]));
    auto elem = evaluate(p.algebra, I, bind);
    return DerivationResult<R>{p.algebra, std::move(elem), p.order(), std::nullopt};
}

/// D_sigma(I) / D_sigma(J) in the annihilator quotient A/Ann(eps^s). The
/// theorem's hypotheses surface as errors: (c) the divisor must be a monomial
/// times a unit, (d) the dividend must lie in the ideal generated by eps^s.
template <RingStructure R>
DerivationResult<R> singular_twisted_quotient(const ExprPtr& I, const ExprPtr& J,
                                              const TwistSpec<typename R::Elem>& tw,
                                              const NearPoint<R>& p) {
    auto ti = twisted_differential(I, tw, p);
    auto tj = twisted_differential(J, tw, p);
    try {
        auto div = p.algebra.singular_divide(ti.element, tj.element);
        int s = div.shift;
        return DerivationResult<R>{div.reduced, std::move(div.quotient), p.order(),
                                   p.order() - s};
    } catch (const NotMonomialTimesUnit& e) {
        throw NotMonomialTimesUnit(std::string("hypothesis (c) failed: the twisted denominator "
                                               "is not a monomial times a unit (") +
                                   e.what() + ")");
    } catch (const NotDivisible& e) {
        throw NotDivisible(std::string("hypothesis (d) failed: the twisted numerator is not in "
                                       "the ideal of the denominator's monomial (") +
                           e.what() + ")");
    }
}

// -- total derivatives ------------------------------------------------------

/// The formal derivation d/d(eps_j) on jet-variable expressions: every
/// x_{i,alpha} differentiates to x_{i,alpha+e_j}. Raises the jet order of
/// the expression by one.
inline ExprPtr total_derivative(const ExprPtr& e, int j, int m) {
    if (j < 0 || j >= m) throw UnsupportedOperation("total-derivative direction out of range");
    ExprPtr acc = ex::c(0);
    for (const std::string& name : free_vars(e)) {
        auto parsed = parse_jet_var(name, m);
        if (!parsed) throw UnknownVariable("not a jet variable: " + name);
        auto [i, alpha] = *parsed;
        alpha[static_cast<std::size_t>(j)] += 1;
        acc = ex::add(acc, ex::mul(partial_derivative(e, name), ex::var(jet_var_name(i, alpha))));
    }
    return acc;
}

// -- Lambda constants -------------------------------------------------------

/// (1/(1!2!...n!)) * det[i^j], i,j = 1..n.
inline Rational lambda_constant(int n) {
    if (n < 1) throw UnsupportedOperation("lambda_constant needs n >= 1");
    std::vector<std::vector<Integer>> m(static_cast<std::size_t>(n),
                                        std::vector<Integer>(static_cast<std::size_t>(n)));
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            Integer p = 1;
            for (int t = 0; t < j; ++t) p *= i;
            m[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] = p;
        }
    Integer det = bareiss_determinant(std::move(m));
    Integer denom = 1;
    for (int i = 1; i <= n; ++i) denom *= factorial(i);
    return Rational(det, denom);
}

} // namespace weilinv

#endif
