#ifndef WEILINV_WEIL_HPP
#define WEILINV_WEIL_HPP

#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "weilinv/errors.hpp"
#include "weilinv/multiindex.hpp"
#include "weilinv/rings.hpp"

namespace weilinv {

/// Truncated power-series algebra. A plain R[[e]]_{m,r} is a single
/// generator group; tensor products concatenate groups, each keeping its own
/// truncation order. A monomial survives iff within every group its total
/// degree stays within that group's bound.
struct WeilSpec {
    struct Group {
        int m; // number of generators in this group
        int r; // truncation order of this group
        bool operator==(const Group&) const = default;
    };
    std::vector<Group> groups;

    WeilSpec(int m, int r) : groups{{m, r}} {
        if (m < 1) throw SpecMismatch("need at least one nilpotent generator");
        if (r < 0) throw SpecMismatch("truncation order must be non-negative");
    }
    explicit WeilSpec(std::vector<Group> gs) : groups(std::move(gs)) {}

    bool operator==(const WeilSpec&) const = default;

    int total_generators() const {
        int n = 0;
        for (const auto& g : groups) n += g.m;
        return n;
    }
    /// Nilpotency bound: monomials of total degree above this always vanish.
    int max_order() const {
        int r = 0;
        for (const auto& g : groups) r += g.r;
        return r;
    }
    bool admits(const MultiIndex& a) const {
        std::size_t pos = 0;
        for (const auto& g : groups) {
            int d = 0;
            for (int j = 0; j < g.m; ++j) d += a[pos + static_cast<std::size_t>(j)];
            if (d > g.r) return false;
            pos += static_cast<std::size_t>(g.m);
        }
        return true;
    }
    /// All admissible monomials in graded-lex order. dim = prod C(m_g+r_g, r_g).
    std::vector<MultiIndex> basis() const {
        std::vector<MultiIndex> acc{MultiIndex{}};
        for (const auto& g : groups) {
            std::vector<MultiIndex> next;
            for (const auto& head : acc)
                for (const auto& tail : indices_up_to(g.m, g.r)) {
                    MultiIndex joined = head;
                    joined.insert(joined.end(), tail.begin(), tail.end());
                    next.push_back(std::move(joined));
                }
            acc = std::move(next);
        }
        std::sort(acc.begin(), acc.end(), GradedLex{});
        return acc;
    }
    std::size_t dimension() const { return basis().size(); }
};

using WeilSpecPtr = std::shared_ptr<const WeilSpec>;

inline WeilSpecPtr make_spec(int m, int r) { return std::make_shared<const WeilSpec>(m, r); }

/// Element of a Weil algebra over coefficients C: a sparse map from
/// admissible monomials to nonzero coefficients. Immutable in use.
template <class C>
struct WeilElement {
    WeilSpecPtr spec;
    std::map<MultiIndex, C, GradedLex> coeffs;
};

/// Substitution endomorphism: each generator maps to an element of the
/// maximal ideal (zero constant term), so substitution descends to the
/// truncated quotient.
template <class C>
struct Endomorphism {
    WeilSpecPtr spec;
    std::vector<WeilElement<C>> images; // one per generator
};

template <RingStructure R>
struct WeilAlgebra {
    using C    = typename R::Elem;
    using Elem = WeilElement<C>;

    R coeff_ring;
    WeilSpecPtr spec;

    WeilAlgebra(R ring, WeilSpecPtr s) : coeff_ring(std::move(ring)), spec(std::move(s)) {}
    WeilAlgebra(R ring, int m, int r) : coeff_ring(std::move(ring)), spec(make_spec(m, r)) {}

    // -- construction ------------------------------------------------------

    Elem zero() const { return Elem{spec, {}}; }
    Elem one() const { return constant(coeff_ring.one()); }
    Elem constant(const C& c) const {
        Elem e{spec, {}};
        if (!coeff_ring.is_zero(c))
            e.coeffs.emplace(MultiIndex(static_cast<std::size_t>(spec->total_generators()), 0), c);
        return e;
    }
    Elem from_rational(const Rational& q) const { return constant(coeff_ring.from_rational(q)); }
    Elem generator(int j) const {
        if (j < 0 || j >= spec->total_generators()) throw SpecMismatch("generator index out of range");
        MultiIndex a(static_cast<std::size_t>(spec->total_generators()), 0);
        a[static_cast<std::size_t>(j)] = 1;
        return monomial(a, coeff_ring.one());
    }
    Elem monomial(MultiIndex a, const C& c) const {
        if (static_cast<int>(a.size()) != spec->total_generators())
            throw SpecMismatch("monomial length does not match generator count");
        Elem e{spec, {}};
        if (!coeff_ring.is_zero(c) && spec->admits(a)) e.coeffs.emplace(std::move(a), c);
        return e;
    }

    // -- arithmetic --------------------------------------------------------

    Elem add(const Elem& a, const Elem& b) const {
        check(a);
        check(b);
        Elem r = a;
        for (const auto& [idx, c] : b.coeffs) accumulate(r, idx, c);
        return r;
    }
    Elem sub(const Elem& a, const Elem& b) const {
        check(a);
        check(b);
        Elem r = a;
        for (const auto& [idx, c] : b.coeffs) accumulate(r, idx, coeff_ring.neg(c));
        return r;
    }
    Elem neg(const Elem& a) const {
        check(a);
        Elem r{spec, {}};
        for (const auto& [idx, c] : a.coeffs) r.coeffs.emplace(idx, coeff_ring.neg(c));
        return r;
    }
    /// Polynomial product with every monomial violating a truncation bound
    /// discarded.
    Elem mul(const Elem& a, const Elem& b) const {
        check(a);
        check(b);
        Elem r{spec, {}};
        for (const auto& [ia, ca] : a.coeffs)
            for (const auto& [ib, cb] : b.coeffs) {
                MultiIndex idx = index_sum(ia, ib);
                if (!spec->admits(idx)) continue;
                accumulate(r, std::move(idx), coeff_ring.mul(ca, cb));
            }
        return r;
    }
    Elem scale(const C& c, const Elem& a) const {
        check(a);
        Elem r{spec, {}};
        if (coeff_ring.is_zero(c)) return r;
        for (const auto& [idx, ac] : a.coeffs) {
            C p = coeff_ring.mul(c, ac);
            if (!coeff_ring.is_zero(p)) r.coeffs.emplace(idx, std::move(p));
        }
        return r;
    }
    bool eq(const Elem& a, const Elem& b) const {
        check(a);
        check(b);
        if (a.coeffs.size() != b.coeffs.size()) return false;
        auto it = b.coeffs.begin();
        for (auto jt = a.coeffs.begin(); jt != a.coeffs.end(); ++jt, ++it) {
            if (jt->first != it->first || !coeff_ring.eq(jt->second, it->second)) return false;
        }
        return true;
    }
    bool is_zero(const Elem& a) const {
        check(a);
        return a.coeffs.empty();
    }

    /// Coefficient at alpha = 0: the valuation morphism onto the coefficient
    /// ring.
    C valuation(const Elem& a) const {
        check(a);
        MultiIndex zero_idx(static_cast<std::size_t>(spec->total_generators()), 0);
        auto it = a.coeffs.find(zero_idx);
        return it == a.coeffs.end() ? coeff_ring.zero() : it->second;
    }

    C coefficient(const Elem& a, const MultiIndex& idx) const {
        check(a);
        auto it = a.coeffs.find(idx);
        return it == a.coeffs.end() ? coeff_ring.zero() : it->second;
    }

    /// Smallest total degree carrying a nonzero coefficient; empty for 0.
    std::optional<int> lowest_degree(const Elem& a) const {
        check(a);
        if (a.coeffs.empty()) return std::nullopt;
        return total_degree(a.coeffs.begin()->first);
    }

    /// a^{-1} for units: a = w(a)(1 - n) with n nilpotent, inverted through
    /// the finite Neumann sum of n up to the nilpotency bound.
    Elem inverse(const Elem& a) const {
        check(a);
        C v = valuation(a);
        C vinv = [&] {
            try {
                return coeff_ring.inverse(v);
            } catch (const NotInvertible& e) {
                throw NotAUnit(std::string("valuation is not invertible (") + e.what() + ")");
            }
        }();
        Elem n = sub(one(), scale(vinv, a));
        Elem acc = one();
        Elem pw  = one();
        int bound = spec->max_order();
        for (int i = 1; i <= bound; ++i) {
            pw = mul(pw, n);
            if (pw.coeffs.empty()) break;
            acc = add(acc, pw);
        }
        return scale(vinv, acc);
    }

    // -- morphisms ---------------------------------------------------------

    Endomorphism<C> make_endomorphism(std::vector<Elem> images) const {
        if (static_cast<int>(images.size()) != spec->total_generators())
            throw SpecMismatch("endomorphism needs one image per generator");
        for (const auto& im : images) {
            check(im);
            if (!coeff_ring.is_zero(valuation(im)))
                throw SpecMismatch("endomorphism image must have zero constant term");
        }
        return Endomorphism<C>{spec, std::move(images)};
    }

    /// tau: e_j -> c * e_j on every generator.
    Endomorphism<C> scaling_endomorphism(const Rational& c) const {
        std::vector<Elem> images;
        C cc = coeff_ring.from_rational(c);
        for (int j = 0; j < spec->total_generators(); ++j) images.push_back(scale(cc, generator(j)));
        return make_endomorphism(std::move(images));
    }

    /// Substitutes the endomorphism's generator images and truncates; an
    /// algebra morphism fixing the coefficient ring.
    Elem apply_endo(const Endomorphism<C>& endo, const Elem& a) const {
        check(a);
        if (!(*endo.spec == *spec)) throw SpecMismatch("endomorphism over a different algebra");
        // powers[j][e] = images[j]^e, filled on demand
        std::vector<std::vector<Elem>> powers(static_cast<std::size_t>(spec->total_generators()),
                                              std::vector<Elem>{one()});
        auto power = [&](std::size_t j, int e) -> const Elem& {
            auto& ps = powers[j];
            while (static_cast<int>(ps.size()) <= e) ps.push_back(mul(ps.back(), endo.images[j]));
            return ps[static_cast<std::size_t>(e)];
        };
        Elem r = zero();
        for (const auto& [idx, c] : a.coeffs) {
            Elem term = constant(c);
            for (std::size_t j = 0; j < idx.size(); ++j)
                if (idx[j] > 0) term = mul(term, power(j, idx[j]));
            r = add(r, term);
        }
        return r;
    }

    // -- singular division -------------------------------------------------

    struct DivisionResult {
        WeilAlgebra reduced; // R[[e]]_{1, r-s} = A / Ann(e^s)
        Elem quotient;       // element of the reduced algebra
        int shift;           // s
    };

    /// a / b where b = e^s * u with u a unit; defined in the annihilator
    /// quotient A/Ann(e^s), realized as the order-(r-s) algebra. Requires a
    /// single generator.
    DivisionResult singular_divide(const Elem& a, const Elem& b) const {
        check(a);
        check(b);
        if (spec->groups.size() != 1 || spec->groups[0].m != 1)
            throw SpecMismatch("singular division requires a single-generator algebra");
        int r = spec->groups[0].r;
        if (b.coeffs.empty()) throw DivisionByZero("division by the zero element");
        int s = total_degree(b.coeffs.begin()->first);
        // leading coefficient must be invertible in the coefficient ring
        try {
            (void)coeff_ring.inverse(b.coeffs.begin()->second);
        } catch (const NotInvertible& e) {
            throw NotMonomialTimesUnit(
                std::string("leading coefficient of the divisor is not invertible (") + e.what() +
                ")");
        }
        for (const auto& [idx, c] : a.coeffs)
            if (total_degree(idx) < s)
                throw NotDivisible("dividend has a nonzero coefficient below degree " +
                                   std::to_string(s));
        WeilAlgebra reduced(coeff_ring, 1, r - s);
        Elem sa = shift_into(reduced, a, s);
        Elem sb = shift_into(reduced, b, s);
        Elem q  = reduced.mul(sa, reduced.inverse(sb));
        return DivisionResult{reduced, std::move(q), s};
    }

    /// Any degree-preserving lift of an element of the order-(r-s) quotient
    /// back into this algebra (same coefficients).
    Elem lift(const Elem& from_reduced) const {
        Elem r{spec, {}};
        for (const auto& [idx, c] : from_reduced.coeffs) {
            if (!spec->admits(idx)) throw SpecMismatch("lifted monomial not admissible");
            r.coeffs.emplace(idx, c);
        }
        return r;
    }

    // -- rendering ---------------------------------------------------------

    /// "1 + (x1_d2/(2*x1_d1))*e1" style: terms in graded-lex order of alpha.
    std::string to_string(const Elem& a) const {
        check(a);
        if (a.coeffs.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [idx, c] : a.coeffs) {
            if (!first) os << " + ";
            first = false;
            std::string cs = coeff_ring.to_string(c);
            bool trivial_monomial = total_degree(idx) == 0;
            if (trivial_monomial) {
                os << cs;
                continue;
            }
            bool wrote = false;
            if (cs != "1") {
                if (needs_parens(cs)) cs = "(" + cs + ")";
                os << cs;
                wrote = true;
            }
            for (std::size_t j = 0; j < idx.size(); ++j) {
                if (idx[j] == 0) continue;
                if (wrote) os << "*";
                os << "e" << (j + 1);
                if (idx[j] > 1) os << "^" << idx[j];
                wrote = true;
            }
        }
        return os.str();
    }

    void check(const Elem& a) const {
        if (a.spec != spec && !(*a.spec == *spec))
            throw SpecMismatch("element belongs to a different Weil algebra");
    }

private:
    static bool needs_parens(const std::string& s) {
        for (std::size_t i = 0; i < s.size(); ++i) {
            char c = s[i];
            if (c == '*' || c == '+' || c == ' ' || c == '/' || c == '^') return true;
            if (c == '-' && i > 0) return true;
        }
        return !s.empty() && s[0] == '-';
    }

    Elem shift_into(const WeilAlgebra& target, const Elem& a, int s) const {
        Elem r{target.spec, {}};
        for (const auto& [idx, c] : a.coeffs) {
            int d = idx[0] - s;
            if (d < 0) continue; // divisor terms below s are structurally absent
            if (d > target.spec->groups[0].r) continue;
            r.coeffs.emplace(MultiIndex{d}, c);
        }
        return r;
    }

    void accumulate(Elem& r, MultiIndex idx, const C& c) const {
        if (coeff_ring.is_zero(c)) return;
        auto [it, inserted] = r.coeffs.try_emplace(std::move(idx), c);
        if (!inserted) {
            it->second = coeff_ring.add(it->second, c);
            if (coeff_ring.is_zero(it->second)) r.coeffs.erase(it);
        }
    }
};

// -- tensor product --------------------------------------------------------

/// A (x) B with the basis isomorphism realized by concatenating exponent
/// vectors: monomial (alpha, beta) of the tensor corresponds to the pair of
/// basis monomials alpha of A and beta of B.
template <RingStructure R>
struct TensorProduct {
    WeilAlgebra<R> algebra;
    std::size_t left_generators;
    std::size_t right_generators;

    typename WeilAlgebra<R>::Elem embed_left(const typename WeilAlgebra<R>::Elem& a) const {
        typename WeilAlgebra<R>::Elem r{algebra.spec, {}};
        for (const auto& [idx, c] : a.coeffs) {
            MultiIndex j = idx;
            j.resize(left_generators + right_generators, 0);
            r.coeffs.emplace(std::move(j), c);
        }
        return r;
    }
    typename WeilAlgebra<R>::Elem embed_right(const typename WeilAlgebra<R>::Elem& b) const {
        typename WeilAlgebra<R>::Elem r{algebra.spec, {}};
        for (const auto& [idx, c] : b.coeffs) {
            MultiIndex j(left_generators, 0);
            j.insert(j.end(), idx.begin(), idx.end());
            r.coeffs.emplace(std::move(j), c);
        }
        return r;
    }
    /// Split a tensor monomial back into its (A, B) factor indices.
    std::pair<MultiIndex, MultiIndex> split(const MultiIndex& idx) const {
        return {MultiIndex(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(left_generators)),
                MultiIndex(idx.begin() + static_cast<std::ptrdiff_t>(left_generators), idx.end())};
    }
};

template <RingStructure R>
TensorProduct<R> tensor_product(const WeilAlgebra<R>& a, const WeilAlgebra<R>& b) {
    std::vector<WeilSpec::Group> groups = a.spec->groups;
    groups.insert(groups.end(), b.spec->groups.begin(), b.spec->groups.end());
    WeilAlgebra<R> alg(a.coeff_ring, std::make_shared<const WeilSpec>(std::move(groups)));
    return TensorProduct<R>{std::move(alg), static_cast<std::size_t>(a.spec->total_generators()),
                            static_cast<std::size_t>(b.spec->total_generators())};
}

// -- multi-Weil algebras ---------------------------------------------------

/// Finite direct product of Weil algebras over one coefficient ring; the
/// R^k analogue A^k realizes A (x) R^k. Elements are tuples with
/// componentwise operations.
template <RingStructure R>
struct MultiWeilAlgebra {
    using C    = typename R::Elem;
    using Elem = std::vector<WeilElement<C>>;

    std::vector<WeilAlgebra<R>> factors;

    explicit MultiWeilAlgebra(std::vector<WeilAlgebra<R>> fs) : factors(std::move(fs)) {
        if (factors.empty()) throw SpecMismatch("multi-Weil algebra needs at least one factor");
    }
    static MultiWeilAlgebra power(const WeilAlgebra<R>& a, int k) {
        return MultiWeilAlgebra(std::vector<WeilAlgebra<R>>(static_cast<std::size_t>(k), a));
    }

    std::size_t multiplicity() const { return factors.size(); }

    Elem zero() const { return apply_each([](const auto& f) { return f.zero(); }); }
    Elem one() const { return apply_each([](const auto& f) { return f.one(); }); }
    Elem from_rational(const Rational& q) const {
        return apply_each([&](const auto& f) { return f.from_rational(q); });
    }
    Elem add(const Elem& a, const Elem& b) const { return zip(a, b, [](const auto& f, const auto& x, const auto& y) { return f.add(x, y); }); }
    Elem sub(const Elem& a, const Elem& b) const { return zip(a, b, [](const auto& f, const auto& x, const auto& y) { return f.sub(x, y); }); }
    Elem mul(const Elem& a, const Elem& b) const { return zip(a, b, [](const auto& f, const auto& x, const auto& y) { return f.mul(x, y); }); }
    Elem neg(const Elem& a) const { return map(a, [](const auto& f, const auto& x) { return f.neg(x); }); }
    Elem inverse(const Elem& a) const { return map(a, [](const auto& f, const auto& x) { return f.inverse(x); }); }
    bool eq(const Elem& a, const Elem& b) const {
        for (std::size_t i = 0; i < factors.size(); ++i)
            if (!factors[i].eq(a[i], b[i])) return false;
        return true;
    }
    bool is_zero(const Elem& a) const {
        for (std::size_t i = 0; i < factors.size(); ++i)
            if (!factors[i].is_zero(a[i])) return false;
        return true;
    }
    C valuation(const Elem& a, std::size_t i) const { return factors[i].valuation(a[i]); }
    std::string to_string(const Elem& a) const {
        std::ostringstream os;
        os << "(";
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (i) os << ", ";
            os << factors[i].to_string(a[i]);
        }
        os << ")";
        return os.str();
    }

private:
    template <class F>
    Elem apply_each(F&& f) const {
        Elem e;
        e.reserve(factors.size());
        for (const auto& fac : factors) e.push_back(f(fac));
        return e;
    }
    template <class F>
    Elem map(const Elem& a, F&& f) const {
        Elem e;
        e.reserve(factors.size());
        for (std::size_t i = 0; i < factors.size(); ++i) e.push_back(f(factors[i], a[i]));
        return e;
    }
    template <class F>
    Elem zip(const Elem& a, const Elem& b, F&& f) const {
        Elem e;
        e.reserve(factors.size());
        for (std::size_t i = 0; i < factors.size(); ++i) e.push_back(f(factors[i], a[i], b[i]));
        return e;
    }
};

} // namespace weilinv

#endif
