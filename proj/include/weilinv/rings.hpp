#ifndef WEILINV_RINGS_HPP
#define WEILINV_RINGS_HPP

#include <cmath>
#include <concepts>
#include <sstream>
#include <string>

#include "weilinv/errors.hpp"
#include "weilinv/polynomial.hpp"
#include "weilinv/rational.hpp"
#include "weilinv/rational_function.hpp"

namespace weilinv {

/// A coefficient ring is a small structure object carrying whatever context
/// its elements need (variable sets, specs). All generic code — Weil
/// arithmetic, expression evaluation — is written against this interface.
template <class S>
concept RingStructure = requires(const S s, const typename S::Elem a, const typename S::Elem b) {
    { s.zero() } -> std::same_as<typename S::Elem>;
    { s.one() } -> std::same_as<typename S::Elem>;
    { s.add(a, b) } -> std::same_as<typename S::Elem>;
    { s.sub(a, b) } -> std::same_as<typename S::Elem>;
    { s.mul(a, b) } -> std::same_as<typename S::Elem>;
    { s.neg(a) } -> std::same_as<typename S::Elem>;
    { s.eq(a, b) } -> std::same_as<bool>;
    { s.is_zero(a) } -> std::same_as<bool>;
    { s.inverse(a) } -> std::same_as<typename S::Elem>;
    { s.from_rational(Rational(1)) } -> std::same_as<typename S::Elem>;
    { s.to_string(a) } -> std::same_as<std::string>;
};

struct Float64Ring {
    using Elem = double;
    Elem zero() const { return 0.0; }
    Elem one() const { return 1.0; }
    Elem add(Elem a, Elem b) const { return a + b; }
    Elem sub(Elem a, Elem b) const { return a - b; }
    Elem mul(Elem a, Elem b) const { return a * b; }
    Elem neg(Elem a) const { return -a; }
    bool eq(Elem a, Elem b) const { return a == b; }
    bool is_zero(Elem a) const { return a == 0.0; }
    Elem inverse(Elem a) const {
        if (a == 0.0) throw NotInvertible("division by zero");
        return 1.0 / a;
    }
    Elem from_rational(const Rational& q) const {
        return static_cast<double>(numerator(q)) / static_cast<double>(denominator(q));
    }
    Elem sqrt(Elem a) const {
        if (a < 0.0) throw UnsupportedOperation("sqrt of negative value");
        return std::sqrt(a);
    }
    std::string to_string(Elem a) const {
        std::ostringstream os;
        os.precision(17);
        os << a;
        return os.str();
    }
};

struct RationalRing {
    using Elem = Rational;
    Elem zero() const { return Rational(0); }
    Elem one() const { return Rational(1); }
    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem sub(const Elem& a, const Elem& b) const { return a - b; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem neg(const Elem& a) const { return -a; }
    bool eq(const Elem& a, const Elem& b) const { return a == b; }
    bool is_zero(const Elem& a) const { return a == 0; }
    Elem inverse(const Elem& a) const {
        if (a == 0) throw NotInvertible("zero rational");
        return Rational(1) / a;
    }
    Elem from_rational(const Rational& q) const { return q; }
    std::string to_string(const Elem& a) const { return weilinv::to_string(a); }
};

struct PolynomialRing {
    using Elem = Polynomial;
    VarSetPtr vars;

    explicit PolynomialRing(VarSetPtr v) : vars(std::move(v)) {}

    Elem zero() const { return Polynomial(vars); }
    Elem one() const { return Polynomial::constant(vars, 1); }
    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem sub(const Elem& a, const Elem& b) const { return a - b; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem neg(const Elem& a) const { return -a; }
    bool eq(const Elem& a, const Elem& b) const { return a == b; }
    bool is_zero(const Elem& a) const { return a.is_zero(); }
    Elem inverse(const Elem& a) const {
        if (!a.is_constant() || a.is_zero())
            throw NotInvertible("polynomial invertible only if a nonzero constant");
        return Polynomial::constant(vars, Rational(1) / a.constant_value());
    }
    Elem from_rational(const Rational& q) const { return Polynomial::constant(vars, q); }
    Elem variable(const std::string& name) const { return Polynomial::variable(vars, name); }
    std::string to_string(const Elem& a) const { return a.to_string(); }
};

struct RationalFunctionRing {
    using Elem = RationalFunction;
    VarSetPtr vars;

    explicit RationalFunctionRing(VarSetPtr v) : vars(std::move(v)) {}

    Elem zero() const { return RationalFunction::constant(vars, 0); }
    Elem one() const { return RationalFunction::constant(vars, 1); }
    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem sub(const Elem& a, const Elem& b) const { return a - b; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem neg(const Elem& a) const { return -a; }
    bool eq(const Elem& a, const Elem& b) const { return a == b; }
    bool is_zero(const Elem& a) const { return a.is_zero(); }
    Elem inverse(const Elem& a) const { return a.inverse(); }
    Elem from_rational(const Rational& q) const { return RationalFunction::constant(vars, q); }
    Elem variable(const std::string& name) const { return RationalFunction::variable(vars, name); }
    std::string to_string(const Elem& a) const { return a.to_string(); }
};

template <RingStructure S>
typename S::Elem ring_pow(const S& ring, typename S::Elem base, unsigned n) {
    typename S::Elem acc = ring.one();
    while (n > 0) {
        if (n & 1u) acc = ring.mul(acc, base);
        n >>= 1u;
        if (n > 0) base = ring.mul(base, base);
    }
    return acc;
}

} // namespace weilinv

#endif
