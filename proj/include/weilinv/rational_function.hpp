#ifndef WEILINV_RATIONAL_FUNCTION_HPP
#define WEILINV_RATIONAL_FUNCTION_HPP

#include <string>
#include <utility>

#include "weilinv/errors.hpp"
#include "weilinv/polynomial.hpp"

namespace weilinv {

/// Quotient of two polynomials, stored unreduced. Equality is defined by
/// cross-multiplication, so no multivariate gcd is ever needed. Construction
/// strips the common rational content and the common monomial factor of
/// numerator and denominator, which keeps sizes bounded at desk scale.
class RationalFunction {
public:
    RationalFunction(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero()) throw DivisionByZero("rational function with zero denominator");
        normalize();
    }

    static RationalFunction constant(const VarSetPtr& vars, const Rational& c) {
        return RationalFunction(Polynomial::constant(vars, c), Polynomial::constant(vars, 1));
    }
    static RationalFunction variable(const VarSetPtr& vars, const std::string& name) {
        return RationalFunction(Polynomial::variable(vars, name), Polynomial::constant(vars, 1));
    }
    static RationalFunction from_polynomial(Polynomial p) {
        Polynomial one = Polynomial::constant(p.vars(), 1);
        return RationalFunction(std::move(p), std::move(one));
    }

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }
    const VarSetPtr& vars() const { return num_.vars(); }
    bool is_zero() const { return num_.is_zero(); }

    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
        if (a.den_ == b.den_) return RationalFunction(a.num_ + b.num_, a.den_);
        return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
        if (a.den_ == b.den_) return RationalFunction(a.num_ - b.num_, a.den_);
        return RationalFunction(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    RationalFunction operator-() const { return RationalFunction(-num_, den_); }
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
        return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
    }

    RationalFunction inverse() const {
        if (num_.is_zero()) throw NotInvertible("zero rational function");
        return RationalFunction(den_, num_);
    }
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
        return a * b.inverse();
    }

    /// Cross-multiplication equality: n1*d2 == n2*d1.
    bool operator==(const RationalFunction& o) const { return num_ * o.den_ == o.num_ * den_; }

    Rational evaluate(std::span<const Rational> values) const {
        Rational d = den_.evaluate(values);
        if (d == 0) throw DivisionByZero("denominator vanishes at evaluation point");
        return num_.evaluate(values) / d;
    }

    std::string to_string() const {
        if (den_.is_constant() && den_.constant_value() == 1) return num_.to_string();
        std::string n = num_.to_string();
        std::string d = den_.to_string();
        if (needs_parens(n)) n = "(" + n + ")";
        if (needs_parens(d)) d = "(" + d + ")";
        return n + "/" + d;
    }

private:
    static bool needs_parens(const std::string& s) {
        for (std::size_t i = 0; i < s.size(); ++i) {
            char c = s[i];
            if (c == '*' || c == '+' || c == ' ' || c == '/') return true;
            if (c == '-' && i > 0) return true;
        }
        return false;
    }

    void normalize() {
        MultiIndex mn = num_.monomial_gcd();
        MultiIndex md = den_.monomial_gcd();
        MultiIndex common(mn.size(), 0);
        bool any = false;
        if (!num_.is_zero()) {
            for (std::size_t i = 0; i < common.size(); ++i) {
                common[i] = std::min(mn[i], md[i]);
                any = any || common[i] > 0;
            }
        }
        if (any) {
            num_ = num_.shift_down(common);
            den_ = den_.shift_down(common);
        }
        Rational c = rational_gcd(num_.content(), den_.content());
        if (den_.leading_coefficient() < 0) c = -c;
        if (c != 0 && c != 1) {
            Rational inv = Rational(1) / c;
            num_ = inv * num_;
            den_ = inv * den_;
        }
    }

    Polynomial num_;
    Polynomial den_;
};

} // namespace weilinv

#endif
