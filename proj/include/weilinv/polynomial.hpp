#ifndef WEILINV_POLYNOMIAL_HPP
#define WEILINV_POLYNOMIAL_HPP

#include <algorithm>
#include <map>
#include <memory>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "weilinv/errors.hpp"
#include "weilinv/multiindex.hpp"
#include "weilinv/rational.hpp"

namespace weilinv {

/// Ordered set of variable names shared by all elements of a polynomial or
/// rational-function ring.
class VarSet {
public:
    explicit VarSet(std::vector<std::string> names) : names_(std::move(names)) {
        for (std::size_t i = 0; i < names_.size(); ++i) {
            if (!index_.emplace(names_[i], i).second)
                throw RingMismatch("duplicate variable name: " + names_[i]);
        }
    }

    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    const std::string& name(std::size_t i) const { return names_[i]; }

    std::size_t index_of(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) throw UnknownVariable("no variable named " + name);
        return it->second;
    }
    bool contains(const std::string& name) const { return index_.count(name) > 0; }

    bool operator==(const VarSet& o) const { return names_ == o.names_; }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, std::size_t> index_;
};

using VarSetPtr = std::shared_ptr<const VarSet>;

inline VarSetPtr make_varset(std::vector<std::string> names) {
    return std::make_shared<const VarSet>(std::move(names));
}

/// Sparse multivariate polynomial with exact rational coefficients.
/// Terms are kept in graded-lex order; zero coefficients are never stored.
class Polynomial {
public:
    using TermMap = std::map<MultiIndex, Rational, GradedLex>;

    explicit Polynomial(VarSetPtr vars) : vars_(std::move(vars)) {}

    static Polynomial constant(VarSetPtr vars, const Rational& c) {
        Polynomial p(std::move(vars));
        if (c != 0) p.terms_.emplace(MultiIndex(p.vars_->size(), 0), c);
        return p;
    }
    static Polynomial variable(VarSetPtr vars, const std::string& name) {
        std::size_t i = vars->index_of(name);
        Polynomial p(std::move(vars));
        MultiIndex a(p.vars_->size(), 0);
        a[i] = 1;
        p.terms_.emplace(std::move(a), Rational(1));
        return p;
    }
    static Polynomial monomial(VarSetPtr vars, MultiIndex a, const Rational& c) {
        Polynomial p(std::move(vars));
        if (a.size() != p.vars_->size())
            throw RingMismatch("monomial exponent length does not match variable count");
        if (c != 0) p.terms_.emplace(std::move(a), c);
        return p;
    }

    const VarSetPtr& vars() const { return vars_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
    }
    Rational constant_value() const {
        if (terms_.empty()) return Rational(0);
        return terms_.begin()->second;
    }

    int degree() const {
        int d = 0;
        for (const auto& [a, c] : terms_) d = std::max(d, total_degree(a));
        return d;
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        a.check_same_ring(b);
        Polynomial r = a;
        for (const auto& [idx, c] : b.terms_) r.add_term(idx, c);
        return r;
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
        a.check_same_ring(b);
        Polynomial r = a;
        for (const auto& [idx, c] : b.terms_) r.add_term(idx, -c);
        return r;
    }
    Polynomial operator-() const {
        Polynomial r(vars_);
        for (const auto& [idx, c] : terms_) r.terms_.emplace(idx, -c);
        return r;
    }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        a.check_same_ring(b);
        Polynomial r(a.vars_);
        for (const auto& [ia, ca] : a.terms_)
            for (const auto& [ib, cb] : b.terms_) r.add_term(index_sum(ia, ib), ca * cb);
        return r;
    }
    friend Polynomial operator*(const Rational& c, const Polynomial& p) {
        Polynomial r(p.vars_);
        if (c != 0)
            for (const auto& [idx, pc] : p.terms_) r.terms_.emplace(idx, c * pc);
        return r;
    }

    bool operator==(const Polynomial& o) const {
        check_same_ring(o);
        return terms_ == o.terms_;
    }

    /// Formal partial derivative with respect to a variable of the ring.
    Polynomial partial(const std::string& var) const {
        std::size_t j = vars_->index_of(var);
        Polynomial r(vars_);
        for (const auto& [idx, c] : terms_) {
            if (idx[j] == 0) continue;
            MultiIndex d = idx;
            Rational e(d[j]);
            d[j] -= 1;
            r.add_term(std::move(d), e * c);
        }
        return r;
    }

    Rational evaluate(std::span<const Rational> values) const {
        if (values.size() != vars_->size())
            throw RingMismatch("evaluation point has wrong arity");
        Rational acc = 0;
        for (const auto& [idx, c] : terms_) {
            Rational t = c;
            for (std::size_t i = 0; i < idx.size(); ++i)
                for (int e = 0; e < idx[i]; ++e) t *= values[i];
            acc += t;
        }
        return acc;
    }

    /// gcd of the coefficients (a rational); 0 for the zero polynomial.
    Rational content() const {
        Rational g = 0;
        for (const auto& [idx, c] : terms_) g = rational_gcd(g, c);
        return g;
    }

    /// Elementwise minimum of the exponent vectors; the largest monomial
    /// dividing every term. Zero polynomial maps to the zero index.
    MultiIndex monomial_gcd() const {
        MultiIndex m(vars_->size(), 0);
        bool first = true;
        for (const auto& [idx, c] : terms_) {
            if (first) {
                m = idx;
                first = false;
            } else {
                for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::min(m[i], idx[i]);
            }
        }
        return m;
    }

    /// Divide every term by the given monomial; exponents must stay non-negative.
    Polynomial shift_down(const MultiIndex& m) const {
        Polynomial r(vars_);
        for (const auto& [idx, c] : terms_) {
            MultiIndex d = idx;
            for (std::size_t i = 0; i < d.size(); ++i) {
                d[i] -= m[i];
                if (d[i] < 0) throw NotDivisible("monomial does not divide polynomial");
            }
            r.terms_.emplace(std::move(d), c);
        }
        return r;
    }

    /// Coefficient of the graded-lex smallest term (0 for the zero polynomial).
    Rational leading_coefficient() const {
        if (terms_.empty()) return Rational(0);
        return terms_.begin()->second;
    }

    /// Canonical text: terms in graded-lex order, coefficients as "p/q",
    /// e.g. "3*x1_d2^2 - 2*x1_d1*x1_d3".
    std::string to_string() const {
        if (terms_.empty()) return "0";
        // display order: ascending total degree, descending lex within a
        // degree, so leading powers come first ("3*x^2 - 2*x*y")
        std::vector<const std::pair<const MultiIndex, Rational>*> ordered;
        ordered.reserve(terms_.size());
        for (const auto& t : terms_) ordered.push_back(&t);
        std::sort(ordered.begin(), ordered.end(), [](const auto* a, const auto* b) {
            int da = total_degree(a->first), db = total_degree(b->first);
            if (da != db) return da < db;
            return b->first < a->first;
        });
        std::ostringstream os;
        bool first = true;
        for (const auto* term : ordered) {
            const auto& [idx, c] = *term;
            Rational a = c < 0 ? Rational(-c) : c;
            if (first) {
                if (c < 0) os << "-";
                first = false;
            } else {
                os << (c < 0 ? " - " : " + ");
            }
            bool has_vars = total_degree(idx) > 0;
            bool wrote = false;
            if (!has_vars || a != 1) {
                os << weilinv::to_string(a);
                wrote = true;
            }
            for (std::size_t i = 0; i < idx.size(); ++i) {
                if (idx[i] == 0) continue;
                if (wrote) os << "*";
                os << vars_->name(i);
                if (idx[i] > 1) os << "^" << idx[i];
                wrote = true;
            }
        }
        return os.str();
    }

private:
    void check_same_ring(const Polynomial& o) const {
        if (vars_ != o.vars_ && !(*vars_ == *o.vars_))
            throw RingMismatch("polynomials over different variable sets");
    }
    void add_term(MultiIndex idx, const Rational& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(std::move(idx), c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    VarSetPtr vars_;
    TermMap terms_;
};

/// Formal partial derivative, free-function form.
inline Polynomial poly_partial(const Polynomial& p, const std::string& var) {
    return p.partial(var);
}

} // namespace weilinv

#endif
