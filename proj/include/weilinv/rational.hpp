#ifndef WEILINV_RATIONAL_HPP
#define WEILINV_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "weilinv/errors.hpp"

namespace weilinv {

using Integer  = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational rat(long long num, long long den = 1) {
    if (den == 0) throw DivisionByZero("rational with zero denominator");
    return Rational(Integer(num), Integer(den));
}

inline Integer factorial(int n) {
    Integer f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

inline std::string to_string(const Rational& q) {
    if (denominator(q) == 1) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

inline Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

/// gcd on rationals: the positive generator of the fractional ideal (a, b).
inline Rational rational_gcd(const Rational& a, const Rational& b) {
    if (a == 0) return abs(b);
    if (b == 0) return abs(a);
    Integer dl = lcm(denominator(a), denominator(b));
    Integer na = numerator(a) * (dl / denominator(a));
    Integer nb = numerator(b) * (dl / denominator(b));
    return Rational(gcd(na, nb), dl);
}

inline Rational parse_rational(const std::string& s) {
    return Rational(s);
}

} // namespace weilinv

#endif
