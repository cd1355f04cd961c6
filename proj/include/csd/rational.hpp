#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace csd {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer numer(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer denom(const Rational& q) { return boost::multiprecision::denominator(q); }

inline bool is_integer(const Rational& q) { return denom(q) == 1; }

inline bool is_positive_integer(const Rational& q) { return q > 0 && is_integer(q); }

/// Generalized binomial coefficient C(c, k) = c(c-1)...(c-k+1)/k! for rational c.
inline Rational binomial(const Rational& c, unsigned k)
{
    Rational result = 1;
    for (unsigned j = 0; j < k; ++j) {
        result *= (c - int(j));
        result /= int(j) + 1;
    }
    return result;
}

/// "3", "-3", "1/2", "-7/4". Denominator omitted when 1.
inline std::string to_string(const Rational& q)
{
    std::string s = numer(q).str();
    if (!is_integer(q))
        s += "/" + denom(q).str();
    return s;
}

inline Rational rational_from_string(const std::string& s)
{
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos)
            return Rational(Integer(s));
        Integer num(s.substr(0, slash));
        Integer den(s.substr(slash + 1));
        if (den == 0)
            throw std::invalid_argument("zero denominator");
        return Rational(num, den);
    } catch (const std::runtime_error&) {
        throw std::invalid_argument("malformed rational: " + s);
    }
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

} // namespace csd
