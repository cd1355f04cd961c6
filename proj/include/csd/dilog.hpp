#pragma once

#include "csd/series.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace csd {

/// Euler dilogarithm for x <= 1. Series on |x| <= 1/2, standard reflection,
/// Landen and inversion identities elsewhere. Absolute error within 1e-14.
inline double li2(double x)
{
    if (!(x <= 1.0))
        throw std::domain_error("li2: argument must be <= 1");
    constexpr double pi2_6 = std::numbers::pi * std::numbers::pi / 6.0;
    if (x == 0.0)
        return 0.0;
    if (x == 1.0)
        return pi2_6;
    if (x < -1.0) {
        double lg = std::log(-x);
        return -pi2_6 - 0.5 * lg * lg - li2(1.0 / x);
    }
    if (x > 0.5)
        return pi2_6 - std::log(x) * std::log1p(-x) - li2(1.0 - x);
    if (x < -0.5) {
        double lg = std::log1p(-x);
        return -li2(x / (x - 1.0)) - 0.5 * lg * lg;
    }
    double sum = 0.0, pw = 1.0;
    for (int j = 1; j < 200; ++j) {
        pw *= x;
        double term = pw / double(j) / double(j);
        sum += term;
        if (std::abs(term) < 1e-18 * (1.0 + std::abs(sum)))
            break;
    }
    return sum;
}

/// Rogers dilogarithm on [0, 1].
inline double rogers_l(double x)
{
    if (x < 0.0 || x > 1.0)
        throw std::domain_error("rogers_l: argument must be in [0,1]");
    if (x == 0.0)
        return 0.0;
    if (x == 1.0)
        return std::numbers::pi * std::numbers::pi / 6.0;
    return li2(x) + 0.5 * std::log(x) * std::log1p(-x);
}

/// Modified Rogers dilogarithm L(x/(1+x)) = -Li2(-x) - (1/2) log x log(1+x),
/// continuous at 0 with value 0. Defined for x >= 0.
inline double ltilde(double x)
{
    if (x < 0.0)
        throw std::domain_error("ltilde: argument must be >= 0");
    if (x == 0.0)
        return 0.0;
    return -li2(-x) - 0.5 * std::log(x) * std::log1p(x);
}

/// Puiseux-with-log expansion of ltilde around 0 for an argument of the form
/// u = y^leading (1 + h): the plain part is sum_j (-1)^{j+1} u^j / j^2 minus
/// (1/2) log(1+h) sum_j (-1)^{j+1} u^j / j, and log(y_i) carries
/// -(1/2) leading_i sum_j (-1)^{j+1} u^j / j.
inline LogSeries ltilde_symbolic(const TruncatedSeries& u, const LatticeVec& leading)
{
    if (!leading.is_positive())
        throw std::domain_error("ltilde_symbolic: leading exponent must be positive");
    if (u.is_zero())
        throw std::domain_error("ltilde_symbolic: zero series");
    if (u.coeff(leading) != 1)
        throw std::domain_error("ltilde_symbolic: leading coefficient is not 1");

    TruncatedSeries h = u.divided_by_monomial(leading);
    h.add_term(LatticeVec::zero(u.vars()), -1);

    TruncatedSeries t1(u.vars(), u.level()); // sum (-1)^{j+1} u^j / j
    TruncatedSeries t2(u.vars(), u.level()); // sum (-1)^{j+1} u^j / j^2
    TruncatedSeries upow = TruncatedSeries::one(u.vars(), u.level());
    for (int j = 1; j <= u.level(); ++j) {
        upow = upow * u;
        if (upow.is_zero())
            break;
        Rational sign = (j % 2 == 1) ? 1 : -1;
        t1 += (sign / j) * upow;
        t2 += (sign / (Rational(j) * j)) * upow;
    }

    LogSeries out(u.vars(), u.level());
    out.plain = t2 - Rational(1, 2) * (log1p_series(h) * t1);
    for (int i = 0; i < u.vars(); ++i)
        out.log_coeff[size_t(i)] = -Rational(leading.c[i], 2) * t1;
    return out;
}

} // namespace csd
