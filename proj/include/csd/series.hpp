#pragma once

#include "csd/lattice.hpp"
#include "csd/rational.hpp"

#include <cmath>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

namespace csd {

/// Multivariate formal power series over exact rationals, truncated at a fixed
/// total degree. Every operation drops generated terms of degree > level
/// immediately, so values are representatives of the quotient by F^{>level}.
class TruncatedSeries {
public:
    using TermMap = std::map<LatticeVec, Rational>;

    TruncatedSeries(int vars, int level) : vars_(vars), level_(level)
    {
        if (vars < 1 || level < 0)
            throw std::invalid_argument("TruncatedSeries: bad vars/level");
    }

    static TruncatedSeries constant(int vars, int level, const Rational& q)
    {
        TruncatedSeries s(vars, level);
        s.add_term(LatticeVec::zero(vars), q);
        return s;
    }

    static TruncatedSeries one(int vars, int level) { return constant(vars, level, 1); }

    static TruncatedSeries monomial(int vars, int level, const LatticeVec& e,
                                    const Rational& coeff = 1)
    {
        TruncatedSeries s(vars, level);
        s.add_term(e, coeff);
        return s;
    }

    int vars() const { return vars_; }
    int level() const { return level_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Rational coeff(const LatticeVec& e) const
    {
        auto it = terms_.find(e);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    Rational constant_term() const { return coeff(LatticeVec::zero(vars_)); }

    /// Accumulate a term; silently drops exponents beyond the level and erases
    /// coefficients that cancel to zero.
    void add_term(const LatticeVec& e, const Rational& q)
    {
        if (e.rank() != vars_)
            throw std::invalid_argument("term exponent rank mismatch");
        if (!e.is_nonneg())
            throw std::invalid_argument("negative exponent in series term");
        if (q == 0 || e.degree() > level_)
            return;
        auto [it, inserted] = terms_.emplace(e, q);
        if (!inserted) {
            it->second += q;
            if (it->second == 0)
                terms_.erase(it);
        }
    }

    TruncatedSeries truncated_to(int new_level) const
    {
        if (new_level > level_)
            throw std::invalid_argument("cannot raise truncation level");
        TruncatedSeries s(vars_, new_level);
        for (const auto& [e, q] : terms_)
            s.add_term(e, q);
        return s;
    }

    /// Exact division by a monomial; every term must be divisible. The result
    /// keeps the same level, so its terms above level - deg(e) are only
    /// meaningful after multiplying back by something of degree >= deg(e).
    TruncatedSeries divided_by_monomial(const LatticeVec& e) const
    {
        if (e.rank() != vars_)
            throw std::invalid_argument("monomial rank mismatch");
        TruncatedSeries s(vars_, level_);
        for (const auto& [m, q] : terms_) {
            LatticeVec shifted = m;
            for (int i = 0; i < vars_; ++i) {
                shifted.c[i] -= e.c[i];
                if (shifted.c[i] < 0)
                    throw std::domain_error("series not divisible by monomial");
            }
            s.add_term(shifted, q);
        }
        return s;
    }

    std::int64_t min_degree() const
    {
        return terms_.empty() ? level_ + 1 : terms_.begin()->first.degree();
    }

    double evaluate(std::span<const double> point) const
    {
        if (int(point.size()) != vars_)
            throw std::invalid_argument("evaluation point size mismatch");
        double acc = 0;
        for (const auto& [e, q] : terms_) {
            double mono = to_double(q);
            for (int i = 0; i < vars_; ++i)
                mono *= std::pow(point[i], double(e.c[i]));
            acc += mono;
        }
        return acc;
    }

    TruncatedSeries& operator+=(const TruncatedSeries& o)
    {
        check_compatible(o);
        for (const auto& [e, q] : o.terms_)
            add_term(e, q);
        return *this;
    }

    TruncatedSeries& operator-=(const TruncatedSeries& o)
    {
        check_compatible(o);
        for (const auto& [e, q] : o.terms_)
            add_term(e, -q);
        return *this;
    }

    friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b)
    {
        a += b;
        return a;
    }

    friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b)
    {
        a -= b;
        return a;
    }

    friend TruncatedSeries operator-(const TruncatedSeries& a)
    {
        TruncatedSeries s(a.vars_, a.level_);
        for (const auto& [e, q] : a.terms_)
            s.terms_.emplace(e, -q);
        return s;
    }

    friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b)
    {
        a.check_compatible(b);
        TruncatedSeries s(a.vars_, a.level_);
        for (const auto& [ea, qa] : a.terms_) {
            std::int64_t da = ea.degree();
            for (const auto& [eb, qb] : b.terms_) {
                if (da + eb.degree() > a.level_)
                    break; // graded order: later terms only get bigger
                s.add_term(ea + eb, qa * qb);
            }
        }
        return s;
    }

    friend TruncatedSeries operator*(const Rational& q, const TruncatedSeries& a)
    {
        TruncatedSeries s(a.vars_, a.level_);
        if (q == 0)
            return s;
        for (const auto& [e, c] : a.terms_)
            s.terms_.emplace(e, q * c);
        return s;
    }

    friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b)
    {
        a.check_compatible(b);
        return a.terms_ == b.terms_;
    }

    friend bool operator!=(const TruncatedSeries& a, const TruncatedSeries& b)
    {
        return !(a == b);
    }

private:
    void check_compatible(const TruncatedSeries& o) const
    {
        if (vars_ != o.vars_)
            throw std::invalid_argument("series variable count mismatch");
        if (level_ != o.level_)
            throw std::invalid_argument("series level mismatch");
    }

    int vars_;
    int level_;
    TermMap terms_;
};

/// Integer power by repeated squaring.
inline TruncatedSeries pow_int(const TruncatedSeries& s, std::int64_t k)
{
    if (k < 0)
        throw std::invalid_argument("pow_int: negative exponent");
    TruncatedSeries acc = TruncatedSeries::one(s.vars(), s.level());
    TruncatedSeries base = s;
    while (k > 0) {
        if (k & 1)
            acc = acc * base;
        base = base * base;
        k >>= 1;
    }
    return acc;
}

/// (1+v)^c for rational c via the binomial series; u = 1+v must have constant
/// term exactly 1.
inline TruncatedSeries pow_unit(const TruncatedSeries& u, const Rational& c)
{
    if (u.constant_term() != 1)
        throw std::domain_error("pow_unit: constant term is not 1");
    TruncatedSeries v = u;
    v.add_term(LatticeVec::zero(u.vars()), -1);
    TruncatedSeries acc = TruncatedSeries::one(u.vars(), u.level());
    TruncatedSeries vpow = acc;
    for (unsigned k = 1; k <= unsigned(u.level()); ++k) {
        vpow = vpow * v;
        if (vpow.is_zero())
            break;
        acc += binomial(c, k) * vpow;
    }
    return acc;
}

/// log(1+v) for v without constant term.
inline TruncatedSeries log1p_series(const TruncatedSeries& v)
{
    if (v.constant_term() != 0)
        throw std::domain_error("log1p_series: nonzero constant term");
    TruncatedSeries acc(v.vars(), v.level());
    TruncatedSeries vpow = TruncatedSeries::one(v.vars(), v.level());
    for (int j = 1; j <= v.level(); ++j) {
        vpow = vpow * v;
        if (vpow.is_zero())
            break;
        acc += Rational(j % 2 == 1 ? 1 : -1, j) * vpow;
    }
    return acc;
}

/// Substitution y_i -> y_i * mult_i; every multiplier must have constant term 1.
/// A ring endomorphism fixing constants.
inline TruncatedSeries substitute(const TruncatedSeries& s,
                                  std::span<const TruncatedSeries> mult)
{
    if (int(mult.size()) != s.vars())
        throw std::invalid_argument("substitute: wrong number of multipliers");
    for (const auto& m : mult)
        if (m.constant_term() != 1)
            throw std::domain_error("substitute: multiplier constant term is not 1");

    // Cached powers of each multiplier, grown on demand.
    std::vector<std::vector<TruncatedSeries>> powers(mult.size());
    auto power = [&](int i, std::int64_t k) -> const TruncatedSeries& {
        auto& cache = powers[i];
        if (cache.empty())
            cache.push_back(TruncatedSeries::one(s.vars(), s.level()));
        while (std::int64_t(cache.size()) <= k)
            cache.push_back(cache.back() * mult[i]);
        return cache[size_t(k)];
    };

    TruncatedSeries out(s.vars(), s.level());
    for (const auto& [e, q] : s.terms()) {
        TruncatedSeries term = TruncatedSeries::monomial(s.vars(), s.level(), e, q);
        for (int i = 0; i < s.vars(); ++i)
            if (e.c[i] != 0)
                term = term * power(i, e.c[i]);
        out += term;
    }
    return out;
}

/// A Puiseux-with-log value: plain + sum_i log(y_i) * log_coeff[i].
/// Equality modulo F^{>level}_log means all components agree.
struct LogSeries {
    TruncatedSeries plain;
    std::vector<TruncatedSeries> log_coeff;

    explicit LogSeries(int vars, int level)
        : plain(vars, level), log_coeff(size_t(vars), TruncatedSeries(vars, level))
    {
    }

    bool is_zero() const
    {
        if (!plain.is_zero())
            return false;
        for (const auto& g : log_coeff)
            if (!g.is_zero())
                return false;
        return true;
    }

    LogSeries& operator+=(const LogSeries& o)
    {
        plain += o.plain;
        for (size_t i = 0; i < log_coeff.size(); ++i)
            log_coeff[i] += o.log_coeff[i];
        return *this;
    }

    friend LogSeries operator*(const Rational& q, LogSeries s)
    {
        s.plain = q * s.plain;
        for (auto& g : s.log_coeff)
            g = q * g;
        return s;
    }

    friend bool operator==(const LogSeries& a, const LogSeries& b)
    {
        return a.plain == b.plain && a.log_coeff == b.log_coeff;
    }

    double evaluate(std::span<const double> point) const
    {
        double acc = plain.evaluate(point);
        for (size_t i = 0; i < log_coeff.size(); ++i)
            acc += std::log(point[i]) * log_coeff[i].evaluate(point);
        return acc;
    }
};

} // namespace csd
