#pragma once

#include "csd/dilog.hpp"
#include "csd/group.hpp"
#include "csd/scatter.hpp"

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace csd {

/// One summand of the dilogarithm identity attached to the loop.
struct DiTerm {
    Rational coeff;           // sign * s * delta(t n)
    LatticeVec cvec;          // t n, the c-vector of the crossing
    TruncatedSeries argument; // the y-variable at the crossing, y^{tn} (1 + h)
    int wall = -1;
    int factor = -1;
    int crossing = -1;
};

namespace detail {

inline DilogFactor crossing_element(const Rank2CSD& csd, const Crossing& x)
{
    const Wall& w = csd.walls[size_t(x.wall)];
    const WallFactor& f = w.factors[size_t(x.factor)];
    return DilogFactor(w.normal.scaled(f.t), f.exponent);
}

} // namespace detail

/// Inverse prefix product of the loop up to (not including) crossing a,
/// written first-crossed leftmost.
inline ProductExpr crossing_prefix(const Rank2CSD& csd, const std::vector<Crossing>& loop, int a)
{
    ProductExpr prefix;
    prefix.reserve(size_t(a));
    for (int b = 0; b < a; ++b)
        prefix.push_back({detail::crossing_element(csd, loop[size_t(b)]), -loop[size_t(b)].sign});
    return prefix;
}

/// y-variable at a loop crossing: the inverse prefix product applied to
/// y^{tn}. Path independence across the two loop directions follows from
/// consistency.
inline TruncatedSeries y_variable(const Rank2CSD& csd, int crossing)
{
    auto loop = loop_crossings(csd);
    if (crossing < 0 || crossing >= int(loop.size()))
        throw std::out_of_range("y_variable: invalid crossing index");
    DilogFactor el = detail::crossing_element(csd, loop[size_t(crossing)]);
    GroupAction act =
        evaluate_product(csd.fd, csd.level, crossing_prefix(csd, loop, crossing));
    return act.transform(TruncatedSeries::monomial(csd.fd.rank(), csd.level, el.m));
}

/// All dilogarithm-identity terms of the loop, one per wall-element crossing.
inline std::vector<DiTerm> assemble_di(const Rank2CSD& csd)
{
    auto loop = loop_crossings(csd);
    std::vector<DiTerm> terms;
    terms.reserve(loop.size());
    GroupAction acc = GroupAction::identity(csd.fd.rank(), csd.level);
    for (int a = 0; a < int(loop.size()); ++a) {
        DilogFactor el = detail::crossing_element(csd, loop[size_t(a)]);
        DiTerm term{Rational(loop[size_t(a)].sign) * el.c, el.m,
                    acc.transform(TruncatedSeries::monomial(csd.fd.rank(), csd.level, el.m)),
                    loop[size_t(a)].wall, loop[size_t(a)].factor, a};
        terms.push_back(std::move(term));
        acc = compose(acc, dilog_action(csd.fd, csd.level,
                                        DilogFactor(el.m, -Rational(loop[size_t(a)].sign) * el.c)));
    }
    return terms;
}

/// Sum of coeff * ltilde(argument) as a Puiseux-with-log series; the identity
/// holds iff every component vanishes mod F^{>level}.
inline LogSeries di_symbolic_residual(const std::vector<DiTerm>& terms, int vars, int level)
{
    LogSeries residual(vars, level);
    for (const auto& t : terms)
        residual += t.coeff * ltilde_symbolic(t.argument, t.cvec);
    return residual;
}

/// Numeric residual of the loop identity at a point, with exact mutation
/// threading: each term evaluates ltilde at the fully composed argument, so
/// finite-type identities hold to machine precision.
inline double di_numeric_residual(const Rank2CSD& csd, std::span<const double> point)
{
    if (point.size() != 2)
        throw std::invalid_argument("di_numeric_residual: expected a rank-2 point");
    auto loop = loop_crossings(csd);
    std::vector<double> y(point.begin(), point.end());
    double residual = 0;
    for (const auto& x : loop) {
        DilogFactor el = detail::crossing_element(csd, x);
        double val = 1;
        for (int i = 0; i < 2; ++i)
            val *= std::pow(y[size_t(i)], double(el.m.c[i]));
        residual += x.sign * to_double(el.c) * ltilde(val);
        // Thread the point through the inverse factor for the next prefix.
        double exp_scale = -x.sign * to_double(el.c);
        for (int i = 0; i < 2; ++i) {
            Rational w = csd.fd.skew(el.m, LatticeVec::unit(2, i));
            if (w != 0)
                y[size_t(i)] *= std::pow(1.0 + val, exp_scale * to_double(w));
        }
    }
    return residual;
}

/// Least-squares slope of log|residual(t * base)| against log t. For a level-l
/// truncation the tail starts at degree l+1, so the slope sits near l+1 up to
/// the log factor.
inline double di_scaling_slope(const Rank2CSD& csd, std::span<const double> base,
                               std::span<const double> t_grid)
{
    if (t_grid.size() < 2)
        throw std::invalid_argument("di_scaling_slope: need at least two scales");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double n = 0;
    for (double t : t_grid) {
        std::vector<double> point;
        for (double b : base)
            point.push_back(t * b);
        double r = std::abs(di_numeric_residual(csd, point));
        if (r < 1e-300)
            continue;
        double lx = std::log(t), ly = std::log(r);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        n += 1;
    }
    if (n < 2)
        throw std::runtime_error("di_scaling_slope: residual vanished on the grid");
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// One step of the traced reduction: the term a dilogarithm factor contributes
/// to the identity of a plain product, with its inverse prefix spelled out.
struct TraceTerm {
    Rational coeff;
    ProductExpr prefix; // first-crossed leftmost, exponents negated
    LatticeVec m;
    TruncatedSeries argument;
};

inline std::vector<TraceTerm> product_di_terms(const FixedData& fd, int level,
                                               const std::vector<DilogFactor>& fs)
{
    int k = int(fs.size());
    std::vector<TraceTerm> terms(size_t(k), TraceTerm{0, {}, {}, TruncatedSeries(fd.rank(), level)});
    GroupAction acc = GroupAction::identity(fd.rank(), level); // prefix of the next crossing
    // Crossing order is right to left.
    for (int i = k - 1; i >= 0; --i) {
        const DilogFactor& f = fs[size_t(i)];
        ProductExpr prefix;
        for (int j = k - 1; j > i; --j)
            prefix.push_back({fs[size_t(j)], -1});
        terms[size_t(i)] = TraceTerm{
            f.c, std::move(prefix), f.m,
            acc.transform(TruncatedSeries::monomial(fd.rank(), level, f.m))};
        acc = compose(acc, dilog_action(fd, level, DilogFactor(f.m, -f.c)));
    }
    return terms;
}

inline LogSeries trace_terms_residual(const std::vector<TraceTerm>& terms, int vars, int level)
{
    LogSeries residual(vars, level);
    for (const auto& t : terms) {
        if (t.m.degree() > level)
            continue; // out-of-level argument vanishes mod F^{>level}_log
        residual += t.coeff * ltilde_symbolic(t.argument, t.m);
    }
    return residual;
}

/// Replay a pentagon-sorting trace on the identity terms of the start product:
/// the term list after every move, starting with the input's own. The residual
/// is checked to be invariant across each move.
inline std::vector<std::vector<TraceTerm>> replay_trace_on_di(const FixedData& fd, int level,
                                                              const ProductExpr& start,
                                                              const MoveTrace& trace)
{
    std::vector<DilogFactor> fs = product_factors(start);
    std::vector<std::vector<TraceTerm>> stages;
    stages.push_back(product_di_terms(fd, level, fs));
    LogSeries residual = trace_terms_residual(stages.back(), fd.rank(), level);
    for (const auto& mv : trace) {
        apply_move(fd, level, fs, mv);
        stages.push_back(product_di_terms(fd, level, fs));
        LogSeries next = trace_terms_residual(stages.back(), fd.rank(), level);
        if (!(next == residual))
            throw std::logic_error("replay_trace_on_di: residual changed across a move");
        residual = std::move(next);
    }
    return stages;
}

} // namespace csd
