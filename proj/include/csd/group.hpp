#pragma once

#include "csd/lattice.hpp"
#include "csd/rational.hpp"
#include "csd/series.hpp"

#include <map>
#include <span>
#include <stdexcept>
#include <vector>

namespace csd {

/// The symbol Psi[m]^c: dilogarithm element for a positive lattice vector m,
/// raised to a rational exponent.
struct DilogFactor {
    LatticeVec m;
    Rational c;

    DilogFactor(LatticeVec m_, Rational c_) : m(std::move(m_)), c(std::move(c_))
    {
        if (!m.is_positive())
            throw std::invalid_argument("DilogFactor: m must be positive");
    }
};

struct SignedFactor {
    DilogFactor factor;
    int sign; // +1 or -1, from path crossings
};

/// Path-ordered product, written left to right; the rightmost factor acts first
/// (leftmost = last crossed).
using ProductExpr = std::vector<SignedFactor>;

/// A truncated automorphism in the principal y-representation: the j-th
/// principal generator maps to itself times mult[j](y_1..y_r), where the first
/// r generators are the y_i themselves and the last r span the dual directions
/// that make the representation faithful. Each multiplier has constant term 1.
class GroupAction {
public:
    GroupAction(int rank, int level, std::vector<TruncatedSeries> mult)
        : rank_(rank), level_(level), mult_(std::move(mult))
    {
        if (int(mult_.size()) != 2 * rank_)
            throw std::invalid_argument("GroupAction: expected 2r multipliers");
        for (const auto& s : mult_)
            if (s.constant_term() != 1)
                throw std::invalid_argument("GroupAction: multiplier constant term is not 1");
    }

    static GroupAction identity(int rank, int level)
    {
        std::vector<TruncatedSeries> mult(size_t(2 * rank), TruncatedSeries::one(rank, level));
        return GroupAction(rank, level, std::move(mult));
    }

    int rank() const { return rank_; }
    int level() const { return level_; }
    const TruncatedSeries& multiplier(int j) const { return mult_[size_t(j)]; }
    const std::vector<TruncatedSeries>& multipliers() const { return mult_; }

    bool is_identity() const
    {
        auto one = TruncatedSeries::one(rank_, level_);
        for (const auto& s : mult_)
            if (s != one)
                return false;
        return true;
    }

    /// Apply the plain y-representation part to a series in y_1..y_r.
    TruncatedSeries transform(const TruncatedSeries& s) const
    {
        return substitute(s, std::span(mult_.data(), size_t(rank_)));
    }

    GroupAction truncated_to(int new_level) const
    {
        std::vector<TruncatedSeries> mult;
        mult.reserve(mult_.size());
        for (const auto& s : mult_)
            mult.push_back(s.truncated_to(new_level));
        return GroupAction(rank_, new_level, std::move(mult));
    }

    friend bool operator==(const GroupAction& a, const GroupAction& b)
    {
        if (a.rank_ != b.rank_)
            throw std::invalid_argument("GroupAction rank mismatch");
        if (a.level_ != b.level_)
            throw std::invalid_argument("GroupAction level mismatch");
        return a.mult_ == b.mult_;
    }

    friend bool operator!=(const GroupAction& a, const GroupAction& b) { return !(a == b); }

private:
    int rank_;
    int level_;
    std::vector<TruncatedSeries> mult_;
};

/// Action of Psi[m]^c: y^{n} picks up (1+y^m)^{c {m,n}}, and the i-th dual
/// generator picks up (1+y^m)^{-c m_i / delta_i}. Factors of degree beyond the
/// level are the identity modulo the truncation; *out_of_level reports that.
inline GroupAction dilog_action(const FixedData& fd, int level, const DilogFactor& phi,
                                bool* out_of_level = nullptr)
{
    int r = fd.rank();
    if (phi.m.rank() != r)
        throw std::invalid_argument("dilog_action: factor rank mismatch");
    if (out_of_level)
        *out_of_level = false;
    if (phi.m.degree() > level) {
        if (out_of_level)
            *out_of_level = true;
        return GroupAction::identity(r, level);
    }
    TruncatedSeries base = TruncatedSeries::one(r, level);
    base.add_term(phi.m, 1);
    std::vector<TruncatedSeries> mult;
    mult.reserve(size_t(2 * r));
    for (int j = 0; j < r; ++j)
        mult.push_back(pow_unit(base, phi.c * fd.skew(phi.m, LatticeVec::unit(r, j))));
    for (int i = 0; i < r; ++i)
        mult.push_back(pow_unit(base, -phi.c * Rational(phi.m.c[i], fd.delta(i))));
    return GroupAction(r, level, std::move(mult));
}

/// Group product g.h: h acts first on the argument.
inline GroupAction compose(const GroupAction& g, const GroupAction& h)
{
    if (g.rank() != h.rank())
        throw std::invalid_argument("compose: rank mismatch");
    if (g.level() != h.level())
        throw std::invalid_argument("compose: level mismatch");
    int r = g.rank();
    std::span<const TruncatedSeries> gy(g.multipliers().data(), size_t(r));
    std::vector<TruncatedSeries> mult;
    mult.reserve(size_t(2 * r));
    for (int j = 0; j < 2 * r; ++j)
        mult.push_back(g.multiplier(j) * substitute(h.multiplier(j), gy));
    return GroupAction(r, g.level(), std::move(mult));
}

inline GroupAction inverse(const GroupAction& g)
{
    int r = g.rank();
    int level = g.level();
    // Inverse substitution multipliers U: fixed point U_i = (S_i after y->yU)^{-1},
    // gaining one correct degree per pass.
    std::vector<TruncatedSeries> u(size_t(r), TruncatedSeries::one(r, level));
    for (int pass = 0; pass < level; ++pass) {
        std::vector<TruncatedSeries> next;
        next.reserve(size_t(r));
        for (int i = 0; i < r; ++i)
            next.push_back(pow_unit(substitute(g.multiplier(i), u), -1));
        u = std::move(next);
    }
    std::vector<TruncatedSeries> mult;
    mult.reserve(size_t(2 * r));
    for (int j = 0; j < 2 * r; ++j)
        mult.push_back(substitute(pow_unit(g.multiplier(j), -1), u));
    return GroupAction(r, level, std::move(mult));
}

/// Truncated path-ordered product. The rightmost factor acts first; signs
/// negate exponents; factors of degree beyond the level are skipped, counted
/// in *skipped when given.
inline GroupAction evaluate_product(const FixedData& fd, int level, const ProductExpr& expr,
                                    std::size_t* skipped = nullptr)
{
    if (skipped)
        *skipped = 0;
    GroupAction acc = GroupAction::identity(fd.rank(), level);
    for (auto it = expr.rbegin(); it != expr.rend(); ++it) {
        if (it->sign != 1 && it->sign != -1)
            throw std::invalid_argument("evaluate_product: sign must be +1 or -1");
        bool dropped = false;
        DilogFactor f(it->factor.m, it->sign > 0 ? it->factor.c : -it->factor.c);
        GroupAction a = dilog_action(fd, level, f, &dropped);
        if (dropped) {
            if (skipped)
                ++*skipped;
            continue;
        }
        acc = compose(a, acc);
    }
    return acc;
}

/// For h = exp(sum of degree-d generators with coefficients c_n) modulo
/// G^{>d}, read the c_n off the dual-block multipliers: the y^n coefficient of
/// multiplier r+i is -c_n n_i / delta_i. Demands consistency across every
/// usable i and that nothing of lower degree is present.
inline std::map<LatticeVec, Rational> lie_coefficients(const FixedData& fd, const GroupAction& h,
                                                       int d)
{
    int r = fd.rank();
    if (h.level() < d)
        throw std::invalid_argument("lie_coefficients: action level below degree");
    std::map<LatticeVec, Rational> out;
    std::map<LatticeVec, bool> seen;
    for (int i = 0; i < r; ++i) {
        const auto& s = h.multiplier(r + i);
        for (const auto& [e, q] : s.terms()) {
            auto deg = e.degree();
            if (deg == 0)
                continue;
            if (deg < d)
                throw std::logic_error("lie_coefficients: action is not in G^{>d-1}");
            if (deg > d)
                continue;
            if (e.c[i] == 0)
                throw std::logic_error("lie_coefficients: inconsistent extraction");
            Rational c = -Rational(fd.delta(i)) * q / e.c[i];
            auto [it, inserted] = out.emplace(e, c);
            if (!inserted && it->second != c)
                throw std::logic_error("lie_coefficients: inconsistent extraction");
            seen[e] = true;
        }
    }
    // Cross-check: every extracted n must appear in each block where n_i != 0.
    for (const auto& [e, c] : out) {
        for (int i = 0; i < r; ++i) {
            if (e.c[i] == 0)
                continue;
            Rational q = h.multiplier(r + i).coeff(e);
            if (-Rational(fd.delta(i)) * q / e.c[i] != c)
                throw std::logic_error("lie_coefficients: inconsistent extraction");
        }
    }
    return out;
}

} // namespace csd
