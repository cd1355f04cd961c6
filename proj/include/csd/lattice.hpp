#pragma once

#include "csd/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace csd {

/// Integer vector in the seed basis (e_1..e_r). Doubles as a series exponent.
struct LatticeVec {
    std::vector<std::int64_t> c;

    LatticeVec() = default;
    explicit LatticeVec(std::vector<std::int64_t> coords) : c(std::move(coords)) {}
    LatticeVec(std::initializer_list<std::int64_t> coords) : c(coords) {}

    static LatticeVec zero(int rank) { return LatticeVec(std::vector<std::int64_t>(rank, 0)); }

    static LatticeVec unit(int rank, int i)
    {
        LatticeVec v = zero(rank);
        v.c[i] = 1;
        return v;
    }

    int rank() const { return int(c.size()); }

    std::int64_t degree() const { return std::accumulate(c.begin(), c.end(), std::int64_t(0)); }

    bool is_nonneg() const
    {
        return std::all_of(c.begin(), c.end(), [](std::int64_t x) { return x >= 0; });
    }

    /// All coordinates >= 0 and degree > 0.
    bool is_positive() const { return is_nonneg() && degree() > 0; }

    /// gcd of the coordinates (0 for the zero vector).
    std::int64_t content() const
    {
        std::int64_t g = 0;
        for (auto x : c)
            g = std::gcd(g, x);
        return g;
    }

    bool is_primitive() const { return content() == 1; }

    LatticeVec primitive_part() const
    {
        std::int64_t g = content();
        if (g == 0)
            throw std::domain_error("primitive_part of zero vector");
        LatticeVec v = *this;
        for (auto& x : v.c)
            x /= g;
        return v;
    }

    LatticeVec scaled(std::int64_t t) const
    {
        LatticeVec v = *this;
        for (auto& x : v.c)
            x *= t;
        return v;
    }

    friend LatticeVec operator+(const LatticeVec& a, const LatticeVec& b)
    {
        if (a.rank() != b.rank())
            throw std::invalid_argument("LatticeVec rank mismatch");
        LatticeVec v = a;
        for (int i = 0; i < b.rank(); ++i)
            v.c[i] += b.c[i];
        return v;
    }

    friend bool operator==(const LatticeVec& a, const LatticeVec& b) { return a.c == b.c; }
    friend bool operator!=(const LatticeVec& a, const LatticeVec& b) { return a.c != b.c; }

    /// Graded lexicographic: by total degree, then lex. Deterministic map iteration.
    friend bool operator<(const LatticeVec& a, const LatticeVec& b)
    {
        auto da = a.degree(), db = b.degree();
        if (da != db)
            return da < db;
        return a.c < b.c;
    }
};

/// Integer vector in the dual basis (f_1..f_r).
struct MVector {
    std::vector<std::int64_t> c;

    MVector() = default;
    explicit MVector(std::vector<std::int64_t> coords) : c(std::move(coords)) {}
    MVector(std::initializer_list<std::int64_t> coords) : c(coords) {}

    friend bool operator==(const MVector& a, const MVector& b) { return a.c == b.c; }
};

/// Exchange matrix B with skew-symmetrizers delta. Determines the skew form
/// {e_i, e_j} = b_ij / delta_i and the sublattice where coordinate i is
/// divisible by delta_i.
class FixedData {
public:
    FixedData(std::vector<std::vector<std::int64_t>> b, std::vector<std::int64_t> delta)
        : b_(std::move(b)), delta_(std::move(delta))
    {
        r_ = int(delta_.size());
        if (r_ == 0)
            throw std::invalid_argument("FixedData: empty delta");
        if (int(b_.size()) != r_)
            throw std::invalid_argument("FixedData: B is not r x r");
        for (const auto& row : b_)
            if (int(row.size()) != r_)
                throw std::invalid_argument("FixedData: B is not r x r");
        for (auto d : delta_)
            if (d < 1)
                throw std::invalid_argument("FixedData: delta entries must be >= 1");
        // Delta^{-1} B skew-symmetric: b_ij/delta_i = -b_ji/delta_j, cross-multiplied.
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < r_; ++j)
                if (b_[i][j] * delta_[j] != -b_[j][i] * delta_[i])
                    throw std::invalid_argument("FixedData: B is not skew-symmetrizable by delta");
    }

    int rank() const { return r_; }
    std::int64_t delta(int i) const { return delta_[i]; }
    const std::vector<std::int64_t>& deltas() const { return delta_; }
    std::int64_t b(int i, int j) const { return b_[i][j]; }
    const std::vector<std::vector<std::int64_t>>& b_matrix() const { return b_; }

    /// {e_i, e_j} = b_ij / delta_i.
    Rational skew_units(int i, int j) const { return Rational(b_[i][j], delta_[i]); }

    /// Skew form {n, n2} = sum n_i n2_j b_ij / delta_i. Exact, bilinear, antisymmetric.
    Rational skew(const LatticeVec& n, const LatticeVec& n2) const
    {
        check_rank(n);
        check_rank(n2);
        Rational acc = 0;
        for (int i = 0; i < r_; ++i) {
            if (n.c[i] == 0)
                continue;
            std::int64_t row = 0;
            for (int j = 0; j < r_; ++j)
                row += b_[i][j] * n2.c[j];
            acc += Rational(Integer(n.c[i]) * row, delta_[i]);
        }
        return acc;
    }

    /// Normalization factor: the smallest positive rational q with delta_i | q*n_i
    /// for all i. Computed via the primitive decomposition n = t*n0.
    Rational normalization_factor(const LatticeVec& n) const
    {
        check_rank(n);
        if (!n.is_positive())
            throw std::domain_error("normalization_factor: vector is not positive");
        std::int64_t t = n.content();
        LatticeVec n0 = n.primitive_part();
        std::int64_t lcm = 1;
        for (int i = 0; i < r_; ++i) {
            if (n0.c[i] == 0)
                continue;
            std::int64_t d = delta_[i] / std::gcd(delta_[i], n0.c[i]);
            lcm = std::lcm(lcm, d);
        }
        return Rational(lcm, t);
    }

    /// p*(n) = B n in the dual basis coordinates.
    MVector p_star(const LatticeVec& n) const
    {
        check_rank(n);
        std::vector<std::int64_t> out(r_, 0);
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < r_; ++j)
                out[i] += b_[i][j] * n.c[j];
        return MVector(std::move(out));
    }

    friend bool operator==(const FixedData& a, const FixedData& b)
    {
        return a.b_ == b.b_ && a.delta_ == b.delta_;
    }

private:
    void check_rank(const LatticeVec& n) const
    {
        if (n.rank() != r_)
            throw std::invalid_argument("vector rank does not match fixed data");
    }

    std::vector<std::vector<std::int64_t>> b_;
    std::vector<std::int64_t> delta_;
    int r_;
};

} // namespace csd
