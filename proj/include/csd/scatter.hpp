#pragma once

#include "csd/group.hpp"
#include "csd/lattice.hpp"
#include "csd/series.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace csd {

/// Raised when a constructed wall element fails the positive-realization form
/// Psi[t n]^{s delta(t n)} with s a positive integer.
struct positive_form_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when pure pentagon sorting cannot make progress.
struct pentagon_inapplicable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One element Psi[t*normal]^exponent living on a wall with primitive normal.
struct WallFactor {
    std::int64_t t;
    Rational exponent;
};

struct Wall {
    LatticeVec normal; // primitive, positive
    bool incoming;     // support is the full line normal^perp
    std::optional<MVector> ray; // outgoing ray direction, primitive -p*(normal)
    std::vector<WallFactor> factors; // sorted by t ascending; same ray commutes
};

/// Rank-2 cluster scattering diagram truncated at a level. Walls are kept in
/// the order of the ordered product read left to right.
struct Rank2CSD {
    FixedData fd;
    int level;
    std::vector<Wall> walls;
};

/// One wall-element crossing of the canonical loop around the origin.
struct Crossing {
    int wall;
    int factor;
    int sign;
};

namespace detail {

/// true when a's ray precedes b's in the left-to-right order of the ordered
/// product: adjacent ordered pairs satisfy {left, right} <= 0.
inline bool ray_before(const FixedData& fd, const LatticeVec& a, const LatticeVec& b)
{
    return fd.skew(a, b) < 0;
}

inline DilogFactor wall_element(const LatticeVec& normal, const WallFactor& f)
{
    return DilogFactor(normal.scaled(f.t), f.exponent);
}

} // namespace detail

/// The anti-ordered product of the two incoming wall elements; the seed of the
/// degree-by-degree construction.
inline ProductExpr incoming_product(const FixedData& fd)
{
    if (fd.rank() != 2)
        throw std::invalid_argument("incoming_product: rank-2 only");
    LatticeVec e1 = LatticeVec::unit(2, 0), e2 = LatticeVec::unit(2, 1);
    ProductExpr expr;
    if (fd.skew(e2, e1) >= 0) {
        expr.push_back({DilogFactor(e2, fd.delta(1)), +1});
        expr.push_back({DilogFactor(e1, fd.delta(0)), +1});
    } else {
        expr.push_back({DilogFactor(e1, fd.delta(0)), +1});
        expr.push_back({DilogFactor(e2, fd.delta(1)), +1});
    }
    return expr;
}

/// Slope-sorted product equal to the input modulo G^{>level}, found degree by
/// degree: at each degree the defect of the current sorted product against the
/// target is a pure Lie element whose coefficients become new factors at their
/// ray positions. Same-ray factors merge by adding exponents.
inline ProductExpr order_product(const FixedData& fd, int level, const ProductExpr& input)
{
    if (fd.rank() != 2)
        throw std::invalid_argument("order_product: rank-2 only");
    for (const auto& sf : input) {
        if (sf.sign != 1)
            throw std::invalid_argument("order_product: input signs must all be +1");
        if (!sf.factor.m.is_positive())
            throw std::invalid_argument("order_product: input factors must be positive");
    }

    GroupAction target = evaluate_product(fd, level, input);

    // rays: primitive normal -> (t -> exponent)
    std::map<LatticeVec, std::map<std::int64_t, Rational>> rays;
    auto to_expr = [&]() {
        std::vector<LatticeVec> order;
        order.reserve(rays.size());
        for (const auto& [n0, _] : rays)
            order.push_back(n0);
        std::sort(order.begin(), order.end(), [&](const LatticeVec& a, const LatticeVec& b) {
            return detail::ray_before(fd, a, b);
        });
        ProductExpr expr;
        for (const auto& n0 : order)
            for (const auto& [t, c] : rays.at(n0))
                expr.push_back({DilogFactor(n0.scaled(t), c), +1});
        return expr;
    };

    for (int d = 1; d <= level; ++d) {
        GroupAction cur = evaluate_product(fd, d, to_expr());
        GroupAction defect = compose(inverse(cur), target.truncated_to(d));
        for (const auto& [n, c] : lie_coefficients(fd, defect, d)) {
            LatticeVec n0 = n.primitive_part();
            auto& slot = rays[n0][n.content()];
            slot += c;
            if (slot == 0)
                rays[n0].erase(n.content());
        }
        for (auto it = rays.begin(); it != rays.end();) {
            it = it->second.empty() ? rays.erase(it) : std::next(it);
        }
    }
    return to_expr();
}

/// Rank-2 CSD at the given level: order the incoming anti-ordered product and
/// package the factors into walls. Every factor must land in the positive
/// realization form (exponent = s * delta(t n), s a positive integer).
inline Rank2CSD build_csd(const FixedData& fd, int level)
{
    if (fd.rank() != 2)
        throw std::invalid_argument("build_csd: rank-2 only");
    if (level < 1)
        throw std::invalid_argument("build_csd: level must be >= 1");

    ProductExpr ordered = order_product(fd, level, incoming_product(fd));

    Rank2CSD csd{fd, level, {}};
    for (const auto& sf : ordered) {
        LatticeVec n0 = sf.factor.m.primitive_part();
        std::int64_t t = sf.factor.m.content();
        Rational s = sf.factor.c / fd.normalization_factor(sf.factor.m);
        if (!is_positive_integer(s))
            throw positive_form_error("wall element violates the positive realization form");
        if (csd.walls.empty() || csd.walls.back().normal != n0) {
            bool incoming = (n0 == LatticeVec::unit(2, 0) || n0 == LatticeVec::unit(2, 1));
            std::optional<MVector> ray;
            if (!incoming) {
                MVector p = fd.p_star(n0);
                std::int64_t g = std::gcd(p.c[0], p.c[1]);
                ray = MVector({-p.c[0] / g, -p.c[1] / g});
            }
            csd.walls.push_back({n0, incoming, ray, {}});
        }
        csd.walls.back().factors.push_back({t, sf.factor.c});
    }
    return csd;
}

/// Wall-element crossings of the counterclockwise loop based inside the
/// positive chamber. The incoming lines are crossed twice (positive then
/// negative sign); the outgoing rays once, on the side fixed by the sign of
/// {e_2, e_1}.
inline std::vector<Crossing> loop_crossings(const Rank2CSD& csd)
{
    LatticeVec e1 = LatticeVec::unit(2, 0), e2 = LatticeVec::unit(2, 1);
    int w_e1 = -1, w_e2 = -1;
    std::vector<int> outgoing;
    for (int w = 0; w < int(csd.walls.size()); ++w) {
        if (csd.walls[w].normal == e1)
            w_e1 = w;
        else if (csd.walls[w].normal == e2)
            w_e2 = w;
        else
            outgoing.push_back(w);
    }
    // Outgoing walls in ascending slope of the normal, the crossing order of
    // the counterclockwise sweep through the scattering quadrant.
    std::sort(outgoing.begin(), outgoing.end(), [&](int a, int b) {
        const auto& na = csd.walls[a].normal;
        const auto& nb = csd.walls[b].normal;
        return Integer(na.c[1]) * nb.c[0] < Integer(nb.c[1]) * na.c[0];
    });

    std::vector<Crossing> loop;
    auto push_wall = [&](int w, int sign) {
        if (w < 0)
            return;
        for (int f = 0; f < int(csd.walls[w].factors.size()); ++f)
            loop.push_back({w, f, sign});
    };
    bool positive_case = csd.fd.skew(e2, e1) >= 0;
    push_wall(w_e1, +1);
    if (!positive_case)
        for (int w : outgoing)
            push_wall(w, +1);
    push_wall(w_e2, +1);
    push_wall(w_e1, -1);
    if (positive_case)
        for (int w : outgoing)
            push_wall(w, -1);
    push_wall(w_e2, -1);
    return loop;
}

inline ProductExpr loop_product(const Rank2CSD& csd)
{
    auto loop = loop_crossings(csd);
    ProductExpr expr;
    expr.reserve(loop.size());
    // Last crossed leftmost.
    for (auto it = loop.rbegin(); it != loop.rend(); ++it) {
        const Wall& w = csd.walls[size_t(it->wall)];
        expr.push_back({detail::wall_element(w.normal, w.factors[size_t(it->factor)]), it->sign});
    }
    return expr;
}

/// Path-ordered product around the full loop equals the identity mod G^{>level}.
inline bool consistency_check(const Rank2CSD& csd)
{
    return evaluate_product(csd.fd, csd.level, loop_product(csd)).is_identity();
}

struct Move {
    enum class Kind { pentagon, commute, split, truncate };
    Kind kind;
    int pos;
    std::int64_t k = 0; // split count
};

using MoveTrace = std::vector<Move>;

struct SortResult {
    ProductExpr output;
    MoveTrace trace;
};

/// Apply one move to a factor list, in place. Throws if the move is illegal
/// for the list, so traces can only replay against the product they came from.
inline void apply_move(const FixedData& fd, int level, std::vector<DilogFactor>& fs,
                       const Move& mv)
{
    auto at = [&](int i) -> DilogFactor& {
        if (i < 0 || i >= int(fs.size()))
            throw std::invalid_argument("move position out of range");
        return fs[size_t(i)];
    };
    switch (mv.kind) {
    case Move::Kind::split: {
        DilogFactor f = at(mv.pos);
        if (mv.k < 2)
            throw std::invalid_argument("split: k must be >= 2");
        DilogFactor piece(f.m, f.c / mv.k);
        fs.erase(fs.begin() + mv.pos);
        fs.insert(fs.begin() + mv.pos, size_t(mv.k), piece);
        break;
    }
    case Move::Kind::commute: {
        DilogFactor& a = at(mv.pos);
        DilogFactor& b = at(mv.pos + 1);
        if (fd.skew(a.m, b.m) != 0)
            throw std::invalid_argument("commute: factors do not commute");
        std::swap(a, b);
        break;
    }
    case Move::Kind::truncate: {
        if (at(mv.pos).m.degree() <= level)
            throw std::invalid_argument("truncate: factor within level");
        fs.erase(fs.begin() + mv.pos);
        break;
    }
    case Move::Kind::pentagon: {
        DilogFactor n2 = at(mv.pos);     // left, crossed later
        DilogFactor n1 = at(mv.pos + 1); // right, crossed first
        Rational c = fd.skew(n2.m, n1.m);
        if (c == 0)
            throw std::invalid_argument("pentagon: factors commute");
        if (n1.c * c != 1 || n2.c * c != 1)
            throw std::invalid_argument("pentagon: exponents must both equal 1/{n2,n1}");
        DilogFactor mid(n1.m + n2.m, n1.c);
        fs[size_t(mv.pos)] = n1;
        fs[size_t(mv.pos) + 1] = n2;
        fs.insert(fs.begin() + mv.pos + 1, mid);
        break;
    }
    }
}

inline std::vector<DilogFactor> product_factors(const ProductExpr& expr)
{
    std::vector<DilogFactor> fs;
    fs.reserve(expr.size());
    for (const auto& sf : expr) {
        if (sf.sign != 1)
            throw std::invalid_argument("expected a product with all signs +1");
        fs.push_back(sf.factor);
    }
    return fs;
}

inline ProductExpr factors_to_expr(const std::vector<DilogFactor>& fs)
{
    ProductExpr expr;
    expr.reserve(fs.size());
    for (const auto& f : fs)
        expr.push_back({f, +1});
    return expr;
}

/// Sort a product of positive dilogarithm factors using only the pentagon and
/// commutation relations plus exponent splitting and out-of-level drops,
/// recording a replayable trace. Anti-ordered pairs are attacked by minimal
/// combined degree, leftmost first.
inline SortResult pentagon_sort_trace(const FixedData& fd, int level, const ProductExpr& input)
{
    std::vector<DilogFactor> fs = product_factors(input);
    MoveTrace trace;
    auto emit = [&](Move mv) {
        apply_move(fd, level, fs, mv);
        trace.push_back(mv);
    };

    for (int i = int(fs.size()) - 1; i >= 0; --i)
        if (fs[size_t(i)].m.degree() > level)
            emit({Move::Kind::truncate, i});

    constexpr std::size_t max_moves = 2'000'000;
    while (true) {
        if (trace.size() > max_moves)
            throw pentagon_inapplicable("pentagon sorting exceeded the move budget");
        // Most urgent strictly anti-ordered adjacent pair.
        int best = -1;
        std::int64_t best_deg = 0;
        for (int i = 0; i + 1 < int(fs.size()); ++i) {
            if (fd.skew(fs[size_t(i)].m, fs[size_t(i) + 1].m) <= 0)
                continue;
            std::int64_t deg = fs[size_t(i)].m.degree() + fs[size_t(i) + 1].m.degree();
            if (best < 0 || deg < best_deg) {
                best = i;
                best_deg = deg;
            }
        }
        if (best < 0)
            break;

        Rational c = fd.skew(fs[size_t(best)].m, fs[size_t(best) + 1].m);
        Rational k_left = fs[size_t(best)].c * c;
        Rational k_right = fs[size_t(best) + 1].c * c;
        if (!is_positive_integer(k_left) || !is_positive_integer(k_right))
            throw pentagon_inapplicable(
                "pentagon: exponent is not a positive integer multiple of 1/{n2,n1}");
        if (k_left != 1) {
            emit({Move::Kind::split, best, k_left.convert_to<std::int64_t>()});
            continue;
        }
        if (k_right != 1) {
            emit({Move::Kind::split, best + 1, k_right.convert_to<std::int64_t>()});
            continue;
        }
        std::int64_t mid_degree = fs[size_t(best)].m.degree() + fs[size_t(best) + 1].m.degree();
        emit({Move::Kind::pentagon, best});
        if (mid_degree > level)
            emit({Move::Kind::truncate, best + 1});
    }

    // The list is now ordered; canonicalize equal-slope runs by degree with
    // recorded commutations (bubble passes).
    bool swapped = true;
    while (swapped) {
        swapped = false;
        for (int i = 0; i + 1 < int(fs.size()); ++i) {
            const auto& a = fs[size_t(i)].m;
            const auto& b = fs[size_t(i) + 1].m;
            if (fd.skew(a, b) == 0 && b < a) {
                emit({Move::Kind::commute, i});
                swapped = true;
            }
        }
    }
    return {factors_to_expr(fs), std::move(trace)};
}

} // namespace csd
