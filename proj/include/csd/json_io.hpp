#pragma once

#include "csd/group.hpp"
#include "csd/lattice.hpp"
#include "csd/scatter.hpp"
#include "csd/series.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>

namespace csd {

using Json = nlohmann::ordered_json;

/// Raised on malformed or semantically invalid input documents.
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Json to_json(const LatticeVec& v)
{
    return Json(v.c);
}

inline LatticeVec lattice_vec_from_json(const Json& j)
{
    if (!j.is_array())
        throw io_error("expected an integer array");
    return LatticeVec(j.get<std::vector<std::int64_t>>());
}

/// {"B": [[int]], "delta": [int]} — validated on load.
inline Json to_json(const FixedData& fd)
{
    Json j;
    j["B"] = fd.b_matrix();
    j["delta"] = fd.deltas();
    return j;
}

inline FixedData fixed_data_from_json(const Json& j)
{
    try {
        return FixedData(j.at("B").get<std::vector<std::vector<std::int64_t>>>(),
                         j.at("delta").get<std::vector<std::int64_t>>());
    } catch (const std::invalid_argument& e) {
        throw io_error(std::string("invalid fixed data: ") + e.what());
    } catch (const Json::exception& e) {
        throw io_error(std::string("invalid fixed data: ") + e.what());
    }
}

/// [{"exp": [int], "num": "...", "den": "..."}] in graded-lex term order;
/// integer strings carry arbitrary precision.
inline Json to_json(const TruncatedSeries& s)
{
    Json terms = Json::array();
    for (const auto& [e, q] : s.terms()) {
        Json t;
        t["exp"] = e.c;
        t["num"] = numer(q).str();
        t["den"] = denom(q).str();
        terms.push_back(std::move(t));
    }
    return terms;
}

inline TruncatedSeries series_from_json(const Json& j, int vars, int level)
{
    TruncatedSeries s(vars, level);
    for (const auto& t : j) {
        Rational q(Integer(t.at("num").get<std::string>()),
                   Integer(t.at("den").get<std::string>()));
        s.add_term(lattice_vec_from_json(t.at("exp")), q);
    }
    return s;
}

/// [{"m": [int], "c": "rational", "sign": +-1}], leftmost factor last crossed.
inline Json to_json(const ProductExpr& expr)
{
    Json j = Json::array();
    for (const auto& sf : expr) {
        Json f;
        f["m"] = sf.factor.m.c;
        f["c"] = to_string(sf.factor.c);
        f["sign"] = sf.sign;
        j.push_back(std::move(f));
    }
    return j;
}

inline ProductExpr product_from_json(const Json& j)
{
    ProductExpr expr;
    for (const auto& f : j) {
        int sign = f.at("sign").get<int>();
        if (sign != 1 && sign != -1)
            throw io_error("factor sign must be +1 or -1");
        expr.push_back({DilogFactor(lattice_vec_from_json(f.at("m")),
                                    rational_from_string(f.at("c").get<std::string>())),
                        sign});
    }
    return expr;
}

/// {"fd": ..., "level": l, "walls": [{"normal": [int],
///   "factors": [{"t": int, "s": int, "delta": "rational"}]}]}
inline Json to_json(const Rank2CSD& csd)
{
    Json j;
    j["fd"] = to_json(csd.fd);
    j["level"] = csd.level;
    Json walls = Json::array();
    for (const auto& w : csd.walls) {
        Json wall;
        wall["normal"] = w.normal.c;
        Json factors = Json::array();
        for (const auto& f : w.factors) {
            Rational delta = csd.fd.normalization_factor(w.normal.scaled(f.t));
            Rational s = f.exponent / delta;
            Json fx;
            fx["t"] = f.t;
            fx["s"] = is_integer(s) ? Json(s.convert_to<std::int64_t>())
                                    : Json(to_string(s));
            fx["delta"] = to_string(delta);
            factors.push_back(std::move(fx));
        }
        wall["factors"] = std::move(factors);
        walls.push_back(std::move(wall));
    }
    j["walls"] = std::move(walls);
    return j;
}

inline Rank2CSD csd_from_json(const Json& j)
{
    FixedData fd = fixed_data_from_json(j.at("fd"));
    int level = j.at("level").get<int>();
    if (level < 1)
        throw io_error("level must be >= 1");
    Rank2CSD csd{fd, level, {}};
    for (const auto& jw : j.at("walls")) {
        Wall w;
        w.normal = lattice_vec_from_json(jw.at("normal"));
        if (!w.normal.is_positive() || !w.normal.is_primitive())
            throw io_error("wall normal must be positive and primitive");
        w.incoming = w.normal.degree() == 1;
        if (!w.incoming) {
            MVector p = fd.p_star(w.normal);
            std::int64_t g = std::gcd(p.c[0], p.c[1]);
            if (g != 0)
                w.ray = MVector({-p.c[0] / g, -p.c[1] / g});
        }
        for (const auto& jf : jw.at("factors")) {
            std::int64_t t = jf.at("t").get<std::int64_t>();
            if (t < 1)
                throw io_error("factor t must be >= 1");
            Rational s = jf.at("s").is_number()
                             ? Rational(jf.at("s").get<std::int64_t>())
                             : rational_from_string(jf.at("s").get<std::string>());
            Rational delta = rational_from_string(jf.at("delta").get<std::string>());
            Rational expected = fd.normalization_factor(w.normal.scaled(t));
            if (delta != expected)
                throw io_error("stored normalization factor disagrees with the fixed data");
            w.factors.push_back({t, s * delta});
        }
        csd.walls.push_back(std::move(w));
    }
    return csd;
}

} // namespace csd
