#ifndef WEILINV_JSON_IO_HPP
#define WEILINV_JSON_IO_HPP

#include <fstream>
#include <string>

#include <json.hpp>

#include "weilinv/groups.hpp"
#include "weilinv/jets.hpp"
#include "weilinv/weil.hpp"

namespace weilinv {

using Json = nlohmann::json;

template <RingStructure R>
Json element_to_json(const WeilAlgebra<R>& alg, const WeilElement<typename R::Elem>& e) {
    Json terms = Json::array();
    for (const auto& [alpha, c] : e.coeffs)
        terms.push_back(Json{{"alpha", alpha}, {"coeff", alg.coeff_ring.to_string(c)}});
    return terms;
}

/// {"order", "reduced_order", "components": [{eps_power, coefficient,
/// factorial_scaled}]} — the m = 1 surface.
template <RingStructure R>
Json derivation_to_json(const DerivationResult<R>& d) {
    Json out;
    out["order"] = d.order;
    out["reduced_order"] = d.reduced_order ? Json(*d.reduced_order) : Json(nullptr);
    Json comps = Json::array();
    const auto& ring = d.algebra.coeff_ring;
    for (const auto& [alpha, c] : d.components()) {
        if (alpha.size() != 1) continue;
        int j = alpha[0];
        auto scaled = ring.mul(c, ring.from_rational(Rational(factorial(j))));
        comps.push_back(Json{{"eps_power", j},
                             {"coefficient", ring.to_string(c)},
                             {"factorial_scaled", ring.to_string(scaled)}});
    }
    out["components"] = comps;
    out["element"] = element_to_json(d.algebra, d.element);
    return out;
}

inline Json invariance_to_json(const InvarianceReport& r) {
    Json out;
    out["invariant"] = r.invariant;
    out["samples"]   = r.samples;
    out["rejected"]  = r.rejected;
    out["exact"]     = r.exact;
    out["max_deviation"] = r.exact ? Json(r.invariant ? "0" : r.worst_deviation_text)
                                   : Json(r.max_deviation);
    out["witness"] = r.witness ? Json(*r.witness) : Json(nullptr);
    return out;
}

inline Json rank_to_json(const RankReport& r) {
    Json out;
    out["action"]  = r.action_name;
    out["dim_G"]   = r.dim_G;
    out["dim_M"]   = r.dim_M;
    out["samples"] = r.samples;
    Json per = Json::array();
    for (const auto& pk : r.per_k)
        per.push_back(Json{{"k", pk.k},
                           {"rank", pk.rank},
                           {"invariant_count", pk.invariant_count},
                           {"attain_fraction", pk.attain_fraction}});
    out["per_k"]       = per;
    out["k0_estimate"] = r.k0_estimate ? Json(*r.k0_estimate) : Json(nullptr);
    out["bounds"]      = Json{{"lower", r.bounds.first}, {"upper", r.bounds.second}};
    out["notes"]       = r.notes;
    return out;
}

inline Json identity_to_json(const IdentityReport& r) {
    Json out;
    out["passed"]            = r.passed;
    out["samples"]           = r.samples;
    out["rejected"]          = r.rejected;
    out["max_rel_deviation"] = r.max_rel_deviation;
    out["witness"]           = r.witness ? Json(*r.witness) : Json(nullptr);
    return out;
}

// -- action fixtures ---------------------------------------------------------

/// {name, dim_M, params, identity: [values], action: [expr strings],
/// generators: [[expr strings]]}. Identity values are numbers or "p/q"
/// strings. Fixture actions get a generic small-rational sampler and no
/// generator directions (the dual-number test needs built-ins).
inline GroupAction action_from_json(const Json& j) {
    GroupAction g;
    g.name  = j.at("name").get<std::string>();
    g.dim_M = j.at("dim_M").get<int>();
    g.params = j.at("params").get<std::vector<std::string>>();
    for (const auto& v : j.at("identity")) {
        if (v.is_string())
            g.identity.push_back(parse_rational(v.get<std::string>()));
        else
            g.identity.push_back(Rational(v.get<long long>()));
    }
    if (g.identity.size() != g.params.size())
        throw SpecMismatch("fixture identity length does not match params");
    for (const auto& s : j.at("action")) g.action.push_back(parse(s.get<std::string>()));
    if (static_cast<int>(g.action.size()) != g.dim_M)
        throw SpecMismatch("fixture action needs dim_M expressions");
    for (const auto& field : j.at("generators")) {
        std::vector<ExprPtr> f;
        for (const auto& s : field) f.push_back(parse(s.get<std::string>()));
        if (static_cast<int>(f.size()) != g.dim_M)
            throw SpecMismatch("fixture generator needs dim_M components");
        g.generators.push_back(std::move(f));
    }
    g.sampler = [np = g.params.size(), id = g.identity](SplitRng& rng) {
        std::vector<Rational> v;
        v.reserve(np);
        for (std::size_t i = 0; i < np; ++i) v.push_back(id[i] + rng.next_rational(4, 4));
        return v;
    };
    return g;
}

inline GroupAction load_action_fixture(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UnsupportedOperation("cannot open action fixture " + path);
    Json j = Json::parse(in);
    return action_from_json(j);
}

} // namespace weilinv

#endif
