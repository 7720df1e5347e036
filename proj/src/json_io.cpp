#include "cubelab/json_io.hpp"

#include <sstream>
#include <stdexcept>

namespace cubelab {

namespace {

std::string outcome_key(const Outcome& o, const std::vector<std::string>& alphabet) {
    std::string key;
    for (std::size_t i = 0; i < o.size(); ++i) {
        if (i) key += ",";
        key += alphabet.at(o[i]);
    }
    return key;
}

Outcome outcome_from_key(const std::string& key, const std::vector<std::string>& alphabet,
                         int tuple_len) {
    Outcome o;
    std::stringstream ss(key);
    std::string part;
    while (std::getline(ss, part, ',')) {
        auto it = std::find(alphabet.begin(), alphabet.end(), part);
        if (it == alphabet.end()) throw std::invalid_argument("unknown label: " + part);
        o.push_back(static_cast<std::uint8_t>(it - alphabet.begin()));
    }
    if (static_cast<int>(o.size()) != tuple_len)
        throw std::invalid_argument("outcome arity mismatch: " + key);
    return o;
}

}  // namespace

Json group_to_json(const GroupPtr& z) {
    Json j;
    j["moduli"] = z->moduli();
    j["degree"] = z->degree();
    std::vector<std::vector<std::uint32_t>> mult;
    for (int i = 0; i <= z->degree() + 1; ++i) {
        std::vector<std::uint32_t> row;
        for (std::size_t t = 0; t < z->coords(); ++t) row.push_back(z->multiplier(i, t));
        mult.push_back(std::move(row));
    }
    j["multipliers"] = mult;
    return j;
}

GroupPtr group_from_json(const Json& j) {
    if (j.contains("canonical"))
        return make_canonical(j["canonical"].at("k").get<int>(),
                              j["canonical"].at("ell").get<int>());
    if (j.contains("h_trunc"))
        return make_h_truncation(j["h_trunc"].at("k").get<int>(),
                                 j["h_trunc"].at("widths").get<std::vector<int>>());
    return make_group(j.at("moduli").get<std::vector<std::uint32_t>>(), j.at("degree").get<int>(),
                      j.at("multipliers").get<std::vector<std::vector<std::uint32_t>>>());
}

Json cube_point_to_json(const CubePoint& q) {
    Json j;
    j["k"] = q.k;
    Json values = Json::array();
    for (auto idx : q.values) values.push_back(q.group->element_at(idx));
    j["values"] = values;
    return j;
}

CubePoint cube_point_from_json(const Json& j, const GroupPtr& z,
                               std::optional<std::uint32_t>* missing_vertex) {
    int k = j.at("k").get<int>();
    const auto& values = j.at("values");
    if (values.size() != (1u << k)) throw std::invalid_argument("cube: 2^k values expected");
    CubePoint q{k, z, std::vector<std::uint32_t>(1u << k, 0)};
    for (std::uint32_t v = 0; v < values.size(); ++v) {
        if (values[v].is_null()) {
            if (!missing_vertex || missing_vertex->has_value())
                throw std::invalid_argument("cube: unexpected missing vertex");
            *missing_vertex = v;
            continue;
        }
        q.values[v] = z->index_of(values[v].get<GroupElement>());
    }
    return q;
}

Json cube_coeffs_to_json(const CubeCoeffs& c) {
    Json j;
    j["k"] = c.k;
    Json coeffs = Json::object();
    for (std::uint32_t s = 0; s < c.coeff.size(); ++s)
        coeffs[std::to_string(s)] = c.group->element_at(c.coeff[s]);
    j["coeffs"] = coeffs;
    return j;
}

CubeCoeffs cube_coeffs_from_json(const Json& j, const GroupPtr& z) {
    int k = j.at("k").get<int>();
    CubeCoeffs c{k, z, std::vector<std::uint32_t>(1u << k, 0)};
    for (const auto& [key, val] : j.at("coeffs").items()) {
        std::uint32_t s = static_cast<std::uint32_t>(std::stoul(key));
        if (s >= c.coeff.size()) throw std::invalid_argument("coeffs: bad subset mask " + key);
        c.coeff[s] = z->index_of(val.get<GroupElement>());
    }
    return c;
}

Json forms_to_json(const LinearFormSystem& l) {
    Json j;
    j["k"] = l.k;
    Json forms = Json::array();
    for (auto f : l.forms) {
        std::vector<int> bits(l.k);
        for (int i = 0; i < l.k; ++i) bits[i] = (f >> i) & 1;
        forms.push_back(bits);
    }
    j["forms"] = forms;
    return j;
}

LinearFormSystem forms_from_json(const Json& j) {
    LinearFormSystem l;
    l.k = j.at("k").get<int>();
    for (const auto& row : j.at("forms")) {
        if (row.size() != static_cast<std::size_t>(l.k))
            throw std::invalid_argument("forms: each form needs k bits");
        std::uint32_t f = 0;
        for (int i = 0; i < l.k; ++i)
            if (row[i].get<int>()) f |= 1u << i;
        l.forms.push_back(f);
    }
    l.validate();
    return l;
}

Json function_to_json(const FunctionTable& f) {
    Json j;
    j["n"] = f.n;
    j["alphabet"] = f.alphabet;
    j["values"] = std::vector<int>(f.values.begin(), f.values.end());
    return j;
}

FunctionTable function_from_json(const Json& j) {
    FunctionTable f;
    f.n = j.at("n").get<int>();
    f.alphabet = j.at("alphabet").get<std::vector<std::string>>();
    for (const auto& v : j.at("values")) f.values.push_back(v.get<std::uint8_t>());
    f.validate();
    return f;
}

Json distribution_to_json(const FiniteDistribution& d) {
    Json j;
    j["mode"] = d.is_exact() ? "exact" : "estimated";
    j["tuple_len"] = d.tuple_len;
    j["alphabet"] = d.alphabet;
    if (!d.is_exact()) {
        j["N"] = d.sample_count;
        j["seed"] = d.seed;
    }
    Json outcomes = Json::object();
    if (d.is_exact())
        for (const auto& [o, p] : d.exact) outcomes[outcome_key(o, d.alphabet)] = rational_to_string(p);
    else
        for (const auto& [o, p] : d.estimated) outcomes[outcome_key(o, d.alphabet)] = p;
    j["outcomes"] = outcomes;
    return j;
}

FiniteDistribution distribution_from_json(const Json& j) {
    FiniteDistribution d;
    d.tuple_len = j.at("tuple_len").get<int>();
    d.alphabet = j.at("alphabet").get<std::vector<std::string>>();
    std::string mode = j.at("mode").get<std::string>();
    if (mode == "exact") {
        d.mode = FiniteDistribution::Mode::Exact;
        for (const auto& [key, val] : j.at("outcomes").items())
            d.exact[outcome_from_key(key, d.alphabet, d.tuple_len)] =
                rational_from_string(val.get<std::string>());
    } else if (mode == "estimated") {
        d.mode = FiniteDistribution::Mode::Estimated;
        d.sample_count = j.value("N", 0ull);
        d.seed = j.value("seed", 0ull);
        for (const auto& [key, val] : j.at("outcomes").items())
            d.estimated[outcome_from_key(key, d.alphabet, d.tuple_len)] = val.get<double>();
    } else {
        throw std::invalid_argument("distribution: unknown mode " + mode);
    }
    return d;
}

Json limit_object_to_json(const LimitObject& lim) {
    Json j;
    j["group"] = group_to_json(lim.z);
    j["alphabet"] = lim.alphabet;
    Json rows = Json::array();
    for (const auto& row : lim.m) {
        Json r = Json::array();
        for (const auto& p : row) r.push_back(rational_to_string(p));
        rows.push_back(r);
    }
    j["m"] = rows;
    return j;
}

LimitObject limit_object_from_json(const Json& j) {
    LimitObject lim;
    lim.z = group_from_json(j.at("group"));
    lim.alphabet = j.at("alphabet").get<std::vector<std::string>>();
    for (const auto& row : j.at("m")) {
        std::vector<Rational> r;
        for (const auto& p : row) r.push_back(rational_from_string(p.get<std::string>()));
        lim.m.push_back(std::move(r));
    }
    lim.validate();
    return lim;
}

Json window_to_json(const WindowDistribution& w) {
    Json j = distribution_to_json(w.dist);
    j["k"] = w.k;
    return j;
}

WindowDistribution window_from_json(const Json& j) {
    WindowDistribution w;
    w.k = j.at("k").get<int>();
    w.dist = distribution_from_json(j);
    w.validate();
    return w;
}

Json exch_report_to_json(const ExchReport& r) {
    Json j;
    j["pass"] = r.pass;
    j["statistical"] = r.statistical;
    Json ws = Json::array();
    for (const auto& w : r.witnesses) {
        Json e;
        e["generator"] = w.transform;
        if (w.tv.exact)
            e["tv"] = rational_to_string(*w.tv.exact);
        else
            e["tv"] = w.tv.value;
        ws.push_back(e);
    }
    j["witnesses"] = ws;
    return j;
}

Json map_to_json(const GroupNilspaceMap& m) {
    Json j;
    Json table = Json::array();
    for (auto y : m.table) table.push_back(m.codomain->element_at(y));
    j["table"] = table;
    return j;
}

GroupNilspaceMap map_from_json(const Json& j, const GroupPtr& domain, const GroupPtr& codomain) {
    GroupNilspaceMap m{domain, codomain, {}};
    for (const auto& e : j.at("table")) m.table.push_back(codomain->index_of(e.get<GroupElement>()));
    m.validate();
    return m;
}

Json poly_to_json(const NonClassicalPoly& p) {
    Json j;
    j["n"] = p.n;
    j["D"] = p.D;
    j["table"] = p.table;
    return j;
}

NonClassicalPoly poly_from_json(const Json& j) {
    if (j.contains("coeffs")) {
        int n = j.at("n").get<int>();
        int D = j.at("D").get<int>();
        std::vector<std::uint32_t> w(1u << n, 0);
        for (const auto& [key, val] : j.at("coeffs").items()) {
            std::uint32_t s = static_cast<std::uint32_t>(std::stoul(key));
            if (s >= w.size()) throw std::invalid_argument("poly: bad subset mask");
            w[s] = val.get<std::uint32_t>();
        }
        return poly_from_coeffs(n, D, w);
    }
    return poly_from_table(j.at("n").get<int>(), j.at("D").get<int>(),
                           j.at("table").get<std::vector<std::uint32_t>>());
}

Json tv_to_json(const TvResult& tv) {
    Json j;
    if (tv.exact)
        j["tv"] = rational_to_string(*tv.exact);
    else
        j["tv"] = tv.value;
    if (tv.mixed_mode) j["mixed_mode"] = true;
    return j;
}

Json depth_convention_to_json(const DepthConvention& c) {
    Json j;
    j["rho"] = c.rho;
    Json table = Json::array();
    for (const auto& [kr, ell] : c.ell) {
        Json row;
        row["k"] = kr.first;
        row["r"] = kr.second;
        row["ell"] = ell;
        table.push_back(row);
    }
    j["pairs"] = table;
    return j;
}

}  // namespace cubelab
