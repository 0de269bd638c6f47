#include "vertex/serialize.hpp"

namespace vertex {

namespace {

Json named_exponents(const std::vector<std::string>& names, const Monomial& m, int first_slot) {
    Json out = Json::array();
    for (size_t i = 0; i < names.size(); ++i) {
        int e = m.extra[first_slot + static_cast<int>(i)];
        if (e) out.push_back(Json::array({names[i], e}));
    }
    return out;
}

template <class Find>
void read_named(const Json& list, Monomial& m, Find find, const char* what) {
    for (const auto& item : list) {
        int slot = find(item.at(0).get<std::string>());
        if (slot < 0) throw VertexError(std::string("unknown ") + what + " " + item.at(0).get<std::string>());
        m.extra[slot] += item.at(1).get<int>();
    }
}

std::vector<std::string> names_of(const std::vector<ParameterSpec>& ps) {
    std::vector<std::string> out;
    for (const auto& p : ps) out.push_back(p.name);
    return out;
}

std::vector<std::string> names_of(const std::vector<UnitSpec>& us) {
    std::vector<std::string> out;
    for (const auto& u : us) out.push_back(u.name);
    return out;
}

}  // namespace

Json to_json(const Element& a) {
    Json out = Json::array();
    if (a.is_zero()) return out;
    const AlgebraSignature& sig = *a.signature();
    for (const auto& [m, c] : a.terms()) {
        Json mono = Json::array();
        for (const auto& f : m.jets) mono.push_back(Json::array({sig.generators()[f.gen].name, f.order, f.exp}));
        Json rec;
        rec["monomial"] = mono;
        rec["base"] = named_exponents(sig.base_variables(), m, sig.base_slot(0));
        rec["params"] = named_exponents(names_of(sig.parameters()), m, sig.param_slot(0));
        if (sig.has_units()) {
            Json u = named_exponents(names_of(sig.units()), m, sig.unit_slot(0));
            if (!u.empty()) rec["units"] = u;
        }
        rec["coeff"] = to_string(c);
        out.push_back(rec);
    }
    return out;
}

Element element_from_json(const SigPtr& sig, const Json& j) {
    Element r(sig);
    if (!j.is_array()) throw VertexError("element JSON must be a list of terms");
    for (const auto& rec : j) {
        Element term = Element::constant(sig, parse_rational(rec.at("coeff").get<std::string>()));
        for (const auto& f : rec.at("monomial")) {
            int g = sig->generator_index(f.at(0).get<std::string>());
            int order = f.at(1).get<int>(), exp = f.at(2).get<int>();
            term = term * (exp < 0 ? pow(Element::inverse(sig, g), -exp) : pow(Element::jet(sig, g, order), exp));
        }
        Monomial extra{{}, std::vector<int32_t>(sig->extra_size(), 0)};
        read_named(rec.value("base", Json::array()), extra,
                   [&](const std::string& n) { int i = sig->find_base(n); return i < 0 ? -1 : sig->base_slot(i); },
                   "base variable");
        read_named(rec.value("params", Json::array()), extra,
                   [&](const std::string& n) {
                       int i = sig->find_parameter(n);
                       return i < 0 ? -1 : sig->param_slot(i);
                   },
                   "parameter");
        read_named(rec.value("units", Json::array()), extra,
                   [&](const std::string& n) { int i = sig->find_unit(n); return i < 0 ? -1 : sig->unit_slot(i); },
                   "unit");
        r += Element::monomial(sig, extra) * term;
    }
    return r;
}

Json to_json(const LambdaPolynomial& p) {
    Json out = Json::array();
    for (int n = 0; n <= p.degree(); ++n)
        if (!p.coeff(n).is_zero()) out.push_back(Json::array({n, to_json(p.coeff(n))}));
    return out;
}

LambdaPolynomial lambda_from_json(const SigPtr& sig, const Json& j) {
    LambdaPolynomial r(sig);
    for (const auto& item : j) r.add(item.at(0).get<int>(), element_from_json(sig, item.at(1)));
    return r;
}

Json to_json(const BracketTable& t) {
    Json out = Json::array();
    const auto& gens = t.signature()->generators();
    for (const auto& [uv, value] : t.entries())
        out.push_back({{"left", gens[uv.first].name}, {"right", gens[uv.second].name}, {"bracket", to_json(value)}});
    return out;
}

BracketTable table_from_json(const SigPtr& sig, const Json& j) {
    BracketTable t(sig);
    for (const auto& rec : j)
        t.set(rec.at("left").get<std::string>(), rec.at("right").get<std::string>(),
              lambda_from_json(sig, rec.at("bracket")));
    return t;
}

Json to_json(const TargetForm& f) {
    Json terms = Json::array();
    for (const auto& [idx, c] : f.components()) {
        Json i = Json::array();
        for (int k : idx) i.push_back(k + 1);
        terms.push_back(Json::array({i, to_json(c)}));
    }
    return {{"degree", f.degree()}, {"terms", terms}};
}

TargetForm form_from_json(const SigPtr& sig, const Json& j) {
    TargetForm f(sig, j.at("degree").get<int>());
    for (const auto& item : j.at("terms")) {
        std::vector<int> idx;
        for (const auto& k : item.at(0)) idx.push_back(k.get<int>() - 1);
        f.add(idx, element_from_json(sig, item.at(1)));
    }
    return f;
}

Json to_json(const AlgebraSignature& sig) {
    Json gens = Json::array();
    for (const auto& g : sig.generators())
        gens.push_back({{"name", g.name}, {"odd", g.odd}, {"weight", g.weight}, {"invertible", g.invertible}});
    Json params = Json::array();
    for (const auto& p : sig.parameters())
        params.push_back({{"name", p.name}, {"odd", p.odd}, {"nilpotency", p.nilpotency}});
    Json units = Json::array();
    for (const auto& u : sig.units()) {
        Json poly = Json::array();
        for (const auto& t : u.poly) {
            Json powers = Json::array();
            for (const auto& [g, e] : t.powers) powers.push_back(Json::array({sig.generators()[g].name, e}));
            poly.push_back({{"coeff", to_string(t.coeff)}, {"powers", powers}});
        }
        units.push_back({{"name", u.name}, {"poly", poly}});
    }
    return {{"generators", gens}, {"base", sig.base_variables()}, {"params", params}, {"units", units}};
}

SigPtr signature_from_json(const Json& j) {
    std::vector<GeneratorSpec> gens;
    for (const auto& g : j.at("generators"))
        gens.push_back({g.at("name").get<std::string>(), g.value("odd", false), g.value("weight", 0),
                        g.value("invertible", false)});
    std::vector<std::string> base = j.value("base", std::vector<std::string>{});
    std::vector<ParameterSpec> params;
    for (const auto& p : j.value("params", Json::array()))
        params.push_back({p.at("name").get<std::string>(), p.value("odd", false), p.value("nilpotency", 2)});
    std::vector<UnitSpec> units;
    for (const auto& u : j.value("units", Json::array())) {
        UnitSpec spec{u.at("name").get<std::string>(), {}};
        for (const auto& t : u.at("poly")) {
            UnitSpec::Term term{parse_rational(t.at("coeff").get<std::string>()), {}};
            for (const auto& pw : t.at("powers")) {
                std::string name = pw.at(0).get<std::string>();
                int g = -1;
                for (size_t i = 0; i < gens.size(); ++i)
                    if (gens[i].name == name) g = static_cast<int>(i);
                if (g < 0) throw VertexError("unit mentions unknown generator " + name);
                term.powers.emplace_back(g, pw.at(1).get<int>());
            }
            spec.poly.push_back(term);
        }
        units.push_back(spec);
    }
    return AlgebraSignature::make(gens, base, params, units);
}

Json to_json(const Pva& P) {
    Json twist = Json::object();
    for (const auto& [b, rate] : P.twist_rates()) twist[P.signature()->base_variables()[b]] = to_json(rate);
    return {{"signature", to_json(*P.signature())}, {"table", to_json(P.table())}, {"twist", twist}};
}

Pva pva_from_json(const Json& j) {
    SigPtr sig = signature_from_json(j.at("signature"));
    Pva P(table_from_json(sig, j.at("table")));
    std::map<int, Element> rates;
    const Json twist = j.value("twist", Json::object());
    for (const auto& [name, rate] : twist.items()) {
        int b = sig->find_base(name);
        if (b < 0) throw VertexError("twist on unknown base variable " + name);
        rates[b] = element_from_json(sig, rate);
    }
    return rates.empty() ? P : P.with_twist(rates);
}

}  // namespace vertex
