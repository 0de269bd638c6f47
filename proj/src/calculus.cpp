#include "vertex/diffpoly.hpp"

#include <algorithm>

namespace vertex {

namespace {

Element unit_polynomial(const SigPtr& sig, int u) {
    Element p(sig);
    for (const auto& t : sig->units()[u].poly) {
        Element term = Element::constant(sig, t.coeff);
        for (auto [g, e] : t.powers) term = term * pow(Element::jet(sig, g, 0), e);
        p += term;
    }
    return p;
}

// Number of odd symbols strictly before jet position idx (odd parameters all precede jets).
int odd_before(const AlgebraSignature& sig, const Monomial& m, size_t idx) {
    int n = 0;
    for (size_t p = 0; p < sig.parameters().size(); ++p)
        if (sig.parameters()[p].odd && m.extra[sig.param_slot(static_cast<int>(p))]) ++n;
    for (size_t i = 0; i < idx; ++i)
        if (sig.generators()[m.jets[i].gen].odd) ++n;
    return n;
}

Monomial drop_one(const Monomial& m, size_t idx) {
    Monomial r = m;
    if (--r.jets[idx].exp == 0) r.jets.erase(r.jets.begin() + static_cast<long>(idx));
    return r;
}

Monomial bump_unit(const AlgebraSignature& sig, const Monomial& m, int u) {
    Monomial r = m;
    r.extra[sig.unit_slot(u)] += 1;
    return r;
}

}  // namespace

Element total_derivative(const Element& a) {
    const SigPtr& sig = a.signature();
    Element r(sig);
    if (a.is_zero()) return r;
    const int nu = static_cast<int>(sig->units().size());
    std::vector<std::optional<Element>> unit_t(nu);
    for (const auto& [m, c] : a.terms()) {
        for (size_t i = 0; i < m.jets.size(); ++i) {
            const auto& f = m.jets[i];
            Monomial n = m;
            bool odd = sig->generators()[f.gen].odd;
            JetFactor up{f.gen, f.order + 1, 1};
            auto next = i + 1 < m.jets.size() ? &m.jets[i + 1] : nullptr;
            if (next && next->gen == f.gen && next->order == f.order + 1) {
                if (odd) continue;
                n.jets[i + 1].exp += 1;
                if (n.jets[i + 1].exp == 0) n.jets.erase(n.jets.begin() + static_cast<long>(i) + 1);
            } else {
                n.jets.insert(n.jets.begin() + static_cast<long>(i) + 1, up);
            }
            if (--n.jets[i].exp == 0) n.jets.erase(n.jets.begin() + static_cast<long>(i));
            r.add_term(n, c * f.exp);
        }
        for (int u = 0; u < nu; ++u) {
            int e = m.extra[sig->unit_slot(u)];
            if (!e) continue;
            if (!unit_t[u]) unit_t[u] = total_derivative(unit_polynomial(sig, u));
            r += Element::monomial(sig, bump_unit(*sig, m, u), -c * e) * *unit_t[u];
        }
    }
    if (nu) {
        auto t = r.terms();
        normalize_units(*sig, t);
        r = Element(sig, std::move(t));
    }
    return r;
}

Element total_derivative_power(const Element& a, int k) {
    Element r = a;
    for (int i = 0; i < k; ++i) r = total_derivative(r);
    return r;
}

Element partial(const Element& a, JetVar v) {
    const SigPtr& sig = a.signature();
    Element r(sig);
    if (a.is_zero()) return r;
    const int nu = static_cast<int>(sig->units().size());
    std::vector<std::optional<Element>> unit_d(nu);
    for (const auto& [m, c] : a.terms()) {
        for (size_t i = 0; i < m.jets.size(); ++i) {
            const auto& f = m.jets[i];
            if (f.gen != v.gen || f.order != v.order) continue;
            int sign = 1;
            if (sig->generators()[f.gen].odd && (odd_before(*sig, m, i) & 1)) sign = -1;
            r.add_term(drop_one(m, i), c * f.exp * sign);
        }
        if (v.order != 0) continue;
        for (int u = 0; u < nu; ++u) {
            int e = m.extra[sig->unit_slot(u)];
            if (!e || !sig->unit_mentions(u, v.gen)) continue;
            if (!unit_d[u]) unit_d[u] = partial(unit_polynomial(sig, u), v);
            r += Element::monomial(sig, bump_unit(*sig, m, u), -c * e) * *unit_d[u];
        }
    }
    return r;
}

std::map<JetVar, Element> all_partials(const Element& a) {
    std::map<JetVar, Element> out;
    const SigPtr& sig = a.signature();
    if (a.is_zero()) return out;
    std::vector<JetVar> vars;
    bool units = false;
    for (const auto& [m, c] : a.terms()) {
        for (const auto& f : m.jets) vars.push_back({f.gen, f.order});
        for (size_t u = 0; u < sig->units().size(); ++u)
            if (m.extra[sig->unit_slot(static_cast<int>(u))]) units = true;
    }
    if (units)
        for (size_t u = 0; u < sig->units().size(); ++u)
            for (int g = 0; g < sig->num_generators(); ++g)
                if (sig->unit_mentions(static_cast<int>(u), g)) vars.push_back({g, 0});
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    if (!units) {
        for (auto v : vars) out.emplace(v, Element(sig));
        for (const auto& [m, c] : a.terms()) {
            int odd_seen = odd_before(*sig, m, 0);
            for (size_t i = 0; i < m.jets.size(); ++i) {
                const auto& f = m.jets[i];
                bool odd = sig->generators()[f.gen].odd;
                int sign = (odd && (odd_seen & 1)) ? -1 : 1;
                out[{f.gen, f.order}].add_term(drop_one(m, i), c * f.exp * sign);
                if (odd) ++odd_seen;
            }
        }
    } else {
        for (auto v : vars) out.emplace(v, partial(a, v));
    }
    for (auto it = out.begin(); it != out.end();)
        it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return out;
}

Element base_partial(const Element& a, int base_index) {
    const SigPtr& sig = a.signature();
    Element r(sig);
    int slot = sig->base_slot(base_index);
    for (const auto& [m, c] : a.terms()) {
        int e = m.extra[slot];
        if (!e) continue;
        Monomial n = m;
        n.extra[slot] -= 1;
        r.add_term(n, c * e);
    }
    return r;
}

Element apply_derivation(const Element& a, const JetImage& jet_image, const BaseImage& base_image) {
    const SigPtr& sig = a.signature();
    Element r(sig);
    if (a.is_zero()) return r;
    std::map<JetVar, Element> images;
    for (auto& [v, d] : all_partials(a)) {
        auto it = images.find(v);
        if (it == images.end()) it = images.emplace(v, jet_image(v)).first;
        if (!it->second.is_zero()) r += it->second * d;
    }
    if (base_image) {
        for (size_t b = 0; b < sig->base_variables().size(); ++b) {
            Element d = base_partial(a, static_cast<int>(b));
            if (d.is_zero()) continue;
            r += base_image(static_cast<int>(b)) * d;
        }
    }
    return r;
}

Element variational_derivative(const Element& a, int gen, const Derivation& d) {
    const SigPtr& sig = a.signature();
    int max_order = -1;
    for (const auto& [m, c] : a.terms())
        for (const auto& f : m.jets)
            if (f.gen == gen) max_order = std::max(max_order, f.order);
    bool units = false;
    for (const auto& [m, c] : a.terms())
        for (size_t u = 0; u < sig->units().size(); ++u)
            if (m.extra[sig->unit_slot(static_cast<int>(u))] && sig->unit_mentions(static_cast<int>(u), gen))
                units = true;
    if (units) max_order = std::max(max_order, 0);
    Element r(sig);
    // Horner form: sum_m (-D)^m P_m = P_0 - D(P_1 - D(P_2 - ...)).
    for (int m = max_order; m >= 0; --m) {
        Element next = partial(a, {gen, m});
        if (!r.is_zero()) next -= d ? d(r) : total_derivative(r);
        r = std::move(next);
    }
    return r;
}

ExactResult is_exact(const Element& a) {
    if (a.has_laurent())
        throw LaurentUnsupported("is_exact: Laurent or unit coefficients leave the polynomial subring");
    const SigPtr& sig = a.signature();
    ExactResult res;
    if (a.is_zero()) {
        res.exact = true;
        res.witness = Element(sig);
        return res;
    }
    for (const auto& [m, c] : a.terms())
        if (m.jets.empty()) return res;
    for (int g = 0; g < sig->num_generators(); ++g)
        if (!variational_derivative(a, g).is_zero()) return res;

    // Homotopy: on jet degree d, a = T(e)/d with e = sum_g sum_k sum_l (-1)^l g_(k-1-l) T^l(da/dg_(k)).
    std::map<int, Element> by_degree;
    for (const auto& [m, c] : a.terms()) {
        auto [it, ins] = by_degree.try_emplace(monomial_jet_degree(m), sig);
        it->second.add_term(m, c);
    }
    Element witness(sig);
    for (const auto& [deg, part] : by_degree) {
        Element e(sig);
        for (const auto& [v, d] : all_partials(part)) {
            if (v.order == 0) continue;
            Element tl = d;
            for (int l = 0; l < v.order; ++l) {
                Element term = Element::jet(sig, v.gen, v.order - 1 - l) * tl;
                if (l & 1) e -= term;
                else e += term;
                tl = total_derivative(tl);
            }
        }
        witness += Rational(1, deg) * e;
    }
    if (!(total_derivative(witness) == a)) throw VertexError("is_exact: internal homotopy check failed");
    res.exact = true;
    res.witness = std::move(witness);
    return res;
}

}  // namespace vertex
