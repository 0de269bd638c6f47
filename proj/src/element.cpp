#include "vertex/diffpoly.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace vertex {

namespace {

// Odd symbols in canonical position order: odd parameters first, then odd jets.
struct OddKey {
    int kind;  // 0 = parameter, 1 = jet
    int a;
    int b;
    auto operator<=>(const OddKey&) const = default;
};

void odd_keys(const AlgebraSignature& sig, const Monomial& m, std::vector<OddKey>& out) {
    out.clear();
    const auto& ps = sig.parameters();
    for (size_t i = 0; i < ps.size(); ++i)
        if (ps[i].odd && m.extra[sig.param_slot(static_cast<int>(i))] != 0) out.push_back({0, static_cast<int>(i), 0});
    const auto& gs = sig.generators();
    for (const auto& f : m.jets)
        if (gs[f.gen].odd) out.push_back({1, f.gen, f.order});
}

Monomial empty_monomial(const AlgebraSignature& sig) {
    Monomial m;
    m.extra.assign(sig.extra_size(), 0);
    return m;
}

}  // namespace

Element::Element(SigPtr sig, Terms terms) : sig_(std::move(sig)), terms_(std::move(terms)) {
    for (auto it = terms_.begin(); it != terms_.end();) {
        it->second.canonicalize();
        it = it->second == 0 ? terms_.erase(it) : std::next(it);
    }
}

Element Element::constant(const SigPtr& sig, const Rational& c) {
    Element e(sig);
    if (c != 0) e.terms_.emplace(empty_monomial(*sig), c).first->second.canonicalize();
    return e;
}

Element Element::jet(const SigPtr& sig, int gen, int order) {
    if (gen < 0 || gen >= sig->num_generators()) throw VertexError("generator index out of range");
    if (order < 0) throw VertexError("negative jet order");
    Monomial m = empty_monomial(*sig);
    m.jets.push_back({gen, order, 1});
    return monomial(sig, std::move(m));
}

Element Element::jet(const SigPtr& sig, std::string_view name, int order) {
    return jet(sig, sig->generator_index(name), order);
}

Element Element::inverse(const SigPtr& sig, int gen) {
    if (!sig->generators().at(gen).invertible)
        throw VertexError("generator '" + sig->generators()[gen].name + "' is not invertible");
    Monomial m = empty_monomial(*sig);
    m.jets.push_back({gen, 0, -1});
    return monomial(sig, std::move(m));
}

Element Element::base(const SigPtr& sig, int index) {
    Monomial m = empty_monomial(*sig);
    m.extra.at(sig->base_slot(index)) = 1;
    return monomial(sig, std::move(m));
}

Element Element::base(const SigPtr& sig, std::string_view name) {
    int i = sig->find_base(name);
    if (i < 0) throw VertexError("unknown base variable '" + std::string(name) + "'");
    return base(sig, i);
}

Element Element::parameter(const SigPtr& sig, int index) {
    Monomial m = empty_monomial(*sig);
    m.extra.at(sig->param_slot(index)) = 1;
    if (sig->parameters()[index].nilpotency <= 1) return Element(sig);
    return monomial(sig, std::move(m));
}

Element Element::parameter(const SigPtr& sig, std::string_view name) {
    int i = sig->find_parameter(name);
    if (i < 0) throw VertexError("unknown parameter '" + std::string(name) + "'");
    return parameter(sig, i);
}

Element Element::unit(const SigPtr& sig, int index) {
    Monomial m = empty_monomial(*sig);
    m.extra.at(sig->unit_slot(index)) = 1;
    Terms t;
    t.emplace(std::move(m), Rational(1));
    normalize_units(*sig, t);
    return Element(sig, std::move(t));
}

Element Element::monomial(const SigPtr& sig, Monomial m, const Rational& c) {
    Element e(sig);
    if (c != 0) e.terms_.emplace(std::move(m), c).first->second.canonicalize();
    return e;
}

void Element::add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (inserted) {
        it->second.canonicalize();
    } else {
        it->second += c;
        it->second.canonicalize();
        if (it->second == 0) terms_.erase(it);
    }
}

Element& Element::operator+=(const Element& o) {
    require_same_signature(sig_, o.sig_);
    if (!sig_) sig_ = o.sig_;
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Element& Element::operator-=(const Element& o) {
    require_same_signature(sig_, o.sig_);
    if (!sig_) sig_ = o.sig_;
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

Element& Element::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    Rational k = c;
    k.canonicalize();
    for (auto& [m, v] : terms_) v *= k;
    return *this;
}

Element Element::operator-() const {
    Element r = *this;
    for (auto& [m, v] : r.terms_) v = -v;
    return r;
}

bool Element::operator==(const Element& o) const {
    require_same_signature(sig_, o.sig_);
    return terms_ == o.terms_;
}

int monomial_weight(const AlgebraSignature& sig, const Monomial& m) {
    int w = 0;
    for (const auto& f : m.jets) w += (sig.generators()[f.gen].weight + f.order) * f.exp;
    return w;
}

bool monomial_odd(const AlgebraSignature& sig, const Monomial& m) {
    bool odd = false;
    for (const auto& f : m.jets)
        if (sig.generators()[f.gen].odd && (f.exp & 1)) odd = !odd;
    for (size_t i = 0; i < sig.parameters().size(); ++i)
        if (sig.parameters()[i].odd && (m.extra[sig.param_slot(static_cast<int>(i))] & 1)) odd = !odd;
    return odd;
}

int monomial_jet_degree(const Monomial& m) {
    int d = 0;
    for (const auto& f : m.jets) d += f.exp;
    return d;
}

std::optional<int> Element::weight() const {
    std::optional<int> w;
    for (const auto& [m, c] : terms_) {
        int v = monomial_weight(*sig_, m);
        if (w && *w != v) return std::nullopt;
        w = v;
    }
    return w;
}

std::optional<bool> Element::parity() const {
    std::optional<bool> p;
    for (const auto& [m, c] : terms_) {
        bool v = monomial_odd(*sig_, m);
        if (p && *p != v) return std::nullopt;
        p = v;
    }
    return p;
}

Element Element::weight_component(int w) const {
    Element r(sig_);
    for (const auto& [m, c] : terms_)
        if (monomial_weight(*sig_, m) == w) r.terms_.emplace_hint(r.terms_.end(), m, c);
    return r;
}

Element Element::parity_component(bool odd) const {
    Element r(sig_);
    for (const auto& [m, c] : terms_)
        if (monomial_odd(*sig_, m) == odd) r.terms_.emplace_hint(r.terms_.end(), m, c);
    return r;
}

int Element::max_weight() const {
    int w = 0;
    for (const auto& [m, c] : terms_) w = std::max(w, monomial_weight(*sig_, m));
    return w;
}

bool Element::has_laurent() const {
    for (const auto& [m, c] : terms_) {
        for (const auto& f : m.jets)
            if (f.exp < 0) return true;
        for (size_t u = 0; u < sig_->units().size(); ++u)
            if (m.extra[sig_->unit_slot(static_cast<int>(u))] != 0) return true;
    }
    return false;
}

bool Element::has_parameters() const {
    for (const auto& [m, c] : terms_)
        for (size_t i = 0; i < sig_->parameters().size(); ++i)
            if (m.extra[sig_->param_slot(static_cast<int>(i))] != 0) return true;
    return false;
}

Rational Element::constant_term() const {
    if (terms_.empty()) return 0;
    const auto& [m, c] = *terms_.begin();
    if (m.jets.empty() && std::all_of(m.extra.begin(), m.extra.end(), [](int e) { return e == 0; })) return c;
    return 0;
}

int multiply_monomials(const AlgebraSignature& sig, const Monomial& a, const Monomial& b, Monomial& out) {
    const auto& gs = sig.generators();
    out.jets.clear();
    out.jets.reserve(a.jets.size() + b.jets.size());
    size_t i = 0, j = 0;
    while (i < a.jets.size() || j < b.jets.size()) {
        if (j == b.jets.size() || (i < a.jets.size() && std::pair(a.jets[i].gen, a.jets[i].order) <
                                                            std::pair(b.jets[j].gen, b.jets[j].order))) {
            out.jets.push_back(a.jets[i++]);
        } else if (i == a.jets.size() || std::pair(b.jets[j].gen, b.jets[j].order) <
                                              std::pair(a.jets[i].gen, a.jets[i].order)) {
            out.jets.push_back(b.jets[j++]);
        } else {
            if (gs[a.jets[i].gen].odd) return 0;
            int e = a.jets[i].exp + b.jets[j].exp;
            if (e != 0) out.jets.push_back({a.jets[i].gen, a.jets[i].order, e});
            ++i;
            ++j;
        }
    }
    out.extra.resize(a.extra.size());
    const auto& ps = sig.parameters();
    for (size_t k = 0; k < a.extra.size(); ++k) out.extra[k] = a.extra[k] + b.extra[k];
    for (size_t p = 0; p < ps.size(); ++p) {
        int e = out.extra[sig.param_slot(static_cast<int>(p))];
        if (ps[p].odd ? e >= 2 : e >= ps[p].nilpotency) return 0;
    }
    // Koszul sign: count pairs (s in a, t in b), both odd, with s after t.
    thread_local std::vector<OddKey> ka, kb;
    odd_keys(sig, a, ka);
    if (ka.empty()) return 1;
    odd_keys(sig, b, kb);
    int inversions = 0;
    size_t p = 0;
    for (const auto& t : kb) {
        while (p < ka.size() && ka[p] < t) ++p;
        inversions += static_cast<int>(ka.size() - p);
    }
    return (inversions & 1) ? -1 : 1;
}

void normalize_units(const AlgebraSignature& sig, Element::Terms& terms) {
    if (!sig.has_units()) return;
    const int nu = static_cast<int>(sig.units().size());
    auto reducible = [&](const Monomial& m) -> int {
        for (int u = 0; u < nu; ++u) {
            if (m.extra[sig.unit_slot(u)] <= 0) continue;
            const auto& lead = sig.unit_leading(u);
            bool divides = true;
            for (size_t g = 0; g < lead.size() && divides; ++g) {
                if (lead[g] == 0) continue;
                auto it = std::find_if(m.jets.begin(), m.jets.end(),
                                       [&](const JetFactor& f) { return f.gen == static_cast<int>(g) && f.order == 0; });
                if (it == m.jets.end() || it->exp < lead[g]) divides = false;
            }
            if (divides) return u;
        }
        return -1;
    };
    bool any = false;
    for (const auto& [m, c] : terms)
        if (reducible(m) >= 0) {
            any = true;
            break;
        }
    if (!any) return;

    std::deque<std::pair<Monomial, Rational>> queue;
    Element::Terms done;
    for (auto& [m, c] : terms) queue.emplace_back(m, c);
    terms.clear();
    auto add = [&](Element::Terms& into, const Monomial& m, const Rational& c) {
        auto [it, ins] = into.try_emplace(m, c);
        if (!ins) {
            it->second += c;
            if (it->second == 0) into.erase(it);
        }
    };
    auto set_jet = [](Monomial& m, int gen, int delta) {
        auto it = std::find_if(m.jets.begin(), m.jets.end(),
                               [&](const JetFactor& f) { return f.gen == gen && f.order == 0; });
        if (it != m.jets.end()) {
            it->exp += delta;
            if (it->exp == 0) m.jets.erase(it);
            return;
        }
        JetFactor f{gen, 0, delta};
        auto pos = std::lower_bound(m.jets.begin(), m.jets.end(), f, [](const JetFactor& x, const JetFactor& y) {
            return std::pair(x.gen, x.order) < std::pair(y.gen, y.order);
        });
        m.jets.insert(pos, f);
    };
    while (!queue.empty()) {
        auto [m, c] = std::move(queue.front());
        queue.pop_front();
        int u = reducible(m);
        if (u < 0) {
            add(done, m, c);
            continue;
        }
        // m = unit * LM * r  ->  (r - unit * tail * r) / lc
        Monomial r = m;
        r.extra[sig.unit_slot(u)] -= 1;
        const auto& lead = sig.unit_leading(u);
        for (size_t g = 0; g < lead.size(); ++g)
            if (lead[g]) set_jet(r, static_cast<int>(g), -lead[g]);
        const Rational& lc = sig.unit_leading_coeff(u);
        queue.emplace_back(r, c / lc);
        std::map<std::vector<int>, Rational> tail;
        for (const auto& t : sig.units()[u].poly) {
            std::vector<int> e(sig.num_generators(), 0);
            for (auto [g, k] : t.powers) e[g] += k;
            tail[e] += t.coeff;
        }
        for (const auto& [e, tc] : tail) {
            if (tc == 0 || e == lead) continue;
            Monomial n = r;
            n.extra[sig.unit_slot(u)] += 1;
            for (size_t g = 0; g < e.size(); ++g)
                if (e[g]) set_jet(n, static_cast<int>(g), e[g]);
            queue.emplace_back(std::move(n), -c * tc / lc);
        }
    }
    terms = std::move(done);
}

Element operator*(const Element& a, const Element& b) {
    require_same_signature(a.sig_, b.sig_);
    const SigPtr& sig = a.sig_ ? a.sig_ : b.sig_;
    Element r(sig);
    if (a.is_zero() || b.is_zero()) return r;
    Monomial out;
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) {
            int s = multiply_monomials(*sig, ma, mb, out);
            if (s == 0) continue;
            r.add_term(out, s > 0 ? Rational(ca * cb) : Rational(-ca * cb));
        }
    normalize_units(*sig, r.terms_);
    return r;
}

Element pow(const Element& a, int k) {
    if (k < 0) throw VertexError("negative power of an element");
    Element r = Element::constant(a.signature(), 1);
    for (int i = 0; i < k; ++i) r = r * a;
    return r;
}

Element Element::rebase(const SigPtr& target) const {
    if (!sig_ || sig_ == target) {
        Element r = *this;
        r.sig_ = target;
        return r;
    }
    const auto& s = *sig_;
    std::vector<int> gmap(s.num_generators());
    for (int g = 0; g < s.num_generators(); ++g) {
        gmap[g] = target->find_generator(s.generators()[g].name);
        if (gmap[g] < 0) gmap[g] = -1;
    }
    Element r(target);
    for (const auto& [m, c] : terms_) {
        Element term = Element::constant(target, c);
        for (const auto& f : m.jets) {
            if (gmap[f.gen] < 0)
                throw SignatureMismatch("generator '" + s.generators()[f.gen].name + "' missing in target signature");
            Element v = f.exp < 0 ? Element::inverse(target, gmap[f.gen]) : Element::jet(target, gmap[f.gen], f.order);
            term = term * pow(v, std::abs(f.exp));
        }
        // Extras go on the left so that odd parameters keep their canonical position.
        Element left = Element::constant(target, 1);
        for (size_t p = 0; p < s.parameters().size(); ++p) {
            int e = m.extra[s.param_slot(static_cast<int>(p))];
            if (!e) continue;
            int t = target->find_parameter(s.parameters()[p].name);
            if (t < 0) throw SignatureMismatch("parameter '" + s.parameters()[p].name + "' missing in target");
            left = left * pow(Element::parameter(target, t), e);
        }
        for (size_t b = 0; b < s.base_variables().size(); ++b) {
            int e = m.extra[s.base_slot(static_cast<int>(b))];
            if (!e) continue;
            int t = target->find_base(s.base_variables()[b]);
            if (t < 0) throw SignatureMismatch("base variable '" + s.base_variables()[b] + "' missing in target");
            left = left * pow(Element::base(target, t), e);
        }
        for (size_t u = 0; u < s.units().size(); ++u) {
            int e = m.extra[s.unit_slot(static_cast<int>(u))];
            if (!e) continue;
            int t = target->find_unit(s.units()[u].name);
            if (t < 0) throw SignatureMismatch("unit '" + s.units()[u].name + "' missing in target");
            left = left * pow(Element::unit(target, t), e);
        }
        r += left * term;
    }
    return r;
}

std::string monomial_to_string(const AlgebraSignature& sig, const Monomial& m) {
    std::vector<std::string> parts;
    auto with_exp = [](std::string s, int e) { return e == 1 ? s : s + "^" + std::to_string(e); };
    for (size_t p = 0; p < sig.parameters().size(); ++p) {
        int e = m.extra[sig.param_slot(static_cast<int>(p))];
        if (e) parts.push_back(with_exp(sig.parameters()[p].name, e));
    }
    for (const auto& f : m.jets) {
        const auto& name = sig.generators()[f.gen].name;
        if (f.exp < 0) {
            parts.push_back(with_exp("inv(" + name + ")", -f.exp));
            continue;
        }
        std::string s = name;
        if (f.order == 1) s += "'";
        if (f.order >= 2) s += "'(" + std::to_string(f.order) + ")";
        parts.push_back(with_exp(s, f.exp));
    }
    for (size_t b = 0; b < sig.base_variables().size(); ++b) {
        int e = m.extra[sig.base_slot(static_cast<int>(b))];
        if (e) parts.push_back(with_exp(sig.base_variables()[b], e));
    }
    for (size_t u = 0; u < sig.units().size(); ++u) {
        int e = m.extra[sig.unit_slot(static_cast<int>(u))];
        if (e) parts.push_back(with_exp(sig.units()[u].name, e));
    }
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += "*";
        out += parts[i];
    }
    return out;
}

std::string to_string(const Element& a) {
    if (a.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : a.terms()) {
        std::string mono = monomial_to_string(*a.signature(), m);
        Rational mag = abs(c);
        std::string body;
        if (mono.empty()) body = to_string(mag);
        else if (mag == 1) body = mono;
        else body = to_string(mag) + "*" + mono;
        if (first) out = (c < 0 ? "-" : "") + body;
        else out += (c < 0 ? " - " : " + ") + body;
        first = false;
    }
    return out;
}

}  // namespace vertex
