#include "vertex/geometry.hpp"

#include <algorithm>

namespace vertex {

Svdo canonical_svdo(int n) {
    if (n < 1) throw VertexError("canonical_svdo needs n >= 1");
    std::vector<GeneratorSpec> coords;
    std::vector<std::string> momenta;
    for (int i = 1; i <= n; ++i) {
        coords.push_back({"x" + std::to_string(i), false, 0, false});
        momenta.push_back("p" + std::to_string(i));
    }
    return canonical_svdo(coords, momenta);
}

Svdo canonical_svdo(const std::vector<GeneratorSpec>& coordinates, const std::vector<std::string>& momenta,
                    const std::vector<UnitSpec>& units, const std::vector<std::string>& base,
                    const std::vector<ParameterSpec>& params) {
    if (coordinates.size() != momenta.size()) throw VertexError("coordinates and momenta differ in number");
    std::vector<GeneratorSpec> gens = coordinates;
    for (const auto& g : coordinates)
        if (g.odd || g.weight != 0) throw VertexError("coordinates must be even of weight 0");
    for (const auto& p : momenta) gens.push_back({p, false, 1, false});
    SigPtr sig = AlgebraSignature::make(gens, base, params, units);
    const int n = static_cast<int>(coordinates.size());
    BracketTable table(sig);
    Svdo S;
    for (int i = 0; i < n; ++i) {
        S.x.push_back(i);
        S.p.push_back(n + i);
        table.set(n + i, i, LambdaPolynomial::constant(Element::constant(sig, 1)));
    }
    S.pva = Pva(std::move(table));
    return S;
}

// ---------------------------------------------------------------- TargetForm

namespace {

// Sorts indices; returns the permutation sign, or 0 on a repeated index.
int sort_with_sign(std::vector<int>& idx) {
    int sign = 1;
    for (size_t i = 0; i < idx.size(); ++i)
        for (size_t j = 0; j + 1 < idx.size() - i; ++j)
            if (idx[j] > idx[j + 1]) {
                std::swap(idx[j], idx[j + 1]);
                sign = -sign;
            }
    for (size_t i = 1; i < idx.size(); ++i)
        if (idx[i] == idx[i - 1]) return 0;
    return sign;
}

}  // namespace

void TargetForm::add(std::vector<int> indices, const Element& coeff) {
    if (static_cast<int>(indices.size()) != degree_) throw VertexError("form component of the wrong degree");
    if (coeff.is_zero()) return;
    require_same_signature(sig_, coeff.signature());
    int s = sort_with_sign(indices);
    if (s == 0) return;
    auto [it, inserted] = comps_.try_emplace(indices, sig_);
    if (s > 0) it->second += coeff;
    else it->second -= coeff;
    if (it->second.is_zero()) comps_.erase(it);
}

Element TargetForm::component(const std::vector<int>& indices) const {
    std::vector<int> idx = indices;
    int s = sort_with_sign(idx);
    if (s == 0) return Element(sig_);
    auto it = comps_.find(idx);
    if (it == comps_.end()) return Element(sig_);
    return s > 0 ? it->second : -it->second;
}

TargetForm& TargetForm::operator+=(const TargetForm& o) {
    if (o.degree_ != degree_) throw VertexError("adding forms of different degrees");
    for (const auto& [i, c] : o.comps_) add(i, c);
    return *this;
}

TargetForm TargetForm::operator-() const { return Rational(-1) * *this; }

TargetForm operator*(const Rational& c, const TargetForm& f) {
    TargetForm r(f.sig_, f.degree_);
    for (const auto& [i, e] : f.comps_) r.add(i, c * e);
    return r;
}

bool TargetForm::operator==(const TargetForm& o) const {
    if (degree_ != o.degree_ || comps_.size() != o.comps_.size()) return false;
    for (const auto& [i, e] : comps_) {
        auto it = o.comps_.find(i);
        if (it == o.comps_.end() || !(it->second == e)) return false;
    }
    return true;
}

std::string to_string(const TargetForm& f, const Svdo&) {
    if (f.is_zero()) return "0*dx()";
    std::string out;
    for (const auto& [idx, c] : f.components()) {
        std::string d = "dx(";
        for (size_t i = 0; i < idx.size(); ++i) d += (i ? "," : "") + std::to_string(idx[i] + 1);
        d += ")";
        if (!out.empty()) out += " + ";
        out += "(" + to_string(c) + ")*" + d;
    }
    return out;
}

TargetForm de_rham(const Svdo& S, const TargetForm& w) {
    TargetForm r(w.signature() ? w.signature() : S.signature(), w.degree() + 1);
    for (const auto& [idx, c] : w.components())
        for (int k = 0; k < S.dim(); ++k) {
            Element d = partial(c, {S.x[k], 0});
            if (d.is_zero()) continue;
            std::vector<int> i2{k};
            i2.insert(i2.end(), idx.begin(), idx.end());
            r.add(i2, d);
        }
    return r;
}

bool is_closed(const Svdo& S, const TargetForm& w) { return de_rham(S, w).is_zero(); }

// ---------------------------------------------------------------- Courant layer

namespace {

bool is_function(const Svdo& S, const Element& e) {
    for (const auto& [m, c] : e.terms())
        for (const auto& f : m.jets)
            if (f.order != 0 || std::find(S.x.begin(), S.x.end(), f.gen) == S.x.end()) return false;
    return true;
}

}  // namespace

CourantSection decompose(const Svdo& S, const Element& e) {
    CourantSection c;
    for (int i = 0; i < S.dim(); ++i) {
        c.vector_part.push_back(partial(e, {S.p[i], 0}));
        c.form_part.push_back(partial(e, {S.x[i], 1}));
        if (!is_function(S, c.vector_part.back()) || !is_function(S, c.form_part.back()))
            throw VertexError("not a weight-1 Courant section: coefficients must be functions of the coordinates");
    }
    if (!(compose(S, c) == e)) throw VertexError("not a weight-1 Courant section: " + to_string(e));
    return c;
}

Element compose(const Svdo& S, const CourantSection& c) {
    Element r(S.signature());
    for (int i = 0; i < S.dim(); ++i) {
        if (i < static_cast<int>(c.vector_part.size())) {
            if (!is_function(S, c.vector_part[i])) throw VertexError("Courant section coefficient is not a function");
            r += c.vector_part[i] * S.momentum(i);
        }
        if (i < static_cast<int>(c.form_part.size())) {
            if (!is_function(S, c.form_part[i])) throw VertexError("Courant section coefficient is not a function");
            r += c.form_part[i] * S.coordinate(i, 1);
        }
    }
    return r;
}

CourantSection dorfman(const Svdo& S, const CourantSection& a, const CourantSection& b) {
    return decompose(S, nth_product(S.pva, compose(S, a), compose(S, b), 0));
}

Element pairing(const Svdo& S, const CourantSection& a, const CourantSection& b) {
    return nth_product(S.pva, compose(S, a), compose(S, b), 1);
}

// ---------------------------------------------------------------- twists and shears

Svdo h_twist(const Svdo& S, const TargetForm& H) {
    if (H.degree() != 3) throw VertexError("h_twist needs a 3-form");
    const SigPtr& sig = S.signature();
    BracketTable table = S.pva.table();
    for (int i = 0; i < S.dim(); ++i)
        for (int j = 0; j < S.dim(); ++j) {
            if (i == j) continue;
            Element extra(sig);
            for (int k = 0; k < S.dim(); ++k) {
                Element h = H.component({i, j, k});
                if (!h.is_zero()) extra += h * S.coordinate(k, 1);
            }
            if (extra.is_zero()) continue;
            LambdaPolynomial entry = S.pva.generator_bracket(S.p[i], S.p[j]);
            entry.add(0, extra);
            table.set(S.p[i], S.p[j], entry);
        }
    Svdo R = S;
    R.pva = Pva(std::move(table)).with_twist(S.pva.twist_rates());
    return R;
}

Substitution shear_map(const Svdo& S, const TargetForm& alpha) {
    if (alpha.degree() != 2) throw VertexError("shear needs a 2-form");
    Substitution F(S.signature(), S.signature());
    for (int i = 0; i < S.dim(); ++i) {
        Element img = S.momentum(i);
        for (int j = 0; j < S.dim(); ++j) {
            Element a = alpha.component({i, j});
            if (!a.is_zero()) img += a * S.coordinate(j, 1);
        }
        F.set_generator(S.p[i], img);
    }
    return F;
}

LambdaPolynomial apply(const Substitution& F, const LambdaPolynomial& p) {
    LambdaPolynomial r(F.target());
    for (int n = 0; n <= p.degree(); ++n) r.add(n, F.apply(p.coeff(n)));
    return r;
}

bool intertwines(const Substitution& F, const Pva& source, const Pva& target) {
    const int ng = source.signature()->num_generators();
    for (int u = 0; u < ng; ++u)
        for (int v = 0; v < ng; ++v) {
            LambdaPolynomial lhs = apply(F, source.generator_bracket(u, v));
            LambdaPolynomial rhs = lambda_bracket(target, F.image(u), F.image(v));
            if (!(lhs == rhs)) return false;
        }
    return true;
}

ShearReport b_field_shear(const Svdo& S, const TargetForm& alpha) {
    ShearReport rep{shear_map(S, alpha), false, TargetForm(S.signature(), 3)};
    rep.automorphism = intertwines(rep.map, S.pva, S.pva);
    for (int i = 0; i < S.dim(); ++i)
        for (int j = i + 1; j < S.dim(); ++j) {
            Element disc = lambda_bracket(S.pva, rep.map.image(S.p[i]), rep.map.image(S.p[j])).coeff(0) -
                           rep.map.apply(S.pva.generator_bracket(S.p[i], S.p[j]).coeff(0));
            for (int k = j + 1; k < S.dim(); ++k) rep.discrepancy.add({i, j, k}, partial(disc, {S.x[k], 1}));
        }
    return rep;
}

Substitution compose(const Substitution& F, const Substitution& G) {
    Substitution R(G.source(), F.target());
    for (int g = 0; g < G.source()->num_generators(); ++g) R.set_generator(g, F.apply(G.image(g)));
    return R;
}

bool is_identity_on_generators(const Substitution& F) {
    for (int g = 0; g < F.source()->num_generators(); ++g)
        if (!(F.image(g) == Element::jet(F.target(), F.source()->generators()[g].name))) return false;
    return true;
}

}  // namespace vertex
