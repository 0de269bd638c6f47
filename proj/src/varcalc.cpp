#include "vertex/varcalc.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <tuple>

namespace vertex {

namespace {

std::string jet_name(const std::string& field, int a) { return a == 0 ? field : field + "_t" + std::to_string(a); }

bool is_constant(const Element& e) {
    for (const auto& [m, c] : e.terms())
        if (!m.jets.empty() || std::any_of(m.extra.begin(), m.extra.end(), [](int32_t k) { return k != 0; }))
            return false;
    return true;
}

// Terms of w carrying exactly dtau^a dsigma^b, with those factors removed (they lead every monomial).
Element horizontal_coefficient(const JetSpace& J, const Element& w, int a, int b) {
    const SigPtr& sig = J.signature();
    int st = sig->param_slot(sig->find_parameter("dtau")), ss = sig->param_slot(sig->find_parameter("dsigma"));
    Element r(sig);
    for (const auto& [m, c] : w.terms()) {
        if (m.extra[st] != a || m.extra[ss] != b) continue;
        Monomial k = m;
        k.extra[st] = 0;
        k.extra[ss] = 0;
        r.add_term(k, c);
    }
    return r;
}

}  // namespace

// ---------------------------------------------------------------- jet space

JetSpace::JetSpace(std::vector<std::string> fields, int tau_cap) : fields_(std::move(fields)), tau_cap_(tau_cap) {
    if (fields_.empty()) throw VertexError("jet space needs at least one field");
    if (tau_cap_ < 2) throw VertexError("tau cap must be at least 2");
    std::vector<GeneratorSpec> gens;
    for (bool vertical : {false, true})
        for (int j = 0; j < num_fields(); ++j)
            for (int a = 0; a <= tau_cap_; ++a) {
                gens.push_back({(vertical ? "d" : "") + jet_name(fields_[j], a), vertical, 0, false});
                info_.push_back({j, a, vertical});
            }
    sig_ = AlgebraSignature::make(gens, {"tau", "sigma"}, {{"dtau", true, 2}, {"dsigma", true, 2}});
}

int JetSpace::generator(int field, int tau_order, bool vertical) const {
    if (field < 0 || field >= num_fields()) throw VertexError("field index out of range");
    if (tau_order < 0 || tau_order > tau_cap_)
        throw VertexError("tau order " + std::to_string(tau_order) + " exceeds the jet space cap");
    return (vertical ? num_fields() * (tau_cap_ + 1) : 0) + field * (tau_cap_ + 1) + tau_order;
}

Element JetSpace::x(int field, int a, int m) const { return Element::jet(sig_, generator(field, a, false), m); }
Element JetSpace::dx(int field, int a, int m) const { return Element::jet(sig_, generator(field, a, true), m); }
Element JetSpace::tau() const { return Element::base(sig_, "tau"); }
Element JetSpace::sigma() const { return Element::base(sig_, "sigma"); }
Element JetSpace::dtau() const { return Element::parameter(sig_, "dtau"); }
Element JetSpace::dsigma() const { return Element::parameter(sig_, "dsigma"); }

// ---------------------------------------------------------------- differentials

Element total_d_tau(const JetSpace& J, const Element& a) {
    const int tau = J.signature()->find_base("tau");
    return apply_derivation(
        a,
        [&](JetVar v) {
            auto in = J.info(v.gen);
            return Element::jet(J.signature(), J.generator(in.field, in.tau_order + 1, in.vertical), v.order);
        },
        [&](int b) { return b == tau ? J.constant(1) : Element(J.signature()); });
}

Element total_d_sigma(const JetSpace& J, const Element& a) {
    return T(a) + base_partial(a, J.signature()->find_base("sigma"));
}

Element d_rho(const JetSpace& J, const Element& w) {
    return J.dtau() * total_d_tau(J, w) + J.dsigma() * total_d_sigma(J, w);
}

Element delta(const JetSpace& J, const Element& w) {
    return apply_derivation(w, [&](JetVar v) {
        auto in = J.info(v.gen);
        if (in.vertical) return Element(J.signature());
        return Element::jet(J.signature(), J.generator(in.field, in.tau_order, true), v.order);
    });
}

std::optional<std::pair<int, int>> bidegree(const JetSpace& J, const Element& w) {
    const SigPtr& sig = J.signature();
    int st = sig->param_slot(sig->find_parameter("dtau")), ss = sig->param_slot(sig->find_parameter("dsigma"));
    std::optional<std::pair<int, int>> out;
    for (const auto& [m, c] : w.terms()) {
        int v = 0;
        for (const auto& f : m.jets)
            if (J.info(f.gen).vertical) v += f.exp;
        std::pair<int, int> d{m.extra[st] + m.extra[ss], v};
        if (out && *out != d) return std::nullopt;
        out = d;
    }
    return out;
}

namespace {

// D_tau^a D_sigma^m F_j, cached per call.
class ProlongedCharacteristic {
public:
    ProlongedCharacteristic(const JetSpace& J, const Characteristic& F) : J_(J), F_(F) {
        if (static_cast<int>(F.size()) != J.num_fields()) throw VertexError("characteristic has the wrong number of fields");
    }
    const Element& operator()(int field, int a, int m) {
        auto key = std::make_tuple(field, a, m);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        Element e;
        if (a == 0 && m == 0) e = F_[field].is_zero() ? Element(J_.signature()) : F_[field].rebase(J_.signature());
        else if (m > 0) e = total_d_sigma(J_, (*this)(field, a, m - 1));
        else e = total_d_tau(J_, (*this)(field, a - 1, 0));
        return cache_.emplace(key, std::move(e)).first->second;
    }

private:
    const JetSpace& J_;
    const Characteristic& F_;
    std::map<std::tuple<int, int, int>, Element> cache_;
};

}  // namespace

Element prolong(const JetSpace& J, const Characteristic& F, const Element& g) {
    ProlongedCharacteristic pr(J, F);
    return apply_derivation(g, [&](JetVar v) {
        auto in = J.info(v.gen);
        return in.vertical ? Element(J.signature()) : pr(in.field, in.tau_order, v.order);
    });
}

Element iota(const JetSpace& J, const Characteristic& F, const Element& w) {
    ProlongedCharacteristic pr(J, F);
    return apply_derivation(w, [&](JetVar v) {
        auto in = J.info(v.gen);
        return in.vertical ? pr(in.field, in.tau_order, v.order) : Element(J.signature());
    });
}

Element lie_derivative(const JetSpace& J, const Characteristic& F, const Element& w) {
    return iota(J, F, delta(J, w)) + delta(J, iota(J, F, w));
}

// ---------------------------------------------------------------- Lagrangians

Element volume(const JetSpace& J, Orientation o) {
    return o == Orientation::TauSigma ? J.dtau() * J.dsigma() : J.dsigma() * J.dtau();
}

Element as_form(const JetSpace& J, const Lagrangian& L) { return L.density * volume(J, L.orientation); }

Element tau_sigma_density(const Lagrangian& L) {
    return L.orientation == Orientation::TauSigma ? L.density : -L.density;
}

bool is_first_order(const JetSpace& J, const Element& density) {
    if (density.is_zero()) return true;
    if (bidegree(J, density) != std::pair{0, 0}) return false;
    for (const auto& [m, c] : density.terms())
        for (const auto& f : m.jets)
            if (J.info(f.gen).tau_order + f.order > 1) return false;
    return true;
}

EulerLagrangeResult euler_lagrange(const JetSpace& J, const Lagrangian& L) {
    if (!is_first_order(J, L.density)) throw VertexError("euler_lagrange needs a first-order Lagrangian density");
    const SigPtr& sig = J.signature();
    Element Lt = tau_sigma_density(L).rebase(sig);
    EulerLagrangeResult r{Element(sig), {}};
    for (int j = 0; j < J.num_fields(); ++j) {
        Element A = partial(Lt, {J.generator(j, 1, false), 0});
        Element B = partial(Lt, {J.generator(j, 0, false), 1});
        Element C = partial(Lt, {J.generator(j, 0, false), 0});
        Element E = C - total_d_tau(J, A) - total_d_sigma(J, B);
        r.euler.push_back(L.orientation == Orientation::TauSigma ? E : -E);
        r.gamma += A * J.dx(j) * J.dsigma() - B * J.dx(j) * J.dtau();
    }
    return r;
}

Element euler_lagrange_residual(const JetSpace& J, const Lagrangian& L, const EulerLagrangeResult& el) {
    Element r = delta(J, as_form(J, L)) + d_rho(J, el.gamma);
    Element vol = volume(J, L.orientation);
    for (int j = 0; j < J.num_fields(); ++j) r -= el.euler[j] * J.dx(j) * vol;
    return r;
}

bool verify_symmetry(const JetSpace& J, const Characteristic& F, const Lagrangian& L, const Element& alpha) {
    return lie_derivative(J, F, as_form(J, L)) == d_rho(J, alpha);
}

Element noether(const JetSpace& J, const Characteristic& F, const Element& alpha, const Element& gamma) {
    return alpha - iota(J, F, gamma);
}

// ---------------------------------------------------------------- on-shell reduction

namespace {

RationalMatrix velocity_hessian(const JetSpace& J, const Element& Lt) {
    const int n = J.num_fields();
    RationalMatrix M(n, std::vector<Rational>(n));
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            Element h = partial(partial(Lt, {J.generator(j, 1, false), 0}), {J.generator(k, 1, false), 0});
            if (!is_constant(h)) throw VertexError("the velocity Hessian must be constant");
            M[j][k] = h.constant_term();
        }
    return M;
}

}  // namespace

OnShell::OnShell(const JetSpace& J, const Lagrangian& L) : J_(&J) {
    const SigPtr& sig = J.signature();
    Element Lt = tau_sigma_density(L).rebase(sig);
    RationalMatrix M = velocity_hessian(J, Lt);
    auto Minv = inverse(M);
    if (!Minv) throw VertexError("non-invertible fiber metric");
    EulerLagrangeResult el = euler_lagrange(J, L);
    const int n = J.num_fields();
    // E'_j = rest_j - sum_k M_jk x^k_(2,0) relative to dtau dsigma
    std::vector<Element> rest;
    for (int j = 0; j < n; ++j) {
        Element E = L.orientation == Orientation::TauSigma ? el.euler[j] : -el.euler[j];
        for (int k = 0; k < n; ++k) E += M[j][k] * J.x(k, 2);
        rest.push_back(E);
    }
    for (int k = 0; k < n; ++k) {
        Element a(sig);
        for (int j = 0; j < n; ++j) a += (*Minv)[k][j] * rest[j];
        accel_.push_back(a);
    }
}

Element OnShell::reduce(const Element& a) const {
    const JetSpace& J = *J_;
    const SigPtr& sig = J.signature();
    Element cur = a.rebase(sig);
    for (;;) {
        Substitution S(sig, sig);
        bool any = false;
        for (const auto& [m, c] : cur.terms())
            for (const auto& f : m.jets) {
                auto in = J.info(f.gen);
                if (in.vertical || in.tau_order < 2) continue;
                Element img = accel_[in.field];
                for (int i = 2; i < in.tau_order; ++i) img = total_d_tau(J, img);
                for (int i = 0; i < f.order; ++i) img = total_d_sigma(J, img);
                S.set_jet({f.gen, f.order}, img);
                any = true;
            }
        if (!any) return cur;
        cur = S.apply(cur);
    }
}

ConservationReport check_conservation(const JetSpace& J, const Lagrangian& L, const Element& F) {
    auto deg = bidegree(J, F);
    if (!F.is_zero() && deg != std::pair{1, 0}) throw VertexError("conservation check needs a (1,0)-form");
    Element w = d_rho(J, F);
    Element c = horizontal_coefficient(J, w, 1, 1);
    OnShell shell(J, L);
    ConservationReport r;
    r.residue = shell.reduce(c);
    r.conserved = r.residue.is_zero();
    return r;
}

// ---------------------------------------------------------------- Legendre transform

namespace {

std::string momentum_name(const std::string& field) {
    if (field.size() > 1 && field[0] == 'x' &&
        std::all_of(field.begin() + 1, field.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }))
        return "p" + field.substr(1);
    return "p_" + field;
}

}  // namespace

Legendre::Legendre(const JetSpace& J, const Lagrangian& L) : J_(&J), L_(L), on_shell_(J, L) {
    const SigPtr& sig = J.signature();
    const int n = J.num_fields();
    Element Lt = tau_sigma_density(L).rebase(sig);
    hessian_ = velocity_hessian(J, Lt);
    auto Minv = inverse(hessian_);
    if (!Minv) throw VertexError("non-invertible fiber metric");

    std::vector<GeneratorSpec> coords;
    std::vector<std::string> mom;
    for (const auto& f : J.fields()) {
        coords.push_back({f, false, 0, false});
        mom.push_back(momentum_name(f));
    }
    Svdo S = canonical_svdo(coords, mom);
    target_ = Svdo{adjoin_functions(S.pva), S.x, S.p};

    std::vector<Element> offset;
    for (int j = 0; j < n; ++j) {
        Element A = partial(Lt, {J.generator(j, 1, false), 0});
        momenta_.push_back(A);
        Element b = A;
        for (int k = 0; k < n; ++k) b -= hessian_[j][k] * J.x(k, 1);
        offset.push_back(b);
    }
    // velocities are needed before push_function can see tau-order 1; offsets only use order 0
    for (int k = 0; k < n; ++k) velocity_.push_back(Element(target_.signature()));
    std::vector<Element> pushed;
    for (int j = 0; j < n; ++j) pushed.push_back(push_function(offset[j]));
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            velocity_[k] += (*Minv)[k][j] * (target_.momentum(j) - pushed[j]);
}

Element Legendre::push_function(const Element& f) const {
    const JetSpace& J = *J_;
    const SigPtr& sig = J.signature();
    Element g = on_shell_.reduce(f);
    if (bidegree(J, g).value_or(std::pair{0, 0}) != std::pair{0, 0})
        throw VertexError("legendre push expects a function (no form factors)");
    Substitution S(sig, target_.signature());
    const Pva& P = target_.pva;
    for (const auto& [m, c] : g.terms())
        for (const auto& f2 : m.jets) {
            auto in = J.info(f2.gen);
            Element img = in.tau_order == 0 ? target_.coordinate(in.field) : velocity_[in.field];
            for (int i = 0; i < f2.order; ++i) img = P.derivation(img);
            S.set_jet({f2.gen, f2.order}, img);
        }
    S.set_base(sig->find_base("tau"), Element(target_.signature()));
    return S.apply(g);
}

Element Legendre::push(const Element& form) const {
    const JetSpace& J = *J_;
    auto deg = bidegree(J, form);
    if (!form.is_zero() && deg != std::pair{1, 0}) throw VertexError("legendre push expects a (1,0)-form");
    return push_function(horizontal_coefficient(J, form.rebase(J.signature()), 0, 1));
}

// ---------------------------------------------------------------- presets

SigmaModel sigma_flat(int n, const RationalMatrix& metric) {
    if (n < 1) throw VertexError("sigma model needs n >= 1");
    RationalMatrix g = metric;
    if (g.empty()) {
        g.assign(n, std::vector<Rational>(n));
        for (int i = 0; i < n; ++i) g[i][i] = 1;
    }
    if (static_cast<int>(g.size()) != n) throw VertexError("metric has the wrong size");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (static_cast<int>(g[i].size()) != n || g[i][j] != g[j][i]) throw VertexError("metric must be symmetric");
    std::vector<std::string> fields;
    for (int i = 1; i <= n; ++i) fields.push_back("x" + std::to_string(i));
    JetSpace J(fields);
    Element L(J.signature());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (g[i][j] != 0) L += Rational(g[i][j] / 2) * (J.x(i, 0, 1) * J.x(j, 0, 1) - J.x(i, 1) * J.x(j, 1));
    return SigmaModel{J, Lagrangian{L, Orientation::SigmaTau}, g};
}

Element light_cone_function(const JetSpace& J, const std::vector<Rational>& f, int sign) {
    Element s = J.sigma() + Rational(sign) * J.tau();
    Element r(J.signature()), power = J.constant(1);
    for (const auto& c : f) {
        r += c * power;
        power = power * s;
    }
    return r;
}

namespace {

Element metric_square(const SigmaModel& M, int a1, int m1, int a2, int m2) {
    const JetSpace& J = M.space;
    Element r(J.signature());
    for (int i = 0; i < J.num_fields(); ++i)
        for (int j = 0; j < J.num_fields(); ++j)
            if (M.metric[i][j] != 0) r += M.metric[i][j] * J.x(i, a1, m1) * J.x(j, a2, m2);
    return r;
}

Symmetry light_cone_symmetry(const SigmaModel& M, const std::vector<Rational>& f, int sign) {
    const JetSpace& J = M.space;
    Element fs = light_cone_function(J, f, sign);
    Symmetry s;
    for (int j = 0; j < J.num_fields(); ++j)
        s.characteristic.push_back(Rational(1, 2) * fs * (J.x(j, 0, 1) + Rational(sign) * J.x(j, 1)));
    // (d_sigma - d_tau) x . (d_sigma + d_tau) x
    Element q = metric_square(M, 0, 1, 0, 1) - metric_square(M, 1, 0, 1, 0);
    if (sign < 0) s.alpha = Rational(1, 4) * fs * q * (J.dsigma() + J.dtau());
    else s.alpha = Rational(-1, 4) * fs * q * (J.dsigma() - J.dtau());
    return s;
}

}  // namespace

Symmetry sigma_xi_minus(const SigmaModel& M, const std::vector<Rational>& f) { return light_cone_symmetry(M, f, -1); }
Symmetry sigma_xi_plus(const SigmaModel& M, const std::vector<Rational>& f) { return light_cone_symmetry(M, f, 1); }

Symmetry time_translation(const JetSpace& J, const Lagrangian& L) {
    Symmetry s;
    for (int j = 0; j < J.num_fields(); ++j) s.characteristic.push_back(J.x(j, 1));
    s.alpha = tau_sigma_density(L).rebase(J.signature()) * J.dsigma();
    return s;
}

}  // namespace vertex
