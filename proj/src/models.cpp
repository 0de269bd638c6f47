#include "vertex/models.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace vertex {

std::optional<std::vector<Rational>> span_coefficients(const Element& e, const std::vector<Element>& basis) {
    std::map<Monomial, size_t> rows;
    auto collect = [&](const Element& a) {
        for (const auto& [m, c] : a.terms()) rows.try_emplace(m, rows.size());
    };
    collect(e);
    for (const auto& b : basis) collect(b);
    const size_t nb = basis.size();
    RationalMatrix m(rows.size(), std::vector<Rational>(nb + 1));
    for (size_t j = 0; j < nb; ++j)
        for (const auto& [mono, c] : basis[j].terms()) m[rows.at(mono)][j] = c;
    for (const auto& [mono, c] : e.terms()) m[rows.at(mono)][nb] = c;
    row_reduce(m);
    std::vector<Rational> out(nb);
    for (const auto& row : m) {
        size_t c = 0;
        while (c <= nb && row[c] == 0) ++c;
        if (c == nb) return std::nullopt;
        if (c < nb) out[c] = row[nb];
    }
    return out;
}

namespace {

bool is_constant(const Element& e) { return e == Element::constant(e.signature(), e.constant_term()); }

}  // namespace

VirasoroCheck check_virasoro(const Pva& P, const Element& L) {
    VirasoroCheck r;
    r.bracket = lambda_bracket(P, L, L);
    if (r.bracket.degree() > 3) return r;
    Element c1 = r.bracket.coeff(1);
    if (c1 == Rational(2) * L) r.sign = 1;
    else if (c1 == Rational(-2) * L) r.sign = -1;
    else return r;
    if (!(r.bracket.coeff(0) == Rational(r.sign) * P.derivation(L))) return r;
    if (!r.bracket.coeff(2).is_zero()) return r;
    Element c3 = r.bracket.coeff(3);
    if (!is_constant(c3)) return r;
    r.central = c3.constant_term();
    r.ok = true;
    return r;
}

PrimaryCheck check_primary(const Pva& P, const Element& L, const Element& a, int sign) {
    PrimaryCheck r;
    r.bracket = lambda_bracket(P, L, a);
    if (r.bracket.degree() > 2) return r;
    if (!(r.bracket.coeff(0) == Rational(sign) * P.derivation(a))) return r;
    if (!(r.bracket.coeff(1) == Rational(sign) * a)) return r;
    Element c2 = r.bracket.coeff(2);
    if (!is_constant(c2)) return r;
    r.central = c2.constant_term();
    r.ok = true;
    return r;
}

// ---------------------------------------------------------------- sigma model

SigmaVirasoro sigma_virasoro(int n) {
    SigmaVirasoro r{canonical_svdo(n), {}, {}, {}};
    const Svdo& S = r.svdo;
    Element quad(S.signature()), cross(S.signature());
    for (int i = 0; i < n; ++i) {
        Element p = S.momentum(i), dx = S.coordinate(i, 1);
        quad += p * p + dx * dx;
        cross += p * dx;
    }
    r.plus = Rational(1, 4) * quad - Rational(1, 2) * cross;
    r.minus = Rational(-1, 4) * quad - Rational(1, 2) * cross;
    r.zero = -cross;
    return r;
}

// ---------------------------------------------------------------- WZW

Element WzwModel::inverse(int i, int j) const {
    const SigPtr& sig = svdo.signature();
    if (n == 1) return Element::inverse(sig, svdo.x[0]);
    Element u = Element::unit(sig, 0);
    if (i == 0 && j == 0) return coordinate(1, 1) * u;
    if (i == 1 && j == 1) return coordinate(0, 0) * u;
    return -(coordinate(i, j) * u);
}

TargetForm cartan_three_form(const WzwModel& M) {
    const int n = M.n;
    TargetForm w(M.svdo.signature(), 3);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int al = 0; al < n; ++al)
                    for (int be = 0; be < n; ++be)
                        for (int ga = 0; ga < n; ++ga)
                            w.add({M.index(al, b), M.index(be, c), M.index(ga, a)},
                                  M.inverse(a, al) * M.inverse(b, be) * M.inverse(c, ga));
    return w;
}

WzwModel wzw_model(int n, const Rational& k) {
    if (n != 1 && n != 2) throw VertexError("wzw models are available for gl(1) and gl(2)");
    WzwModel M;
    M.n = n;
    M.k = k;
    std::vector<GeneratorSpec> coords;
    std::vector<std::string> momenta;
    std::vector<UnitSpec> units;
    if (n == 1) {
        coords.push_back({"x", false, 0, true});
        momenta.push_back("p");
    } else {
        for (int i = 1; i <= 2; ++i)
            for (int j = 1; j <= 2; ++j) {
                std::string s = std::to_string(i) + std::to_string(j);
                coords.push_back({"x" + s, false, 0, false});
                momenta.push_back("p" + s);
            }
        // det = x11 x22 - x12 x21
        units.push_back({"idet", {{Rational(1), {{0, 1}, {3, 1}}}, {Rational(-1), {{1, 1}, {2, 1}}}}});
    }
    Svdo flat = canonical_svdo(coords, momenta, units);
    M.svdo = flat;
    // H(a, b, c) = tr([a, b] c) on left-invariant fields is tr(theta^3) / 3.
    TargetForm H = Rational(1, 3) * cartan_three_form(M);
    M.flux = (-k / 2) * H;
    M.svdo = h_twist(flat, M.flux);
    return M;
}

WzwCurrents wzw_currents(const WzwModel& M) {
    const int n = M.n;
    const Rational half_k = M.k / 2;
    WzwCurrents c;
    c.left.assign(n, std::vector<Element>(n, Element(M.svdo.signature())));
    c.right = c.left;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Element l(M.svdo.signature()), r(M.svdo.signature());
            for (int a = 0; a < n; ++a) {
                l += M.coordinate(a, i) * M.momentum(a, j) + half_k * M.inverse(j, a) * M.coordinate(a, i, 1);
                r += -(M.coordinate(j, a) * M.momentum(i, a)) + half_k * M.inverse(a, i) * M.coordinate(j, a, 1);
            }
            c.left[i][j] = l;
            c.right[i][j] = r;
        }
    return c;
}

namespace {

std::string basis_name(int i, int j) { return "E" + std::to_string(i + 1) + std::to_string(j + 1); }

}  // namespace

std::string AffineReport::summary() const {
    std::ostringstream os;
    os << (passed ? "PASS" : "FAIL") << " levels (" << left_level.get_str() << "," << right_level.get_str() << ")";
    for (const auto& f : failures) os << "\n  " << f;
    return os.str();
}

AffineReport verify_affine(const WzwModel& M) {
    const int n = M.n;
    const Pva& P = M.pva();
    WzwCurrents cur = wzw_currents(M);
    AffineReport rep;
    std::optional<Rational> level[2];
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    ++rep.pairs_checked;
                    const std::string tag = basis_name(a, b) + "," + basis_name(c, d);
                    const int g = (b == c && a == d) ? 1 : 0;
                    for (int side = 0; side < 2; ++side) {
                        const auto& J = side == 0 ? cur.left : cur.right;
                        // [E_ab, E_cd] = delta_bc E_ad - delta_da E_cb
                        Element commutator(M.svdo.signature());
                        if (b == c) commutator += J[a][d];
                        if (d == a) commutator -= J[c][b];
                        LambdaPolynomial br = lambda_bracket(P, J[a][b], J[c][d]);
                        const char* name = side == 0 ? "left" : "right";
                        if (br.degree() > 1 || !(br.coeff(0) == commutator)) {
                            rep.failures.push_back(std::string(name) + " " + tag + ": " + to_string(br));
                            continue;
                        }
                        Element c1 = br.coeff(1);
                        if (!is_constant(c1) || (g == 0 && !c1.is_zero())) {
                            rep.failures.push_back(std::string(name) + " " + tag + " central term " + to_string(c1));
                            continue;
                        }
                        if (g == 0) continue;
                        Rational lv = c1.constant_term();
                        if (!level[side]) level[side] = lv;
                        else if (*level[side] != lv)
                            rep.failures.push_back(std::string(name) + " " + tag + " inconsistent level " + lv.get_str());
                    }
                    LambdaPolynomial cross = lambda_bracket(P, cur.left[a][b], cur.right[c][d]);
                    if (!cross.is_zero()) rep.failures.push_back("cross " + tag + ": " + to_string(cross));
                }
    rep.left_level = level[0].value_or(0);
    rep.right_level = level[1].value_or(0);
    if (rep.left_level != M.k) rep.failures.push_back("left level " + rep.left_level.get_str() + " != k");
    if (rep.right_level != -M.k) rep.failures.push_back("right level " + rep.right_level.get_str() + " != -k");
    rep.passed = rep.failures.empty();
    return rep;
}

AffineReport verify_affine(int n, const Rational& k) { return verify_affine(wzw_model(n, k)); }

Element sugawara(const WzwModel& M) {
    if (M.k == 0) throw VertexError("sugawara needs k != 0");
    WzwCurrents cur = wzw_currents(M);
    Element L(M.svdo.signature());
    for (int i = 0; i < M.n; ++i)
        for (int j = 0; j < M.n; ++j) L += cur.left[i][j] * cur.left[j][i];
    return (1 / (2 * M.k)) * L;
}

SugawaraReport verify_sugawara(const WzwModel& M) {
    SugawaraReport rep;
    Element L = sugawara(M);
    WzwCurrents cur = wzw_currents(M);
    rep.virasoro = check_virasoro(M.pva(), L);
    if (!rep.virasoro.ok || rep.virasoro.sign != 1)
        rep.failures.push_back("Virasoro relation: " + to_string(rep.virasoro.bracket));
    rep.commutes_with_right = true;
    for (int i = 0; i < M.n; ++i)
        for (int j = 0; j < M.n; ++j) {
            PrimaryCheck pc = check_primary(M.pva(), L, cur.left[i][j]);
            rep.primary_central.push_back(pc.central);
            if (!pc.ok) rep.failures.push_back("primary " + basis_name(i, j) + ": " + to_string(pc.bracket));
            LambdaPolynomial r = lambda_bracket(M.pva(), L, cur.right[i][j]);
            if (!r.is_zero()) {
                rep.commutes_with_right = false;
                rep.failures.push_back("right " + basis_name(i, j) + ": " + to_string(r));
            }
        }
    rep.passed = rep.failures.empty();
    return rep;
}

// ---------------------------------------------------------------- N = 2

std::vector<ParameterSpec> default_n2_parameters() { return {{"t", false, 3}, {"eps", false, 2}, {"s", true, 2}}; }

N2Model n2_flat(int n, const RationalMatrix& metric, const std::vector<ParameterSpec>& params) {
    if (n < 1) throw VertexError("n2_flat needs n >= 1");
    N2Model M;
    M.n = n;
    if (metric.empty()) {
        M.metric.assign(n, std::vector<Rational>(n));
        for (int i = 0; i < n; ++i) M.metric[i][i] = 1;
    } else {
        M.metric = metric;
    }
    if (static_cast<int>(M.metric.size()) != n) throw VertexError("metric has the wrong size");
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(M.metric[i].size()) != n) throw VertexError("metric has the wrong size");
        for (int j = 0; j < n; ++j)
            if (M.metric[i][j] != M.metric[j][i]) throw VertexError("metric must be symmetric");
    }
    if (!inverse(M.metric)) throw VertexError("metric must be invertible");

    struct Family {
        const char* prefix;
        bool odd;
        int weight;
        std::vector<int>* slot;
    };
    std::vector<Family> families{{"x", false, 0, &M.x},    {"xb", false, 0, &M.xb},   {"p", false, 1, &M.p},
                                 {"pb", false, 1, &M.pb},  {"phi", true, 0, &M.phi},  {"phib", true, 0, &M.phib},
                                 {"psi", true, 1, &M.psi}, {"psib", true, 1, &M.psib}};
    std::vector<GeneratorSpec> gens;
    for (const auto& f : families)
        for (int i = 1; i <= n; ++i) {
            f.slot->push_back(static_cast<int>(gens.size()));
            gens.push_back({f.prefix + std::to_string(i), f.odd, f.weight, false});
        }
    SigPtr sig = AlgebraSignature::make(gens, {}, params);
    BracketTable t(sig);
    auto one = LambdaPolynomial::constant(Element::constant(sig, 1));
    for (int i = 0; i < n; ++i) {
        t.set(M.p[i], M.x[i], one);
        t.set(M.pb[i], M.xb[i], one);
        t.set(M.psi[i], M.phi[i], one);
        t.set(M.psib[i], M.phib[i], one);
    }
    M.pva = Pva(std::move(t));
    return M;
}

N2Generators n2_generators_unsheared(const N2Model& M) {
    const SigPtr& sig = M.signature();
    const RationalMatrix& g = M.metric;
    const RationalMatrix gi = *inverse(g);
    N2Generators Q{Element(sig), Element(sig), Element(sig), Element(sig)};
    for (int j = 0; j < M.n; ++j) {
        Q.mm -= M.gen(M.pb[j]) * M.gen(M.phib[j]);
        Q.mp += Rational(2) * M.gen(M.xb[j], 1) * M.gen(M.psib[j]);
        Q.pp += M.gen(M.p[j]) * M.gen(M.phi[j]);
        Q.pm -= Rational(2) * M.gen(M.x[j], 1) * M.gen(M.psi[j]);
        for (int i = 0; i < M.n; ++i) {
            Q.mm += g[i][j] * M.gen(M.x[i], 1) * M.gen(M.phib[j]);
            Q.mp -= Rational(2) * gi[j][i] * M.gen(M.p[i]) * M.gen(M.psib[j]);
            Q.pp += g[i][j] * M.gen(M.xb[j], 1) * M.gen(M.phi[i]);
            Q.pm -= Rational(2) * gi[i][j] * M.gen(M.pb[j]) * M.gen(M.psi[i]);
        }
    }
    return Q;
}

Substitution kahler_shear(const N2Model& M) {
    Substitution F(M.signature(), M.signature());
    for (int i = 0; i < M.n; ++i) {
        Element pi = M.gen(M.p[i]), pbi = M.gen(M.pb[i]);
        for (int j = 0; j < M.n; ++j) {
            pi -= M.metric[i][j] * M.gen(M.xb[j], 1);
            pbi += M.metric[j][i] * M.gen(M.x[j], 1);
        }
        F.set_generator(M.p[i], pi);
        F.set_generator(M.pb[i], pbi);
    }
    return F;
}

N2Generators n2_generators(const N2Model& M) {
    N2Generators Q = n2_generators_unsheared(M);
    Substitution F = kahler_shear(M);
    // The shear gives Q^{--} = -pb_j phib^j; the overall sign is flipped to phib^j pb_j.
    return {-F.apply(Q.mm), F.apply(Q.mp), F.apply(Q.pp), F.apply(Q.pm)};
}

std::optional<int> fermion_number(const N2Model& M, const Element& e) {
    std::optional<int> out;
    auto in = [](const std::vector<int>& v, int g) { return std::find(v.begin(), v.end(), g) != v.end(); };
    for (const auto& [m, c] : e.terms()) {
        int f = 0;
        for (const auto& j : m.jets) {
            if (in(M.phi, j.gen) || in(M.phib, j.gen)) f += j.exp;
            if (in(M.psi, j.gen) || in(M.psib, j.gen)) f -= j.exp;
        }
        if (out && *out != f) return std::nullopt;
        out = f;
    }
    return out;
}

ClosureReport n2_closure(const N2Model& M) {
    N2Generators Q = n2_generators(M);
    const Pva& P = M.pva;
    ClosureReport rep;
    LambdaPolynomial seed = lambda_bracket(P, Q.mm, Q.mp);
    rep.L = seed.coeff(0);
    rep.J = seed.coeff(1);
    const std::vector<std::pair<std::string, Element>> gens{{"L", rep.L}, {"J", rep.J}, {"Q--", Q.mm}, {"Q-+", Q.mp}};
    std::vector<Element> basis;
    for (const auto& [name, g] : gens) {
        Element d = g;
        for (int m = 0; m <= 3; ++m) {
            basis.push_back(d);
            rep.basis_names.push_back(m == 0 ? name : "T^" + std::to_string(m) + " " + name);
            d = P.derivation(d);
        }
    }
    basis.push_back(Element::constant(M.signature(), 1));
    rep.basis_names.push_back("1");
    for (const auto& [ln, a] : gens)
        for (const auto& [rn, b] : gens) {
            LambdaPolynomial br = lambda_bracket(P, a, b);
            for (int k = 0; k <= br.degree(); ++k) {
                auto coeffs = span_coefficients(br.coeff(k), basis);
                if (!coeffs) {
                    rep.failures.push_back("{" + ln + " lam " + rn + "} lam^" + std::to_string(k) + ": " +
                                           to_string(br.coeff(k)));
                    continue;
                }
                rep.entries.push_back({ln, rn, k, *coeffs});
            }
        }
    rep.closed = rep.failures.empty();
    return rep;
}

bool is_polyvector(const N2Model& M, const Element& e) {
    for (const auto& [m, c] : e.terms()) {
        for (int x : m.extra)
            if (x != 0) return false;
        for (const auto& j : m.jets) {
            bool ok = j.order == 0 && j.exp > 0 &&
                      (std::find(M.x.begin(), M.x.end(), j.gen) != M.x.end() ||
                       std::find(M.psi.begin(), M.psi.end(), j.gen) != M.psi.end());
            if (!ok) return false;
        }
    }
    return true;
}

Element schouten(const N2Model& M, const Element& a, const Element& b) {
    if (!is_polyvector(M, a) || !is_polyvector(M, b))
        throw VertexError("schouten expects holomorphic polyvectors f(x) psi_i1 ... psi_ik");
    Element q = n2_generators(M).pp;
    return nth_product(M.pva, a, nth_product(M.pva, q, b, 0), 0);
}

Element schouten_nijenhuis(const N2Model& M, const Element& a, const Element& b) {
    if (!is_polyvector(M, a) || !is_polyvector(M, b))
        throw VertexError("schouten_nijenhuis expects holomorphic polyvectors f(x) psi_i1 ... psi_ik");
    Element r(M.signature());
    for (bool odd : {false, true}) {
        Element part = a.parity_component(odd);
        if (part.is_zero()) continue;
        // right derivative by an odd variable: (-1)^{|a|+1} times the left one
        Rational sign = odd ? 1 : -1;
        for (int i = 0; i < M.n; ++i)
            r += sign * partial(part, {M.psi[i], 0}) * partial(b, {M.x[i], 0});
    }
    for (int i = 0; i < M.n; ++i) r -= partial(a, {M.x[i], 0}) * partial(b, {M.psi[i], 0});
    return r;
}

namespace {

void require_odd(const Element& gamma) {
    if (gamma.is_zero()) return;
    auto par = gamma.parity();
    if (!par || !*par) throw VertexError("Maurer-Cartan element must be odd");
}

}  // namespace

LieClass mc_residual(const N2Model& M, const Element& gamma) {
    require_odd(gamma);
    const Element q = n2_generators(M).mm;
    Element r = nth_product(M.pva, q, gamma, 0) + Rational(1, 2) * nth_product(M.pva, gamma, gamma, 0);
    return LieClass(M.pva, r);
}

Element deformed_square_defect(const N2Model& M, const Element& gamma, const Element& v) {
    require_odd(gamma);
    const Pva& P = M.pva;
    const Element q = n2_generators(M).mm;
    auto D = [&](const Element& w) { return nth_product(P, q, w, 0) + nth_product(P, gamma, w, 0); };
    Element lhs = D(D(v));
    Element rhs = nth_product(P, nth_product(P, q, gamma, 0), v, 0) +
                  Rational(1, 2) * nth_product(P, nth_product(P, gamma, gamma, 0), v, 0);
    return lhs - rhs;
}

Element gauge_action(const N2Model& M, const Element& beta, const Element& gamma) {
    const Element q = n2_generators(M).mm;
    return nth_product(M.pva, q, beta, 0) + nth_product(M.pva, gamma, beta, 0);
}

McReport mc_check(const N2Model& M, const Element& gamma, int vectors, unsigned seed) {
    McReport rep{mc_residual(M, gamma), true, 0};
    std::mt19937 rng(seed);
    for (int i = 0; i < vectors; ++i) {
        Element v = random_n2_element(M, rng, 2, 3, i % 2 == 1);
        if (!deformed_square_defect(M, gamma, v).is_zero()) rep.identity_ok = false;
        ++rep.vectors_checked;
    }
    return rep;
}

Element random_n2_element(const N2Model& M, std::mt19937& rng, int max_weight, int terms, std::optional<bool> odd) {
    const SigPtr& sig = M.signature();
    const int ng = sig->num_generators();
    std::uniform_int_distribution<int> pick(0, ng - 1), num(-3, 3), len(1, 3);
    Element r(sig);
    for (int attempt = 0; attempt < terms * 40 && static_cast<int>(r.size()) < terms; ++attempt) {
        Element m = Element::constant(sig, 1);
        int w = 0, l = len(rng);
        for (int i = 0; i < l; ++i) {
            int g = pick(rng);
            int gw = sig->generators()[g].weight;
            if (w + gw > max_weight) continue;
            std::uniform_int_distribution<int> ord(0, max_weight - w - gw);
            int o = ord(rng);
            w += gw + o;
            m = m * Element::jet(sig, g, o);
        }
        if (m.is_zero() || m.terms().begin()->first.jets.empty()) continue;
        if (odd && m.parity() != odd) continue;
        int c = num(rng);
        r += Rational(c == 0 ? 1 : c) * m;
    }
    return r;
}

// ---------------------------------------------------------------- truncated cohomology

int CohomologyTable::total() const {
    int t = 0;
    for (const auto& [k, d] : dims) t += d;
    return t;
}

namespace {

struct Variable {
    int gen;
    int order;
    int weight;
    bool odd;
    bool counted;  // contributes to the degree
};

struct Grade {
    int weight, degree, fermion;
    auto operator<=>(const Grade&) const = default;
};

// All monomials in the listed variables with weight <= W and degree <= D.
void enumerate(const std::vector<Variable>& vars, int W, int D,
               const std::function<void(const std::vector<int>&, int, int)>& emit) {
    std::vector<int> exps(vars.size());
    std::function<void(size_t, int, int)> rec = [&](size_t i, int w, int d) {
        if (i == vars.size()) {
            emit(exps, w, d);
            return;
        }
        const Variable& v = vars[i];
        for (int e = 0;; ++e) {
            if (v.odd && e > 1) break;
            int w2 = w + e * v.weight, d2 = d + (v.counted ? e : 0);
            if (w2 > W || d2 > D) break;
            if (e > 0 && v.weight == 0 && !v.counted && !v.odd) break;  // unbounded even variable
            exps[i] = e;
            rec(i + 1, w2, d2);
        }
        exps[i] = 0;
    };
    rec(0, 0, 0);
}

bool member(const std::vector<int>& v, int g) { return std::find(v.begin(), v.end(), g) != v.end(); }

int fermion_of(const N2Model& M, int gen) {
    if (member(M.phi, gen) || member(M.phib, gen)) return 1;
    if (member(M.psi, gen) || member(M.psib, gen)) return -1;
    return 0;
}

}  // namespace

CohomologyTable q_cohomology(const N2Model& M, int W, int D, Differential which) {
    if (W < 0 || D < 0) throw VertexError("truncation bounds must be non-negative");
    const SigPtr& sig = M.signature();
    const Pva& P = M.pva;
    N2Generators gens = n2_generators(M);
    const Element Q = which == Differential::HalfTwisted ? gens.mm : gens.mm + gens.pp;

    // Odd partners of the even weight-0 coordinates under Q_(0).
    std::set<int> partners;
    for (int g = 0; g < sig->num_generators(); ++g) {
        const auto& spec = sig->generators()[g];
        if (spec.odd || spec.weight != 0) continue;
        const Element img = nth_product(P, Q, Element::jet(sig, g), 0);
        for (const auto& [m, c] : img.terms())
            for (const auto& j : m.jets)
                if (sig->generators()[j.gen].odd && j.order == 0) partners.insert(j.gen);
    }
    std::vector<Variable> vars;
    for (int g = 0; g < sig->num_generators(); ++g) {
        const auto& spec = sig->generators()[g];
        for (int o = 0; spec.weight + o <= W; ++o) {
            bool counted = o == 0 && spec.weight == 0 && (!spec.odd || partners.count(g));
            vars.push_back({g, o, spec.weight + o, spec.odd, counted});
        }
    }

    std::map<Grade, std::vector<Monomial>> spaces;
    std::map<Monomial, std::pair<Grade, size_t>> where;
    enumerate(vars, W, D, [&](const std::vector<int>& exps, int w, int d) {
        Element e = Element::constant(sig, 1);
        int f = 0;
        for (size_t i = 0; i < vars.size(); ++i)
            for (int k = 0; k < exps[i]; ++k) {
                e = e * Element::jet(sig, vars[i].gen, vars[i].order);
                f += fermion_of(M, vars[i].gen);
            }
        const Monomial& m = e.terms().begin()->first;
        Grade gr{w, d, f};
        where.emplace(m, std::make_pair(gr, spaces[gr].size()));
        spaces[gr].push_back(m);
    });

    // Matrix of Q_(0): grade (w, d, f) -> (w, d, f + 1); columns are source monomials.
    std::map<Grade, int> ranks;
    for (const auto& [gr, basis] : spaces) {
        Grade target{gr.weight, gr.degree, gr.fermion + 1};
        auto it = spaces.find(target);
        const size_t rows = it == spaces.end() ? 0 : it->second.size();
        RationalMatrix mat(rows, std::vector<Rational>(basis.size()));
        for (size_t col = 0; col < basis.size(); ++col) {
            Element img = nth_product(P, Q, Element::monomial(sig, basis[col]), 0);
            for (const auto& [m, c] : img.terms()) {
                auto w = where.find(m);
                if (w == where.end() || !(w->second.first == target)) {
                    std::ostringstream os;
                    os << "truncation not Q-stable at (weight " << gr.weight << ", fermion " << gr.fermion
                       << "): " << monomial_to_string(*sig, basis[col]) << " -> " << monomial_to_string(*sig, m);
                    throw CohomologyError(os.str());
                }
                mat[w->second.second][col] = c;
            }
        }
        ranks[gr] = rows == 0 ? 0 : rank(std::move(mat));
    }
    CohomologyTable out;
    for (const auto& [gr, basis] : spaces) {
        int r_out = ranks[gr];
        auto prev = ranks.find({gr.weight, gr.degree, gr.fermion - 1});
        int r_in = prev == ranks.end() ? 0 : prev->second;
        int dim = static_cast<int>(basis.size()) - r_out - r_in;
        if (dim != 0) out.dims[{gr.weight, gr.fermion}] += dim;
    }
    return out;
}

CohomologyTable holomorphic_count(const N2Model& M, int W, int D) {
    const SigPtr& sig = M.signature();
    std::vector<Variable> vars;
    for (const auto* fam : {&M.x, &M.p, &M.phi, &M.psi})
        for (int g : *fam) {
            const auto& spec = sig->generators()[g];
            for (int o = 0; spec.weight + o <= W; ++o)
                vars.push_back({g, o, spec.weight + o, spec.odd, o == 0 && spec.weight == 0 && !spec.odd});
        }
    CohomologyTable out;
    enumerate(vars, W, D, [&](const std::vector<int>& exps, int w, int) {
        int f = 0;
        for (size_t i = 0; i < vars.size(); ++i) f += exps[i] * fermion_of(M, vars[i].gen);
        out.dims[{w, f}] += 1;
    });
    return out;
}

}  // namespace vertex
