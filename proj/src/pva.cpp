#include "vertex/pva.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace vertex {

// ---------------------------------------------------------------- LambdaPolynomial

LambdaPolynomial LambdaPolynomial::constant(const Element& e) {
    LambdaPolynomial p(e.signature());
    p.add(0, e);
    return p;
}

Element LambdaPolynomial::coeff(int n) const {
    if (n < 0 || n >= static_cast<int>(coeffs_.size())) return Element(sig_);
    return coeffs_[n];
}

void LambdaPolynomial::add(int n, const Element& e) {
    if (e.is_zero()) return;
    require_same_signature(sig_, e.signature());
    if (!sig_) sig_ = e.signature();
    if (n >= static_cast<int>(coeffs_.size())) coeffs_.resize(n + 1, Element(sig_));
    coeffs_[n] += e;
    trim();
}

void LambdaPolynomial::trim() {
    while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

LambdaPolynomial& LambdaPolynomial::operator+=(const LambdaPolynomial& o) {
    for (int n = 0; n <= o.degree(); ++n) add(n, o.coeffs_[n]);
    return *this;
}

LambdaPolynomial& LambdaPolynomial::operator-=(const LambdaPolynomial& o) {
    for (int n = 0; n <= o.degree(); ++n) add(n, -o.coeffs_[n]);
    return *this;
}

LambdaPolynomial& LambdaPolynomial::operator*=(const Rational& c) {
    for (auto& e : coeffs_) e *= c;
    trim();
    return *this;
}

LambdaPolynomial LambdaPolynomial::operator-() const {
    LambdaPolynomial r = *this;
    r *= -1;
    return r;
}

bool LambdaPolynomial::operator==(const LambdaPolynomial& o) const {
    if (degree() != o.degree()) return false;
    for (int n = 0; n <= degree(); ++n)
        if (!(coeffs_[n] == o.coeffs_[n])) return false;
    return true;
}

LambdaPolynomial LambdaPolynomial::times_right(const Element& e) const {
    LambdaPolynomial r(sig_ ? sig_ : e.signature());
    for (int n = 0; n <= degree(); ++n) r.add(n, coeffs_[n] * e);
    return r;
}

LambdaPolynomial LambdaPolynomial::times_left(const Element& e) const {
    LambdaPolynomial r(sig_ ? sig_ : e.signature());
    for (int n = 0; n <= degree(); ++n) r.add(n, e * coeffs_[n]);
    return r;
}

LambdaPolynomial LambdaPolynomial::shift_degree(int k) const {
    LambdaPolynomial r(sig_);
    for (int n = 0; n <= degree(); ++n) r.add(n + k, coeffs_[n]);
    return r;
}

LambdaPolynomial LambdaPolynomial::lambda_derivative(int i) const {
    LambdaPolynomial r(sig_);
    for (int n = i; n <= degree(); ++n) r.add(n - i, factorial(n) / factorial(n - i) * coeffs_[n]);
    return r;
}

std::string to_string(const LambdaPolynomial& p) {
    if (p.is_zero()) return "0";
    std::string out;
    for (int n = p.degree(); n >= 0; --n) {
        const Element c = p.coeff(n);
        if (c.is_zero()) continue;
        std::string lam = n == 0 ? "" : (n == 1 ? "lam" : "lam^" + std::to_string(n));
        std::string body;
        bool negative = false;
        if (n == 0) {
            body = to_string(c);
            if (!out.empty() && c.size() == 1 && c.terms().begin()->second < 0) {
                negative = true;
                body = to_string(-c);
            }
        } else if (c.size() == 1) {
            const auto& [m, q] = *c.terms().begin();
            negative = q < 0;
            Element mag = negative ? -c : c;
            std::string s = to_string(mag);
            body = s == "1" ? lam : s + "*" + lam;
        } else {
            body = "(" + to_string(c) + ")*" + lam;
        }
        if (out.empty()) out = (negative ? "-" : "") + body;
        else out += (negative ? " - " : " + ") + body;
    }
    return out;
}

// ---------------------------------------------------------------- BracketTable

void BracketTable::set(int u, int v, LambdaPolynomial value) {
    if (!sig_ || u < 0 || v < 0 || u >= sig_->num_generators() || v >= sig_->num_generators())
        throw VertexError("bracket table: generator index out of range");
    require_same_signature(sig_, value.signature());
    entries_[{u, v}] = std::move(value);
}

void BracketTable::set(std::string_view u, std::string_view v, LambdaPolynomial value) {
    set(sig_->generator_index(u), sig_->generator_index(v), std::move(value));
}

const LambdaPolynomial* BracketTable::find(int u, int v) const {
    auto it = entries_.find({u, v});
    return it == entries_.end() ? nullptr : &it->second;
}

int BracketTable::max_degree() const {
    int d = 0;
    for (const auto& [k, p] : entries_) d = std::max(d, p.degree());
    return d;
}

BracketTable BracketTable::rebase(const SigPtr& target) const {
    BracketTable t(target);
    for (const auto& [k, p] : entries_) {
        LambdaPolynomial q(target);
        for (int n = 0; n <= p.degree(); ++n) q.add(n, p.coeff(n).rebase(target));
        int u = target->generator_index(sig_->generators()[k.first].name);
        int v = target->generator_index(sig_->generators()[k.second].name);
        t.set(u, v, std::move(q));
    }
    return t;
}

// ---------------------------------------------------------------- bracket core

namespace {

// Sum_k lambda^k c_k  ->  Sum_k (-1)^k (lambda + D)^k c_k ... evaluated at lambda -> -lambda - D.
LambdaPolynomial minus_lambda_minus(const LambdaPolynomial& L, const std::function<Element(const Element&)>& d) {
    LambdaPolynomial r(L.signature());
    for (int k = 0; k <= L.degree(); ++k) {
        Element c = L.coeff(k);
        for (int j = 0; j <= k && !c.is_zero(); ++j) {
            Rational coef = binomial(k, j);
            if (k & 1) coef = -coef;
            r.add(k - j, coef * c);
            c = d(c);
        }
    }
    return r;
}

// Lazily caches D^j(c_k) for one lambda polynomial.
class PowerCache {
public:
    explicit PowerCache(const LambdaPolynomial& p) : p_(p) {
        rows_.resize(p.degree() + 1);
        for (int k = 0; k <= p.degree(); ++k) rows_[k].push_back(p.coeff(k));
    }
    const Element& get(int k, int j) {
        auto& row = rows_[k];
        while (static_cast<int>(row.size()) <= j) row.push_back(total_derivative(row.back()));
        return row[j];
    }
    // (lambda + T)^n p
    LambdaPolynomial plus_t_power(int n) {
        LambdaPolynomial r(p_.signature());
        for (int k = 0; k <= p_.degree(); ++k)
            for (int j = 0; j <= n; ++j) {
                const Element& e = get(k, j);
                if (e.is_zero()) break;
                r.add(k + n - j, binomial(n, j) * e);
            }
        return r;
    }

private:
    LambdaPolynomial p_;
    std::vector<std::vector<Element>> rows_;
};

struct CoreBracket {
    const Pva& P;
    std::map<std::pair<int, int>, PowerCache> gen_cache;

    PowerCache& gen(int u, int w) {
        auto it = gen_cache.find({u, w});
        if (it == gen_cache.end()) it = gen_cache.emplace(std::pair{u, w}, PowerCache(P.generator_bracket(u, w))).first;
        return it->second;
    }

    // {u_lambda f} from the partials of f.
    LambdaPolynomial generator_left(int u, const std::map<JetVar, Element>& partials) {
        LambdaPolynomial r(P.signature());
        for (const auto& [v, d] : partials) {
            auto& cache = gen(u, v.gen);
            r += cache.plus_t_power(v.order).times_right(d);
        }
        return r;
    }

    LambdaPolynomial bracket(const Element& f, const Element& g) {
        const SigPtr& sig = P.signature();
        LambdaPolynomial result(sig);
        if (f.is_zero() || g.is_zero()) return result;
        auto pg = all_partials(g);
        if (pg.empty()) return result;
        std::map<int, int> needed;
        for (const auto& [v, d] : pg) needed[v.gen] = std::max(needed[v.gen], v.order);
        Element parts[2] = {f.parity_component(false), f.parity_component(true)};
        std::map<JetVar, Element> pf[2] = {all_partials(parts[0]), all_partials(parts[1])};
        auto T = [](const Element& e) { return total_derivative(e); };
        for (const auto& [w, max_order] : needed) {
            bool w_odd = sig->generators()[w].odd;
            LambdaPolynomial bw(sig);
            for (int p = 0; p < 2; ++p) {
                if (pf[p].empty()) continue;
                LambdaPolynomial left = generator_left(w, pf[p]);
                LambdaPolynomial skew = minus_lambda_minus(left, T);
                if (p == 1 && w_odd) bw += skew;
                else bw -= skew;
            }
            if (bw.is_zero()) continue;
            PowerCache cache(bw);
            for (const auto& [v, d] : pg)
                if (v.gen == w) result += cache.plus_t_power(v.order).times_right(d);
        }
        return result;
    }
};

void check_order_cap(const Pva& P, const Element& e) {
    for (const auto& [m, c] : e.terms())
        for (const auto& f : m.jets)
            if (f.order > P.jet_order_cap())
                throw VertexError("jet order " + std::to_string(f.order) + " exceeds the configured cap " +
                                  std::to_string(P.jet_order_cap()));
}

}  // namespace

// ---------------------------------------------------------------- Pva

Pva::Pva(BracketTable table, bool strict) {
    auto impl = std::make_shared<Impl>();
    impl->sig = table.signature();
    if (!impl->sig) throw VertexError("bracket table without signature");
    const int ng = impl->sig->num_generators();
    impl->brackets.assign(static_cast<size_t>(ng) * ng, LambdaPolynomial(impl->sig));
    impl->missing.assign(static_cast<size_t>(ng) * ng, false);
    auto T = [](const Element& e) { return total_derivative(e); };
    for (int u = 0; u < ng; ++u)
        for (int v = 0; v < ng; ++v) {
            auto& slot = impl->brackets[static_cast<size_t>(u) * ng + v];
            if (auto* e = table.find(u, v)) {
                slot = *e;
            } else if (auto* r = table.find(v, u)) {
                slot = minus_lambda_minus(*r, T);
                bool both_odd = impl->sig->generators()[u].odd && impl->sig->generators()[v].odd;
                if (!both_odd) slot = -slot;
            } else if (strict) {
                impl->missing[static_cast<size_t>(u) * ng + v] = true;
            }
        }
    impl->table = std::move(table);
    impl_ = std::move(impl);
}

const LambdaPolynomial& Pva::generator_bracket(int u, int v) const {
    const int ng = signature()->num_generators();
    size_t k = static_cast<size_t>(u) * ng + v;
    if (impl_->missing[k])
        throw VertexError("bracket of '" + signature()->generators()[u].name + "' with '" +
                          signature()->generators()[v].name + "' is missing from the table");
    return impl_->brackets[k];
}

Element Pva::xi(const Element& a) const {
    Element r(signature());
    for (const auto& [b, rate] : impl_->twist) {
        Element d = base_partial(a, b);
        if (!d.is_zero()) r += rate * d;
    }
    return r;
}

Element Pva::derivation(const Element& a) const {
    Element r = total_derivative(a);
    if (twisted()) r += xi(a);
    return r;
}

Pva Pva::with_twist(std::map<int, Element> rates) const {
    Pva p = *this;
    auto impl = std::make_shared<Impl>(*impl_);
    impl->twist.clear();
    for (auto& [b, r] : rates) {
        if (b < 0 || b >= static_cast<int>(signature()->base_variables().size()))
            throw VertexError("twist rate for an unknown base variable");
        if (!r.is_zero()) impl->twist.emplace(b, r.rebase(signature()));
    }
    p.impl_ = std::move(impl);
    return p;
}

bool same_structure(const Pva& a, const Pva& b) {
    if (!a.signature()->same_as(*b.signature())) return false;
    const int ng = a.signature()->num_generators();
    for (int u = 0; u < ng; ++u)
        for (int v = 0; v < ng; ++v)
            if (!(a.generator_bracket(u, v) == b.generator_bracket(u, v))) return false;
    if (a.twist_rates().size() != b.twist_rates().size()) return false;
    for (const auto& [k, r] : a.twist_rates()) {
        auto it = b.twist_rates().find(k);
        if (it == b.twist_rates().end() || !(it->second == r)) return false;
    }
    return true;
}

LambdaPolynomial lambda_bracket(const Pva& P, const Element& a, const Element& b) {
    require_same_signature(P.signature(), a.signature());
    require_same_signature(P.signature(), b.signature());
    check_order_cap(P, a);
    check_order_cap(P, b);
    CoreBracket core{P, {}};
    if (!P.twisted()) return core.bracket(a, b);
    // {a_lambda b}_xi = sum_i (1/i!) d^i/dlambda^i {xi^i a _lambda b}
    LambdaPolynomial r(P.signature());
    Element ai = a;
    for (int i = 0; !ai.is_zero(); ++i) {
        if (i > 64) throw VertexError("xi-twist does not terminate: rates must not raise base-variable degree");
        LambdaPolynomial term = core.bracket(ai, b).lambda_derivative(i);
        term *= Rational(1) / factorial(i);
        r += term;
        ai = P.xi(ai);
    }
    return r;
}

Element nth_product(const Pva& P, const Element& a, const Element& b, int n) {
    if (n < -1) throw VertexError("n-products are defined for n >= -1");
    if (n == -1) return a * b;
    return factorial(n) * lambda_bracket(P, a, b).coeff(n);
}

LambdaPolynomial substitute_minus_lambda_minus_d(const Pva& P, const LambdaPolynomial& L) {
    return minus_lambda_minus(L, [&](const Element& e) { return P.derivation(e); });
}

// ---------------------------------------------------------------- validation

int default_n_max(const Pva& P) {
    int d = 0;
    const int ng = P.signature()->num_generators();
    for (int u = 0; u < ng; ++u)
        for (int v = 0; v < ng; ++v) d = std::max(d, P.generator_bracket(u, v).degree());
    return d + 2;
}

std::string ValidationReport::summary() const {
    std::ostringstream os;
    os << (passed() ? "PASS" : "FAIL") << " (n_max " << n_max << "): grading " << (grading_ok ? "ok" : "FAIL")
       << ", skew " << (skew_ok ? "ok" : "FAIL") << ", jacobi " << (jacobi_ok ? "ok" : "FAIL");
    for (const auto* f : {&grading_failure, &skew_failure, &jacobi_failure}) {
        if (!*f) continue;
        os << "\n  " << (*f)->axiom << " counterexample on (";
        for (size_t i = 0; i < (*f)->generators.size(); ++i) os << (i ? ", " : "") << (*f)->generators[i];
        os << ")";
        if ((*f)->m >= 0) os << " m=" << (*f)->m;
        if ((*f)->n >= 0) os << " n=" << (*f)->n;
        os << ": " << (*f)->detail;
    }
    return os.str();
}

ValidationReport validate(const Pva& P, std::optional<int> n_max) {
    ValidationReport rep;
    const SigPtr& sig = P.signature();
    const int ng = sig->num_generators();
    const auto& gens = sig->generators();
    rep.n_max = n_max ? *n_max : default_n_max(P);
    const int N = rep.n_max;

    // Grading and parity of every generator bracket.
    for (int u = 0; u < ng && rep.grading_ok; ++u)
        for (int v = 0; v < ng && rep.grading_ok; ++v) {
            const auto& L = P.generator_bracket(u, v);
            for (int n = 0; n <= L.degree(); ++n) {
                Element c = L.coeff(n);
                int expected = gens[u].weight + gens[v].weight - n - 1;
                bool odd = gens[u].odd != gens[v].odd;
                for (const auto& [m, q] : c.terms()) {
                    int w = monomial_weight(*sig, m);
                    bool o = monomial_odd(*sig, m);
                    if (w != expected || o != odd) {
                        rep.grading_ok = false;
                        std::ostringstream os;
                        os << "lambda^" << n << " coefficient " << to_string(c) << " has weight " << w << " (expected "
                           << expected << ")" << (o != odd ? " and wrong parity" : "");
                        rep.grading_failure = ValidationFailure{"grading", {gens[u].name, gens[v].name}, -1, n, os.str()};
                        break;
                    }
                }
                if (!rep.grading_ok) break;
            }
        }

    // Skew-symmetry on generator pairs.
    for (int u = 0; u < ng && rep.skew_ok; ++u)
        for (int v = u; v < ng && rep.skew_ok; ++v) {
            LambdaPolynomial rhs = substitute_minus_lambda_minus_d(P, P.generator_bracket(v, u));
            if (!(gens[u].odd && gens[v].odd)) rhs = -rhs;
            const auto& lhs = P.generator_bracket(u, v);
            if (!(lhs == rhs)) {
                rep.skew_ok = false;
                rep.skew_failure = ValidationFailure{"skew", {gens[u].name, gens[v].name}, -1, -1,
                                                     "{a_lam b} = " + to_string(lhs) + " but skew gives " + to_string(rhs)};
            }
        }

    // Jacobi in (m,n) form on generator triples.
    std::map<std::tuple<int, int, int>, Element> prod;  // x_(k) y
    auto gen_prod = [&](int x, int y, int k) -> const Element& {
        auto key = std::tuple(x, y, k);
        auto it = prod.find(key);
        if (it == prod.end()) it = prod.emplace(key, factorial(k) * P.generator_bracket(x, y).coeff(k)).first;
        return it->second;
    };
    std::map<std::tuple<int, int, int, int>, LambdaPolynomial> left_cache, right_cache;
    auto gen_times = [&](int g, int x, int y, int k) -> const LambdaPolynomial& {  // {g_lam (x_(k) y)}
        auto key = std::tuple(g, x, y, k);
        auto it = left_cache.find(key);
        if (it == left_cache.end())
            it = left_cache.emplace(key, lambda_bracket(P, Element::jet(sig, g), gen_prod(x, y, k))).first;
        return it->second;
    };
    auto times_gen = [&](int x, int y, int k, int g) -> const LambdaPolynomial& {  // {(x_(k) y)_lam g}
        auto key = std::tuple(x, y, k, g);
        auto it = right_cache.find(key);
        if (it == right_cache.end())
            it = right_cache.emplace(key, lambda_bracket(P, gen_prod(x, y, k), Element::jet(sig, g))).first;
        return it->second;
    };
    try {
        for (int a = 0; a < ng && rep.jacobi_ok; ++a)
            for (int b = 0; b < ng && rep.jacobi_ok; ++b)
                for (int c = 0; c < ng && rep.jacobi_ok; ++c)
                    for (int m = 0; m <= N && rep.jacobi_ok; ++m)
                        for (int n = 0; n <= N && rep.jacobi_ok; ++n) {
                            Element lhs = factorial(m) * gen_times(a, b, c, n).coeff(m);
                            Element second = factorial(n) * gen_times(b, a, c, m).coeff(n);
                            if (gens[a].odd && gens[b].odd) lhs += second;
                            else lhs -= second;
                            Element rhs(sig);
                            for (int j = 0; j <= m; ++j) {
                                if (gen_prod(a, b, j).is_zero()) continue;
                                rhs += binomial(m, j) * factorial(m + n - j) * times_gen(a, b, j, c).coeff(m + n - j);
                            }
                            if (!(lhs == rhs)) {
                                rep.jacobi_ok = false;
                                rep.jacobi_failure =
                                    ValidationFailure{"jacobi", {gens[a].name, gens[b].name, gens[c].name}, m, n,
                                                      "left side " + to_string(lhs) + ", right side " + to_string(rhs)};
                            }
                        }
    } catch (const VertexError& e) {
        rep.jacobi_ok = false;
        rep.jacobi_failure = ValidationFailure{"error", {}, -1, -1, e.what()};
    }
    return rep;
}

// ---------------------------------------------------------------- Lie quotient

bool in_derivation_image(const Pva& P, const Element& a) {
    if (a.has_laurent()) throw LaurentUnsupported("equality modulo T is only decidable on polynomial coefficients");
    if (!P.twisted()) return is_exact(a).exact;
    for (const auto& [b, rate] : P.twist_rates())
        if (rate.has_laurent() || rate.size() != 1 || !rate.terms().begin()->first.jets.empty() ||
            std::any_of(rate.terms().begin()->first.extra.begin(), rate.terms().begin()->first.extra.end(),
                        [](int e) { return e != 0; }))
            throw VertexError("equality modulo the twisted derivation needs constant rates");
    // With a base variable of non-zero constant rate, jet-free terms are integrable too,
    // so the kernel of the Euler operators is exactly the image.
    auto d = [&](const Element& e) { return P.derivation(e); };
    for (int g = 0; g < P.signature()->num_generators(); ++g)
        if (!variational_derivative(a, g, d).is_zero()) return false;
    return true;
}

LieClass::LieClass(Pva P, Element representative) : pva_(std::move(P)), rep_(std::move(representative)) {
    require_same_signature(pva_.signature(), rep_.signature());
    if (rep_.has_laurent()) throw LaurentUnsupported("Lie classes need polynomial representatives");
}

bool LieClass::is_zero() const { return in_derivation_image(pva_, rep_); }

bool LieClass::operator==(const LieClass& o) const { return in_derivation_image(pva_, rep_ - o.rep_); }

LieClass lie_bracket(const Pva& P, const LieClass& a, const LieClass& b) {
    return LieClass(P, nth_product(P, a.representative(), b.representative(), 0));
}

// ---------------------------------------------------------------- twists

Pva xi_twist(const Pva& P, const std::map<std::string, Rational>& rates) {
    std::vector<std::string> names;
    for (const auto& [name, r] : rates) names.push_back(name);
    SigPtr sig = P.signature()->with_base_variables(names);
    Pva base(P.table().rebase(sig));
    std::map<int, Element> twist;
    for (const auto& [b, r] : P.twist_rates()) twist[sig->find_base(P.signature()->base_variables()[b])] = r.rebase(sig);
    for (const auto& [name, r] : rates) {
        int b = sig->find_base(name);
        twist[b] = Element::constant(sig, r);
    }
    return base.with_twist(std::move(twist));
}

Pva adjoin_functions(const Pva& P, const std::string& base) { return xi_twist(P, {{base, Rational(1)}}); }

}  // namespace vertex
