#ifndef VERTEX_TEST_SUPPORT_HPP
#define VERTEX_TEST_SUPPORT_HPP

#include "vertex/pva.hpp"

#include <random>
#include <vector>

#include "doctest.h"

namespace doctest {
template <>
struct StringMaker<vertex::Element> {
    static String convert(const vertex::Element& e) { return vertex::to_string(e).c_str(); }
};
template <>
struct StringMaker<vertex::LambdaPolynomial> {
    static String convert(const vertex::LambdaPolynomial& p) { return vertex::to_string(p).c_str(); }
};
}  // namespace doctest

namespace testing_support {

using namespace vertex;

// Random homogeneous-parity element: terms built from jets of the listed generators,
// total weight <= max_weight, jet degree in [1, max_degree].
inline Element random_element(std::mt19937& rng, const SigPtr& sig, const std::vector<int>& gens, int max_weight,
                              int max_degree, int terms = 3, std::optional<bool> parity = std::nullopt,
                              bool allow_constant = false) {
    Element r(sig);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(gens.size()) - 1);
    std::uniform_int_distribution<int> num(-4, 4), den(1, 3), degree(1, std::max(1, max_degree));
    for (int attempt = 0; attempt < terms * 20 && static_cast<int>(r.size()) < terms; ++attempt) {
        Element m = Element::constant(sig, 1);
        int w = 0;
        int d = degree(rng);
        for (int i = 0; i < d; ++i) {
            int g = gens[pick(rng)];
            int gw = sig->generators()[g].weight;
            if (gw + w > max_weight) continue;
            std::uniform_int_distribution<int> ord(0, max_weight - w - gw);
            int o = ord(rng);
            w += gw + o;
            m = m * Element::jet(sig, g, o);
        }
        if (m.is_zero()) continue;
        if (!allow_constant && m.terms().begin()->first.jets.empty()) continue;
        if (parity && m.parity() != parity) continue;
        int a = num(rng);
        if (a == 0) a = 1;
        r += Rational(a, den(rng)) * m;
    }
    return r;
}

// Bracket computed by direct recursion on the axioms: left Leibniz on the second
// argument, sesquilinearity for jets, skew-symmetry for the generator base case.
class AxiomOracle {
public:
    explicit AxiomOracle(const Pva& P) : P_(P) {}

    LambdaPolynomial bracket(const Element& f, const Element& g) {
        LambdaPolynomial r(P_.signature());
        for (bool odd : {false, true}) {
            Element fp = f.parity_component(odd);
            if (fp.is_zero()) continue;
            for (const auto& [m, c] : g.terms()) {
                LambdaPolynomial t = monomial(fp, odd, atoms(m), 0);
                t *= c;
                r += t;
            }
        }
        return r;
    }

private:
    struct Atom {
        Element value;
        bool odd;
        int gen;    // -1 for parameters and base variables (bracket zero)
        int order;
        bool inverse;
    };

    std::vector<Atom> atoms(const Monomial& m) {
        const SigPtr& sig = P_.signature();
        std::vector<Atom> out;
        for (size_t p = 0; p < sig->parameters().size(); ++p)
            for (int e = 0; e < m.extra[sig->param_slot(static_cast<int>(p))]; ++e)
                out.push_back({Element::parameter(sig, static_cast<int>(p)), sig->parameters()[p].odd, -1, 0, false});
        for (const auto& f : m.jets) {
            bool odd = sig->generators()[f.gen].odd;
            if (f.exp < 0) {
                for (int e = 0; e < -f.exp; ++e) out.push_back({Element::inverse(sig, f.gen), false, f.gen, 0, true});
            } else {
                for (int e = 0; e < f.exp; ++e) out.push_back({Element::jet(sig, f.gen, f.order), odd, f.gen, f.order, false});
            }
        }
        for (size_t b = 0; b < sig->base_variables().size(); ++b)
            for (int e = 0; e < m.extra[sig->base_slot(static_cast<int>(b))]; ++e)
                out.push_back({Element::base(sig, static_cast<int>(b)), false, -1, 0, false});
        return out;
    }

    Element product(const std::vector<Atom>& a, size_t from) {
        Element r = Element::constant(P_.signature(), 1);
        for (size_t i = from; i < a.size(); ++i) r = r * a[i].value;
        return r;
    }

    static LambdaPolynomial plus_t(const LambdaPolynomial& p) {
        LambdaPolynomial r = p.shift_degree(1);
        for (int k = 0; k <= p.degree(); ++k) r.add(k, total_derivative(p.coeff(k)));
        return r;
    }

    // {f_lam a_i a_{i+1} ...}
    LambdaPolynomial monomial(const Element& f, bool f_odd, const std::vector<Atom>& a, size_t i) {
        LambdaPolynomial r(P_.signature());
        if (i == a.size()) return r;
        Element rest = product(a, i + 1);
        r += atom(f, f_odd, a[i]).times_right(rest);
        LambdaPolynomial tail = monomial(f, f_odd, a, i + 1).times_left(a[i].value);
        if (f_odd && a[i].odd) tail = -tail;
        r += tail;
        return r;
    }

    LambdaPolynomial atom(const Element& f, bool f_odd, const Atom& a) {
        if (a.gen < 0) return LambdaPolynomial(P_.signature());
        if (a.inverse) {
            // {f_lam x^-1} = -x^-1 {f_lam x} x^-1
            Atom x{Element::jet(P_.signature(), a.gen), false, a.gen, 0, false};
            return -(atom(f, f_odd, x).times_left(a.value).times_right(a.value));
        }
        LambdaPolynomial r = generator(f, f_odd, a.gen);
        for (int k = 0; k < a.order; ++k) r = plus_t(r);
        return r;
    }

    // {f_lam w} = -(-1)^{|f||w|} {w_{-lam-T} f}
    LambdaPolynomial generator(const Element& f, bool f_odd, int w) {
        const SigPtr& sig = P_.signature();
        bool w_odd = sig->generators()[w].odd;
        LambdaPolynomial left(sig);
        for (const auto& [m, c] : f.terms()) {
            LambdaPolynomial t = generator_left(w, w_odd, atoms(m), 0);
            t *= c;
            left += t;
        }
        LambdaPolynomial r = substitute_minus_lambda_minus_d(P_, left);
        return (f_odd && w_odd) ? r : -r;
    }

    // {w_lam a_i a_{i+1} ...} by left Leibniz, base case from the table.
    LambdaPolynomial generator_left(int w, bool w_odd, const std::vector<Atom>& a, size_t i) {
        LambdaPolynomial r(P_.signature());
        if (i == a.size()) return r;
        Element rest = product(a, i + 1);
        LambdaPolynomial head(P_.signature());
        if (a[i].gen >= 0) {
            if (a[i].inverse) {
                LambdaPolynomial base = P_.generator_bracket(w, a[i].gen);
                head = -(base.times_left(a[i].value).times_right(a[i].value));
            } else {
                head = P_.generator_bracket(w, a[i].gen);
                for (int k = 0; k < a[i].order; ++k) head = plus_t(head);
            }
        }
        r += head.times_right(rest);
        LambdaPolynomial tail = generator_left(w, w_odd, a, i + 1).times_left(a[i].value);
        if (w_odd && a[i].odd) tail = -tail;
        r += tail;
        return r;
    }

    const Pva& P_;
};

inline std::vector<int> all_generators(const SigPtr& sig) {
    std::vector<int> g(sig->num_generators());
    for (int i = 0; i < sig->num_generators(); ++i) g[i] = i;
    return g;
}

}  // namespace testing_support

#endif
