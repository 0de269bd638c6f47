#include "vertex/sampling.hpp"

#include <sstream>

namespace vertex {

Element random_element(const SigPtr& sig, std::mt19937& rng, int max_weight, int max_degree, int terms,
                       std::optional<bool> odd, std::vector<int> gens) {
    if (gens.empty())
        for (int g = 0; g < sig->num_generators(); ++g) gens.push_back(g);
    Element r(sig);
    if (gens.empty()) return r;
    std::uniform_int_distribution<int> pick(0, static_cast<int>(gens.size()) - 1), num(-4, 4), den(1, 3),
        degree(1, std::max(1, max_degree));
    for (int attempt = 0; attempt < terms * 40 && static_cast<int>(r.size()) < terms; ++attempt) {
        Element m = Element::constant(sig, 1);
        int w = 0, d = degree(rng);
        for (int i = 0; i < d; ++i) {
            int g = gens[pick(rng)];
            int gw = sig->generators()[g].weight;
            if (gw + w > max_weight) continue;
            std::uniform_int_distribution<int> ord(0, max_weight - w - gw);
            int o = ord(rng);
            w += gw + o;
            m = m * Element::jet(sig, g, o);
        }
        if (m.is_zero() || m.terms().begin()->first.jets.empty()) continue;
        if (odd && m.parity() != odd) continue;
        int a = num(rng);
        r += Rational(a == 0 ? 1 : a, den(rng)) * m;
    }
    return r;
}

Element jacobi_defect(const Pva& P, const Element& a, const Element& b, const Element& c, int m, int n) {
    bool sign = a.parity().value_or(false) && b.parity().value_or(false);
    Element r = nth_product(P, a, nth_product(P, b, c, n), m);
    Element s = nth_product(P, b, nth_product(P, a, c, m), n);
    r = sign ? r + s : r - s;
    for (int j = 0; j <= m; ++j) r -= binomial(m, j) * nth_product(P, nth_product(P, a, b, j), c, m + n - j);
    return r;
}

std::string AxiomSample::summary() const {
    std::ostringstream os;
    os << samples << " samples: skew " << skew_failures << " failures, Leibniz " << leibniz_failures
       << " failures, Jacobi " << jacobi_failures << " failures";
    return os.str();
}

AxiomSample sample_axioms(const Pva& P, int samples, int max_weight, int max_degree, unsigned seed) {
    const SigPtr& sig = P.signature();
    std::mt19937 rng(seed);
    AxiomSample rep;
    for (int i = 0; i < samples; ++i) {
        bool pa = i % 2, pb = (i / 2) % 2;
        Element a = random_element(sig, rng, max_weight, max_degree, 3, pa);
        Element b = random_element(sig, rng, max_weight, max_degree, 3, pb);
        Element c = random_element(sig, rng, max_weight, max_degree, 2);
        ++rep.samples;
        LambdaPolynomial skew = substitute_minus_lambda_minus_d(P, lambda_bracket(P, b, a));
        if (!(pa && pb)) skew = -skew;
        if (!(lambda_bracket(P, a, b) == skew)) ++rep.skew_failures;
        LambdaPolynomial leibniz = lambda_bracket(P, a, b).times_right(c);
        LambdaPolynomial second = lambda_bracket(P, a, c).times_left(b);
        if (pa && pb) leibniz -= second;
        else leibniz += second;
        if (!(lambda_bracket(P, a, b * c) == leibniz)) ++rep.leibniz_failures;
        bool jacobi = true;
        for (int m = 0; m <= 1 && jacobi; ++m)
            for (int n = 0; n <= 1 && jacobi; ++n)
                if (!jacobi_defect(P, a, b, c, m, n).is_zero()) jacobi = false;
        if (!jacobi) ++rep.jacobi_failures;
    }
    return rep;
}

}  // namespace vertex
