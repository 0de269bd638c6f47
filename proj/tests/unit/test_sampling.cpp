#include "doctest.h"
#include "support.hpp"
#include "vertex/geometry.hpp"
#include "vertex/sampling.hpp"

using namespace vertex;

TEST_CASE("axiom sampling on canonical SVDOs") {
    for (int n = 1; n <= 2; ++n) {
        AxiomSample s = sample_axioms(canonical_svdo(n).pva, 20, 3, 3, 7);
        CHECK(s.samples == 20);
        CHECK(s.passed());
    }
}

TEST_CASE("axiom sampling catches a broken table") {
    Svdo S = canonical_svdo(1);
    BracketTable t = S.pva.table();
    t.set("p1", "p1", LambdaPolynomial::constant(S.coordinate(0)));
    AxiomSample s = sample_axioms(Pva(t), 20, 2, 3, 3);
    CHECK(s.jacobi_failures > 0);
}

TEST_CASE("random elements respect the requested bounds") {
    SigPtr sig = canonical_svdo(2).signature();
    std::mt19937 rng(5);
    for (int i = 0; i < 30; ++i) {
        Element e = random_element(sig, rng, 3, 3, 4, i % 2 == 1);
        CHECK(e.max_weight() <= 3);
        if (!e.is_zero()) CHECK(e.parity() == (i % 2 == 1));
        for (const auto& [m, c] : e.terms()) CHECK(monomial_jet_degree(m) <= 3);
    }
}
