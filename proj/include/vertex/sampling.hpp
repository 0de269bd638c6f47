#ifndef VERTEX_SAMPLING_HPP
#define VERTEX_SAMPLING_HPP

#include "vertex/pva.hpp"

#include <optional>
#include <random>
#include <string>
#include <vector>

namespace vertex {

// Random element built from jets of the given generators (all when empty): up to `terms`
// monomials of total weight <= max_weight and jet degree in [1, max_degree], small rational
// coefficients. When odd is set, only monomials of that parity are kept.
Element random_element(const SigPtr& sig, std::mt19937& rng, int max_weight, int max_degree, int terms,
                       std::optional<bool> odd = std::nullopt, std::vector<int> gens = {});

// a_(m)(b_(n)c) - (-1)^{|a||b|} b_(n)(a_(m)c) - sum_j C(m,j) (a_(j)b)_(m+n-j)c for homogeneous a, b.
Element jacobi_defect(const Pva& P, const Element& a, const Element& b, const Element& c, int m, int n);

struct AxiomSample {
    int samples = 0;
    int skew_failures = 0;
    int leibniz_failures = 0;
    int jacobi_failures = 0;
    bool passed() const { return skew_failures + leibniz_failures + jacobi_failures == 0; }
    std::string summary() const;
};

// Skew-symmetry and Leibniz on random pairs, Jacobi (m, n <= 1) on random triples.
AxiomSample sample_axioms(const Pva& P, int samples, int max_weight, int max_degree, unsigned seed = 1);

}  // namespace vertex

#endif
