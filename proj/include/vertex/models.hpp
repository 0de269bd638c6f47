#ifndef VERTEX_MODELS_HPP
#define VERTEX_MODELS_HPP

#include "vertex/geometry.hpp"
#include "vertex/linalg.hpp"

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace vertex {

// Coefficients c_i with e == sum c_i basis_i, if e lies in the rational span.
std::optional<std::vector<Rational>> span_coefficients(const Element& e, const std::vector<Element>& basis);

// {L_lam L} == sign (T + 2 lam) L + central lam^3.
struct VirasoroCheck {
    bool ok = false;
    int sign = 0;
    Rational central;
    LambdaPolynomial bracket;
};
VirasoroCheck check_virasoro(const Pva& P, const Element& L);

// {L_lam a} == sign (T + lam) a + central lam^2 for a weight-1 primary a.
struct PrimaryCheck {
    bool ok = false;
    Rational central;
    LambdaPolynomial bracket;
};
PrimaryCheck check_primary(const Pva& P, const Element& L, const Element& a, int sign = 1);

// ---------------------------------------------------------------- sigma model

// Images of the light-cone Noether currents at f = 1 in canonical_svdo(n):
// plus = 1/4 sum (p p + Tx Tx) - 1/2 sum p Tx, minus = -1/4 sum (p p + Tx Tx) - 1/2 sum p Tx,
// zero = -sum p Tx.
struct SigmaVirasoro {
    Svdo svdo;
    Element plus, minus, zero;
};
SigmaVirasoro sigma_virasoro(int n);

// ---------------------------------------------------------------- WZW

// gl(n) target, n in {1, 2}: coordinates x^{ij}, momenta p_{ij}, det(x) inverted.
// The bracket is the canonical one twisted by -(k/2) H, H(a, b, c) = tr([a, b] c)
// on left-invariant fields.
struct WzwModel {
    int n = 0;
    Rational k;
    Svdo svdo;
    TargetForm flux;  // the 3-form the canonical bracket is twisted by

    const Pva& pva() const { return svdo.pva; }
    int index(int i, int j) const { return i * n + j; }  // 0-based matrix entry -> coordinate position
    Element coordinate(int i, int j, int order = 0) const { return svdo.coordinate(index(i, j), order); }
    Element momentum(int i, int j) const { return svdo.momentum(index(i, j)); }
    Element inverse(int i, int j) const;  // (x^{-1})_{ij}
};
WzwModel wzw_model(int n, const Rational& k);

// tr(theta theta theta) for the Maurer-Cartan form theta = x^{-1} dx.
TargetForm cartan_three_form(const WzwModel& M);

// Currents indexed [i][j] for the basis matrix E_ij.
struct WzwCurrents {
    std::vector<std::vector<Element>> left, right;
};
WzwCurrents wzw_currents(const WzwModel& M);

struct AffineReport {
    bool passed = false;
    Rational left_level, right_level;
    int pairs_checked = 0;
    std::vector<std::string> failures;
    std::string summary() const;
};
AffineReport verify_affine(const WzwModel& M);
AffineReport verify_affine(int n, const Rational& k);

// L = 1/(2k) sum_ij j_l(E_ij) j_l(E_ji). Throws for k = 0.
Element sugawara(const WzwModel& M);

struct SugawaraReport {
    bool passed = false;
    VirasoroCheck virasoro;
    std::vector<Rational> primary_central;  // one per basis matrix, row-major
    bool commutes_with_right = false;
    std::vector<std::string> failures;
};
SugawaraReport verify_sugawara(const WzwModel& M);

// ---------------------------------------------------------------- N = 2

// Flat N = 2 model on C^n: coordinates x^i, xb^i, momenta p_i, pb_i (the paper's x_i),
// odd phi^i, phib^i and their odd momenta psi_i, psib_i. Generator names carry
// 1-based suffixes: x1, xb1, p1, pb1, phi1, phib1, psi1, psib1, ...
struct N2Model {
    int n = 0;
    RationalMatrix metric;  // g_{i jbar}, constant
    Pva pva;
    std::vector<int> x, xb, p, pb, phi, phib, psi, psib;

    const SigPtr& signature() const { return pva.signature(); }
    Element gen(int g, int order = 0) const { return Element::jet(signature(), g, order); }
};
// Default parameters: even t (t^3 = 0), even eps (eps^2 = 0), odd s.
std::vector<ParameterSpec> default_n2_parameters();
N2Model n2_flat(int n, const RationalMatrix& metric = {},
                const std::vector<ParameterSpec>& params = default_n2_parameters());

struct N2Generators {
    Element mm, mp, pp, pm;  // Q^{--}, Q^{-+}, Q^{++}, Q^{+-}
};
// Generators before the shear by the Kahler form.
N2Generators n2_generators_unsheared(const N2Model& M);
// The shear p_i -> p_i - g_{i jbar} T xb^j, pb_j -> pb_j + g_{i jbar} T x^i.
Substitution kahler_shear(const N2Model& M);
// Post-shear generators with Q^{--} = phib^j pb_j and Q^{++} = phi^j p_j.
N2Generators n2_generators(const N2Model& M);

// Fermion number: phi, phib at +1, psi, psib at -1. nullopt if inhomogeneous.
std::optional<int> fermion_number(const N2Model& M, const Element& e);

// N = 2 family closure: L = {Q^{--}_lam Q^{-+}}|_{lam^0}, J = {Q^{--}_lam Q^{-+}}|_{lam^1}; every
// lambda-coefficient of the brackets among {L, J, Q^{--}, Q^{-+}} is expressed in the span of
// T^m of those four (m <= 3) and 1.
struct ClosureEntry {
    std::string left, right;
    int lambda_power = 0;
    std::vector<Rational> coefficients;  // over the basis names below
};
struct ClosureReport {
    bool closed = false;
    Element L, J;
    std::vector<std::string> basis_names;
    std::vector<ClosureEntry> entries;
    std::vector<std::string> failures;
};
ClosureReport n2_closure(const N2Model& M);

// f(x) psi_{i1} ... psi_{ik} with holomorphic polynomial coefficients.
bool is_polyvector(const N2Model& M, const Element& e);
// a_(0)(Q^{++}_(0) b). Throws for non-polyvector input.
Element schouten(const N2Model& M, const Element& a, const Element& b);
// Textbook Schouten-Nijenhuis bracket of polyvectors written in x and psi:
// sum_i (a d/dpsi_i from the right)(d_i b) - (d_i a)(d/dpsi_i b from the left).
Element schouten_nijenhuis(const N2Model& M, const Element& a, const Element& b);

// Class of Q^{--}_(0) gamma + 1/2 gamma_(0) gamma. gamma must be odd (parameters included).
LieClass mc_residual(const N2Model& M, const Element& gamma);
// (Q + gamma)_(0)^2 v - ((Q_(0) gamma)_(0) v + 1/2 (gamma_(0) gamma)_(0) v), zero for odd gamma.
Element deformed_square_defect(const N2Model& M, const Element& gamma, const Element& v);
// Q^{--}_(0) beta + gamma_(0) beta.
Element gauge_action(const N2Model& M, const Element& beta, const Element& gamma);

struct McReport {
    LieClass residual;
    bool identity_ok = false;
    int vectors_checked = 0;
};
McReport mc_check(const N2Model& M, const Element& gamma, int vectors = 10, unsigned seed = 1);

// Random homogeneous element in the N = 2 generators (no parameters).
Element random_n2_element(const N2Model& M, std::mt19937& rng, int max_weight, int terms, std::optional<bool> odd);

// Cohomology of Q_(0) on the span of monomials of weight <= W whose degree is <= D. The degree
// counts order-0 weight-0 even factors plus the order-0 odd factors the differential pairs them
// with, so Q_(0) preserves it.
enum class Differential { HalfTwisted, AModel };
struct CohomologyTable {
    std::map<std::pair<int, int>, int> dims;  // (weight, fermion number) -> dimension
    int total() const;
};
struct CohomologyError : VertexError {
    using VertexError::VertexError;
};
CohomologyTable q_cohomology(const N2Model& M, int max_weight, int max_degree,
                             Differential d = Differential::HalfTwisted);
// Holomorphic monomial count in x, p, phi, psi and jets, same truncation as HalfTwisted.
CohomologyTable holomorphic_count(const N2Model& M, int max_weight, int max_degree);

}  // namespace vertex

#endif
