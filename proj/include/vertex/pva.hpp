#ifndef VERTEX_PVA_HPP
#define VERTEX_PVA_HPP

#include "vertex/diffpoly.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace vertex {

// Polynomial in the formal variable lambda with Element coefficients.
class LambdaPolynomial {
public:
    LambdaPolynomial() = default;
    explicit LambdaPolynomial(SigPtr sig) : sig_(std::move(sig)) {}
    static LambdaPolynomial constant(const Element& e);

    const SigPtr& signature() const { return sig_; }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }  // -1 for zero
    bool is_zero() const { return coeffs_.empty(); }
    Element coeff(int n) const;
    void add(int n, const Element& e);
    const std::vector<Element>& coefficients() const { return coeffs_; }

    LambdaPolynomial& operator+=(const LambdaPolynomial& o);
    LambdaPolynomial& operator-=(const LambdaPolynomial& o);
    LambdaPolynomial& operator*=(const Rational& c);
    friend LambdaPolynomial operator+(LambdaPolynomial a, const LambdaPolynomial& b) { return a += b; }
    friend LambdaPolynomial operator-(LambdaPolynomial a, const LambdaPolynomial& b) { return a -= b; }
    LambdaPolynomial operator-() const;
    bool operator==(const LambdaPolynomial& o) const;

    LambdaPolynomial times_right(const Element& e) const;  // coefficients multiplied by e on the right
    LambdaPolynomial times_left(const Element& e) const;
    LambdaPolynomial shift_degree(int k) const;            // multiply by lambda^k
    LambdaPolynomial lambda_derivative(int i) const;       // d^i/dlambda^i

private:
    void trim();
    SigPtr sig_;
    std::vector<Element> coeffs_;
};

std::string to_string(const LambdaPolynomial& p);

class BracketTable {
public:
    BracketTable() = default;
    explicit BracketTable(SigPtr sig) : sig_(std::move(sig)) {}
    const SigPtr& signature() const { return sig_; }
    void set(int u, int v, LambdaPolynomial value);
    void set(std::string_view u, std::string_view v, LambdaPolynomial value);
    const LambdaPolynomial* find(int u, int v) const;
    const std::map<std::pair<int, int>, LambdaPolynomial>& entries() const { return entries_; }
    int max_degree() const;
    BracketTable rebase(const SigPtr& target) const;

private:
    SigPtr sig_;
    std::map<std::pair<int, int>, LambdaPolynomial> entries_;
};

// Poisson vertex superalgebra generated by a bracket table. Pairs absent from the
// table and not derivable by skew-symmetry are zero, unless the table is strict.
class Pva {
public:
    Pva() = default;
    explicit Pva(BracketTable table, bool strict = false);

    const SigPtr& signature() const { return impl_->sig; }
    const BracketTable& table() const { return impl_->table; }
    const LambdaPolynomial& generator_bracket(int u, int v) const;

    // Horizontal twist xi = sum_b rate_b d/db on base variables.
    bool twisted() const { return !impl_->twist.empty(); }
    const std::map<int, Element>& twist_rates() const { return impl_->twist; }
    Element xi(const Element& a) const;
    Element derivation(const Element& a) const;  // T, or T + xi when twisted

    // Same table, different horizontal twist (over the same signature).
    Pva with_twist(std::map<int, Element> rates) const;

    int jet_order_cap() const { return impl_->order_cap; }

private:
    struct Impl {
        SigPtr sig;
        BracketTable table;
        std::vector<LambdaPolynomial> brackets;  // ng * ng
        std::vector<bool> missing;
        std::map<int, Element> twist;
        int order_cap = 12;
    };
    std::shared_ptr<const Impl> impl_;
};

bool same_structure(const Pva& a, const Pva& b);

// {a_lambda b}
LambdaPolynomial lambda_bracket(const Pva& P, const Element& a, const Element& b);
// n = -1: product; n >= 0: n! * [lambda^n]{a_lambda b}
Element nth_product(const Pva& P, const Element& a, const Element& b, int n);

// {b_{-lambda-D} a} with D the algebra's derivation, given L = {b_lambda a}.
LambdaPolynomial substitute_minus_lambda_minus_d(const Pva& P, const LambdaPolynomial& L);

struct ValidationFailure {
    std::string axiom;  // "grading", "parity", "skew", "jacobi", "error"
    std::vector<std::string> generators;
    int m = -1;
    int n = -1;
    std::string detail;
};

struct ValidationReport {
    int n_max = 0;
    bool grading_ok = true;
    bool skew_ok = true;
    bool jacobi_ok = true;
    std::optional<ValidationFailure> grading_failure;
    std::optional<ValidationFailure> skew_failure;
    std::optional<ValidationFailure> jacobi_failure;
    bool passed() const { return grading_ok && skew_ok && jacobi_ok; }
    std::string summary() const;
};

int default_n_max(const Pva& P);
ValidationReport validate(const Pva& P, std::optional<int> n_max = std::nullopt);

// Class modulo the image of the algebra's derivation.
class LieClass {
public:
    LieClass(Pva P, Element representative);
    const Element& representative() const { return rep_; }
    const Pva& algebra() const { return pva_; }
    bool is_zero() const;
    bool operator==(const LieClass& o) const;

private:
    Pva pva_;
    Element rep_;
};

// Exactness test used by LieClass: a lies in Im(D) for the algebra's derivation D.
bool in_derivation_image(const Pva& P, const Element& a);

LieClass lie_bracket(const Pva& P, const LieClass& a, const LieClass& b);

// xi-twist by xi = sum rate_b d/db; base variables missing from the signature are added.
Pva xi_twist(const Pva& P, const std::map<std::string, Rational>& rates);
// Tensor with polynomials in sigma (differentiated by d/dsigma).
Pva adjoin_functions(const Pva& P, const std::string& base = "sigma");

}  // namespace vertex

#endif
