#ifndef VERTEX_GEOMETRY_HPP
#define VERTEX_GEOMETRY_HPP

#include "vertex/pva.hpp"

#include <map>
#include <string>
#include <vector>

namespace vertex {

// A PVA together with its coordinate functions x^i and momenta p_i.
struct Svdo {
    Pva pva;
    std::vector<int> x;
    std::vector<int> p;
    int dim() const { return static_cast<int>(x.size()); }
    const SigPtr& signature() const { return pva.signature(); }
    Element coordinate(int i, int order = 0) const { return Element::jet(signature(), x.at(i), order); }
    Element momentum(int i) const { return Element::jet(signature(), p.at(i)); }
};

// Coordinates x1..xn, momenta p1..pn, {p_i lam x^j} = delta_ij.
Svdo canonical_svdo(int n);
// Same table over caller-chosen coordinate names; units and base variables pass through.
Svdo canonical_svdo(const std::vector<GeneratorSpec>& coordinates, const std::vector<std::string>& momenta,
                    const std::vector<UnitSpec>& units = {}, const std::vector<std::string>& base = {},
                    const std::vector<ParameterSpec>& params = {});

// Differential form on the target; indices are coordinate positions (0-based, increasing).
class TargetForm {
public:
    TargetForm() = default;
    TargetForm(SigPtr sig, int degree) : sig_(std::move(sig)), degree_(degree) {}

    int degree() const { return degree_; }
    const SigPtr& signature() const { return sig_; }
    const std::map<std::vector<int>, Element>& components() const { return comps_; }

    // Adds coeff * dx^{i1}...dx^{ik} for arbitrary index order (sorted with sign).
    void add(std::vector<int> indices, const Element& coeff);
    // Antisymmetric extension: value for any index tuple.
    Element component(const std::vector<int>& indices) const;
    bool is_zero() const { return comps_.empty(); }

    TargetForm& operator+=(const TargetForm& o);
    TargetForm operator-() const;
    friend TargetForm operator+(TargetForm a, const TargetForm& b) { return a += b; }
    friend TargetForm operator*(const Rational& c, const TargetForm& f);
    bool operator==(const TargetForm& o) const;

private:
    SigPtr sig_;
    int degree_ = 0;
    std::map<std::vector<int>, Element> comps_;
};

std::string to_string(const TargetForm& f, const Svdo& S);

TargetForm de_rham(const Svdo& S, const TargetForm& w);
bool is_closed(const Svdo& S, const TargetForm& w);

// Weight-1 element split as sum a^i p_i + sum b_i T(x^i).
struct CourantSection {
    std::vector<Element> vector_part;
    std::vector<Element> form_part;
};

CourantSection decompose(const Svdo& S, const Element& e);
Element compose(const Svdo& S, const CourantSection& c);

CourantSection dorfman(const Svdo& S, const CourantSection& a, const CourantSection& b);
Element pairing(const Svdo& S, const CourantSection& a, const CourantSection& b);

// {p_i lam p_j} += sum_k H_ijk T(x^k) with H antisymmetrically extended.
Svdo h_twist(const Svdo& S, const TargetForm& H);

struct ShearReport {
    Substitution map;
    bool automorphism = false;
    TargetForm discrepancy;  // 3-form read off the momentum brackets
};

// p_i -> p_i + sum_j alpha_ij T(x^j).
Substitution shear_map(const Svdo& S, const TargetForm& alpha);
ShearReport b_field_shear(const Svdo& S, const TargetForm& alpha);

// F(source bracket of generators) == target bracket of images, for every generator pair.
bool intertwines(const Substitution& F, const Pva& source, const Pva& target);
// (F o G)(v) on generators.
Substitution compose(const Substitution& F, const Substitution& G);
bool is_identity_on_generators(const Substitution& F);

LambdaPolynomial apply(const Substitution& F, const LambdaPolynomial& p);

}  // namespace vertex

#endif
