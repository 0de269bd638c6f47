#ifndef VERTEX_DIFFPOLY_HPP
#define VERTEX_DIFFPOLY_HPP

#include "vertex/rational.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vertex {

struct VertexError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SignatureMismatch : VertexError {
    using VertexError::VertexError;
};
struct LaurentUnsupported : VertexError {
    using VertexError::VertexError;
};

struct GeneratorSpec {
    std::string name;
    bool odd = false;
    int weight = 0;
    bool invertible = false;
};

struct ParameterSpec {
    std::string name;
    bool odd = false;
    int nilpotency = 2;  // t^N = 0
};

// A derived unit u = 1/P where P is a polynomial in order-0 jets of even
// weight-0 generators. Normal form rewrites u*LM(P) -> (1 - u*tail(P))/lc(P).
struct UnitSpec {
    struct Term {
        Rational coeff;
        std::vector<std::pair<int, int>> powers;  // (generator, exponent)
    };
    std::string name;
    std::vector<Term> poly;
};

class AlgebraSignature;
using SigPtr = std::shared_ptr<const AlgebraSignature>;

class AlgebraSignature {
public:
    static SigPtr make(std::vector<GeneratorSpec> generators, std::vector<std::string> base_variables = {},
                       std::vector<ParameterSpec> parameters = {}, std::vector<UnitSpec> units = {});

    const std::vector<GeneratorSpec>& generators() const { return generators_; }
    const std::vector<std::string>& base_variables() const { return base_; }
    const std::vector<ParameterSpec>& parameters() const { return params_; }
    const std::vector<UnitSpec>& units() const { return units_; }

    int num_generators() const { return static_cast<int>(generators_.size()); }
    int find_generator(std::string_view name) const;  // -1 if absent
    int find_base(std::string_view name) const;
    int find_parameter(std::string_view name) const;
    int find_unit(std::string_view name) const;
    int generator_index(std::string_view name) const;  // throws if absent

    // Slots of the dense exponent vector carried by every monomial.
    int extra_size() const { return static_cast<int>(params_.size() + base_.size() + units_.size()); }
    int param_slot(int i) const { return i; }
    int base_slot(int i) const { return static_cast<int>(params_.size()) + i; }
    int unit_slot(int i) const { return static_cast<int>(params_.size() + base_.size()) + i; }

    // Leading term of each unit polynomial (dense exponents over generators).
    const std::vector<int>& unit_leading(int u) const { return unit_lead_[u]; }
    const Rational& unit_leading_coeff(int u) const { return unit_lead_coeff_[u]; }
    bool has_units() const { return !units_.empty(); }
    bool unit_mentions(int u, int gen) const;

    bool same_as(const AlgebraSignature& other) const;

    // New signature with extra base variables/parameters appended (no-op for names already present).
    SigPtr with_base_variables(const std::vector<std::string>& names) const;
    SigPtr with_parameters(const std::vector<ParameterSpec>& specs) const;

private:
    std::vector<GeneratorSpec> generators_;
    std::vector<std::string> base_;
    std::vector<ParameterSpec> params_;
    std::vector<UnitSpec> units_;
    std::vector<std::vector<int>> unit_lead_;
    std::vector<Rational> unit_lead_coeff_;
};

struct JetVar {
    int gen = 0;
    int order = 0;
    auto operator<=>(const JetVar&) const = default;
};

struct JetFactor {
    int32_t gen;
    int32_t order;
    int32_t exp;
    auto operator<=>(const JetFactor&) const = default;
};

// Jets sorted by (generator, order), non-zero exponents; extra holds dense
// exponents of parameters, base variables and units (in that slot order).
struct Monomial {
    std::vector<JetFactor> jets;
    std::vector<int32_t> extra;
    auto operator<=>(const Monomial&) const = default;
};

class Element {
public:
    using Terms = std::map<Monomial, Rational>;

    Element() = default;  // zero with no signature attached
    explicit Element(SigPtr sig) : sig_(std::move(sig)) {}
    Element(SigPtr sig, Terms terms);

    static Element constant(const SigPtr& sig, const Rational& c);
    static Element jet(const SigPtr& sig, int gen, int order = 0);
    static Element jet(const SigPtr& sig, std::string_view name, int order = 0);
    static Element inverse(const SigPtr& sig, int gen);  // order-0 jet to the power -1
    static Element base(const SigPtr& sig, int index);
    static Element base(const SigPtr& sig, std::string_view name);
    static Element parameter(const SigPtr& sig, int index);
    static Element parameter(const SigPtr& sig, std::string_view name);
    static Element unit(const SigPtr& sig, int index);
    static Element monomial(const SigPtr& sig, Monomial m, const Rational& c = 1);

    const SigPtr& signature() const { return sig_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    size_t size() const { return terms_.size(); }

    Element& operator+=(const Element& o);
    Element& operator-=(const Element& o);
    Element& operator*=(const Rational& c);
    friend Element operator+(Element a, const Element& b) { return a += b; }
    friend Element operator-(Element a, const Element& b) { return a -= b; }
    friend Element operator*(const Rational& c, Element a) { return a *= c; }
    Element operator-() const;
    friend Element operator*(const Element& a, const Element& b);
    // Scalar shifts need an attached signature.
    friend Element operator+(Element a, const Rational& c) { return a += constant(a.sig_, c); }
    friend Element operator-(Element a, const Rational& c) { return a -= constant(a.sig_, c); }
    bool operator==(const Element& o) const;

    // Adds c*m, cancelling to keep the term map free of zeros.
    void add_term(const Monomial& m, const Rational& c);

    std::optional<int> weight() const;  // nullopt if inhomogeneous or zero
    std::optional<bool> parity() const;  // true = odd
    Element weight_component(int w) const;
    Element parity_component(bool odd) const;
    bool has_laurent() const;  // negative exponents or units present
    bool has_parameters() const;
    Rational constant_term() const;  // coefficient of the empty jet monomial with no extras
    int max_weight() const;

    // Re-expresses the element over another signature by matching names.
    Element rebase(const SigPtr& target) const;

private:
    SigPtr sig_;
    Terms terms_;
};

Element pow(const Element& a, int k);

// Monomial-level helpers.
int monomial_weight(const AlgebraSignature& sig, const Monomial& m);
bool monomial_odd(const AlgebraSignature& sig, const Monomial& m);
int monomial_jet_degree(const Monomial& m);  // sum of jet exponents

// Multiplies two monomials. Returns sign in {-1,0,1}; 0 means the product vanishes.
int multiply_monomials(const AlgebraSignature& sig, const Monomial& a, const Monomial& b, Monomial& out);

// Rewrites unit occurrences into normal form (no-op without units).
void normalize_units(const AlgebraSignature& sig, Element::Terms& terms);

// T: even derivation raising jet order.
Element total_derivative(const Element& a);
inline Element T(const Element& a) { return total_derivative(a); }
Element total_derivative_power(const Element& a, int k);

// Left super-derivative with respect to a jet variable.
Element partial(const Element& a, JetVar v);

// All non-zero left partials of a, keyed by jet variable (unit dependence included).
std::map<JetVar, Element> all_partials(const Element& a);

// Derivative with respect to a base variable (even, commutes with everything).
Element base_partial(const Element& a, int base_index);

// General even-or-odd derivation D(g) = sum_v D(v) * dL g/dv, given the images of jets.
// base_image, if set, supplies D on base variables (D(b) placed on the left, b even).
using JetImage = std::function<Element(JetVar)>;
using BaseImage = std::function<Element(int)>;
Element apply_derivation(const Element& a, const JetImage& jet_image, const BaseImage& base_image = nullptr);

// Euler operator sum_m (-D)^m d/d(g_(m)); D defaults to T.
using Derivation = std::function<Element(const Element&)>;
Element variational_derivative(const Element& a, int gen, const Derivation& d = nullptr);

struct ExactResult {
    bool exact = false;
    std::optional<Element> witness;  // T(witness) == a when exact
};

// Membership in Im(T) on the polynomial subring. Throws LaurentUnsupported.
ExactResult is_exact(const Element& a);

// Differential algebra map between signatures. Unmapped symbols go to the
// target symbol of the same name; a generator image g -> e sends jets g_(m) to T^m(e).
class Substitution {
public:
    Substitution(SigPtr source, SigPtr target);
    void set_generator(int gen, Element image);
    void set_jet(JetVar v, Element image);
    void set_base(int index, Element image);
    Element apply(const Element& a) const;
    const SigPtr& source() const { return source_; }
    const SigPtr& target() const { return target_; }
    // Image of a generator (its order-0 jet).
    Element image(int gen) const;

private:
    Element jet_image(JetVar v) const;
    SigPtr source_, target_;
    std::map<int, Element> gens_;
    std::map<JetVar, Element> jets_;
    std::map<int, Element> base_;
};

// Printing in the CLI expression syntax.
std::string to_string(const Element& a);
std::string monomial_to_string(const AlgebraSignature& sig, const Monomial& m);

void require_same_signature(const SigPtr& a, const SigPtr& b);

}  // namespace vertex

#endif
