#ifndef VERTEX_SERIALIZE_HPP
#define VERTEX_SERIALIZE_HPP

#include "vertex/geometry.hpp"

#include <json.hpp>

namespace vertex {

using Json = nlohmann::json;

// Element: list of {monomial: [[gen, order, exp]...], base: [[name, exp]...],
// params: [[name, exp]...], coeff: "p/q"} in canonical monomial order.
// Monomials with derived units carry an extra "units" field.
Json to_json(const Element& a);
Element element_from_json(const SigPtr& sig, const Json& j);

// {left, right, bracket: [[lambda_degree, Element]...]}, ordered by generator pair.
Json to_json(const BracketTable& t);
BracketTable table_from_json(const SigPtr& sig, const Json& j);

Json to_json(const LambdaPolynomial& p);  // [[degree, Element]...]
LambdaPolynomial lambda_from_json(const SigPtr& sig, const Json& j);

// {degree, terms: [[indices...], Element]}; indices are 1-based as in the CLI.
Json to_json(const TargetForm& f);
TargetForm form_from_json(const SigPtr& sig, const Json& j);

Json to_json(const AlgebraSignature& sig);
SigPtr signature_from_json(const Json& j);

// Signature, table and twist together.
Json to_json(const Pva& P);
Pva pva_from_json(const Json& j);

}  // namespace vertex

#endif
