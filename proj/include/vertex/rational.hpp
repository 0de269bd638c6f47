#ifndef VERTEX_RATIONAL_HPP
#define VERTEX_RATIONAL_HPP

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace vertex {

using Rational = mpq_class;

// Accepts "p", "-p", "p/q"; throws std::invalid_argument otherwise.
Rational parse_rational(std::string_view text);

// Canonical text: "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& q);

Rational factorial(int n);
Rational binomial(int n, int k);

}  // namespace vertex

#endif
