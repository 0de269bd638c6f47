#ifndef VERTEX_LINALG_HPP
#define VERTEX_LINALG_HPP

#include "vertex/rational.hpp"

#include <optional>
#include <vector>

namespace vertex {

using RationalMatrix = std::vector<std::vector<Rational>>;

// Row-reduces in place; returns the rank.
int row_reduce(RationalMatrix& m);
int rank(RationalMatrix m);
std::optional<RationalMatrix> inverse(const RationalMatrix& m);

}  // namespace vertex

#endif
