#include "doctest.h"
#include "vertex/diffpoly.hpp"

using namespace vertex;

namespace {

SigPtr small_signature() {
    return AlgebraSignature::make({{"x", false, 0, true}, {"p", false, 1, false}, {"phi", true, 0, false}, {"psi", true, 1, false}},
                                  {"sigma"}, {{"t", false, 2}, {"e", true, 2}});
}

}  // namespace

TEST_CASE("odd squares vanish and odd elements anticommute") {
    auto s = small_signature();
    auto phi = Element::jet(s, "phi"), psi = Element::jet(s, "psi");
    CHECK((phi * phi).is_zero());
    CHECK((phi * psi + psi * phi).is_zero());
    CHECK(!(phi * psi).is_zero());
}

TEST_CASE("laurent unit cancels") {
    auto s = small_signature();
    auto x = Element::jet(s, "x");
    CHECK(x * Element::inverse(s, 0) == Element::constant(s, 1));
}

TEST_CASE("total derivative examples") {
    auto s = small_signature();
    auto x = Element::jet(s, "x");
    auto x1 = Element::jet(s, "x", 1), x2 = Element::jet(s, "x", 2);
    auto xi = Element::inverse(s, 0);
    CHECK(T(x) == x1);
    CHECK(T(x * x) == Rational(2) * x * x1);
    CHECK(T(xi * x1) == -(xi * xi * x1 * x1) + xi * x2);
}
