#include "doctest.h"
#include "support.hpp"
#include "vertex/serialize.hpp"

using namespace vertex;
using namespace testing_support;

TEST_CASE("element JSON round-trips and is byte-stable") {
    auto sig = AlgebraSignature::make({{"x", false, 0, true}, {"p", false, 1, false}, {"phi", true, 0, false}},
                                      {"sigma"}, {{"t", false, 3}, {"e", true, 2}});
    std::mt19937 rng(41);
    auto gens = all_generators(sig);
    for (int i = 0; i < 30; ++i) {
        Element a = random_element(rng, sig, gens, 3, 3, 4);
        if (i % 3 == 0) a = a * Element::parameter(sig, "t") + Element::base(sig, "sigma") * a;
        if (i % 4 == 0) a = a * Element::inverse(sig, 0);
        Json j = to_json(a);
        Element back = element_from_json(sig, j);
        CHECK(back == a);
        CHECK(to_json(back).dump() == j.dump());
    }
    CHECK(to_json(Element(sig)).dump() == "[]");
}

TEST_CASE("element JSON layout") {
    auto sig = AlgebraSignature::make({{"x", false, 0, false}}, {"sigma"}, {{"t", false, 2}});
    Element a = Rational(-3, 2) * Element::parameter(sig, "t") * Element::base(sig, "sigma") * Element::jet(sig, "x", 2);
    CHECK(to_json(a).dump() ==
          R"([{"base":[["sigma",1]],"coeff":"-3/2","monomial":[["x",2,1]],"params":[["t",1]]}])");
}

TEST_CASE("units survive serialization") {
    // u = 1/(x*y - 1)
    UnitSpec u{"u", {{1, {{0, 1}, {1, 1}}}, {-1, {}}}};
    auto sig = AlgebraSignature::make({{"x", false, 0, false}, {"y", false, 0, false}}, {}, {}, {u});
    SigPtr again = signature_from_json(to_json(*sig));
    CHECK(again->same_as(*sig));
    Element a = Element::unit(sig, 0) * Element::jet(sig, "x", 1) + Element::jet(sig, "y");
    CHECK(element_from_json(again, to_json(a)).rebase(sig) == a);
}

TEST_CASE("bracket table and PVA round-trip") {
    Svdo S = canonical_svdo(2);
    TargetForm H(S.signature(), 3);
    Pva tw = adjoin_functions(S.pva);
    Json j = to_json(tw);
    Pva back = pva_from_json(j);
    CHECK(to_json(back).dump() == j.dump());
    CHECK(back.twisted());
    auto sig = S.signature();
    BracketTable t = table_from_json(sig, to_json(S.pva.table()));
    CHECK(to_json(t).dump() == to_json(S.pva.table()).dump());
    CHECK(to_json(S.pva.table()).dump() ==
          R"([{"bracket":[[0,[{"base":[],"coeff":"1","monomial":[],"params":[]}]]],"left":"p1","right":"x1"},)"
          R"({"bracket":[[0,[{"base":[],"coeff":"1","monomial":[],"params":[]}]]],"left":"p2","right":"x2"}])");
}

TEST_CASE("target form JSON uses 1-based indices") {
    Svdo S = canonical_svdo(3);
    TargetForm a(S.signature(), 2);
    a.add({2, 0}, S.coordinate(1));
    Json j = to_json(a);
    CHECK(j["terms"][0][0].dump() == "[1,3]");
    CHECK(form_from_json(S.signature(), j) == a);
}
