#include "doctest.h"
#include "support.hpp"
#include "vertex/varcalc.hpp"

using namespace vertex;
using namespace testing_support;

namespace {

// Random form of the given bidegree with polynomial coefficients in low jets.
Element random_form(std::mt19937& rng, const JetSpace& J, int h, int v) {
    std::vector<int> gens;
    for (int j = 0; j < J.num_fields(); ++j)
        for (int a = 0; a <= 1; ++a) gens.push_back(J.generator(j, a, false));
    std::uniform_int_distribution<int> pick(0, J.num_fields() - 1), ord(0, 1), c(-3, 3);
    Element r(J.signature());
    for (int t = 0; t < 3; ++t) {
        Element coeff = random_element(rng, J.signature(), gens, 2, 2, 2, false, true);
        if (t == 0) coeff += J.sigma() * J.tau();
        Element w = coeff;
        for (int i = 0; i < v; ++i) w = w * J.dx(pick(rng), ord(rng), ord(rng));
        if (h == 1) w = w * (c(rng) % 2 ? J.dtau() : J.dsigma());
        if (h == 2) w = w * J.dtau() * J.dsigma();
        r += w;
    }
    return r;
}

}  // namespace

TEST_CASE("horizontal and vertical differentials") {
    JetSpace J({"x"});
    CHECK(d_rho(J, J.x(0)) == J.x(0, 1) * J.dtau() + J.x(0, 0, 1) * J.dsigma());
    Element f = J.x(0) * J.x(0) * J.x(0);
    CHECK(delta(J, f) == Rational(3) * J.x(0) * J.x(0) * J.dx(0));
    CHECK(d_rho(J, J.dx(0)) == -(J.dx(0, 1) * J.dtau()) - J.dx(0, 0, 1) * J.dsigma());
    CHECK(d_rho(J, J.tau() * J.sigma()) == J.sigma() * J.dtau() + J.tau() * J.dsigma());

    JetSpace K({"x", "y"});
    std::mt19937 rng(43);
    for (int i = 0; i < 15; ++i) {
        int h = i % 2, v = (i / 2) % 3;
        Element w = random_form(rng, K, h, v);
        CHECK(d_rho(K, d_rho(K, w)).is_zero());
        CHECK(delta(K, delta(K, w)).is_zero());
        CHECK((d_rho(K, delta(K, w)) + delta(K, d_rho(K, w))).is_zero());
    }
}

TEST_CASE("prolongation and contraction") {
    JetSpace J({"x"});
    CHECK(prolong(J, {J.constant(1)}, J.x(0, 0, 1)).is_zero());
    CHECK(prolong(J, {J.x(0)}, J.x(0, 0, 1)) == J.x(0, 0, 1));
    CHECK(prolong(J, {J.sigma() * J.x(0)}, J.x(0, 1, 1)) == J.x(0, 1) + J.sigma() * J.x(0, 1, 1));
    JetSpace K({"x", "y"});
    std::mt19937 rng(47);
    for (int i = 0; i < 10; ++i) {
        Characteristic F{random_form(rng, K, 0, 0), random_form(rng, K, 0, 0)};
        Element w = random_form(rng, K, i % 2, 1 + i % 2);
        CHECK((iota(K, F, d_rho(K, w)) + d_rho(K, iota(K, F, w))).is_zero());
        // Lie derivative commutes with d_rho
        CHECK(lie_derivative(K, F, d_rho(K, w)) == d_rho(K, lie_derivative(K, F, w)));
    }
}

TEST_CASE("Euler-Lagrange decompositions") {
    SigmaModel M = sigma_flat(2);
    const JetSpace& J = M.space;
    auto el = euler_lagrange(J, M.lagrangian);
    for (int j = 0; j < 2; ++j) CHECK(el.euler[j] == J.x(j, 2) - J.x(j, 0, 2));
    CHECK(euler_lagrange_residual(J, M.lagrangian, el).is_zero());
    // gamma relative to the tau-sigma density 1/2(x_tau^2 - x_sigma^2)
    CHECK(el.gamma == J.x(0, 1) * J.dx(0) * J.dsigma() + J.x(0, 0, 1) * J.dx(0) * J.dtau() +
                          J.x(1, 1) * J.dx(1) * J.dsigma() + J.x(1, 0, 1) * J.dx(1) * J.dtau());

    JetSpace K({"x"});
    Lagrangian linear{K.x(0)};
    auto e1 = euler_lagrange(K, linear);
    CHECK(e1.gamma.is_zero());
    CHECK(e1.euler[0] == K.constant(1));
    Lagrangian particle{Rational(1, 2) * K.x(0, 1) * K.x(0, 1)};
    auto e2 = euler_lagrange(K, particle);
    CHECK(e2.euler[0] == -K.x(0, 2));
    CHECK(e2.gamma == K.x(0, 1) * K.dx(0) * K.dsigma());
    CHECK(euler_lagrange_residual(K, particle, e2).is_zero());

    // non-flat coefficients and explicit base dependence
    Lagrangian odd{K.sigma() * K.x(0) * K.x(0) * K.x(0, 1) * K.x(0, 0, 1) + K.tau() * K.x(0, 1) * K.x(0, 1)};
    CHECK(euler_lagrange_residual(K, odd, euler_lagrange(K, odd)).is_zero());
    CHECK_THROWS_AS(euler_lagrange(K, Lagrangian{K.x(0, 2)}), VertexError);
}

TEST_CASE("symmetries of the flat sigma model") {
    SigmaModel M = sigma_flat(2);
    const JetSpace& J = M.space;
    auto tt = time_translation(J, M.lagrangian);
    CHECK(verify_symmetry(J, tt.characteristic, M.lagrangian, tt.alpha));
    for (std::vector<Rational> f : {std::vector<Rational>{1}, {0, 1}, {2, -1, 3}}) {
        auto m = sigma_xi_minus(M, f);
        auto p = sigma_xi_plus(M, f);
        CHECK(verify_symmetry(J, m.characteristic, M.lagrangian, m.alpha));
        CHECK(verify_symmetry(J, p.characteristic, M.lagrangian, p.alpha));
    }
    JetSpace K({"x"});
    Lagrangian explicit_time{K.tau() * K.x(0)};
    auto t2 = time_translation(K, explicit_time);
    CHECK_FALSE(verify_symmetry(K, t2.characteristic, explicit_time, t2.alpha));
}

TEST_CASE("Noether currents of the flat sigma model") {
    SigmaModel M = sigma_flat(1);
    const JetSpace& J = M.space;
    auto el = euler_lagrange(J, M.lagrangian);
    Element xs = J.x(0, 0, 1), xt = J.x(0, 1);

    auto tt = time_translation(J, M.lagrangian);
    Element H = noether(J, tt.characteristic, tt.alpha, el.gamma);
    CHECK(check_conservation(J, M.lagrangian, H).conserved);
    Legendre leg(J, M.lagrangian);
    Element x = leg.target().coordinate(0), p = leg.target().momentum(0);
    CHECK(leg.push(H) == Rational(-1, 2) * (p * p + T(x) * T(x)));

    std::vector<Rational> f{3, 1, 2};
    auto m = sigma_xi_minus(M, f);
    Element Fm = noether(J, m.characteristic, m.alpha, el.gamma);
    Element fm = light_cone_function(J, f, -1);
    // dsigma part: 1/4 f(sigma - tau) (x_sigma - x_tau)^2
    Element expected_m = Rational(1, 4) * fm * (xs - xt) * (xs - xt) * J.dsigma() -
                         Rational(1, 4) * fm * (xs - xt) * (xs - xt) * J.dtau();
    CHECK(Fm == expected_m);
    CHECK(check_conservation(J, M.lagrangian, Fm).conserved);

    auto pl = sigma_xi_plus(M, f);
    Element Fp = noether(J, pl.characteristic, pl.alpha, el.gamma);
    Element fp = light_cone_function(J, f, 1);
    CHECK(Fp == Rational(-1, 4) * fp * (xs + xt) * (xs + xt) * J.dsigma() -
                    Rational(1, 4) * fp * (xs + xt) * (xs + xt) * J.dtau());
    CHECK(check_conservation(J, M.lagrangian, Fp).conserved);

    CHECK(noether(J, {J.constant(0)}, Element(J.signature()), el.gamma).is_zero());
    // a non-symmetry current fails on shell
    CHECK_FALSE(check_conservation(J, M.lagrangian, xs * xs * J.dsigma()).conserved);
}

TEST_CASE("Legendre transform of the sigma-model currents") {
    SigmaModel M = sigma_flat(2);
    const JetSpace& J = M.space;
    Legendre leg(J, M.lagrangian);
    for (int j = 0; j < 2; ++j) CHECK(leg.momenta()[j] == J.x(j, 1));
    const Svdo& S = leg.target();
    auto el = euler_lagrange(J, M.lagrangian);
    std::vector<Rational> f{1, -2, 1};
    Element fs(S.signature());
    Element sigma = Element::base(S.signature(), "sigma");
    fs = Element::constant(S.signature(), 1) - Rational(2) * sigma + sigma * sigma;
    Element pp(S.signature()), tt(S.signature()), pt(S.signature());
    for (int j = 0; j < 2; ++j) {
        pp += S.momentum(j) * S.momentum(j);
        tt += T(S.coordinate(j)) * T(S.coordinate(j));
        pt += S.momentum(j) * T(S.coordinate(j));
    }
    auto m = sigma_xi_minus(M, f);
    auto p = sigma_xi_plus(M, f);
    Element Lm = leg.push(noether(J, m.characteristic, m.alpha, el.gamma));
    Element Lp = leg.push(noether(J, p.characteristic, p.alpha, el.gamma));
    CHECK(Lm == fs * (Rational(1, 4) * pp + Rational(1, 4) * tt - Rational(1, 2) * pt));
    CHECK(Lp == fs * (Rational(-1, 4) * pp - Rational(1, 4) * tt - Rational(1, 2) * pt));
    CHECK(Lm + Lp == -(fs * pt));

    JetSpace K({"x"});
    Lagrangian particle{Rational(1, 2) * K.x(0, 1) * K.x(0, 1)};
    Legendre lp(K, particle);
    CHECK(lp.momenta()[0] == K.x(0, 1));
    CHECK(lp.velocities()[0] == lp.target().momentum(0));
    CHECK_THROWS_AS(Legendre(K, Lagrangian{K.x(0, 0, 1) * K.x(0, 0, 1)}), VertexError);
}
