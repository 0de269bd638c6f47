#ifndef VERTEX_VARCALC_HPP
#define VERTEX_VARCALC_HPP

#include "vertex/geometry.hpp"
#include "vertex/linalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace vertex {

// Jets x^j_(a,m) = d_tau^a d_sigma^m x^j on a 2D base with coordinates tau, sigma.
// Forms are Elements over an extended signature: generator "<x>" or "<x>_t<a>" carries
// tau-order a (its T-jets are the sigma-orders), the odd generator "d<x>..." is the
// vertical differential of the same jet, and the odd parameters dtau, dsigma are the
// horizontal differentials. Wedge products are ordinary products.
class JetSpace {
public:
    static constexpr int default_tau_cap = 6;
    explicit JetSpace(std::vector<std::string> fields, int tau_cap = default_tau_cap);

    const SigPtr& signature() const { return sig_; }
    int num_fields() const { return static_cast<int>(fields_.size()); }
    const std::vector<std::string>& fields() const { return fields_; }
    int tau_cap() const { return tau_cap_; }

    Element x(int field, int tau_order = 0, int sigma_order = 0) const;
    Element dx(int field, int tau_order = 0, int sigma_order = 0) const;  // delta x
    Element tau() const;
    Element sigma() const;
    Element dtau() const;
    Element dsigma() const;
    Element constant(const Rational& c) const { return Element::constant(sig_, c); }

    struct JetInfo {
        int field;
        int tau_order;
        bool vertical;  // a delta x generator
    };
    JetInfo info(int gen) const { return info_.at(gen); }
    int generator(int field, int tau_order, bool vertical) const;

private:
    std::vector<std::string> fields_;
    int tau_cap_;
    SigPtr sig_;
    std::vector<JetInfo> info_;
};

// Total derivatives along tau and sigma (even derivations; explicit base dependence included).
Element total_d_tau(const JetSpace& J, const Element& a);
Element total_d_sigma(const JetSpace& J, const Element& a);

// Horizontal differential d_rho = dtau D_tau + dsigma D_sigma and the vertical differential delta.
Element d_rho(const JetSpace& J, const Element& w);
Element delta(const JetSpace& J, const Element& w);

// (horizontal degree, vertical degree) if w is bihomogeneous.
std::optional<std::pair<int, int>> bidegree(const JetSpace& J, const Element& w);

// Characteristic F^j of an evolutionary vector field, one Element per field.
using Characteristic = std::vector<Element>;

// The prolongation applied to a function: sum over jets of D^(a,m) F^j d/dx^j_(a,m).
Element prolong(const JetSpace& J, const Characteristic& F, const Element& g);
// Contraction with the prolonged field (odd derivation, delta x_(a,m) -> D^(a,m) F).
Element iota(const JetSpace& J, const Characteristic& F, const Element& w);
// Lie derivative iota delta + delta iota.
Element lie_derivative(const JetSpace& J, const Characteristic& F, const Element& w);

enum class Orientation { TauSigma, SigmaTau };

// L = density * dtau dsigma (TauSigma) or density * dsigma dtau (SigmaTau).
struct Lagrangian {
    Element density;
    Orientation orientation = Orientation::TauSigma;
};

Element volume(const JetSpace& J, Orientation o);
Element as_form(const JetSpace& J, const Lagrangian& L);
// Density relative to dtau dsigma.
Element tau_sigma_density(const Lagrangian& L);
bool is_first_order(const JetSpace& J, const Element& density);

struct EulerLagrangeResult {
    Element gamma;                // (1,1)-form
    std::vector<Element> euler;  // E_j relative to delta x^j times the Lagrangian's own volume
};

// delta L = -d_rho(gamma) + sum_j E_j delta x^j vol. Throws for higher-order Lagrangians.
EulerLagrangeResult euler_lagrange(const JetSpace& J, const Lagrangian& L);
// delta L + d_rho(gamma) - sum_j E_j delta x^j vol; zero when the decomposition is right.
Element euler_lagrange_residual(const JetSpace& J, const Lagrangian& L, const EulerLagrangeResult& el);

// Lie_F L == d_rho(alpha).
bool verify_symmetry(const JetSpace& J, const Characteristic& F, const Lagrangian& L, const Element& alpha);

// alpha - iota_F gamma.
Element noether(const JetSpace& J, const Characteristic& F, const Element& alpha, const Element& gamma);

// Rewrites d_tau^2 x^j (and its derivatives) through E_j = 0. Needs a constant
// invertible Hessian in the tau-velocities.
class OnShell {
public:
    OnShell(const JetSpace& J, const Lagrangian& L);
    Element reduce(const Element& a) const;

private:
    const JetSpace* J_;
    std::vector<Element> accel_;  // d_tau^2 x^j as a function of lower tau-orders
};

struct ConservationReport {
    bool conserved = false;
    Element residue;  // on-shell reduction of the dtau dsigma coefficient of d_rho F
};
ConservationReport check_conservation(const JetSpace& J, const Lagrangian& L, const Element& F);

// Fiber derivative x_j = dL/d(d_tau x^j) for Lagrangians quadratic in the tau-velocities
// with a constant invertible Hessian.
class Legendre {
public:
    Legendre(const JetSpace& J, const Lagrangian& L);

    // Canonical SVDO on the fields (momenta named p<suffix> or p_<field>) with
    // polynomial functions of sigma adjoined.
    const Svdo& target() const { return target_; }
    // x_j as functions on the jet space.
    const std::vector<Element>& momenta() const { return momenta_; }
    // d_tau x^j in terms of momenta, as Elements of the target.
    const std::vector<Element>& velocities() const { return velocity_; }
    const RationalMatrix& hessian() const { return hessian_; }

    // Restricts a (1,0)-form to dtau = 0, tau = 0 and rewrites it in SVDO variables.
    Element push(const Element& form) const;
    // Same for a function on the jet space.
    Element push_function(const Element& f) const;

private:
    const JetSpace* J_;
    Lagrangian L_;
    Svdo target_;
    std::vector<Element> momenta_;
    std::vector<Element> velocity_;
    RationalMatrix hessian_;
    OnShell on_shell_;
};

// Flat sigma model 1/2 g(d_sigma x, d_sigma x) - 1/2 g(d_tau x, d_tau x) with dsigma dtau orientation.
struct SigmaModel {
    JetSpace space;
    Lagrangian lagrangian;
    RationalMatrix metric;
};
SigmaModel sigma_flat(int n, const RationalMatrix& metric = {});

// A polynomial f(s) = sum c_k s^k evaluated at s = sigma + sign * tau.
Element light_cone_function(const JetSpace& J, const std::vector<Rational>& f, int sign);

struct Symmetry {
    Characteristic characteristic;
    Element alpha;  // (1,0)-form with Lie_F L = d_rho(alpha)
};

// xi^-/+ = 1/2 f(sigma -/+ tau) rho(d_sigma -/+ d_tau) and their alpha forms.
Symmetry sigma_xi_minus(const SigmaModel& M, const std::vector<Rational>& f);
Symmetry sigma_xi_plus(const SigmaModel& M, const std::vector<Rational>& f);
// Time translation: characteristic d_tau x, alpha = (density relative to dtau dsigma) dsigma.
Symmetry time_translation(const JetSpace& J, const Lagrangian& L);

}  // namespace vertex

#endif
