#pragma once

#include <functional>
#include <string>

#include "cfint/forms.hpp"
#include "cfint/geometry.hpp"
#include "cfint/types.hpp"

namespace cfint {

// Constants steering the glued Levi generating form.  chi1 == 1 on
// |w-z| < eps0/2 and == 0 on |w-z| > eps0; 0 < eps < eps0.
struct KernelConfig {
  Real eps = 0.125;
  Real eps0 = 0.5;
  Real c0 = 1.0;    // strong-pseudoconvexity constant in use
  Real mu0 = 0.0;   // boundary-shell slack, c0*eps0^2/16
  Real delta0 = 0.0;

  bool valid() const { return eps > 0.0 && eps < eps0 && c0 > 0.0; }
};

// Measures c0 with the geometry diagnostics, estimates the Hessian Lipschitz
// constant from boundary samples, and derives eps0 = min(0.5, 0.5*c0/L).
KernelConfig kernel_config_for(const Domain& d, int boundary_count = 32);

// C^infty step: 0 for t <= 0, 1 for t >= 1, strictly increasing between.
Real smooth_step(Real t);
Real smooth_step_deriv(Real t);

// Cutoff chi1(|w-z|) with the plateau invariants above, and its radial
// derivative.
Real chi1(Real r, const KernelConfig& cfg);
Real chi1_deriv(Real r, const KernelConfig& cfg);

// Levi polynomial Delta(w,z) = <drho(w), w-z> - (1/2) sum_jk
// hess_holo_jk(w) (w_j-z_j)(w_k-z_k), and its coefficient vector Delta_j =
// drho_j(w) - (1/2) sum_k hess_holo_jk (w_k-z_k), so that
// <Delta_coeffs, w-z> = Delta.
Cx levi_polynomial(const Domain& d, const CxVec& w, const CxVec& z);
CxVec levi_coefficients(const Domain& d, const CxVec& w, const CxVec& z);

// Glued denominator g = chi1 * Delta + (1 - chi1) * |w-z|^2.
Cx g_glued(const Domain& d, const CxVec& w, const CxVec& z, const KernelConfig& cfg);

// Smoothed Levi generating form
//   eta^eps_j = (chi1 Delta_j + (1-chi1)(wbar_j - zbar_j)) / g,
// satisfying <eta^eps, w-z> = 1 identically.  The FormField carries analytic
// wbar-derivative hooks when the domain provides dbar_hess_holo.
CxVec eta_eps_coeffs(const Domain& d, const CxVec& w, const CxVec& z,
                     const KernelConfig& cfg);
FormAtPoint eta_eps(const Domain& d, const CxVec& w, const CxVec& z,
                    const KernelConfig& cfg);
FormField eta_eps_field(const Domain& d, const KernelConfig& cfg);

// <drho(w), w-z>; on the sphere this is 1 - [z,w] with [z,w] = sum z_j wbar_j.
Cx leray_denominator(const Domain& d, const CxVec& w, const CxVec& z);

// Bochner-Martinelli generating form eta = partial_w beta / beta and the
// Cauchy-Leray form eta = drho(w)/<drho(w), w-z>, with analytic hooks.
FormField bm_generating_field(int n);
FormField leray_field(const Domain& d);

// Levi-Leray measure density: dmu_rho = D~ dsigma with
// D~(w) = pullback of (2 pi i)^{-n} drho /\ (dbar drho)^{n-1} onto the frame.
Cx levi_leray_density(const Domain& d, const CxVec& w, const TangentFrame& frame);

// Cauchy-Leray boundary kernel as a density against dsigma:
// D~(w) / <drho(w), w-z>^n.  Raises ConvexityViolation when the denominator
// vanishes for z in the closure.
Cx cauchy_leray_density(const Domain& d, const CxVec& w, const TangentFrame& frame,
                        const CxVec& z);

// Exact ball kernels, [z,w] = sum z_j wbar_j.
Cx szego_ball(int n, const CxVec& w, const CxVec& z);
Cx bergman_ball(int n, const CxVec& w, const CxVec& z);

// Interior-extended Leray form eta~ = drho(w) / (<drho(w),w-z> - rho(w)) and
// the Leray-Bergman solid kernel density against dV:
//   B_L(w,z) = top_form_density( (2 pi i)^{-n} (dbar_w eta~)^n ).
// Re(denominator) > 0 is asserted (convexity).
FormAtPoint eta_tilde(const Domain& d, const CxVec& w, const CxVec& z);
FormField eta_tilde_field(const Domain& d);
Cx bergman_leray_density(const Domain& d, const CxVec& w, const CxVec& z);

// A boundary kernel as a scalar density at quadrature nodes.
struct BoundaryKernelDensity {
  enum class Measure { sigma, mu_rho };
  std::string name;
  Measure measure = Measure::sigma;
  int singularity_order = 0;  // blow-up power of |w-z| as z -> w
  std::function<Cx(const CxVec& w, const TangentFrame& frame, const CxVec& z)> eval;
};

// Closed-form Bochner-Martinelli density against dsigma,
//   j* [ (n-1)!/(2 pi i |w-z|^2)^n sum_j (wbar_j-zbar_j)
//        dw_j /\ (/\_{nu != j} dwbar_nu /\ dw_nu) ],
// plus the forms-engine path for cross-validation.
BoundaryKernelDensity bm_density(int n);
BoundaryKernelDensity bm_density_via_forms(int n);

// Cauchy-Leray kernel; sigma-tagged (includes D~) or mu-tagged (plain
// <drho(w), w-z>^{-n}, to be integrated against dmu_rho).
BoundaryKernelDensity cauchy_leray_kernel(const Domain& d,
                                          BoundaryKernelDensity::Measure measure);

// j* cf0(eta) as a dsigma-density for an arbitrary generating field.
BoundaryKernelDensity cf_boundary_density(const FormField& eta, std::string name);

}  // namespace cfint
