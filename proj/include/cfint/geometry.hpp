#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "cfint/types.hpp"

namespace cfint {

// Third derivatives d^3 rho / dw_j dw_k dwbar_l, stored as tensor[l](j,k).
// Optional: only needed for analytic dbar-derivatives of Levi-polynomial
// kernels; all built-in domains supply it.
using CxTensor3 = std::vector<CxMat>;

// A real-valued defining function rho with D = {rho < 0}, together with its
// Wirtinger derivatives.  Conventions: d/dw_j = (d/dx_j - i d/dy_j)/2,
// dbar_grad_j = drho/dw_j, hess_holo_jk = d^2 rho/dw_j dw_k (symmetric),
// hess_mixed_jk = d^2 rho/dw_j dwbar_k (Hermitian for real rho).
struct DefiningFunction {
  int n = 0;
  std::function<Real(const CxVec&)> rho;
  std::function<CxVec(const CxVec&)> dbar_grad;
  std::function<CxMat(const CxVec&)> hess_holo;
  std::function<CxMat(const CxVec&)> hess_mixed;
  std::function<CxTensor3(const CxVec&)> dbar_hess_holo;  // may be empty
  bool analytic = true;
  Real fd_step = 1e-4;
};

// Replaces all derivative callables by central finite differences of rho.
DefiningFunction with_finite_differences(const DefiningFunction& f, Real h = 1e-4);

// The defining function s*rho (s > 0 keeps the domain, s < 0 flips it).
DefiningFunction scaled(const DefiningFunction& f, Real s);

enum class ConvexityClass {
  Ball,
  Ellipsoid,
  StronglyConvex,
  StronglyPseudoconvexNonconvex,
  LocalModel,
};

struct Domain {
  DefiningFunction defining;
  CxVec star_center;
  std::string label;
  ConvexityClass claimed_class = ConvexityClass::Ball;
  bool bounded = true;
  // Local models are unbounded hypersurface germs; diagnostics sample them
  // only on the patch {|w| < patch_radius}.
  Real patch_radius = 0.5;
};

// rho(w) = |w|^2 - 1.
Domain make_unit_ball(int n);

// rho(w) = sum_j a_j |w_j|^2 - 1, all a_j > 0.
Domain make_ellipsoid(const RealVec& a);

// n=2 germ that is strongly pseudoconvex but not strongly C-linearly
// convex:  rho(z) = 2(Re z1)^2 - (Im z1)^2 - Im z2.
Domain make_local_model_pscvx_not_clin();

// Germ that is strictly but not strongly C-linearly convex:
// rho(z) = (|z_1|^2 + ... + |z_{n-1}|^2)^2 - Im z_n, n >= 2.
Domain make_local_model_strict_not_strong(int n);

// <eta, v> = sum_j eta_j v_j (bilinear pairing of a (1,0)-form with a vector).
inline Cx pairing(const CxVec& eta, const CxVec& v) {
  return (eta.array() * v.array()).sum();
}

// Levi form sum_{j,k} hess_mixed_jk(w) xi_j conj(xi_k).  Real for real rho;
// the imaginary residue is asserted small and dropped.
Real levi_form(const DefiningFunction& f, const CxVec& w, const CxVec& xi);
Real levi_form(const Domain& d, const CxVec& w, const CxVec& xi);

// Orthonormal basis of the complex tangent space
// T_w(bD) = { xi : <drho(w), xi> = 0 }, computed by pivoted Gram-Schmidt on
// the orthogonal complement of the conjugate gradient.
std::vector<CxVec> complex_tangent_basis(const DefiningFunction& f, const CxVec& w);
std::vector<CxVec> complex_tangent_basis(const Domain& d, const CxVec& w);

// Deterministic sweep of unit directions in the span of `basis` (at least
// `count` directions), used by the margin estimators below.
std::vector<CxVec> direction_sweep(const std::vector<CxVec>& basis, int count);

// min over boundary samples and swept unit complex-tangent directions of the
// Levi form; a positive value is an empirical strong-pseudoconvexity
// constant c0.
Real pseudoconvexity_margin(const Domain& d, const std::vector<CxVec>& boundary_samples,
                            int directions_per_point = 64);

// min over boundary samples and swept unit REAL-tangent directions xi of the
// full real Hessian form (1/2) D^2 rho [xi, xi] = Re(xi^T hess_holo xi) +
// levi_form(xi); a positive value is an empirical strong-convexity constant.
Real convexity_margin(const Domain& d, const std::vector<CxVec>& boundary_samples,
                      int directions_per_point = 64);

// min over pairs (w boundary, z closure, |w-z| >= 1e-8) of
// |<drho(w), w-z>| / |w-z|^2; an empirical strong C-linear convexity
// constant.
Real clin_convexity_margin(const Domain& d, const std::vector<CxVec>& boundary_samples,
                           const std::vector<CxVec>& closure_samples);

// Quasi-metric |<drho(w), w-z>|^{1/2} (w on the boundary).
Real quasi_distance(const DefiningFunction& f, const CxVec& w, const CxVec& z);
Real quasi_distance(const Domain& d, const CxVec& w, const CxVec& z);

// Empirical quasi-triangle constant: max over sampled triples of
// d(w,z) / (d(w,u) + d(u,z)).
Real quasi_triangle_constant(const Domain& d, const std::vector<CxVec>& boundary_samples,
                             int triples = 2000, std::uint64_t seed = 1);

// Root of t -> rho(origin + t u) on t > 0 by bracketed bisection plus a
// Newton polish; |rho| <= 1e-12 at the returned point.
Real boundary_ray_solve(const DefiningFunction& f, const CxVec& origin, const CxVec& u);

// Deterministic boundary / closure samples for diagnostics.  Bounded domains
// are sampled by radial solves along low-discrepancy directions (always
// including the coordinate axis points); local models by solving for the
// graph coordinate over a low-discrepancy patch grid.
std::vector<CxVec> sample_boundary(const Domain& d, int count, std::uint64_t seed = 1,
                                   Real patch_scale = 1.0);
std::vector<CxVec> sample_closure(const Domain& d, int count, std::uint64_t seed = 2,
                                  Real patch_scale = 1.0);

}  // namespace cfint
