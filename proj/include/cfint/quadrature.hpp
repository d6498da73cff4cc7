#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "cfint/forms.hpp"
#include "cfint/geometry.hpp"
#include "cfint/types.hpp"

namespace cfint {

// Nodes and weights of a one-dimensional rule on [a, b].
struct QuadratureRule1D {
  RealVec nodes;
  RealVec weights;
};

// Gauss-Legendre rule, exact for polynomials of degree <= 2*count - 1.
QuadratureRule1D gauss_legendre(int count);
QuadratureRule1D gauss_legendre(int count, Real a, Real b);

// Discretization of integration against dsigma on a domain boundary.  The
// frames, holomorphic gradients and Levi-Leray densities are precomputed per
// node; the object is immutable after construction.
struct BoundaryQuadrature {
  int n = 0;                         // complex dimension
  int polar = 0, azimuthal = 0;      // resolution descriptor
  std::vector<CxVec> nodes;
  std::vector<Real> weights;
  std::vector<TangentFrame> frames;
  std::vector<CxVec> dbar_grads;     // drho/dw at each node
  std::vector<Cx> levi_leray;        // Levi-Leray density at each node

  std::size_t size() const { return nodes.size(); }
  Real total_weight() const;
};

// Discretization of integration against dV on the solid domain.
struct VolumeQuadrature {
  int n = 0;
  int radial = 0, polar = 0, azimuthal = 0;
  std::vector<CxVec> nodes;
  std::vector<Real> weights;

  std::size_t size() const { return nodes.size(); }
  Real total_weight() const;
};

// Product rule on S^{2n-1} in hyperspherical angles: Gauss-Legendre in each
// of the 2n-2 polar angles with the sin-power surface factor folded into the
// weights, trapezoid in the periodic angle.  Spectrally accurate for smooth
// integrands.  Caches are those of the unit ball.
BoundaryQuadrature sphere_quadrature(int n, int n_polar, int n_azimuthal);

// Radius r > 0 with |rho(center + r u)| <= 1e-12 along the unit ray u.
Real radial_solve(const Domain& d, const CxVec& u);

// Transplants a sphere rule onto the boundary of a star-shaped domain via
// the radial graph w(u) = center + r(u) u.  Surface weight per node is
//   sphere weight * r^{2n-1} * |grad rho| / |<grad rho, u>_R|,
// the level-set surface-measure Jacobian.  Nearly tangential rays raise
// DegenerateBoundary (star-shape violation).
BoundaryQuadrature radial_graph_quadrature(const Domain& d,
                                           const BoundaryQuadrature& sphere);

// Solid rules: radial Gauss-Legendre against r^{2n-1} times a sphere rule,
// either on the unit ball or transported to a star-shaped domain.
VolumeQuadrature ball_volume_quadrature(int n, int n_radial,
                                        const BoundaryQuadrature& sphere);
VolumeQuadrature star_volume_quadrature(const Domain& d, int n_radial,
                                        const BoundaryQuadrature& sphere);

// Plain weighted sums.
Cx integrate(const BoundaryQuadrature& q, const std::function<Cx(const CxVec&)>& f);
Cx integrate(const VolumeQuadrature& q, const std::function<Cx(const CxVec&)>& f);

// Node coordinates and weights, one row per node, full precision.
void write_csv(const BoundaryQuadrature& q, std::ostream& out);
void write_csv(const VolumeQuadrature& q, std::ostream& out);

}  // namespace cfint
