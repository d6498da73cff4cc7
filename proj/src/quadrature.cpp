#include "cfint/quadrature.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "cfint/kernels.hpp"

namespace cfint {
namespace {

Real weight_sum(const std::vector<Real>& w) {
  Real s = 0.0;
  for (Real v : w) s += v;
  return s;
}

// Real-linear coordinates of the hyperspherical point for the given polar
// angles and azimuth, packed as w_j = x_{2j-1} + i x_{2j}.
CxVec hyperspherical_point(const std::vector<Real>& polar, Real azimuth, int n) {
  const int d = 2 * n;
  RealVec x(d);
  Real sin_prod = 1.0;
  for (std::size_t i = 0; i < polar.size(); ++i) {
    x[static_cast<int>(i)] = sin_prod * std::cos(polar[i]);
    sin_prod *= std::sin(polar[i]);
  }
  x[d - 2] = sin_prod * std::cos(azimuth);
  x[d - 1] = sin_prod * std::sin(azimuth);
  CxVec w(n);
  for (int j = 0; j < n; ++j) w[j] = Cx{x[2 * j], x[2 * j + 1]};
  return w;
}

}  // namespace

QuadratureRule1D gauss_legendre(int count) {
  if (count < 1) throw std::invalid_argument("gauss_legendre: count < 1");
  QuadratureRule1D rule;
  rule.nodes = RealVec::Zero(count);
  rule.weights = RealVec::Zero(count);
  for (int i = 0; i < (count + 1) / 2; ++i) {
    // Tricomi initial guess, then Newton on the three-term recurrence.
    Real t = std::cos(kPi * (i + 0.75) / (count + 0.5));
    Real dp = 0.0;
    for (int iter = 0; iter < 64; ++iter) {
      Real p0 = 1.0, p1 = 0.0;
      for (int k = 0; k < count; ++k) {
        Real p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k + 1.0) * t * p1 - k * p2) / (k + 1.0);
      }
      dp = count * (t * p0 - p1) / (t * t - 1.0);
      Real step = p0 / dp;
      t -= step;
      if (std::abs(step) < 1e-15) break;
    }
    rule.nodes[i] = -t;  // ascending order
    rule.nodes[count - 1 - i] = t;
    Real w = 2.0 / ((1.0 - t * t) * dp * dp);
    rule.weights[i] = w;
    rule.weights[count - 1 - i] = w;
  }
  return rule;
}

QuadratureRule1D gauss_legendre(int count, Real a, Real b) {
  QuadratureRule1D rule = gauss_legendre(count);
  rule.nodes = (0.5 * (b - a) * rule.nodes.array() + 0.5 * (a + b)).matrix();
  rule.weights *= 0.5 * (b - a);
  return rule;
}

Real BoundaryQuadrature::total_weight() const { return weight_sum(weights); }
Real VolumeQuadrature::total_weight() const { return weight_sum(weights); }

BoundaryQuadrature sphere_quadrature(int n, int n_polar, int n_azimuthal) {
  if (n < 1) throw std::invalid_argument("sphere_quadrature: n < 1");
  if (n_polar < 2 || n_azimuthal < 2)
    throw std::invalid_argument("sphere_quadrature: resolution < 2");
  const int d = 2 * n;
  const int n_angles = d - 2;

  QuadratureRule1D gl = gauss_legendre(n_polar, 0.0, kPi);
  // sin^k factors of the surface element, tabulated per polar node.
  std::vector<RealVec> sin_pow(n_angles);
  for (int i = 0; i < n_angles; ++i) {
    int k = d - 2 - i;  // exponent of the i-th polar angle (0-based)
    sin_pow[i] = gl.nodes.array().sin().pow(k).matrix();
  }

  BoundaryQuadrature q;
  q.n = n;
  q.polar = n_polar;
  q.azimuthal = n_azimuthal;
  std::size_t count = static_cast<std::size_t>(n_azimuthal);
  for (int i = 0; i < n_angles; ++i) count *= static_cast<std::size_t>(n_polar);
  q.nodes.reserve(count);
  q.weights.reserve(count);

  Domain ball = make_unit_ball(n);
  std::vector<int> idx(n_angles, 0);
  std::vector<Real> angles(n_angles, 0.0);
  bool done = false;
  while (!done) {
    Real polar_weight = 1.0;
    for (int i = 0; i < n_angles; ++i) {
      angles[i] = gl.nodes[idx[i]];
      polar_weight *= gl.weights[idx[i]] * sin_pow[i][idx[i]];
    }
    for (int a = 0; a < n_azimuthal; ++a) {
      Real azimuth = 2.0 * kPi * a / n_azimuthal;
      q.nodes.push_back(hyperspherical_point(angles, azimuth, n));
      q.weights.push_back(polar_weight * 2.0 * kPi / n_azimuthal);
    }
    done = true;
    for (int i = 0; i < n_angles; ++i) {  // odometer over polar indices
      if (++idx[i] < n_polar) {
        done = false;
        break;
      }
      idx[i] = 0;
    }
  }

  q.frames.reserve(q.nodes.size());
  q.dbar_grads.reserve(q.nodes.size());
  q.levi_leray.reserve(q.nodes.size());
  // The Levi-Leray density of the unit sphere is unitarily invariant, hence
  // constant; evaluate the form pullback once and replicate.
  Cx density{0.0, 0.0};
  for (const auto& w : q.nodes) {
    q.frames.push_back(boundary_frame(ball.defining, w));
    q.dbar_grads.push_back(w.conjugate());
    if (density == Cx{0.0, 0.0})
      density = levi_leray_density(ball, w, q.frames.back());
    q.levi_leray.push_back(density);
  }
  return q;
}

Real radial_solve(const Domain& d, const CxVec& u) {
  return boundary_ray_solve(d.defining, d.star_center, u);
}

BoundaryQuadrature radial_graph_quadrature(const Domain& d,
                                           const BoundaryQuadrature& sphere) {
  if (d.defining.n != sphere.n)
    throw std::invalid_argument("radial_graph_quadrature: dimension mismatch");
  const int n = d.defining.n;
  BoundaryQuadrature q;
  q.n = n;
  q.polar = sphere.polar;
  q.azimuthal = sphere.azimuthal;
  q.nodes.reserve(sphere.size());
  q.weights.reserve(sphere.size());
  q.frames.reserve(sphere.size());
  q.dbar_grads.reserve(sphere.size());
  q.levi_leray.reserve(sphere.size());

  for (std::size_t i = 0; i < sphere.size(); ++i) {
    const CxVec& u = sphere.nodes[i];
    Real r = radial_solve(d, u);
    CxVec w = d.star_center + r * u;
    CxVec g = d.defining.dbar_grad(w);
    // |grad rho| / |<grad rho, u>_R| = |g| / |Re <g, u>| in the complex
    // packing of the real gradient 2 conj(g).
    Real radial_slope = std::abs(pairing(g, u).real());
    if (radial_slope < 1e-10 * g.norm())
      throw DegenerateBoundary(
          "radial_graph_quadrature: ray nearly tangent to the boundary "
          "(star-shape violation)");
    q.nodes.push_back(w);
    q.weights.push_back(sphere.weights[i] * std::pow(r, 2 * n - 1) * g.norm() /
                        radial_slope);
    q.frames.push_back(boundary_frame(d.defining, w));
    q.dbar_grads.push_back(g);
    q.levi_leray.push_back(levi_leray_density(d, w, q.frames.back()));
  }
  return q;
}

VolumeQuadrature ball_volume_quadrature(int n, int n_radial,
                                        const BoundaryQuadrature& sphere) {
  if (n != sphere.n)
    throw std::invalid_argument("ball_volume_quadrature: dimension mismatch");
  QuadratureRule1D gl = gauss_legendre(n_radial, 0.0, 1.0);
  VolumeQuadrature q;
  q.n = n;
  q.radial = n_radial;
  q.polar = sphere.polar;
  q.azimuthal = sphere.azimuthal;
  q.nodes.reserve(sphere.size() * static_cast<std::size_t>(n_radial));
  q.weights.reserve(q.nodes.capacity());
  for (int k = 0; k < n_radial; ++k) {
    Real t = gl.nodes[k];
    Real radial_weight = gl.weights[k] * std::pow(t, 2 * n - 1);
    for (std::size_t i = 0; i < sphere.size(); ++i) {
      q.nodes.push_back(t * sphere.nodes[i]);
      q.weights.push_back(radial_weight * sphere.weights[i]);
    }
  }
  return q;
}

VolumeQuadrature star_volume_quadrature(const Domain& d, int n_radial,
                                        const BoundaryQuadrature& sphere) {
  if (d.defining.n != sphere.n)
    throw std::invalid_argument("star_volume_quadrature: dimension mismatch");
  const int n = d.defining.n;
  QuadratureRule1D gl = gauss_legendre(n_radial, 0.0, 1.0);
  VolumeQuadrature q;
  q.n = n;
  q.radial = n_radial;
  q.polar = sphere.polar;
  q.azimuthal = sphere.azimuthal;
  q.nodes.reserve(sphere.size() * static_cast<std::size_t>(n_radial));
  q.weights.reserve(q.nodes.capacity());
  for (std::size_t i = 0; i < sphere.size(); ++i) {
    const CxVec& u = sphere.nodes[i];
    Real r = radial_solve(d, u);
    Real ray_weight = sphere.weights[i] * std::pow(r, 2 * n);
    for (int k = 0; k < n_radial; ++k) {
      q.nodes.push_back(d.star_center + (gl.nodes[k] * r) * u);
      q.weights.push_back(ray_weight * gl.weights[k] * std::pow(gl.nodes[k], 2 * n - 1));
    }
  }
  return q;
}

Cx integrate(const BoundaryQuadrature& q, const std::function<Cx(const CxVec&)>& f) {
  Cx s{0.0, 0.0};
  for (std::size_t i = 0; i < q.size(); ++i) s += q.weights[i] * f(q.nodes[i]);
  return s;
}

Cx integrate(const VolumeQuadrature& q, const std::function<Cx(const CxVec&)>& f) {
  Cx s{0.0, 0.0};
  for (std::size_t i = 0; i < q.size(); ++i) s += q.weights[i] * f(q.nodes[i]);
  return s;
}

namespace {

void csv_header(int n, std::ostream& out) {
  for (int j = 1; j <= n; ++j) out << "x" << j << ",y" << j << ",";
  out << "weight\n";
}

void csv_rows(const std::vector<CxVec>& nodes, const std::vector<Real>& weights,
              std::ostream& out) {
  out.precision(17);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (int j = 0; j < nodes[i].size(); ++j)
      out << nodes[i][j].real() << "," << nodes[i][j].imag() << ",";
    out << weights[i] << "\n";
  }
}

}  // namespace

void write_csv(const BoundaryQuadrature& q, std::ostream& out) {
  csv_header(q.n, out);
  csv_rows(q.nodes, q.weights, out);
}

void write_csv(const VolumeQuadrature& q, std::ostream& out) {
  csv_header(q.n, out);
  csv_rows(q.nodes, q.weights, out);
}

}  // namespace cfint
