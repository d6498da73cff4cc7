#include "cfint/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace cfint {
namespace {

// Real coordinate directions of C^n ~ R^{2n} under the complex
// identification: index 2j is x_j (step 1*e_j), index 2j+1 is y_j (i*e_j).
CxVec real_axis_step(int n, int axis, Real h) {
  CxVec e = CxVec::Zero(n);
  e[axis / 2] = (axis % 2 == 0) ? Cx{h, 0.0} : Cx{0.0, h};
  return e;
}

constexpr std::uint64_t kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19,
                                     23, 29, 31, 37, 41, 43, 47, 53};

Real box_muller(Real u1, Real u2) {
  u1 = std::max(u1, 1e-300);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

// Low-discrepancy point on the unit sphere of R^d (Halton + Box-Muller).
RealVec halton_sphere(std::uint64_t index, int d, int base_offset = 0) {
  RealVec g(d);
  for (int i = 0; i < d; ++i) {
    Real u1 = halton(index + 1, kPrimes[(base_offset + 2 * i) % 16]);
    Real u2 = halton(index + 1, kPrimes[(base_offset + 2 * i + 1) % 16]);
    g[i] = box_muller(u1, u2);
  }
  Real r = g.norm();
  if (r < 1e-9) {
    g.setZero();
    g[0] = 1.0;
    r = 1.0;
  }
  return g / r;
}

CxVec to_complex(const RealVec& x) {
  CxVec w(x.size() / 2);
  for (int j = 0; j < w.size(); ++j) w[j] = Cx{x[2 * j], x[2 * j + 1]};
  return w;
}

// Local models have rho linear in Im z_n with slope -1, so the boundary is
// the graph Im z_n = rho(w)|_{Im z_n = 0}.
CxVec model_graph_point(const DefiningFunction& f, CxVec w) {
  const int n = f.n;
  w[n - 1] = Cx{w[n - 1].real(), 0.0};
  w[n - 1] = Cx{w[n - 1].real(), f.rho(w)};
  return w;
}

}  // namespace

DefiningFunction with_finite_differences(const DefiningFunction& f, Real h) {
  DefiningFunction g;
  g.n = f.n;
  g.rho = f.rho;
  g.analytic = false;
  g.fd_step = h;
  const auto rho = f.rho;
  const int n = f.n;

  auto d1 = [rho, n, h](const CxVec& w, int axis) {
    CxVec e = real_axis_step(n, axis, h);
    return (rho(w + e) - rho(w - e)) / (2.0 * h);
  };
  auto d2 = [rho, n, h](const CxVec& w, int a, int b) {
    if (a == b) {
      CxVec e = real_axis_step(n, a, h);
      return (rho(w + e) - 2.0 * rho(w) + rho(w - e)) / (h * h);
    }
    CxVec ea = real_axis_step(n, a, h), eb = real_axis_step(n, b, h);
    return (rho(w + ea + eb) - rho(w + ea - eb) - rho(w - ea + eb) + rho(w - ea - eb)) /
           (4.0 * h * h);
  };

  g.dbar_grad = [d1, n](const CxVec& w) {
    CxVec out(n);
    for (int j = 0; j < n; ++j)
      out[j] = 0.5 * Cx{d1(w, 2 * j), 0.0} - 0.5 * kImag * d1(w, 2 * j + 1);
    return out;
  };
  g.hess_holo = [d2, n](const CxVec& w) {
    CxMat out(n, n);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Real xx = d2(w, 2 * j, 2 * k), yy = d2(w, 2 * j + 1, 2 * k + 1);
        Real xy = d2(w, 2 * j, 2 * k + 1), yx = d2(w, 2 * j + 1, 2 * k);
        out(j, k) = 0.25 * (Cx{xx - yy, 0.0} - kImag * (xy + yx));
      }
    return out;
  };
  g.hess_mixed = [d2, n](const CxVec& w) {
    CxMat out(n, n);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Real xx = d2(w, 2 * j, 2 * k), yy = d2(w, 2 * j + 1, 2 * k + 1);
        Real xy = d2(w, 2 * j, 2 * k + 1), yx = d2(w, 2 * j + 1, 2 * k);
        out(j, k) = 0.25 * (Cx{xx + yy, 0.0} + kImag * (xy - yx));
      }
    return out;
  };
  // No third-derivative provider in finite-difference mode; consumers fall
  // back to differencing whole form fields.
  g.dbar_hess_holo = nullptr;
  return g;
}

DefiningFunction scaled(const DefiningFunction& f, Real s) {
  DefiningFunction g = f;
  auto rho = f.rho;
  auto grad = f.dbar_grad;
  auto hh = f.hess_holo;
  auto hm = f.hess_mixed;
  g.rho = [rho, s](const CxVec& w) { return s * rho(w); };
  g.dbar_grad = [grad, s](const CxVec& w) { return (grad(w) * s).eval(); };
  g.hess_holo = [hh, s](const CxVec& w) { return (hh(w) * s).eval(); };
  g.hess_mixed = [hm, s](const CxVec& w) { return (hm(w) * s).eval(); };
  if (f.dbar_hess_holo) {
    auto t3 = f.dbar_hess_holo;
    g.dbar_hess_holo = [t3, s](const CxVec& w) {
      CxTensor3 t = t3(w);
      for (auto& m : t) m *= s;
      return t;
    };
  }
  return g;
}

Domain make_unit_ball(int n) {
  if (n < 1) throw std::invalid_argument("make_unit_ball: n >= 1 required");
  DefiningFunction f;
  f.n = n;
  f.rho = [](const CxVec& w) { return w.squaredNorm() - 1.0; };
  f.dbar_grad = [](const CxVec& w) { return w.conjugate().eval(); };
  f.hess_holo = [n](const CxVec&) { return CxMat::Zero(n, n).eval(); };
  f.hess_mixed = [n](const CxVec&) { return CxMat::Identity(n, n).eval(); };
  f.dbar_hess_holo = [n](const CxVec&) { return CxTensor3(n, CxMat::Zero(n, n)); };
  Domain d;
  d.defining = std::move(f);
  d.star_center = CxVec::Zero(n);
  d.label = "ball" + std::to_string(n);
  d.claimed_class = ConvexityClass::Ball;
  return d;
}

Domain make_ellipsoid(const RealVec& a) {
  const int n = static_cast<int>(a.size());
  if (n < 1) throw std::invalid_argument("make_ellipsoid: empty axis list");
  if ((a.array() <= 0.0).any())
    throw std::invalid_argument("make_ellipsoid: axis weights must be positive");
  DefiningFunction f;
  f.n = n;
  f.rho = [a](const CxVec& w) { return (a.array() * w.array().abs2()).sum() - 1.0; };
  f.dbar_grad = [a](const CxVec& w) {
    return (a.array() * w.conjugate().array()).matrix().eval();
  };
  f.hess_holo = [n](const CxVec&) { return CxMat::Zero(n, n).eval(); };
  f.hess_mixed = [a, n](const CxVec&) {
    CxMat m = CxMat::Zero(n, n);
    for (int j = 0; j < n; ++j) m(j, j) = a[j];
    return m;
  };
  f.dbar_hess_holo = [n](const CxVec&) { return CxTensor3(n, CxMat::Zero(n, n)); };
  Domain d;
  d.defining = std::move(f);
  d.star_center = CxVec::Zero(n);
  d.label = "ellipsoid";
  d.claimed_class = ConvexityClass::Ellipsoid;
  return d;
}

Domain make_local_model_pscvx_not_clin() {
  // rho = 2(Re z1)^2 - (Im z1)^2 - Im z2
  //     = (3/4) z1^2 + (3/4) zbar1^2 + (1/2)|z1|^2 + (i/2)(z2 - zbar2).
  DefiningFunction f;
  f.n = 2;
  f.rho = [](const CxVec& z) {
    Real x = z[0].real(), y = z[0].imag();
    return 2.0 * x * x - y * y - z[1].imag();
  };
  f.dbar_grad = [](const CxVec& z) {
    CxVec g(2);
    g[0] = 1.5 * z[0] + 0.5 * std::conj(z[0]);
    g[1] = 0.5 * kImag;
    return g;
  };
  f.hess_holo = [](const CxVec&) {
    CxMat m = CxMat::Zero(2, 2);
    m(0, 0) = 1.5;
    return m;
  };
  f.hess_mixed = [](const CxVec&) {
    CxMat m = CxMat::Zero(2, 2);
    m(0, 0) = 0.5;
    return m;
  };
  f.dbar_hess_holo = [](const CxVec&) { return CxTensor3(2, CxMat::Zero(2, 2)); };
  Domain d;
  d.defining = std::move(f);
  d.star_center = CxVec::Zero(2);
  d.star_center[1] = Cx{0.0, 0.05};  // interior reference point of the patch
  d.label = "model1";
  d.claimed_class = ConvexityClass::LocalModel;
  d.bounded = false;
  return d;
}

Domain make_local_model_strict_not_strong(int n) {
  if (n < 2) throw std::invalid_argument("make_local_model_strict_not_strong: n >= 2");
  DefiningFunction f;
  f.n = n;
  auto head_sq = [n](const CxVec& z) {
    Real s = 0.0;
    for (int j = 0; j + 1 < n; ++j) s += std::norm(z[j]);
    return s;
  };
  f.rho = [head_sq, n](const CxVec& z) {
    Real s = head_sq(z);
    return s * s - z[n - 1].imag();
  };
  f.dbar_grad = [head_sq, n](const CxVec& z) {
    Real s = head_sq(z);
    CxVec g(n);
    for (int j = 0; j + 1 < n; ++j) g[j] = 2.0 * s * std::conj(z[j]);
    g[n - 1] = 0.5 * kImag;
    return g;
  };
  f.hess_holo = [n](const CxVec& z) {
    // d^2/dz_j dz_k of (sum |z|^2)^2 = 2 zbar_j zbar_k on the head block.
    CxMat m = CxMat::Zero(n, n);
    for (int j = 0; j + 1 < n; ++j)
      for (int k = 0; k + 1 < n; ++k) m(j, k) = 2.0 * std::conj(z[j]) * std::conj(z[k]);
    return m;
  };
  f.hess_mixed = [head_sq, n](const CxVec& z) {
    Real s = head_sq(z);
    CxMat m = CxMat::Zero(n, n);
    for (int j = 0; j + 1 < n; ++j) {
      for (int k = 0; k + 1 < n; ++k) m(j, k) = 2.0 * z[k] * std::conj(z[j]);
      m(j, j) += 2.0 * s;
    }
    return m;
  };
  f.dbar_hess_holo = [n](const CxVec& z) {
    // d/dzbar_l of 2 zbar_j zbar_k = 2 delta_jl zbar_k + 2 zbar_j delta_kl.
    CxTensor3 t(n, CxMat::Zero(n, n));
    for (int l = 0; l + 1 < n; ++l)
      for (int k = 0; k + 1 < n; ++k) {
        t[l](l, k) += 2.0 * std::conj(z[k]);
        t[l](k, l) += 2.0 * std::conj(z[k]);
      }
    return t;
  };
  Domain d;
  d.defining = std::move(f);
  d.star_center = CxVec::Zero(n);
  d.star_center[n - 1] = Cx{0.0, 0.05};
  d.label = "model2";
  d.claimed_class = ConvexityClass::LocalModel;
  d.bounded = false;
  return d;
}

Real levi_form(const DefiningFunction& f, const CxVec& w, const CxVec& xi) {
  if (xi.size() != f.n || w.size() != f.n)
    throw std::invalid_argument("levi_form: dimension mismatch");
  CxMat h = f.hess_mixed(w);
  const Real herm_tol = f.analytic ? 1e-10 : 1e-4;
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > herm_tol)
    throw std::runtime_error("levi_form: hess_mixed is not Hermitian (derivative fault)");
  Cx value = (xi.transpose() * h * xi.conjugate())(0);  // sum_jk h_jk xi_j conj(xi_k)
  Real scale = std::max(1.0, xi.squaredNorm() * h.cwiseAbs().maxCoeff());
  if (std::abs(value.imag()) > (f.analytic ? 1e-12 : 1e-6) * scale)
    throw std::runtime_error("levi_form: non-real value");
  return value.real();
}

Real levi_form(const Domain& d, const CxVec& w, const CxVec& xi) {
  return levi_form(d.defining, w, xi);
}

std::vector<CxVec> complex_tangent_basis(const DefiningFunction& f, const CxVec& w) {
  if (std::abs(f.rho(w)) > kBoundaryTol)
    throw std::invalid_argument("complex_tangent_basis: point not on the boundary");
  CxVec g = f.dbar_grad(w);
  Real gn = g.norm();
  if (gn < 1e-12) throw DegenerateBoundary("complex_tangent_basis: vanishing gradient");
  // T_w(bD) = { xi : sum_j g_j xi_j = 0 } is the Hermitian-orthogonal
  // complement of conj(g).
  CxVec normal = g.conjugate() / gn;
  const int n = f.n;
  std::vector<CxVec> candidates;
  for (int j = 0; j < n; ++j) {
    CxVec e = CxVec::Zero(n);
    e[j] = 1.0;
    candidates.push_back(e - normal * normal.dot(e));
  }
  std::vector<CxVec> basis;
  while (static_cast<int>(basis.size()) < n - 1) {
    // Pivot: largest remaining norm first.
    int best = -1;
    Real best_norm = 1e-10;
    for (int j = 0; j < n; ++j) {
      if (candidates[j].size() == 0) continue;
      Real r = candidates[j].norm();
      if (r > best_norm) {
        best_norm = r;
        best = j;
      }
    }
    if (best < 0) throw DegenerateBoundary("complex_tangent_basis: rank deficiency");
    CxVec v = candidates[best] / best_norm;
    basis.push_back(v);
    candidates[best] = CxVec();
    for (int j = 0; j < n; ++j)
      if (candidates[j].size() != 0) candidates[j] -= v * v.dot(candidates[j]);
  }
  return basis;
}

std::vector<CxVec> complex_tangent_basis(const Domain& d, const CxVec& w) {
  return complex_tangent_basis(d.defining, w);
}

std::vector<CxVec> direction_sweep(const std::vector<CxVec>& basis, int count) {
  std::vector<CxVec> dirs;
  if (basis.empty()) return dirs;
  const int m = static_cast<int>(basis.size());
  // The basis vectors themselves come first so axis-aligned minima are hit
  // exactly; the rest is a low-discrepancy sweep of the unit sphere in the
  // complex span.
  for (const auto& b : basis) dirs.push_back(b);
  for (int k = 0; static_cast<int>(dirs.size()) < count; ++k) {
    RealVec c = halton_sphere(static_cast<std::uint64_t>(k), 2 * m);
    CxVec v = CxVec::Zero(basis[0].size());
    for (int t = 0; t < m; ++t) v += Cx{c[2 * t], c[2 * t + 1]} * basis[t];
    Real r = v.norm();
    if (r > 1e-9) dirs.push_back(v / r);
  }
  return dirs;
}

Real pseudoconvexity_margin(const Domain& d, const std::vector<CxVec>& boundary_samples,
                            int directions_per_point) {
  if (boundary_samples.empty())
    throw std::invalid_argument("pseudoconvexity_margin: no samples");
  Real margin = std::numeric_limits<Real>::infinity();
  for (const auto& w : boundary_samples) {
    auto basis = complex_tangent_basis(d.defining, w);
    for (const auto& xi : direction_sweep(basis, directions_per_point))
      margin = std::min(margin, levi_form(d.defining, w, xi));
  }
  return margin;
}

Real convexity_margin(const Domain& d, const std::vector<CxVec>& boundary_samples,
                      int directions_per_point) {
  if (boundary_samples.empty())
    throw std::invalid_argument("convexity_margin: no samples");
  const int n = d.defining.n;
  Real margin = std::numeric_limits<Real>::infinity();
  for (const auto& w : boundary_samples) {
    CxVec grad = d.defining.dbar_grad(w).conjugate();  // real gradient direction
    Real g2 = grad.squaredNorm();
    if (g2 < 1e-18) throw DegenerateBoundary("convexity_margin: vanishing gradient");
    CxMat hh = d.defining.hess_holo(w);

    // Real coordinate axes first, then a low-discrepancy sweep of R^{2n}.
    std::vector<CxVec> raw;
    for (int j = 0; j < n; ++j) {
      CxVec e = CxVec::Zero(n);
      e[j] = Cx{1.0, 0.0};
      raw.push_back(e);
      e[j] = Cx{0.0, 1.0};
      raw.push_back(e);
    }
    for (int k = 0; static_cast<int>(raw.size()) < directions_per_point; ++k)
      raw.push_back(to_complex(halton_sphere(static_cast<std::uint64_t>(k), 2 * n)));

    for (CxVec xi : raw) {
      // Project onto the real tangent space Re<drho(w), xi> = 0.
      xi -= (real_dot(grad, xi) / g2) * grad;
      Real r = xi.norm();
      if (r < 1e-9) continue;
      xi /= r;
      Real q = ((xi.transpose() * hh * xi).value()).real() + levi_form(d.defining, w, xi);
      margin = std::min(margin, q);
    }
  }
  return margin;
}

Real clin_convexity_margin(const Domain& d, const std::vector<CxVec>& boundary_samples,
                           const std::vector<CxVec>& closure_samples) {
  if (boundary_samples.empty() || closure_samples.empty())
    throw std::invalid_argument("clin_convexity_margin: empty sample set");
  Real margin = std::numeric_limits<Real>::infinity();
  for (const auto& w : boundary_samples) {
    CxVec g = d.defining.dbar_grad(w);
    for (const auto& z : closure_samples) {
      CxVec diff = w - z;
      Real r2 = diff.squaredNorm();
      if (r2 < 1e-16) continue;  // |w-z| < 1e-8 skipped
      margin = std::min(margin, std::abs(pairing(g, diff)) / r2);
    }
  }
  return margin;
}

Real quasi_distance(const DefiningFunction& f, const CxVec& w, const CxVec& z) {
  return std::sqrt(std::abs(pairing(f.dbar_grad(w), w - z)));
}

Real quasi_distance(const Domain& d, const CxVec& w, const CxVec& z) {
  return quasi_distance(d.defining, w, z);
}

Real quasi_triangle_constant(const Domain& d, const std::vector<CxVec>& boundary_samples,
                             int triples, std::uint64_t seed) {
  const auto m = boundary_samples.size();
  if (m < 3) throw std::invalid_argument("quasi_triangle_constant: need >= 3 samples");
  Rng rng(seed);
  Real k = 0.0;
  for (int t = 0; t < triples; ++t) {
    const CxVec& w = boundary_samples[rng.next_u64() % m];
    const CxVec& u = boundary_samples[rng.next_u64() % m];
    const CxVec& z = boundary_samples[rng.next_u64() % m];
    Real denom = quasi_distance(d, w, u) + quasi_distance(d, u, z);
    if (denom < 1e-12) continue;
    k = std::max(k, quasi_distance(d, w, z) / denom);
  }
  return k;
}

Real boundary_ray_solve(const DefiningFunction& f, const CxVec& origin, const CxVec& u) {
  if (f.rho(origin) >= 0.0)
    throw std::invalid_argument("boundary_ray_solve: origin not interior");
  Real lo = 0.0, hi = 1.0;
  int guard = 0;
  while (f.rho(origin + hi * u) < 0.0) {
    lo = hi;
    hi *= 1.8;
    if (++guard > 90) throw DegenerateBoundary("boundary_ray_solve: no bracket on ray");
  }
  for (int it = 0; it < 80; ++it) {
    Real mid = 0.5 * (lo + hi);
    (f.rho(origin + mid * u) < 0.0 ? lo : hi) = mid;
  }
  Real t = 0.5 * (lo + hi);
  // Newton polish; d/dt rho(origin + t u) = 2 Re <drho, u>.
  for (int it = 0; it < 4; ++it) {
    CxVec w = origin + t * u;
    Real deriv = 2.0 * pairing(f.dbar_grad(w), u).real();
    if (std::abs(deriv) < 1e-14) break;
    t -= f.rho(w) / deriv;
  }
  if (std::abs(f.rho(origin + t * u)) > 1e-12)
    throw DegenerateBoundary("boundary_ray_solve: polish failed (tangential ray?)");
  return t;
}

std::vector<CxVec> sample_boundary(const Domain& d, int count, std::uint64_t seed,
                                   Real patch_scale) {
  const int n = d.defining.n;
  std::vector<CxVec> out;
  if (d.bounded) {
    // Coordinate-axis points first (they realize axis-aligned extrema
    // exactly), then low-discrepancy directions.
    std::vector<CxVec> dirs;
    for (int a = 0; a < 2 * n; ++a) {
      dirs.push_back(real_axis_step(n, a, 1.0));
      dirs.push_back(real_axis_step(n, a, -1.0));
    }
    for (std::uint64_t k = 0; static_cast<int>(dirs.size()) < count; ++k)
      dirs.push_back(to_complex(halton_sphere(k + seed, 2 * n)));
    for (const auto& u : dirs) {
      if (static_cast<int>(out.size()) >= count) break;
      out.push_back(d.star_center + boundary_ray_solve(d.defining, d.star_center, u) * u);
    }
    return out;
  }
  // Local model: solve the graph coordinate over a low-discrepancy patch box.
  const Real r = d.patch_radius * patch_scale;
  const Real half = 0.45 * r;
  for (std::uint64_t k = seed; static_cast<int>(out.size()) < count && k < seed + 40 * static_cast<std::uint64_t>(count) + 64; ++k) {
    CxVec w(n);
    for (int j = 0; j + 1 < n; ++j)
      w[j] = Cx{half * (2.0 * halton(k + 1, kPrimes[2 * j]) - 1.0),
                half * (2.0 * halton(k + 1, kPrimes[2 * j + 1]) - 1.0)};
    w[n - 1] = Cx{half * (2.0 * halton(k + 1, kPrimes[2 * (n - 1)]) - 1.0), 0.0};
    w = model_graph_point(d.defining, w);
    if (w.norm() < r) out.push_back(w);
  }
  if (static_cast<int>(out.size()) < count)
    throw std::runtime_error("sample_boundary: patch sampling starved");
  return out;
}

std::vector<CxVec> sample_closure(const Domain& d, int count, std::uint64_t seed,
                                  Real patch_scale) {
  const int n = d.defining.n;
  auto boundary = sample_boundary(d, std::max(8, count / 4), seed, patch_scale);
  std::vector<CxVec> out;

  // Generic interior points.
  if (d.bounded) {
    std::size_t k = 0;
    while (static_cast<int>(out.size()) < count / 2) {
      const CxVec& w = boundary[k % boundary.size()];
      Real t = halton(k + 1, 3);
      out.push_back(d.star_center + t * (w - d.star_center));
      ++k;
    }
  } else {
    const Real r = d.patch_radius * patch_scale;
    std::size_t k = 0;
    while (static_cast<int>(out.size()) < count / 2) {
      CxVec z = boundary[k % boundary.size()];
      // Pushing along +i e_n strictly decreases rho for the local models.
      Real depth = 0.05 * r * r * halton(k + 1, 5);
      z[n - 1] += kImag * depth;
      out.push_back(z);
      ++k;
    }
  }

  // Complex-tangent chord probes: z = w + t*xi pushed slightly inward.
  // These witness the failure of C-linear convexity where it fails (a
  // complex tangent line meeting the domain) and are harmless otherwise
  // because points outside the closure are discarded.
  const Real scale = d.bounded ? 1.0 : d.patch_radius * patch_scale;
  std::size_t k = 0;
  std::uint64_t probe = 0;
  while (static_cast<int>(out.size()) < count && probe < 40 * static_cast<std::uint64_t>(count) + 64) {
    const CxVec& w = boundary[k % boundary.size()];
    auto basis = complex_tangent_basis(d.defining, w);
    auto dirs = direction_sweep(basis, 8);
    for (const auto& xi : dirs) {
      for (Real tf : {0.35, 0.18, 0.09}) {
        if (static_cast<int>(out.size()) >= count) break;
        Real t = tf * scale;
        // Inward push depth ladder scaled to the patch: quadratic in the
        // chord length times a factor shrinking with the patch so that the
        // probes refine as the patch does.
        Real u = patch_scale * (0.02 + 0.98 * halton(probe + 1, 7));
        CxVec z = w + t * xi;
        if (d.bounded) {
          CxVec g = d.defining.dbar_grad(w);
          CxVec nu = 2.0 * g.conjugate();
          nu /= nu.norm();
          z -= (t * t * u) * nu;
        } else {
          z[n - 1] += kImag * (t * t * u);
        }
        ++probe;
        if (d.defining.rho(z) <= 1e-14 && (d.bounded || z.norm() < scale * 1.5))
          out.push_back(z);
      }
    }
    ++k;
    if (k > 8 * boundary.size() && static_cast<int>(out.size()) >= count / 2) break;
  }
  return out;
}

}  // namespace cfint
