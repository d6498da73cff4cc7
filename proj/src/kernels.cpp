#include "cfint/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace cfint {
namespace {

Cx i_pow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return Cx{1.0, 0.0};
    case 1: return Cx{0.0, 1.0};
    case 2: return Cx{-1.0, 0.0};
    default: return Cx{0.0, -1.0};
  }
}

Cx inv_two_pi_i_pow(int n) { return 1.0 / (std::pow(2.0 * kPi, n) * i_pow(n)); }

Real factorial(int k) {
  Real r = 1.0;
  for (int t = 2; t <= k; ++t) r *= t;
  return r;
}

Cx bracket(const CxVec& z, const CxVec& w) {  // [z,w] = sum z_j wbar_j
  return (z.array() * w.conjugate().array()).sum();
}

// dbar partial rho = sum_{j,k} hess_mixed_jk dwbar_k /\ dw_j as a form.
FormAtPoint dbar_partial_rho(const DefiningFunction& f, const CxVec& w) {
  const int n = f.n;
  CxMat hm = f.hess_mixed(w);
  FormAtPoint out(n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) out.add_term(1u << j, 1u << k, -hm(j, k));
  return out;
}

FormAtPoint partial_rho_form(const DefiningFunction& f, const CxVec& w) {
  const int n = f.n;
  CxVec g = f.dbar_grad(w);
  FormAtPoint out(n);
  for (int j = 0; j < n; ++j) out.add_term(1u << j, 0u, g[j]);
  return out;
}

}  // namespace

Real smooth_step(Real t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  Real a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

Real smooth_step_deriv(Real t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  Real a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
  Real s = a + b;
  return a * b * (1.0 / (t * t) + 1.0 / ((1.0 - t) * (1.0 - t))) / (s * s);
}

Real chi1(Real r, const KernelConfig& cfg) {
  return 1.0 - smooth_step((r - 0.5 * cfg.eps0) / (0.5 * cfg.eps0));
}

Real chi1_deriv(Real r, const KernelConfig& cfg) {
  return -smooth_step_deriv((r - 0.5 * cfg.eps0) / (0.5 * cfg.eps0)) * 2.0 / cfg.eps0;
}

KernelConfig kernel_config_for(const Domain& d, int boundary_count) {
  auto samples = sample_boundary(d, boundary_count);
  KernelConfig cfg;
  cfg.c0 = std::max(pseudoconvexity_margin(d, samples, 32), 1e-6);
  // Lipschitz modulus of the full complex Hessian over boundary pairs.
  Real lip = 0.0;
  for (std::size_t a = 1; a < samples.size(); ++a) {
    Real gap = (samples[a] - samples[a - 1]).norm();
    if (gap < 1e-10) continue;
    Real dh = (d.defining.hess_holo(samples[a]) - d.defining.hess_holo(samples[a - 1]))
                  .cwiseAbs()
                  .maxCoeff() +
              (d.defining.hess_mixed(samples[a]) - d.defining.hess_mixed(samples[a - 1]))
                  .cwiseAbs()
                  .maxCoeff();
    lip = std::max(lip, dh / gap);
  }
  cfg.eps0 = std::min(0.5, 0.5 * cfg.c0 / std::max(lip, 1e-9));
  cfg.eps = 0.25 * cfg.eps0;
  cfg.mu0 = cfg.c0 * cfg.eps0 * cfg.eps0 / 16.0;
  cfg.delta0 = 0.5 * cfg.mu0;
  return cfg;
}

CxVec levi_coefficients(const Domain& d, const CxVec& w, const CxVec& z) {
  return d.defining.dbar_grad(w) - 0.5 * (d.defining.hess_holo(w) * (w - z));
}

Cx levi_polynomial(const Domain& d, const CxVec& w, const CxVec& z) {
  return pairing(levi_coefficients(d, w, z), w - z);
}

Cx g_glued(const Domain& d, const CxVec& w, const CxVec& z, const KernelConfig& cfg) {
  Real r = (w - z).norm();
  Real c = chi1(r, cfg);
  Cx g = c * levi_polynomial(d, w, z) + (1.0 - c) * (r * r);
  return g;
}

CxVec eta_eps_coeffs(const Domain& d, const CxVec& w, const CxVec& z,
                     const KernelConfig& cfg) {
  if (!cfg.valid()) throw std::invalid_argument("eta_eps: invalid KernelConfig");
  Real r = (w - z).norm();
  Real c = chi1(r, cfg);
  CxVec num = c * levi_coefficients(d, w, z) + (1.0 - c) * (w - z).conjugate();
  Cx g = c * levi_polynomial(d, w, z) + (1.0 - c) * (r * r);
  if (std::abs(g) < 1e-14 * (1.0 + r))
    throw ConvexityViolation("eta_eps: glued denominator vanished");
  return num / g;
}

FormAtPoint eta_eps(const Domain& d, const CxVec& w, const CxVec& z,
                    const KernelConfig& cfg) {
  CxVec c = eta_eps_coeffs(d, w, z, cfg);
  FormAtPoint out(d.defining.n);
  for (int j = 0; j < d.defining.n; ++j) out.add_term(1u << j, 0u, c[j]);
  return out;
}

FormField eta_eps_field(const Domain& d, const KernelConfig& cfg) {
  const int n = d.defining.n;
  auto coeffs = [d, cfg](const CxVec& w, const CxVec& z) {
    return eta_eps_coeffs(d, w, z, cfg);
  };
  if (!d.defining.analytic || !d.defining.dbar_hess_holo)
    return one_zero_field(n, coeffs);

  auto dwbar = [d, cfg, n](const CxVec& w, const CxVec& z) {
    const auto& f = d.defining;
    CxVec diff = w - z;
    Real r = diff.norm();
    Real c = chi1(r, cfg);
    Real cp = chi1_deriv(r, cfg);
    CxMat hm = f.hess_mixed(w);
    CxTensor3 t3 = f.dbar_hess_holo(w);
    CxVec dj = levi_coefficients(d, w, z);
    Cx delta = pairing(dj, diff);
    Real beta = r * r;
    CxVec num = c * dj + (1.0 - c) * diff.conjugate();
    Cx g = c * delta + (1.0 - c) * beta;

    CxMat m(n, n);
    for (int k = 0; k < n; ++k) {
      Cx dchi = (r > 1e-14) ? Cx{cp, 0.0} * diff[k] / (2.0 * r) : Cx{0.0, 0.0};
      // d Delta_j / dwbar_k and d Delta / dwbar_k.
      CxVec ddj(n);
      for (int j = 0; j < n; ++j) {
        Cx third{0.0, 0.0};
        for (int l = 0; l < n; ++l) third += t3[k](j, l) * diff[l];
        ddj[j] = hm(j, k) - 0.5 * third;
      }
      Cx ddelta = pairing(ddj, diff);
      Cx dg = dchi * (delta - beta) + c * ddelta + (1.0 - c) * diff[k];
      for (int j = 0; j < n; ++j) {
        Cx dn = dchi * (dj[j] - std::conj(diff[j])) + c * ddj[j] +
                (1.0 - c) * (j == k ? Cx{1.0, 0.0} : Cx{0.0, 0.0});
        m(j, k) = (dn * g - num[j] * dg) / (g * g);
      }
    }
    return m;
  };
  return one_zero_field(n, coeffs, dwbar);
}

Cx leray_denominator(const Domain& d, const CxVec& w, const CxVec& z) {
  return pairing(d.defining.dbar_grad(w), w - z);
}

FormField bm_generating_field(int n) {
  auto coeffs = [](const CxVec& w, const CxVec& z) {
    return ((w - z).conjugate() / (w - z).squaredNorm()).eval();
  };
  auto dwbar = [n](const CxVec& w, const CxVec& z) {
    CxVec diff = w - z;
    Real b = diff.squaredNorm();
    CxMat m = CxMat::Identity(n, n) / b;
    m -= diff.conjugate() * diff.transpose() / (b * b);
    return m;
  };
  auto dzbar = [n](const CxVec& w, const CxVec& z) {
    CxVec diff = w - z;
    Real b = diff.squaredNorm();
    CxMat m = -CxMat::Identity(n, n) / b;
    m += diff.conjugate() * diff.transpose() / (b * b);
    return m;
  };
  auto dw = [](const CxVec& w, const CxVec& z) {
    CxVec diff = w - z;
    Real b = diff.squaredNorm();
    return (-diff.conjugate() * diff.adjoint() / (b * b)).eval();
  };
  return one_zero_field(n, coeffs, dwbar, dzbar, dw);
}

FormField leray_field(const Domain& d) {
  const int n = d.defining.n;
  auto coeffs = [d](const CxVec& w, const CxVec& z) {
    Cx den = leray_denominator(d, w, z);
    return (d.defining.dbar_grad(w) / den).eval();
  };
  if (!d.defining.analytic) return one_zero_field(n, coeffs);
  auto dwbar = [d, n](const CxVec& w, const CxVec& z) {
    CxVec g = d.defining.dbar_grad(w);
    CxMat hm = d.defining.hess_mixed(w);
    CxVec diff = w - z;
    Cx den = pairing(g, diff);
    CxVec dden(n);  // d den / dwbar_k = sum_l hm_lk (w_l - z_l)
    for (int k = 0; k < n; ++k) {
      Cx s{0.0, 0.0};
      for (int l = 0; l < n; ++l) s += hm(l, k) * diff[l];
      dden[k] = s;
    }
    CxMat m(n, n);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        m(j, k) = (hm(j, k) * den - g[j] * dden[k]) / (den * den);
    return m;
  };
  auto dzbar = [n](const CxVec&, const CxVec&) {
    return CxMat::Zero(n, n).eval();  // holomorphic in z
  };
  return one_zero_field(n, coeffs, dwbar, dzbar);
}

Cx levi_leray_density(const Domain& d, const CxVec& w, const TangentFrame& frame) {
  if ((frame.base - w).norm() > 1e-9)
    throw std::invalid_argument("levi_leray_density: frame not based at w");
  const int n = d.defining.n;
  FormAtPoint form = wedge(partial_rho_form(d.defining, w),
                           wedge_power(dbar_partial_rho(d.defining, w), n - 1));
  form *= inv_two_pi_i_pow(n);
  return pullback_density(form, frame);
}

Cx cauchy_leray_density(const Domain& d, const CxVec& w, const TangentFrame& frame,
                        const CxVec& z) {
  Cx den = leray_denominator(d, w, z);
  if (std::abs(den) < 1e-13 * (1.0 + (w - z).norm()))
    throw ConvexityViolation("cauchy_leray_density: <drho(w), w-z> vanished");
  Cx dp{1.0, 0.0};
  for (int t = 0; t < d.defining.n; ++t) dp *= den;
  return levi_leray_density(d, w, frame) / dp;
}

Cx szego_ball(int n, const CxVec& w, const CxVec& z) {
  Cx den = 1.0 - bracket(z, w);
  if (std::abs(den) < 1e-15) throw std::domain_error("szego_ball: pole [z,w] = 1");
  Cx dp{1.0, 0.0};
  for (int t = 0; t < n; ++t) dp *= den;
  return factorial(n - 1) / (2.0 * std::pow(kPi, n) * dp);
}

Cx bergman_ball(int n, const CxVec& w, const CxVec& z) {
  Cx den = 1.0 - bracket(z, w);
  if (std::abs(den) < 1e-15) throw std::domain_error("bergman_ball: pole [z,w] = 1");
  Cx dp{1.0, 0.0};
  for (int t = 0; t < n + 1; ++t) dp *= den;
  return factorial(n) / (std::pow(kPi, n) * dp);
}

namespace {
Cx eta_tilde_denominator(const Domain& d, const CxVec& w, const CxVec& z) {
  Cx den = leray_denominator(d, w, z) - d.defining.rho(w);
  if (den.real() <= 0.0)
    throw ConvexityViolation("eta_tilde: Re(<drho(w),w-z> - rho(w)) <= 0");
  return den;
}
}  // namespace

FormAtPoint eta_tilde(const Domain& d, const CxVec& w, const CxVec& z) {
  const int n = d.defining.n;
  Cx den = eta_tilde_denominator(d, w, z);
  CxVec g = d.defining.dbar_grad(w);
  FormAtPoint out(n);
  for (int j = 0; j < n; ++j) out.add_term(1u << j, 0u, g[j] / den);
  return out;
}

FormField eta_tilde_field(const Domain& d) {
  const int n = d.defining.n;
  auto coeffs = [d](const CxVec& w, const CxVec& z) {
    return (d.defining.dbar_grad(w) / eta_tilde_denominator(d, w, z)).eval();
  };
  if (!d.defining.analytic) return one_zero_field(n, coeffs);
  auto dwbar = [d, n](const CxVec& w, const CxVec& z) {
    CxVec g = d.defining.dbar_grad(w);
    CxMat hm = d.defining.hess_mixed(w);
    CxVec diff = w - z;
    Cx den = eta_tilde_denominator(d, w, z);
    CxVec dden(n);  // sum_l hm_lk (w_l-z_l) - conj(drho_k)
    for (int k = 0; k < n; ++k) {
      Cx s{0.0, 0.0};
      for (int l = 0; l < n; ++l) s += hm(l, k) * diff[l];
      dden[k] = s - std::conj(g[k]);
    }
    CxMat m(n, n);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        m(j, k) = (hm(j, k) * den - g[j] * dden[k]) / (den * den);
    return m;
  };
  auto dzbar = [n](const CxVec&, const CxVec&) { return CxMat::Zero(n, n).eval(); };
  return one_zero_field(n, coeffs, dwbar, dzbar);
}

Cx bergman_leray_density(const Domain& d, const CxVec& w, const CxVec& z) {
  const int n = d.defining.n;
  FormField f = eta_tilde_field(d);
  FormAtPoint top = wedge_power(dbar_w(f, w, z), n);
  top *= inv_two_pi_i_pow(n);
  return top_form_density(top);
}

BoundaryKernelDensity bm_density(int n) {
  BoundaryKernelDensity k;
  k.name = "bochner-martinelli";
  k.measure = BoundaryKernelDensity::Measure::sigma;
  k.singularity_order = 2 * n - 1;
  k.eval = [n](const CxVec& w, const TangentFrame& frame, const CxVec& z) {
    CxVec diff = w - z;
    Real b = diff.squaredNorm();
    if (b < 1e-28) throw std::domain_error("bm_density: z = w");
    Cx scale = factorial(n - 1) * inv_two_pi_i_pow(n) / std::pow(b, n);
    FormAtPoint form(n);
    for (int j = 1; j <= n; ++j) {
      FormAtPoint m = FormAtPoint::dw(n, j);
      for (int nu = 1; nu <= n; ++nu) {
        if (nu == j) continue;
        m = wedge(m, wedge(FormAtPoint::dwbar(n, nu), FormAtPoint::dw(n, nu)));
      }
      m *= scale * std::conj(diff[j - 1]);
      form += m;
    }
    return pullback_density(form, frame);
  };
  return k;
}

BoundaryKernelDensity bm_density_via_forms(int n) {
  BoundaryKernelDensity k;
  k.name = "bochner-martinelli/forms";
  k.measure = BoundaryKernelDensity::Measure::sigma;
  k.singularity_order = 2 * n - 1;
  FormField eta = bm_generating_field(n);
  k.eval = [eta](const CxVec& w, const TangentFrame& frame, const CxVec& z) {
    return pullback_density(cf0(eta, w, z), frame);
  };
  return k;
}

BoundaryKernelDensity cauchy_leray_kernel(const Domain& d,
                                          BoundaryKernelDensity::Measure measure) {
  BoundaryKernelDensity k;
  k.measure = measure;
  k.singularity_order = d.defining.n;
  if (measure == BoundaryKernelDensity::Measure::sigma) {
    k.name = "cauchy-leray";
    k.eval = [d](const CxVec& w, const TangentFrame& frame, const CxVec& z) {
      return cauchy_leray_density(d, w, frame, z);
    };
  } else {
    k.name = "cauchy-leray/mu";
    k.eval = [d](const CxVec& w, const TangentFrame&, const CxVec& z) {
      Cx den = leray_denominator(d, w, z);
      if (std::abs(den) < 1e-13 * (1.0 + (w - z).norm()))
        throw ConvexityViolation("cauchy_leray: <drho(w), w-z> vanished");
      Cx dp{1.0, 0.0};
      for (int t = 0; t < d.defining.n; ++t) dp *= den;
      return 1.0 / dp;
    };
  }
  return k;
}

BoundaryKernelDensity cf_boundary_density(const FormField& eta, std::string name) {
  BoundaryKernelDensity k;
  k.name = std::move(name);
  k.measure = BoundaryKernelDensity::Measure::sigma;
  k.singularity_order = 2 * eta.n - 1;
  k.eval = [eta](const CxVec& w, const TangentFrame& frame, const CxVec& z) {
    return pullback_density(cf0(eta, w, z), frame);
  };
  return k;
}

}  // namespace cfint
