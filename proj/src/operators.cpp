#include "cfint/operators.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace cfint {
namespace {

// B = D^{1/2} M D^{-1/2} with D = diag(mu), so the plain spectral norm of B
// is the operator norm of M on l^2(mu).  scale may be empty (mu == 1).
struct ScaledMatrix {
  const CxMat* m = nullptr;
  RealVec sqrt_mu;  // empty for the unweighted norm

  CxVec apply(const CxVec& v) const {
    if (sqrt_mu.size() == 0) return (*m) * v;
    CxVec u = (*m) * v.cwiseQuotient(sqrt_mu.cast<Cx>());
    return u.cwiseProduct(sqrt_mu.cast<Cx>());
  }
  CxVec apply_adjoint(const CxVec& v) const {
    if (sqrt_mu.size() == 0) return m->adjoint() * v;
    CxVec u = m->adjoint() * v.cwiseProduct(sqrt_mu.cast<Cx>());
    return u.cwiseQuotient(sqrt_mu.cast<Cx>());
  }
};

// Largest singular value via power iteration on B^H B.  Deterministic start,
// tolerant of clustered top singular values (the estimate converges even
// when the iterate wanders inside the top cluster).
Real power_norm(const ScaledMatrix& b) {
  const int m = static_cast<int>(b.m->rows());
  if (m == 0) return 0.0;
  Rng rng(0x51b7a11dULL);
  CxVec v = rng.normal_cxvec(m);
  v /= v.norm();
  Real lambda = 0.0;
  for (int it = 0; it < 300; ++it) {
    CxVec u = b.apply_adjoint(b.apply(v));
    Real r = u.norm();
    if (r < std::numeric_limits<Real>::min()) return 0.0;
    Real next = v.dot(u).real();  // Rayleigh quotient, v is unit
    v = u / r;
    if (it > 0 && std::abs(next - lambda) <= 1e-13 * std::max(next, Real(1))) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::sqrt(std::max(lambda, Real(0)));
}

Real weighted_p_norm(const CxVec& f, const RealVec& mu, Real p) {
  Real s = 0.0;
  for (int i = 0; i < f.size(); ++i) s += mu[i] * std::pow(std::abs(f[i]), p);
  return std::pow(s, 1.0 / p);
}

void check_weights(const RealVec& mu, Eigen::Index m, const char* who) {
  if (mu.size() != m) throw std::invalid_argument(std::string(who) + ": weight count mismatch");
  for (int i = 0; i < mu.size(); ++i)
    if (!(mu[i] > 0.0)) throw std::invalid_argument(std::string(who) + ": nonpositive weight");
}

}  // namespace

BoundarySamples boundary_samples(const BoundaryQuadrature& q,
                                 const std::function<Cx(const CxVec&)>& f) {
  BoundarySamples s;
  s.quadrature = &q;
  s.values.resize(static_cast<Eigen::Index>(q.size()));
  for (std::size_t i = 0; i < q.size(); ++i)
    s.values[static_cast<Eigen::Index>(i)] = f(q.nodes[i]);
  return s;
}

Real node_spacing(const BoundaryQuadrature& q) {
  if (q.size() == 0) throw std::invalid_argument("node_spacing: empty quadrature");
  return std::pow(q.total_weight() / static_cast<Real>(q.size()),
                  1.0 / static_cast<Real>(2 * q.n - 1));
}

RealVec mu_rho_weights(const BoundaryQuadrature& q) {
  RealVec mu(static_cast<Eigen::Index>(q.size()));
  for (std::size_t i = 0; i < q.size(); ++i) {
    Cx dens = q.levi_leray[i];
    if (!(dens.real() > 0.0) || std::abs(dens.imag()) > 1e-8 * (1.0 + std::abs(dens.real())))
      throw ConvexityViolation("mu_rho_weights: Levi-Leray density not positive at a node");
    mu[static_cast<Eigen::Index>(i)] = q.weights[i] * dens.real();
  }
  return mu;
}

RealVec measure_weights(const BoundaryQuadrature& q,
                        BoundaryKernelDensity::Measure measure) {
  if (measure == BoundaryKernelDensity::Measure::mu_rho) return mu_rho_weights(q);
  RealVec w(static_cast<Eigen::Index>(q.size()));
  for (std::size_t i = 0; i < q.size(); ++i) w[static_cast<Eigen::Index>(i)] = q.weights[i];
  return w;
}

Cx apply_boundary(const BoundaryKernelDensity& density, const BoundaryQuadrature& q,
                  const BoundarySamples& f, const CxVec& z, Real delta_min) {
  if (f.quadrature != nullptr && f.quadrature != &q)
    throw std::invalid_argument("apply_boundary: samples taken on a different rule");
  if (f.values.size() != static_cast<Eigen::Index>(q.size()))
    throw std::invalid_argument("apply_boundary: sample count mismatch");
  if (z.size() != q.n) throw std::invalid_argument("apply_boundary: dimension mismatch");

  if (delta_min < 0.0) delta_min = 3.0 * node_spacing(q);
  Real dist = std::numeric_limits<Real>::infinity();
  for (const CxVec& w : q.nodes) dist = std::min(dist, (w - z).norm());
  if (dist < delta_min)
    throw NearBoundaryWarning("apply_boundary: target within " + std::to_string(dist) +
                              " of the sampled boundary (need " +
                              std::to_string(delta_min) + ")");

  RealVec wt = measure_weights(q, density.measure);
  Cx acc = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    Eigen::Index k = static_cast<Eigen::Index>(i);
    acc += f.values[k] * density.eval(q.nodes[i], q.frames[i], z) * wt[k];
  }
  return acc;
}

std::vector<TestFunction> holomorphic_test_family(int n) {
  if (n < 1) throw std::invalid_argument("holomorphic_test_family: n < 1");
  std::vector<TestFunction> fs;
  fs.push_back({"1", [](const CxVec&) { return Cx{1.0, 0.0}; }});
  fs.push_back({"w1", [](const CxVec& w) { return w[0]; }});
  if (n >= 2) fs.push_back({"w1*w2", [](const CxVec& w) { return w[0] * w[1]; }});
  fs.push_back({"exp(w1)", [](const CxVec& w) { return std::exp(w[0]); }});
  fs.push_back({"1/(3-w1)", [](const CxVec& w) { return 1.0 / (Cx{3.0, 0.0} - w[0]); }});
  return fs;
}

TestFunction antiholomorphic_control() {
  return {"conj(w1)", [](const CxVec& w) { return std::conj(w[0]); }};
}

std::string kernel_name(ReproducingKernel k) {
  switch (k) {
    case ReproducingKernel::bochner_martinelli: return "bochner-martinelli";
    case ReproducingKernel::cauchy_leray: return "cauchy-leray";
    case ReproducingKernel::levi_cf: return "levi-cf";
  }
  throw std::invalid_argument("kernel_name: unknown kernel");
}

BoundaryKernelDensity reproducing_density(ReproducingKernel k, const Domain& d) {
  switch (k) {
    case ReproducingKernel::bochner_martinelli:
      return bm_density(d.defining.n);
    case ReproducingKernel::cauchy_leray:
      return cauchy_leray_kernel(d, BoundaryKernelDensity::Measure::mu_rho);
    case ReproducingKernel::levi_cf:
      return cf_boundary_density(eta_eps_field(d, kernel_config_for(d)), "levi-cf");
  }
  throw std::invalid_argument("reproducing_density: unknown kernel");
}

std::vector<ReproduceRow> reproduce_report(const BoundaryKernelDensity& density,
                                           const Domain& d,
                                           const std::vector<TestFunction>& fs,
                                           const std::vector<CxVec>& targets,
                                           const std::vector<ResolutionStep>& schedule) {
  if (!d.bounded)
    throw std::invalid_argument("reproduce_report: bounded star-shaped domain required");
  if (fs.empty() || targets.empty() || schedule.empty())
    throw std::invalid_argument("reproduce_report: empty input");

  std::vector<ReproduceRow> rows;
  rows.reserve(fs.size() * schedule.size());
  for (const ResolutionStep& step : schedule) {
    BoundaryQuadrature q =
        radial_graph_quadrature(d, sphere_quadrature(d.defining.n, step.polar, step.azimuthal));
    RealVec wt = measure_weights(q, density.measure);
    std::vector<BoundarySamples> samples;
    samples.reserve(fs.size());
    for (const TestFunction& tf : fs) samples.push_back(boundary_samples(q, tf.f));

    std::vector<Real> max_err(fs.size(), 0.0);
    for (const CxVec& z : targets) {
      // One kernel sweep per target, shared by every test function.
      CxVec kvals(static_cast<Eigen::Index>(q.size()));
      for (std::size_t i = 0; i < q.size(); ++i) {
        Eigen::Index k = static_cast<Eigen::Index>(i);
        kvals[k] = density.eval(q.nodes[i], q.frames[i], z) * wt[k];
      }
      for (std::size_t fi = 0; fi < fs.size(); ++fi) {
        Cx got = samples[fi].values.transpose() * kvals;
        max_err[fi] = std::max(max_err[fi], std::abs(got - fs[fi].f(z)));
      }
    }
    for (std::size_t fi = 0; fi < fs.size(); ++fi)
      rows.push_back({fs[fi].name, step.polar, step.azimuthal, max_err[fi]});
  }
  return rows;
}

std::vector<ReproduceRow> reproduce_report(ReproducingKernel kernel, const Domain& d,
                                           const std::vector<TestFunction>& fs,
                                           const std::vector<CxVec>& targets,
                                           const std::vector<ResolutionStep>& schedule) {
  return reproduce_report(reproducing_density(kernel, d), d, fs, targets, schedule);
}

std::vector<ReproduceRow> reproduce_report(ReproducingKernel kernel, const Domain& d,
                                           const TestFunction& f,
                                           const std::vector<CxVec>& targets,
                                           const std::vector<ResolutionStep>& schedule) {
  return reproduce_report(kernel, d, std::vector<TestFunction>{f}, targets, schedule);
}

Cx reproduce_bergman(const Domain& d, const VolumeQuadrature& vq,
                     const std::function<Cx(const CxVec&)>& f, const CxVec& z) {
  if (z.size() != vq.n) throw std::invalid_argument("reproduce_bergman: dimension mismatch");
  Cx acc = 0.0;
  for (std::size_t i = 0; i < vq.size(); ++i)
    acc += f(vq.nodes[i]) * bergman_leray_density(d, vq.nodes[i], z) * vq.weights[i];
  return acc;
}

KernelMatrix assemble_matrix(const BoundaryKernelDensity& density,
                             const BoundaryQuadrature& q, Real delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("assemble_matrix: delta <= 0");
  const Eigen::Index m = static_cast<Eigen::Index>(q.size());
  RealVec wt = measure_weights(q, density.measure);

  KernelMatrix out;
  out.measure = density.measure;
  out.delta = delta;
  out.generator = density.name;
  out.entries.resize(m, m);
  // Entries are independent; the row loop is embarrassingly parallel.
  for (Eigen::Index i = 0; i < m; ++i) {
    CxVec z = q.nodes[static_cast<std::size_t>(i)] -
              delta * q.frames[static_cast<std::size_t>(i)].normal;
    for (Eigen::Index j = 0; j < m; ++j) {
      std::size_t sj = static_cast<std::size_t>(j);
      out.entries(i, j) = density.eval(q.nodes[sj], q.frames[sj], z) * wt[j];
    }
  }
  return out;
}

KernelMatrix adjoint_wrt(const KernelMatrix& m, const RealVec& mu) {
  if (m.entries.rows() != m.entries.cols())
    throw std::invalid_argument("adjoint_wrt: matrix not square");
  check_weights(mu, m.entries.rows(), "adjoint_wrt");
  KernelMatrix out = m;
  out.generator = m.generator + "*";
  out.entries = mu.cwiseInverse().cast<Cx>().asDiagonal() * m.entries.adjoint() *
                mu.cast<Cx>().asDiagonal();
  return out;
}

Real operator_norm_2(const CxMat& m) { return power_norm({&m, RealVec()}); }

Real operator_norm_2(const CxMat& m, const RealVec& mu) {
  check_weights(mu, m.rows(), "operator_norm_2");
  return power_norm({&m, mu.cwiseSqrt()});
}

SzegoResult kerzman_stein(const KernelMatrix& cauchy, const RealVec& mu) {
  const Eigen::Index m = cauchy.entries.rows();
  if (cauchy.entries.cols() != m) throw std::invalid_argument("kerzman_stein: matrix not square");
  check_weights(mu, m, "kerzman_stein");

  const CxMat& c = cauchy.entries;
  CxMat a = adjoint_wrt(cauchy, mu).entries - c;
  CxMat ima = CxMat::Identity(m, m) - a;
  // S (I - A) = C  <=>  (I - A)^T S^T = C^T.
  CxMat s = ima.transpose().partialPivLu().solve(c.transpose()).transpose();

  SzegoResult r;
  r.mu = mu;
  r.norm_cauchy = operator_norm_2(c, mu);
  r.norm_skew = operator_norm_2(a, mu);
  r.solve_residual = operator_norm_2(s * ima - c, mu);
  if (r.solve_residual > 1e-8 * std::max(r.norm_cauchy, Real(1)))
    throw std::runtime_error(
        "kerzman_stein: (I - A) numerically singular at this resolution/offset "
        "(solve residual " + std::to_string(r.solve_residual) + ")");
  r.idempotency = operator_norm_2(s * s - s, mu);
  r.self_adjointness = operator_norm_2(adjoint_wrt({s, cauchy.measure, cauchy.delta, ""}, mu).entries - s, mu);
  r.reproduction = operator_norm_2(s * c - c, mu);

  r.cauchy = cauchy;
  r.szego = {std::move(s), cauchy.measure, cauchy.delta, "kerzman-stein[" + cauchy.generator + "]"};
  return r;
}

SzegoResult kerzman_stein_szego(const Domain& d, const BoundaryQuadrature& q, Real delta) {
  KernelMatrix c = assemble_matrix(
      cauchy_leray_kernel(d, BoundaryKernelDensity::Measure::mu_rho), q, delta);
  return kerzman_stein(c, mu_rho_weights(q));
}

std::vector<NormEstimate> norm_growth_probe(const KernelMatrix& m, const RealVec& mu,
                                            const std::vector<Real>& ps,
                                            int probes, std::uint64_t seed) {
  check_weights(mu, m.entries.rows(), "norm_growth_probe");
  std::vector<NormEstimate> out;
  out.reserve(ps.size());
  for (Real p : ps) {
    if (!(p >= 1.0)) throw std::invalid_argument("norm_growth_probe: p < 1");
    NormEstimate e;
    e.p = p;
    if (std::abs(p - 2.0) < 1e-12) {
      e.value = operator_norm_2(m.entries, mu);
    } else {
      Rng rng(seed);
      for (int t = 0; t < probes; ++t) {
        CxVec f = rng.normal_cxvec(static_cast<int>(m.entries.rows()));
        Real den = weighted_p_norm(f, mu, p);
        if (den < 1e-300) continue;
        e.value = std::max(e.value, weighted_p_norm(m.entries * f, mu, p) / den);
      }
    }
    out.push_back(e);
  }
  return out;
}

}  // namespace cfint
