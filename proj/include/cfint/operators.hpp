#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cfint/kernels.hpp"
#include "cfint/quadrature.hpp"
#include "cfint/types.hpp"

namespace cfint {

// Continuous boundary data sampled at the nodes of a fixed quadrature rule.
// values[i] belongs to quadrature->nodes[i]; the length always matches.
struct BoundarySamples {
  const BoundaryQuadrature* quadrature = nullptr;
  CxVec values;
};

BoundarySamples boundary_samples(const BoundaryQuadrature& q,
                                 const std::function<Cx(const CxVec&)>& f);

// Mean node spacing h = (sigma(bD) / m)^{1/(2n-1)}.
Real node_spacing(const BoundaryQuadrature& q);

// Node weights of dmu_rho = Re(D~) dsigma.  Strict convexity keeps the
// density positive and real; violations raise ConvexityViolation.
RealVec mu_rho_weights(const BoundaryQuadrature& q);

// Node weights matching a density's measure tag.
RealVec measure_weights(const BoundaryQuadrature& q,
                        BoundaryKernelDensity::Measure measure);

// Discretized boundary transform sum_i f_i density(w_i, z) weight_i with the
// weights of the density's measure.  The target must keep distance
// >= delta_min from the sampled boundary (default 3 * node_spacing, passing
// delta_min >= 0 overrides); closer targets raise NearBoundaryWarning.
Cx apply_boundary(const BoundaryKernelDensity& density, const BoundaryQuadrature& q,
                  const BoundarySamples& f, const CxVec& z, Real delta_min = -1.0);

// Versioned holomorphic test family {1, w1, w1 w2, exp(w1), 1/(3 - w1)}
// (w1 w2 dropped when n = 1) and the anti-holomorphic control conj(w1).
struct TestFunction {
  std::string name;
  std::function<Cx(const CxVec&)> f;
};

std::vector<TestFunction> holomorphic_test_family(int n);
TestFunction antiholomorphic_control();

// The three reproducing boundary kernels under study.  cauchy_leray is
// mu-tagged (the Levi-Leray density moves into the weights); levi_cf is the
// Cauchy-Fantappie kernel of the glued Levi form eta^eps with parameters
// from kernel_config_for.
enum class ReproducingKernel { bochner_martinelli, cauchy_leray, levi_cf };

std::string kernel_name(ReproducingKernel k);
BoundaryKernelDensity reproducing_density(ReproducingKernel k, const Domain& d);

// One boundary resolution: sphere rule angles (polar, azimuthal).
struct ResolutionStep {
  int polar = 0;
  int azimuthal = 0;
};

struct ReproduceRow {
  std::string f_name;
  int polar = 0;
  int azimuthal = 0;
  Real max_error = 0.0;
};

// Reproducing-error table: for every schedule step and test function,
// max over targets of |transform(f)(z) - f(z)|.  Rows are emitted
// step-major.  Errors should decrease monotonically along the schedule up
// to a floor set by the target distance.  The density overload accepts a
// custom kernel (e.g. a glued Levi form with overridden cutoff radii).
std::vector<ReproduceRow> reproduce_report(const BoundaryKernelDensity& density,
                                           const Domain& d,
                                           const std::vector<TestFunction>& fs,
                                           const std::vector<CxVec>& targets,
                                           const std::vector<ResolutionStep>& schedule);
std::vector<ReproduceRow> reproduce_report(ReproducingKernel kernel, const Domain& d,
                                           const std::vector<TestFunction>& fs,
                                           const std::vector<CxVec>& targets,
                                           const std::vector<ResolutionStep>& schedule);
std::vector<ReproduceRow> reproduce_report(ReproducingKernel kernel, const Domain& d,
                                           const TestFunction& f,
                                           const std::vector<CxVec>& targets,
                                           const std::vector<ResolutionStep>& schedule);

// Solid Leray-Bergman transform sum_i f(w_i) B_L(w_i, z) weight_i; equals
// f(z) for holomorphic f on strictly convex domains.
Cx reproduce_bergman(const Domain& d, const VolumeQuadrature& vq,
                     const std::function<Cx(const CxVec&)>& f, const CxVec& z);

// Dense discretization of a boundary operator.  Entry (i,j) is
// density(w_j, w_i - delta nu_i) * weight_j: sources at the nodes, targets
// pushed inward along the unit normal so the singular diagonal is handled
// like every other entry.  Applying `entries` to node samples evaluates the
// transform at all pushed-in targets at once.
struct KernelMatrix {
  CxMat entries;
  BoundaryKernelDensity::Measure measure = BoundaryKernelDensity::Measure::sigma;
  Real delta = 0.0;
  std::string generator;
};

KernelMatrix assemble_matrix(const BoundaryKernelDensity& density,
                             const BoundaryQuadrature& q, Real delta);

// Adjoint with respect to <f,g> = sum_i f_i conj(g_i) mu_i, i.e.
// A*_{ij} = conj(A_{ji}) mu_j / mu_i.  Nonpositive weights are rejected.
KernelMatrix adjoint_wrt(const KernelMatrix& m, const RealVec& mu);

// Spectral norm by power iteration on M^H M with a deterministic start; the
// weighted overload measures the operator norm on l^2(mu).
Real operator_norm_2(const CxMat& m);
Real operator_norm_2(const CxMat& m, const RealVec& mu);

// Kerzman-Stein construction S (I - A) = C with A = C* - C, adjoints and all
// norms taken on l^2(mu).  The solve is dense LU; a residual
// ||S(I-A) - C|| exceeding 1e-8 ||C|| reports (I - A) as numerically
// singular for this resolution/offset.
struct SzegoResult {
  KernelMatrix szego;   // S
  KernelMatrix cauchy;  // C
  RealVec mu;
  Real norm_cauchy = 0.0;        // ||C||
  Real norm_skew = 0.0;          // ||A||
  Real idempotency = 0.0;        // ||S^2 - S||
  Real self_adjointness = 0.0;   // ||S* - S||
  Real reproduction = 0.0;       // ||S C - C||
  Real solve_residual = 0.0;     // ||S(I - A) - C||
};

SzegoResult kerzman_stein(const KernelMatrix& cauchy, const RealVec& mu);

// The full pipeline on a strictly convex domain: Cauchy-Leray matrix with
// respect to dmu_rho at interior offset delta, then the construction above.
SzegoResult kerzman_stein_szego(const Domain& d, const BoundaryQuadrature& q,
                                Real delta);

// Operator-norm estimates on weighted l^p: power iteration for p = 2,
// otherwise a lower bound from random probing.  A consistency probe, not a
// proof.
struct NormEstimate {
  Real p = 2.0;
  Real value = 0.0;
};

std::vector<NormEstimate> norm_growth_probe(const KernelMatrix& m, const RealVec& mu,
                                            const std::vector<Real>& ps,
                                            int probes = 64, std::uint64_t seed = 7);

}  // namespace cfint
