#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace cfint {

using Real = double;
using Cx = std::complex<double>;
using CxVec = Eigen::VectorXcd;
using CxMat = Eigen::MatrixXcd;
using RealVec = Eigen::VectorXd;
using RealMat = Eigen::MatrixXd;

inline constexpr Real kPi = 3.141592653589793238462643383279502884;
inline constexpr Cx kImag{0.0, 1.0};

// Boundary membership tolerance shared by all modules: a point counts as
// "on bD" when |rho| <= kBoundaryTol.  Quadrature nodes are root-solved to
// well below this.
inline constexpr Real kBoundaryTol = 1e-9;

// Raised when a kernel denominator vanishes for z in the closure, i.e. the
// domain is not as convex as claimed at the offending pair.
struct ConvexityViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when the gradient of a defining function vanishes on the boundary
// or a radial ray meets the boundary tangentially.
struct DegenerateBoundary : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when an evaluation point sits too close to the boundary for the
// requested quadrature to be trustworthy.
struct NearBoundaryWarning : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Complex identification of R^{2n}: the real vector (x_1,y_1,...,x_n,y_n)
// is stored as the complex vector (x_1 + i y_1, ..., x_n + i y_n).  Real
// inner product and determinants unpack it again.
inline Real real_dot(const CxVec& a, const CxVec& b) {
  return a.dot(b).real();  // Eigen's dot conjugates the left argument
}

inline Real real_norm(const CxVec& a) { return a.norm(); }

// Deterministic RNG used everywhere randomness appears.  A fixed seed must
// produce identical streams on every platform, so distributions are built
// from raw 64-bit states by hand instead of <random> distribution objects.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

  std::uint64_t next_u64() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  Real uniform01() { return static_cast<Real>(next_u64() >> 11) * 0x1.0p-53; }

  Real uniform(Real a, Real b) { return a + (b - a) * uniform01(); }

  Cx unit_complex() {
    Real t = 2.0 * kPi * uniform01();
    return Cx{std::cos(t), std::sin(t)};
  }

  // Standard normal via Box-Muller; deterministic given the seed.
  Real normal() {
    Real u1 = uniform01(), u2 = uniform01();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  CxVec normal_cxvec(int n) {
    CxVec v(n);
    for (int j = 0; j < n; ++j) v[j] = Cx{normal(), normal()};
    return v;
  }

  // Uniform direction on the real unit sphere of C^n ~ R^{2n}.
  CxVec unit_direction(int n) {
    CxVec v = normal_cxvec(n);
    Real r = v.norm();
    while (r < 1e-12) {
      v = normal_cxvec(n);
      r = v.norm();
    }
    return v / r;
  }

 private:
  std::uint64_t state_;
};

// Halton low-discrepancy sequence, used for deterministic direction sweeps.
inline Real halton(std::uint64_t index, std::uint64_t base) {
  Real f = 1.0, r = 0.0;
  while (index > 0) {
    f /= static_cast<Real>(base);
    r += f * static_cast<Real>(index % base);
    index /= base;
  }
  return r;
}

}  // namespace cfint
