#pragma once

#include <bit>
#include <functional>
#include <map>
#include <vector>

#include "cfint/geometry.hpp"
#include "cfint/types.hpp"

namespace cfint {

// A complex exterior form at a point of C^n, stored as a sparse table
//   sum_{I,J} c_{I,J} dw_I /\ dwbar_J
// over strictly increasing multi-indices I, J encoded as bitmasks (bit j
// set <=> index j+1 present).  The canonical monomial order puts all dw
// factors before all dwbar factors; every product re-sorts into that order
// and tracks the sign.  Missing coefficients are zero.
class FormAtPoint {
 public:
  FormAtPoint() = default;
  explicit FormAtPoint(int n) : n_(n) {}

  static FormAtPoint scalar(int n, Cx value) {
    FormAtPoint f(n);
    f.add_term(0u, 0u, value);
    return f;
  }
  static FormAtPoint dw(int n, int j) {  // j is 1-based
    FormAtPoint f(n);
    f.add_term(1u << (j - 1), 0u, Cx{1.0, 0.0});
    return f;
  }
  static FormAtPoint dwbar(int n, int j) {
    FormAtPoint f(n);
    f.add_term(0u, 1u << (j - 1), Cx{1.0, 0.0});
    return f;
  }

  int n() const { return n_; }
  bool empty() const { return comp_.empty(); }

  // maskI/maskJ must already be canonical (any bitmask is); adds c to the
  // stored coefficient and prunes exact zeros lazily.
  void add_term(std::uint32_t mask_i, std::uint32_t mask_j, Cx c) {
    if (c == Cx{0.0, 0.0}) return;
    comp_[key(mask_i, mask_j)] += c;
  }

  Cx coeff(std::uint32_t mask_i, std::uint32_t mask_j) const {
    auto it = comp_.find(key(mask_i, mask_j));
    return it == comp_.end() ? Cx{0.0, 0.0} : it->second;
  }

  const std::map<std::uint64_t, Cx>& terms() const { return comp_; }
  static std::uint32_t mask_i_of(std::uint64_t k) {
    return static_cast<std::uint32_t>(k >> 32);
  }
  static std::uint32_t mask_j_of(std::uint64_t k) {
    return static_cast<std::uint32_t>(k & 0xffffffffu);
  }

  FormAtPoint& operator+=(const FormAtPoint& o);
  FormAtPoint& operator-=(const FormAtPoint& o);
  FormAtPoint& operator*=(Cx s);
  friend FormAtPoint operator+(FormAtPoint a, const FormAtPoint& b) { return a += b; }
  friend FormAtPoint operator-(FormAtPoint a, const FormAtPoint& b) { return a -= b; }
  friend FormAtPoint operator*(Cx s, FormAtPoint a) { return a *= s; }
  friend FormAtPoint operator*(FormAtPoint a, Cx s) { return a *= s; }

  Real sup_norm() const {
    Real m = 0.0;
    for (const auto& [k, c] : comp_) m = std::max(m, std::abs(c));
    return m;
  }

  // (p,q) if every stored monomial has the same bidegree.
  bool homogeneous(int* p = nullptr, int* q = nullptr) const;

 private:
  static std::uint64_t key(std::uint32_t i, std::uint32_t j) {
    return (static_cast<std::uint64_t>(i) << 32) | j;
  }
  int n_ = 0;
  std::map<std::uint64_t, Cx> comp_;
};

// Graded product; products whose degree overflows n in either letter are
// dropped (the result is the zero form, not an error).
FormAtPoint wedge(const FormAtPoint& a, const FormAtPoint& b);
FormAtPoint wedge_power(const FormAtPoint& a, int k);

// Evaluation as an alternating multilinear functional: for a form of total
// degree k and real tangent vectors v_1..v_k (complex identification
// (x_j,y_j) -> x_j + i y_j), each monomial contributes
// c * det[ alpha_r(v_t) ] with dw_j(v) = v_j and dwbar_j(v) = conj(v_j),
// rows ordered dw_I ascending then dwbar_J ascending.
Cx evaluate(const FormAtPoint& f, const std::vector<CxVec>& vectors);

// A form-valued field of (w, z) with optional analytic coefficient partials
// (index j is 1-based); missing partials fall back to central Wirtinger
// differences of the evaluator with step fd_step.
struct FormField {
  int n = 0;
  std::function<FormAtPoint(const CxVec&, const CxVec&)> eval;
  std::function<FormAtPoint(const CxVec&, const CxVec&, int)> d_w;     // d/dw_j
  std::function<FormAtPoint(const CxVec&, const CxVec&, int)> d_wbar;  // d/dwbar_j
  std::function<FormAtPoint(const CxVec&, const CxVec&, int)> d_zbar;  // d/dzbar_j
  Real fd_step = 1e-5;
};

// Builds a (1,0)-form field sum_j eta_j(w,z) dw_j from a coefficient
// function, with optional analytic derivative matrices
// (d*)(w,z)(j,k) = d eta_(j+1) / d var_(k+1).
FormField one_zero_field(int n, std::function<CxVec(const CxVec&, const CxVec&)> coeffs,
                         std::function<CxMat(const CxVec&, const CxVec&)> dwbar = nullptr,
                         std::function<CxMat(const CxVec&, const CxVec&)> dzbar = nullptr,
                         std::function<CxMat(const CxVec&, const CxVec&)> dw = nullptr);

// Coefficientwise partial of the evaluator in the requested variable
// (1-based index), analytic when the field provides it.
FormAtPoint coeff_partial_w(const FormField& f, const CxVec& w, const CxVec& z, int j);
FormAtPoint coeff_partial_wbar(const FormField& f, const CxVec& w, const CxVec& z, int j);
FormAtPoint coeff_partial_zbar(const FormField& f, const CxVec& w, const CxVec& z, int j);

// dbar_w f = sum_j dwbar_j /\ (d f / dwbar_j),  partial_w with dw_j /\.
FormAtPoint dbar_w(const FormField& f, const CxVec& w, const CxVec& z);
FormAtPoint partial_w(const FormField& f, const CxVec& w, const CxVec& z);

// A form with exactly one dzbar factor, stored slice-wise: the value is
// sum_k slice[k] /\ dzbar_k with the dzbar on the right.
struct MixedForm {
  int n = 0;
  std::map<int, FormAtPoint> slice;  // key is 1-based zbar index

  Real sup_norm() const {
    Real m = 0.0;
    for (const auto& [k, s] : slice) m = std::max(m, s.sup_norm());
    return m;
  }
};

// dbar_z f, slice convention as above: for a homogeneous form of total
// degree d, slice_k = (-1)^d * coefficientwise d/dzbar_k.
MixedForm dbar_z(const FormField& f, const CxVec& w, const CxVec& z);

// Cauchy-Fantappie form of a (1,0) generating field:
//   cf0 = (2 pi i)^{-n} eta /\ (dbar_w eta)^{n-1},        bidegree (n, n-1)
//   cf1 = (n-1)(2 pi i)^{-n} eta /\ (dbar_w eta)^{n-2} /\ dbar_z eta,
// the latter with one dzbar factor (n >= 2 required).
FormAtPoint cf0(const FormField& eta, const CxVec& w, const CxVec& z);
MixedForm cf1(const FormField& eta, const CxVec& w, const CxVec& z);

// Hodge star of a (1,0)-form for the standard Euclidean metric:
//   * dw_j = -i (i/2)^{n-1} dw_j /\ prod_{k != j} (dw_k /\ dwbar_k).
FormAtPoint star_one_zero(const FormAtPoint& alpha);

// Orthonormal moving frame at a boundary point: outward unit normal nu and
// real tangents t_1..t_{2n-1} with (nu, t_*) positively oriented for
// dx_1 /\ dy_1 /\ ... /\ dx_n /\ dy_n.
struct TangentFrame {
  CxVec base;
  CxVec normal;
  std::vector<CxVec> tangents;
};

TangentFrame boundary_frame(const DefiningFunction& f, const CxVec& w);

// lambda with j*omega = lambda dsigma: omega evaluated on the frame tangents.
Cx pullback_density(const FormAtPoint& omega, const TangentFrame& frame);

// mu with omega = mu dV, dV = (i/2)^n dw_1/\dwbar_1/\.../\dw_n/\dwbar_n.
Cx top_form_density(const FormAtPoint& omega);

}  // namespace cfint
