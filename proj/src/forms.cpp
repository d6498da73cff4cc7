#include "cfint/forms.hpp"

#include <cmath>
#include <stdexcept>

namespace cfint {
namespace {

// Parity sign of merging two disjoint sorted index sets A, B into one sorted
// set with A's letters written first: one transposition per pair a > b.
int merge_sign(std::uint32_t a, std::uint32_t b) {
  int inversions = 0;
  while (b) {
    std::uint32_t low = b & (~b + 1u);  // lowest set bit of b
    int idx = std::countr_zero(low);
    inversions += std::popcount(a >> (idx + 1));
    b ^= low;
  }
  return (inversions & 1) ? -1 : 1;
}

Cx i_pow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return Cx{1.0, 0.0};
    case 1: return Cx{0.0, 1.0};
    case 2: return Cx{-1.0, 0.0};
    default: return Cx{0.0, -1.0};
  }
}

// (2 pi i)^{-n} with the unit phase handled exactly.
Cx inv_two_pi_i_pow(int n) {
  return 1.0 / (std::pow(2.0 * kPi, n) * i_pow(n));
}

CxVec real_axis_step(int n, int axis, Real h) {
  CxVec e = CxVec::Zero(n);
  e[axis / 2] = (axis % 2 == 0) ? Cx{h, 0.0} : Cx{0.0, h};
  return e;
}

enum class Var { w, wbar, zbar };

// Central Wirtinger difference of the evaluator: d/dw = (d_x - i d_y)/2,
// d/dwbar = (d_x + i d_y)/2, taken in w or z as requested.
FormAtPoint fd_partial(const FormField& f, const CxVec& w, const CxVec& z, int j, Var v) {
  const Real h = f.fd_step;
  const int n = f.n;
  CxVec ex = real_axis_step(n, 2 * (j - 1), h);
  CxVec ey = real_axis_step(n, 2 * (j - 1) + 1, h);
  FormAtPoint dx(n), dy(n);
  if (v == Var::zbar) {
    dx = f.eval(w, z + ex) - f.eval(w, z - ex);
    dy = f.eval(w, z + ey) - f.eval(w, z - ey);
  } else {
    dx = f.eval(w + ex, z) - f.eval(w - ex, z);
    dy = f.eval(w + ey, z) - f.eval(w - ey, z);
  }
  dx *= Cx{1.0 / (2.0 * h), 0.0};
  dy *= Cx{1.0 / (2.0 * h), 0.0};
  Cx iy = (v == Var::w) ? -kImag : kImag;
  return dx * Cx{0.5, 0.0} + dy * (0.5 * iy);
}

int total_degree_or_throw(const FormAtPoint& f, const char* who) {
  int deg = -1;
  for (const auto& [k, c] : f.terms()) {
    (void)c;
    int d = std::popcount(FormAtPoint::mask_i_of(k)) + std::popcount(FormAtPoint::mask_j_of(k));
    if (deg == -1) deg = d;
    if (d != deg) throw std::invalid_argument(std::string(who) + ": inhomogeneous form");
  }
  return deg < 0 ? 0 : deg;
}

}  // namespace

FormAtPoint& FormAtPoint::operator+=(const FormAtPoint& o) {
  if (n_ == 0) n_ = o.n_;
  for (const auto& [k, c] : o.comp_) comp_[k] += c;
  return *this;
}

FormAtPoint& FormAtPoint::operator-=(const FormAtPoint& o) {
  if (n_ == 0) n_ = o.n_;
  for (const auto& [k, c] : o.comp_) comp_[k] -= c;
  return *this;
}

FormAtPoint& FormAtPoint::operator*=(Cx s) {
  for (auto& [k, c] : comp_) c *= s;
  return *this;
}

bool FormAtPoint::homogeneous(int* p, int* q) const {
  int dp = -1, dq = -1;
  for (const auto& [k, c] : comp_) {
    if (c == Cx{0.0, 0.0}) continue;
    int tp = std::popcount(mask_i_of(k)), tq = std::popcount(mask_j_of(k));
    if (dp == -1) {
      dp = tp;
      dq = tq;
    } else if (tp != dp || tq != dq) {
      return false;
    }
  }
  if (p) *p = std::max(dp, 0);
  if (q) *q = std::max(dq, 0);
  return true;
}

FormAtPoint wedge(const FormAtPoint& a, const FormAtPoint& b) {
  if (a.n() != b.n() && a.n() != 0 && b.n() != 0)
    throw std::invalid_argument("wedge: dimension mismatch");
  FormAtPoint out(a.n() ? a.n() : b.n());
  for (const auto& [ka, ca] : a.terms()) {
    std::uint32_t i1 = FormAtPoint::mask_i_of(ka), j1 = FormAtPoint::mask_j_of(ka);
    for (const auto& [kb, cb] : b.terms()) {
      std::uint32_t i2 = FormAtPoint::mask_i_of(kb), j2 = FormAtPoint::mask_j_of(kb);
      if ((i1 & i2) || (j1 & j2)) continue;  // repeated letter
      // dw_I1 dwbar_J1 dw_I2 dwbar_J2: carry dw_I2 left across dwbar_J1,
      // then merge the two sorted blocks of each letter.
      int sign = merge_sign(i1, i2) * merge_sign(j1, j2);
      if ((std::popcount(j1) * std::popcount(i2)) & 1) sign = -sign;
      out.add_term(i1 | i2, j1 | j2, static_cast<Real>(sign) * ca * cb);
    }
  }
  return out;
}

FormAtPoint wedge_power(const FormAtPoint& a, int k) {
  if (k < 0) throw std::invalid_argument("wedge_power: negative exponent");
  FormAtPoint out = FormAtPoint::scalar(a.n(), Cx{1.0, 0.0});
  for (int t = 0; t < k; ++t) out = wedge(out, a);
  return out;
}

Cx evaluate(const FormAtPoint& f, const std::vector<CxVec>& vectors) {
  const int k = static_cast<int>(vectors.size());
  Cx total{0.0, 0.0};
  for (const auto& [key, c] : f.terms()) {
    if (c == Cx{0.0, 0.0}) continue;
    std::uint32_t mi = FormAtPoint::mask_i_of(key), mj = FormAtPoint::mask_j_of(key);
    if (std::popcount(mi) + std::popcount(mj) != k)
      throw std::invalid_argument("evaluate: degree does not match vector count");
    CxMat m(k, k);
    int row = 0;
    for (std::uint32_t rest = mi; rest;) {
      std::uint32_t low = rest & (~rest + 1u);
      int idx = std::countr_zero(low);
      for (int t = 0; t < k; ++t) m(row, t) = vectors[t][idx];
      ++row;
      rest ^= low;
    }
    for (std::uint32_t rest = mj; rest;) {
      std::uint32_t low = rest & (~rest + 1u);
      int idx = std::countr_zero(low);
      for (int t = 0; t < k; ++t) m(row, t) = std::conj(vectors[t][idx]);
      ++row;
      rest ^= low;
    }
    total += c * (k == 0 ? Cx{1.0, 0.0} : m.determinant());
  }
  return total;
}

FormField one_zero_field(int n, std::function<CxVec(const CxVec&, const CxVec&)> coeffs,
                         std::function<CxMat(const CxVec&, const CxVec&)> dwbar,
                         std::function<CxMat(const CxVec&, const CxVec&)> dzbar,
                         std::function<CxMat(const CxVec&, const CxVec&)> dw) {
  FormField f;
  f.n = n;
  f.eval = [n, coeffs](const CxVec& w, const CxVec& z) {
    CxVec c = coeffs(w, z);
    FormAtPoint out(n);
    for (int j = 0; j < n; ++j) out.add_term(1u << j, 0u, c[j]);
    return out;
  };
  auto row_form = [n](const CxMat& m, int k) {
    FormAtPoint out(n);
    for (int j = 0; j < n; ++j) out.add_term(1u << j, 0u, m(j, k - 1));
    return out;
  };
  if (dwbar)
    f.d_wbar = [dwbar, row_form](const CxVec& w, const CxVec& z, int k) {
      return row_form(dwbar(w, z), k);
    };
  if (dzbar)
    f.d_zbar = [dzbar, row_form](const CxVec& w, const CxVec& z, int k) {
      return row_form(dzbar(w, z), k);
    };
  if (dw)
    f.d_w = [dw, row_form](const CxVec& w, const CxVec& z, int k) {
      return row_form(dw(w, z), k);
    };
  return f;
}

FormAtPoint coeff_partial_w(const FormField& f, const CxVec& w, const CxVec& z, int j) {
  return f.d_w ? f.d_w(w, z, j) : fd_partial(f, w, z, j, Var::w);
}

FormAtPoint coeff_partial_wbar(const FormField& f, const CxVec& w, const CxVec& z, int j) {
  return f.d_wbar ? f.d_wbar(w, z, j) : fd_partial(f, w, z, j, Var::wbar);
}

FormAtPoint coeff_partial_zbar(const FormField& f, const CxVec& w, const CxVec& z, int j) {
  return f.d_zbar ? f.d_zbar(w, z, j) : fd_partial(f, w, z, j, Var::zbar);
}

FormAtPoint dbar_w(const FormField& f, const CxVec& w, const CxVec& z) {
  FormAtPoint out(f.n);
  for (int j = 1; j <= f.n; ++j)
    out += wedge(FormAtPoint::dwbar(f.n, j), coeff_partial_wbar(f, w, z, j));
  return out;
}

FormAtPoint partial_w(const FormField& f, const CxVec& w, const CxVec& z) {
  FormAtPoint out(f.n);
  for (int j = 1; j <= f.n; ++j)
    out += wedge(FormAtPoint::dw(f.n, j), coeff_partial_w(f, w, z, j));
  return out;
}

MixedForm dbar_z(const FormField& f, const CxVec& w, const CxVec& z) {
  MixedForm out;
  out.n = f.n;
  FormAtPoint base = f.eval(w, z);
  int deg = total_degree_or_throw(base, "dbar_z");
  Real sign = (deg & 1) ? -1.0 : 1.0;  // carry dzbar_k to the right
  for (int k = 1; k <= f.n; ++k) {
    FormAtPoint s = coeff_partial_zbar(f, w, z, k);
    s *= Cx{sign, 0.0};
    if (!s.empty()) out.slice[k] = std::move(s);
  }
  return out;
}

FormAtPoint cf0(const FormField& eta, const CxVec& w, const CxVec& z) {
  FormAtPoint e = eta.eval(w, z);
  FormAtPoint d = dbar_w(eta, w, z);
  FormAtPoint out = wedge(e, wedge_power(d, eta.n - 1));
  out *= inv_two_pi_i_pow(eta.n);
  return out;
}

MixedForm cf1(const FormField& eta, const CxVec& w, const CxVec& z) {
  const int n = eta.n;
  if (n < 2) throw std::invalid_argument("cf1: requires n >= 2");
  FormAtPoint head = wedge(eta.eval(w, z), wedge_power(dbar_w(eta, w, z), n - 2));
  // eta /\ (dbar_w eta)^{n-2} has odd degree 2n-3, so pushing dzbar_k to the
  // right of each slice flips the sign once.
  Cx scale = -static_cast<Real>(n - 1) * inv_two_pi_i_pow(n);
  MixedForm out;
  out.n = n;
  for (int k = 1; k <= n; ++k) {
    FormAtPoint theta = coeff_partial_zbar(eta, w, z, k);
    FormAtPoint s = wedge(head, theta);
    s *= scale;
    if (!s.empty()) out.slice[k] = std::move(s);
  }
  return out;
}

FormAtPoint star_one_zero(const FormAtPoint& alpha) {
  int p = 0, q = 0;
  if (!alpha.homogeneous(&p, &q) || (!alpha.empty() && (p != 1 || q != 0)))
    throw std::invalid_argument("star_one_zero: expects a (1,0)-form");
  const int n = alpha.n();
  Cx scale = -kImag * i_pow(n - 1) / std::pow(2.0, n - 1);
  FormAtPoint out(n);
  for (const auto& [key, c] : alpha.terms()) {
    std::uint32_t mi = FormAtPoint::mask_i_of(key);
    int j = std::countr_zero(mi) + 1;
    FormAtPoint m = FormAtPoint::dw(n, j);
    for (int k = 1; k <= n; ++k) {
      if (k == j) continue;
      FormAtPoint pair(n);
      pair.add_term(1u << (k - 1), 1u << (k - 1), Cx{1.0, 0.0});
      m = wedge(m, pair);
    }
    m *= c * scale;
    out += m;
  }
  return out;
}

TangentFrame boundary_frame(const DefiningFunction& f, const CxVec& w) {
  if (std::abs(f.rho(w)) > kBoundaryTol)
    throw std::invalid_argument("boundary_frame: point not on the boundary");
  const int n = f.n;
  CxVec g = f.dbar_grad(w);
  Real gn = g.norm();
  if (gn < 1e-12) throw DegenerateBoundary("boundary_frame: vanishing gradient");
  CxVec nu = g.conjugate() / gn;  // outward: grad rho points out of {rho<0}

  TangentFrame frame;
  frame.base = w;
  frame.normal = nu;
  std::vector<CxVec> cand;
  for (int a = 0; a < 2 * n; ++a) {
    CxVec e = CxVec::Zero(n);
    e[a / 2] = (a % 2 == 0) ? Cx{1.0, 0.0} : Cx{0.0, 1.0};
    cand.push_back(e - nu * real_dot(nu, e));
  }
  while (static_cast<int>(frame.tangents.size()) < 2 * n - 1) {
    int best = -1;
    Real best_norm = 1e-10;
    for (std::size_t a = 0; a < cand.size(); ++a) {
      if (cand[a].size() == 0) continue;
      Real r = cand[a].norm();
      if (r > best_norm + 1e-14) {
        best_norm = r;
        best = static_cast<int>(a);
      }
    }
    if (best < 0) throw DegenerateBoundary("boundary_frame: rank deficiency");
    CxVec t = cand[best] / best_norm;
    frame.tangents.push_back(t);
    cand[best] = CxVec();
    for (auto& c : cand)
      if (c.size() != 0) c -= t * real_dot(t, c);
  }

  // Orientation: (nu, t_1, ..., t_{2n-1}) must be positive for the standard
  // orientation dx_1 dy_1 ... dx_n dy_n.
  RealMat m(2 * n, 2 * n);
  auto put = [&m, n](int col, const CxVec& v) {
    for (int j = 0; j < n; ++j) {
      m(2 * j, col) = v[j].real();
      m(2 * j + 1, col) = v[j].imag();
    }
  };
  put(0, nu);
  for (int t = 0; t < 2 * n - 1; ++t) put(t + 1, frame.tangents[t]);
  if (m.determinant() < 0.0) frame.tangents.back() *= -1.0;
  return frame;
}

Cx pullback_density(const FormAtPoint& omega, const TangentFrame& frame) {
  return evaluate(omega, frame.tangents);
}

Cx top_form_density(const FormAtPoint& omega) {
  const int n = omega.n();
  int p = 0, q = 0;
  if (!omega.homogeneous(&p, &q) || (!omega.empty() && (p != n || q != n)))
    throw std::invalid_argument("top_form_density: expects an (n,n)-form");
  std::uint32_t full = (n >= 32) ? 0xffffffffu : ((1u << n) - 1u);
  Cx c = omega.coeff(full, full);
  // dV = (i/2)^n dw_1 dwbar_1 ... dw_n dwbar_n
  //    = (i/2)^n (-1)^{n(n-1)/2} dw_{1..n} dwbar_{1..n}.
  Cx dv_coeff = i_pow(n) / std::pow(2.0, n);
  if ((n * (n - 1) / 2) & 1) dv_coeff = -dv_coeff;
  return c / dv_coeff;
}

}  // namespace cfint
