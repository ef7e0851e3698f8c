#pragma once

// Extended-precision (113-bit) checks of the closed-form eigenvectors.
//
// V_n(z) has entries growing like |z|^{n/2}, so a double-precision zero
// already perturbs (lambda I - F_n) V_n(lambda) by roughly eps |lambda|^{n/2}.
// The checks here refine the zero by Newton's method on phi_n and evaluate
// everything in quad precision, which isolates the formula from that floor.

#include <cmath>
#include <complex>
#include <vector>

#include <boost/multiprecision/complex128.hpp>

#include "opuc/cmv.hpp"
#include "opuc/laurent.hpp"
#include "opuc/schur.hpp"
#include "opuc/spectra.hpp"
#include "opuc/szego.hpp"

namespace opuc {

using qreal = boost::multiprecision::float128;
using qcplx = boost::multiprecision::complex128;

inline qcplx to_quad(cplx z) { return qcplx(qreal(z.real()), qreal(z.imag())); }
inline cplx to_double(const qcplx& z) {
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

/// Schur data converted to quad precision, usable with the templated builders.
struct QuadEntries {
  std::vector<qcplx> a_, rho_, rhohat_;
  std::vector<qreal> inv_rho_;
  explicit QuadEntries(const SchurSequence& seq) {
    std::vector<qcplx> p;
    for (int k = 1; k <= seq.size(); ++k) p.push_back(to_quad(seq.a(k)));
    assign(p);
  }
  /// Parameters given directly in quad; |a_k| != 1 is the caller's concern.
  explicit QuadEntries(const std::vector<qcplx>& params) { assign(params); }
  qcplx a(int k) const { return a_[k]; }
  qcplx ab(int k) const { return conj(a_[k]); }
  qcplx rho(int k) const { return rho_[k]; }
  qcplx rhohat(int k) const { return rhohat_[k]; }

 private:
  void assign(const std::vector<qcplx>& params) {
    a_.push_back(qcplx(1.0));
    rho_.push_back(qcplx(1.0));
    rhohat_.push_back(qcplx(1.0));
    inv_rho_.push_back(qreal(1.0));
    for (const qcplx& a : params) {
      const qreal gap = qreal(1.0) - norm(a);
      const qreal r = sqrt(abs(gap));
      a_.push_back(a);
      rho_.push_back(qcplx(r));
      rhohat_.push_back(qcplx(gap > 0 ? r : qreal(-r)));
      inv_rho_.push_back(qreal(1.0) / r);
    }
  }
};

/// varphi_k, varphi*_k (and optionally varphi_n') at z in quad precision.
struct QuadOrtho {
  std::vector<qcplx> varphi, varphistar;
  qcplx dvarphi_n;
};

inline QuadOrtho quad_orthonormal(const QuadEntries& q, int n, const qcplx& z, bool derivative) {
  QuadOrtho v;
  v.varphi.resize(n + 1);
  v.varphistar.resize(n + 1);
  v.varphi[0] = v.varphistar[0] = qcplx(1.0);
  qcplx dp(0.0), dps(0.0);
  for (int k = 1; k <= n; ++k) {
    const qcplx& a = q.a_[k];
    const qcplx ac = conj(a);
    const qreal& ir = q.inv_rho_[k];
    const qcplx p = v.varphi[k - 1], ps = v.varphistar[k - 1];
    const qcplx zp = z * p;
    if (derivative) {
      const qcplx t = p + z * dp;
      dp = (t + a * dps) * ir;
      dps = (dps + ac * t) * ir;
    }
    v.varphi[k] = (zp + a * ps) * ir;
    v.varphistar[k] = (ps + ac * zp) * ir;
  }
  v.dvarphi_n = dp;
  return v;
}

struct PolishedZero {
  qcplx value;
  double shift = 0.0;  // |refined - start| / max(|start|, 1)
};

/// Newton refinement of a zero of phi_n in quad precision.
inline PolishedZero polish_zero(const QuadEntries& q, int n, cplx start, int iterations = 3) {
  qcplx z = to_quad(start);
  for (int it = 0; it < iterations; ++it) {
    const auto v = quad_orthonormal(q, n, z, true);
    if (abs(v.dvarphi_n) == 0) break;
    const qcplx step = v.varphi[n] / v.dvarphi_n;
    z -= step;
    if (abs(step) <= qreal(1e-32) * (abs(z) + 1)) break;
  }
  return {z, std::abs(to_double(z) - start) / std::max(std::abs(start), 1.0)};
}

struct ExtendedEigvecCheck {
  EigvecResidual residual;
  double polish_shift = 0.0;
};

/// Residuals of V_n and E_n V_{n*} against F_n and F_n^T, evaluated in quad
/// precision at the refined zero near `lambda`. The zero is first accepted
/// by its double-precision backward error.
class ExtendedChecker {
 public:
  explicit ExtendedChecker(const SchurSequence& seq) : seq_(seq), q_(seq) {}

  ExtendedEigvecCheck verify(int n, cplx lambda, double zero_tol = kZeroResidualTol) const {
    check_order(seq_, n, 1);
    const double res = zero_residual(seq_, n, lambda);
    if (res > zero_tol)
      throw Error(ErrorCode::NotAZero, "phi_n(lambda) relative residual " + std::to_string(res));
    ExtendedEigvecCheck out;
    if (std::abs(lambda) <= kZeroPointTol) {
      // the closed form at 0 is exact; double precision suffices
      out.residual = eigvec_residual(seq_, build_F(seq_, n), lambda);
      return out;
    }
    const PolishedZero pz = polish_zero(q_, n, lambda);
    out.polish_shift = pz.shift;
    const qcplx z = pz.value;

    const auto v = quad_orthonormal(q_, n - 1, z, false);
    std::vector<qcplx> x(n), y(n);
    const qcplx iz = qcplx(1.0) / z;
    qcplx zm = 1.0;  // z^{-m} for the index pair (2m, 2m+1)
    for (int k = 0; k < n; ++k) {
      if (k >= 2 && k % 2 == 0) zm *= iz;
      if (k % 2 == 0) {
        x[k] = zm * v.varphistar[k];
        y[k] = zm * v.varphi[k];
      } else {
        x[k] = zm * v.varphi[k];
        y[k] = zm * iz * v.varphistar[k];
      }
      if (seq_.e(k) < 0) y[k] = -y[k];
    }

    std::vector<qcplx> rx(n), ry(n);
    for (int k = 0; k < n; ++k) {
      rx[k] = z * x[k];
      ry[k] = z * y[k];
    }
    five_diagonal_entries(n, q_, [&](int r, int c, const qcplx& f) {
      rx[r] -= f * x[c];
      ry[c] -= f * y[r];  // transpose
    });
    qreal nx = 0, ny = 0, nrx = 0, nry = 0;
    for (int k = 0; k < n; ++k) {
      nx += norm(x[k]);
      ny += norm(y[k]);
      nrx += norm(rx[k]);
      nry += norm(ry[k]);
    }
    out.residual.right = static_cast<double>(sqrt(nrx / nx));
    out.residual.left = static_cast<double>(sqrt(nry / ny));
    return out;
  }

 private:
  const SchurSequence& seq_;
  QuadEntries q_;
};

inline ExtendedEigvecCheck verify_eigvec_extended(const SchurSequence& seq, int n, cplx lambda,
                                                  double zero_tol = kZeroResidualTol) {
  return ExtendedChecker(seq).verify(n, lambda, zero_tol);
}

}  // namespace opuc
