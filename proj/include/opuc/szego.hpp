#pragma once

// Szego recurrences, orthonormal families, and the reproducing kernels.

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "opuc/error.hpp"
#include "opuc/poly.hpp"
#include "opuc/schur.hpp"

namespace opuc {

/// Default relative residual under which a point is accepted as a zero of phi_n.
inline constexpr double kZeroResidualTol = 1e-8;
/// |z conj(y) - 1| below which the kernel switches to its confluent form.
inline constexpr double kKernelBranchTol = 1e-8;

/// Monic phi_k and reversed phi*_k, plus the orthonormal scalings
/// varphi_k = kappa_k phi_k and varphistar_k = kappa_k phi*_k, for k = 0..n.
struct PolySequencePair {
  std::vector<ComplexPoly> phi;
  std::vector<ComplexPoly> phistar;
  std::vector<ComplexPoly> varphi;
  std::vector<ComplexPoly> varphistar;
  /// Largest coefficient gap between the running phi*_k and reversed(phi_k, k).
  double reversal_mismatch = 0.0;

  int order() const noexcept { return static_cast<int>(phi.size()) - 1; }
};

inline void check_order(const SchurSequence& seq, int n, int lo = 0) {
  if (n < lo || n > seq.size())
    throw Error(ErrorCode::IndexOutOfRange,
                "order " + std::to_string(n) + " outside [" + std::to_string(lo) + ", " +
                    std::to_string(seq.size()) + "]");
}

/// Coefficient tables up to index n. phi_k follows the forward recurrence
/// phi_k = z phi_{k-1} + a_k phi*_{k-1}; phi*_k is carried as its own running
/// sequence phi*_k = phi*_{k-1} + conj(a_k) z phi_{k-1} and cross-checked
/// against coefficient reversal.
inline PolySequencePair szego_sequences(const SchurSequence& seq, int n) {
  check_order(seq, n);
  PolySequencePair out;
  out.phi.reserve(n + 1);
  out.phistar.reserve(n + 1);
  out.phi.push_back(ComplexPoly::constant(1.0));
  out.phistar.push_back(ComplexPoly::constant(1.0));
  for (int k = 1; k <= n; ++k) {
    const cplx a = seq.a(k);
    const ComplexPoly zphi = out.phi[k - 1].shifted(1);
    ComplexPoly phi = zphi + out.phistar[k - 1] * a;
    ComplexPoly phistar = out.phistar[k - 1] + zphi * std::conj(a);
    phi.coef(k) = 1.0;  // leading coefficient is exactly one
    out.phi.push_back(std::move(phi));
    out.phistar.push_back(std::move(phistar));
    out.reversal_mismatch =
        std::max(out.reversal_mismatch, max_abs_diff(out.phistar[k], reversed(out.phi[k], k)));
  }
  for (int k = 0; k <= n; ++k) {
    out.varphi.push_back(out.phi[k] * cplx(seq.kappa(k)));
    out.varphistar.push_back(out.phistar[k] * cplx(seq.kappa(k)));
  }
  return out;
}

/// Orthonormal families and their z-derivatives at a single point, k = 0..n,
/// computed by the pointwise recurrence in the arithmetic of C.
template <class C>
struct OrthoValuesT {
  std::vector<C> varphi, varphistar, dvarphi, dvarphistar;
};
using OrthoValues = OrthoValuesT<cplx>;

template <class C>
OrthoValuesT<C> evaluate_orthonormal_as(const SchurSequence& seq, int n, const C& z) {
  using std::abs;
  using std::conj;
  using std::sqrt;
  check_order(seq, n);
  OrthoValuesT<C> v;
  v.varphi.resize(n + 1);
  v.varphistar.resize(n + 1);
  v.dvarphi.resize(n + 1);
  v.dvarphistar.resize(n + 1);
  v.varphi[0] = v.varphistar[0] = C(1.0);
  v.dvarphi[0] = v.dvarphistar[0] = C(0.0);
  for (int k = 1; k <= n; ++k) {
    const C a(seq.a(k).real(), seq.a(k).imag());
    const C ac = conj(a);
    const auto r = sqrt(abs(C(1.0) - a * ac));
    const C p = v.varphi[k - 1], ps = v.varphistar[k - 1];
    const C dp = v.dvarphi[k - 1], dps = v.dvarphistar[k - 1];
    v.varphi[k] = (z * p + a * ps) / r;
    v.varphistar[k] = (ps + ac * z * p) / r;
    v.dvarphi[k] = (p + z * dp + a * dps) / r;
    v.dvarphistar[k] = (dps + ac * (p + z * dp)) / r;
  }
  return v;
}

inline OrthoValues evaluate_orthonormal(const SchurSequence& seq, int n, cplx z) {
  return evaluate_orthonormal_as<cplx>(seq, n, z);
}

/// Coefficients of the monic phi_n alone, without keeping the lower orders.
inline ComplexPoly monic_coefficients(const SchurSequence& seq, int n) {
  check_order(seq, n);
  std::vector<cplx> phi{1.0}, phis{1.0};
  for (int k = 1; k <= n; ++k) {
    const cplx a = seq.a(k);
    std::vector<cplx> np(k + 1, 0.0), ns(k + 1, 0.0);
    for (int i = 0; i < k; ++i) {
      np[i + 1] += phi[i];
      np[i] += a * phis[i];
      ns[i] += phis[i];
      ns[i + 1] += std::conj(a) * phi[i];
    }
    np[k] = 1.0;
    phi = std::move(np);
    phis = std::move(ns);
  }
  return ComplexPoly(std::move(phi));
}

/// Backward error of z as a zero of p: |p(z)| / sum_i |c_i| |z|^i.
inline double zero_residual(const ComplexPoly& p, cplx z) {
  const double az = std::abs(z);
  double scale = 0.0;
  for (int i = p.size() - 1; i >= 0; --i) scale = scale * az + std::abs(p[i]);
  return std::abs(p(z)) / scale;
}

inline double zero_residual(const SchurSequence& seq, int n, cplx z) {
  return zero_residual(monic_coefficients(seq, n), z);
}

/// Monic phi_n(z) and phi_n'(z) via the pointwise recurrence.
inline std::pair<cplx, cplx> monic_phi(const SchurSequence& seq, int n, cplx z) {
  const auto v = evaluate_orthonormal(seq, n, z);
  return {v.varphi[n] / seq.kappa(n), v.dvarphi[n] / seq.kappa(n)};
}

// ---------------------------------------------------------------------------
// Recurrence self-test

/// Max scaled residual per relation. Each residual is |lhs - rhs| divided by
/// 1 + the largest term magnitude in the relation, so the figures stay
/// meaningful when kappa_n grows.
struct RecurrenceResiduals {
  double forward_monic = 0.0;   // phi_k = z phi_{k-1} + a_k phi*_{k-1}
  double forward = 0.0;         // z varphi_{k-1} = rho_k varphi_k - a_k varphi*_{k-1}
  double backward_star = 0.0;   // varphi*_{k-1} = rho_k varphi*_k - conj(a_k) z varphi_{k-1}
  double mixed = 0.0;           // varphi_k = a_k varphi*_k + rhohat_k z varphi_{k-1}
  double mixed_star = 0.0;      // varphi*_k = conj(a_k) varphi_k + rhohat_k varphi*_{k-1}

  double max() const { return std::max({forward_monic, forward, backward_star, mixed, mixed_star}); }
};

namespace detail {
inline double scaled_gap(cplx lhs, cplx rhs, std::initializer_list<double> terms) {
  double m = std::max(std::abs(lhs), std::abs(rhs));
  for (double t : terms) m = std::max(m, t);
  return std::abs(lhs - rhs) / (1.0 + m);
}
}  // namespace detail

/// Evaluates the coefficient tables at each sample and checks the monic
/// forward recurrence and the four orthonormal forward/backward relations.
/// Parameters and scalars are taken explicitly so callers can probe
/// deliberately corrupted data.
inline RecurrenceResiduals recurrence_residuals(std::span<const cplx> params, const DerivedScalars& d,
                                                const PolySequencePair& polys,
                                                std::span<const cplx> samples) {
  RecurrenceResiduals r;
  const int n = polys.order();
  for (const cplx z : samples) {
    std::vector<cplx> phi(n + 1), phis(n + 1), vp(n + 1), vps(n + 1);
    for (int k = 0; k <= n; ++k) {
      phi[k] = polys.phi[k](z);
      phis[k] = polys.phistar[k](z);
      vp[k] = polys.varphi[k](z);
      vps[k] = polys.varphistar[k](z);
    }
    for (int k = 1; k <= n; ++k) {
      const cplx a = params[k - 1];
      const cplx ac = std::conj(a);
      const double rho = d.rho[k], rhohat = d.rhohat[k];
      using detail::scaled_gap;
      r.forward_monic = std::max(r.forward_monic,
                                 scaled_gap(phi[k], z * phi[k - 1] + a * phis[k - 1],
                                            {std::abs(z * phi[k - 1]), std::abs(a * phis[k - 1])}));
      r.forward = std::max(r.forward, scaled_gap(z * vp[k - 1], rho * vp[k] - a * vps[k - 1],
                                                 {std::abs(rho * vp[k]), std::abs(a * vps[k - 1])}));
      r.backward_star =
          std::max(r.backward_star, scaled_gap(vps[k - 1], rho * vps[k] - ac * z * vp[k - 1],
                                               {std::abs(rho * vps[k]), std::abs(a * z * vp[k - 1])}));
      r.mixed = std::max(r.mixed, scaled_gap(vp[k], a * vps[k] + rhohat * z * vp[k - 1],
                                             {std::abs(a * vps[k]), std::abs(rhohat * z * vp[k - 1])}));
      r.mixed_star =
          std::max(r.mixed_star, scaled_gap(vps[k], ac * vp[k] + rhohat * vps[k - 1],
                                            {std::abs(a * vp[k]), std::abs(rhohat * vps[k - 1])}));
    }
  }
  return r;
}

inline RecurrenceResiduals recurrence_residuals(const SchurSequence& seq, int n, std::span<const cplx> samples) {
  return recurrence_residuals(seq.params(), seq.derived(), szego_sequences(seq, n), samples);
}

// ---------------------------------------------------------------------------
// Kernels

enum class KernelMethod { sum, csd };

/// K_n(z, y) = sum_{k<=n} e_k varphi_k(z) conj(varphi_k(y)).
///
/// `csd` uses the Christoffel-Darboux form built from index n+1,
///   e_{n+1} (varphi_{n+1}(z) conj varphi_{n+1}(y) - varphi*_{n+1}(z) conj varphi*_{n+1}(y)) / (z conj y - 1),
/// switching to the confluent derivative form when |z conj(y) - 1| < kKernelBranchTol.
/// K_n does not depend on a_{n+1}; when the sequence stops at n, the
/// extension a_{n+1} = 0 is used.
inline cplx kernel(const SchurSequence& seq, int n, cplx z, cplx y, KernelMethod method = KernelMethod::sum) {
  check_order(seq, n);
  if (method == KernelMethod::sum) {
    const auto vz = evaluate_orthonormal(seq, n, z);
    const auto vy = evaluate_orthonormal(seq, n, y);
    cplx acc = 0.0;
    for (int k = 0; k <= n; ++k) acc += double(seq.e(k)) * vz.varphi[k] * std::conj(vy.varphi[k]);
    return acc;
  }
  const SchurSequence ext = n + 1 <= seq.size() ? seq : seq.extended(0.0);
  const int m = n + 1;
  const auto vz = evaluate_orthonormal(ext, m, z);
  const auto vy = evaluate_orthonormal(ext, m, y);
  const double em = ext.e(m);
  const cplx w = z * std::conj(y);
  if (std::abs(w - 1.0) >= kKernelBranchTol) {
    return em * (vz.varphi[m] * std::conj(vy.varphi[m]) - vz.varphistar[m] * std::conj(vy.varphistar[m])) /
           (w - 1.0);
  }
  return em * z *
         (vz.dvarphi[m] * std::conj(vy.varphi[m]) - vz.dvarphistar[m] * std::conj(vy.varphistar[m]));
}

/// Both evaluations of K_{n-1}(lambda, conj(1/lambda)) at a nonzero zero of phi_n.
struct KernelAtZero {
  cplx formula;     // e_n lambda^{1-n} varphi_n'(lambda) varphi*_n(lambda)
  cplx direct_sum;  // sum_{k<n} e_k varphi_k(lambda) conj(varphi_k(1/conj(lambda)))
};

inline KernelAtZero kernel_on_inverse_conjugate(const SchurSequence& seq, int n, cplx lambda,
                                                double zero_tol = kZeroResidualTol) {
  check_order(seq, n, 1);
  if (std::abs(lambda) <= 1e-13) throw Error(ErrorCode::ZeroArgument, "lambda must be nonzero");
  const double res = zero_residual(seq, n, lambda);
  if (res > zero_tol)
    throw Error(ErrorCode::NotAZero, "phi_n(lambda) relative residual " + std::to_string(res));
  const auto v = evaluate_orthonormal(seq, n, lambda);
  KernelAtZero out;
  out.formula = double(seq.e(n)) * ipow(lambda, 1 - n) * v.dvarphi[n] * v.varphistar[n];
  out.direct_sum = kernel(seq, n - 1, lambda, 1.0 / std::conj(lambda), KernelMethod::sum);
  return out;
}

}  // namespace opuc
