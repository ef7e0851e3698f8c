#pragma once

// Standard right/left orthonormal Laurent polynomials, the Theta blocks
// linking them, the five-term recurrence, and the eigenvector vectors V_n.

#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "opuc/error.hpp"
#include "opuc/poly.hpp"
#include "opuc/schur.hpp"
#include "opuc/szego.hpp"

namespace opuc {

/// Below this modulus a point is treated as exactly 0 and closed forms are used.
inline constexpr double kZeroPointTol = 1e-13;

/// chi_{2m} = z^{-m} varphi*_{2m}, chi_{2m+1} = z^{-m} varphi_{2m+1}, and the
/// left family chistar[k] = substar(chi[k]), for k = 0..n.
struct ChiSequences {
  std::vector<ComplexLaurent> chi;
  std::vector<ComplexLaurent> chistar;

  int order() const noexcept { return static_cast<int>(chi.size()) - 1; }
};

inline ChiSequences build_chi(const PolySequencePair& polys) {
  ChiSequences out;
  const int n = polys.order();
  for (int k = 0; k <= n; ++k) {
    const int m = k / 2;
    out.chi.push_back(k % 2 == 0 ? ComplexLaurent::from_poly(polys.varphistar[k], -m)
                                 : ComplexLaurent::from_poly(polys.varphi[k], -m));
    out.chistar.push_back(substar(out.chi.back()));
  }
  return out;
}

inline ChiSequences build_chi(const SchurSequence& seq, int n) { return build_chi(szego_sequences(seq, n)); }

/// Pointwise chi_k(z) and chi_{k*}(z), k = 0..n, from the orthonormal values.
/// Requires z != 0.
struct ChiValues {
  std::vector<cplx> chi, chistar;
};

inline ChiValues chi_values(const SchurSequence& seq, int n, cplx z) {
  if (std::abs(z) <= kZeroPointTol) throw Error(ErrorCode::ZeroArgument, "chi values need z != 0");
  const auto v = evaluate_orthonormal(seq, n, z);
  ChiValues out;
  out.chi.resize(n + 1);
  out.chistar.resize(n + 1);
  for (int k = 0; k <= n; ++k) {
    const int m = k / 2;
    if (k % 2 == 0) {
      out.chi[k] = ipow(z, -m) * v.varphistar[k];
      out.chistar[k] = ipow(z, -m) * v.varphi[k];
    } else {
      out.chi[k] = ipow(z, -m) * v.varphi[k];
      out.chistar[k] = ipow(z, -m - 1) * v.varphistar[k];
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Theta blocks

using Block2 = std::array<std::array<cplx, 2>, 2>;

/// Theta_k = [[-a_k, rho_k], [rhohat_k, conj(a_k)]].
inline Block2 theta_block(cplx a, double rho, double rhohat) {
  return {{{-a, cplx(rho)}, {cplx(rhohat), std::conj(a)}}};
}

inline Block2 theta_block(const SchurSequence& seq, int k) {
  return theta_block(seq.a(k), seq.rho(k), seq.rhohat(k));
}

/// max |(Theta conj(Theta) - I)_{ij}|.
inline double theta_unitarity_defect(const Block2& t) {
  double m = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const cplx s = t[i][0] * std::conj(t[0][j]) + t[i][1] * std::conj(t[1][j]);
      m = std::max(m, std::abs(s - (i == j ? 1.0 : 0.0)));
    }
  return m;
}

namespace detail {

inline std::array<cplx, 2> apply(const Block2& m, cplx x, cplx y) {
  return {m[0][0] * x + m[0][1] * y, m[1][0] * x + m[1][1] * y};
}

inline double pair_gap(std::array<cplx, 2> lhs, std::array<cplx, 2> rhs, double scale) {
  return std::max(std::abs(lhs[0] - rhs[0]), std::abs(lhs[1] - rhs[1])) / (1.0 + scale);
}

inline double mag(std::initializer_list<cplx> xs) {
  double m = 0.0;
  for (cplx x : xs) m = std::max(m, std::abs(x));
  return m;
}

/// a_k with a_0 = 1 from a 0-based parameter span.
inline cplx param(std::span<const cplx> p, int k) { return k == 0 ? cplx(1.0) : p[k - 1]; }

}  // namespace detail

/// Residuals of the three Theta relations between the right and left families:
///   (chi_{2m}, chi_{2m*}) = (1/rho_{2m}) [[conj a_{2m}, 1], [1, a_{2m}]] (chi_{2m-1}, chi_{2m-1*})
///   (chi_{2m-1}, chi_{2m}) = Theta_{2m} (chi_{2m-1*}, chi_{2m*})
///   z (chi_{2m*}, chi_{2m+1*}) = Theta_{2m+1} (chi_{2m}, chi_{2m+1})
/// Each is scaled by 1 + the largest value involved.
struct ThetaResiduals {
  double star_update = 0.0;
  double even_block = 0.0;
  double odd_block = 0.0;
  double max() const { return std::max({star_update, even_block, odd_block}); }
};

inline ThetaResiduals theta_relations_residual(const ChiSequences& chi, std::span<const cplx> params,
                                               const DerivedScalars& d, std::span<const cplx> samples) {
  ThetaResiduals r;
  const int n = chi.order();
  for (const cplx z : samples) {
    std::vector<cplx> c(n + 1), cs(n + 1);
    for (int k = 0; k <= n; ++k) {
      c[k] = chi.chi[k](z);
      cs[k] = chi.chistar[k](z);
    }
    for (int m = 1; 2 * m <= n; ++m) {
      const int k = 2 * m;
      const cplx a = params[k - 1];
      const Block2 s{{{std::conj(a) / d.rho[k], 1.0 / d.rho[k]}, {1.0 / d.rho[k], a / d.rho[k]}}};
      const auto rhs1 = detail::apply(s, c[k - 1], cs[k - 1]);
      r.star_update = std::max(r.star_update, detail::pair_gap({c[k], cs[k]}, rhs1,
                                                               detail::mag({c[k], cs[k], rhs1[0], rhs1[1]})));
      const auto rhs2 = detail::apply(theta_block(a, d.rho[k], d.rhohat[k]), cs[k - 1], cs[k]);
      r.even_block = std::max(r.even_block, detail::pair_gap({c[k - 1], c[k]}, rhs2,
                                                             detail::mag({c[k - 1], c[k], cs[k - 1], cs[k]})));
    }
    for (int m = 0; 2 * m + 1 <= n; ++m) {
      const int k = 2 * m + 1;
      const auto rhs = detail::apply(theta_block(params[k - 1], d.rho[k], d.rhohat[k]), c[k - 1], c[k]);
      const std::array<cplx, 2> lhs{z * cs[k - 1], z * cs[k]};
      r.odd_block = std::max(r.odd_block,
                             detail::pair_gap(lhs, rhs, detail::mag({lhs[0], lhs[1], c[k - 1], c[k]})));
    }
  }
  return r;
}

inline ThetaResiduals theta_relations_residual(const SchurSequence& seq, int n, std::span<const cplx> samples) {
  return theta_relations_residual(build_chi(seq, n), seq.params(), seq.derived(), samples);
}

// ---------------------------------------------------------------------------
// Five-term recurrence

/// M_k = [[-r_k a_{k+1}, r_k r'_{k+1}], [-conj(a_k) a_{k+1}, conj(a_k) r'_{k+1}]]
/// with (r, r') = (rho, rho) for M and (rhohat, rhohat) for Mhat.
inline Block2 five_term_block(std::span<const cplx> params, const DerivedScalars& d, int k, bool hat) {
  const auto& r = hat ? d.rhohat : d.rho;
  const cplx ak = detail::param(params, k), ak1 = detail::param(params, k + 1);
  const double rk = k == 0 ? 1.0 : r[k];
  return {{{-rk * ak1, cplx(rk * r[k + 1])}, {-std::conj(ak) * ak1, std::conj(ak) * r[k + 1]}}};
}

inline Block2 transposed(const Block2& m) { return {{{m[0][0], m[1][0]}, {m[0][1], m[1][1]}}}; }

struct FiveTermResiduals {
  double right = 0.0;
  double left = 0.0;
  double max() const { return std::max(right, left); }
};

/// Residuals of the five-term recurrences for the right family
///   z chi_0 = -a_1 chi_0 + rho_1 chi_1,
///   z (chi_{2m-1}, chi_{2m}) = Mhat_{2m-1}^T (chi_{2m-2}, chi_{2m-1}) + M_{2m} (chi_{2m}, chi_{2m+1}),
/// and for the left family
///   z (chi_{0*}, chi_{1*}) = (-a_1, rhohat_1) chi_{0*} + M_1 (chi_{1*}, chi_{2*}),
///   z (chi_{2m*}, chi_{2m+1*}) = Mhat_{2m}^T (chi_{2m-1*}, chi_{2m*}) + M_{2m+1} (chi_{2m+1*}, chi_{2m+2*}),
/// over every block that fits within order n.
inline FiveTermResiduals five_term_residual(const ChiSequences& chi, std::span<const cplx> params,
                                            const DerivedScalars& d, std::span<const cplx> samples) {
  FiveTermResiduals r;
  const int n = chi.order();
  if (n < 2) throw Error(ErrorCode::IndexOutOfRange, "five-term recurrence needs order >= 2");
  for (const cplx z : samples) {
    std::vector<cplx> c(n + 1), cs(n + 1);
    for (int k = 0; k <= n; ++k) {
      c[k] = chi.chi[k](z);
      cs[k] = chi.chistar[k](z);
    }
    const cplx a1 = params[0];
    {
      const cplx lhs = z * c[0], rhs = -a1 * c[0] + d.rho[1] * c[1];
      r.right = std::max(r.right, std::abs(lhs - rhs) / (1.0 + detail::mag({lhs, rhs, c[1]})));
    }
    for (int m = 1; 2 * m + 1 <= n; ++m) {
      const auto p = detail::apply(transposed(five_term_block(params, d, 2 * m - 1, true)), c[2 * m - 2],
                                   c[2 * m - 1]);
      const auto q = detail::apply(five_term_block(params, d, 2 * m, false), c[2 * m], c[2 * m + 1]);
      const std::array<cplx, 2> lhs{z * c[2 * m - 1], z * c[2 * m]};
      const double scale = detail::mag({lhs[0], lhs[1], p[0], p[1], q[0], q[1], c[2 * m + 1]});
      r.right = std::max(r.right, detail::pair_gap(lhs, {p[0] + q[0], p[1] + q[1]}, scale));
    }
    {
      const auto q = detail::apply(five_term_block(params, d, 1, false), cs[1], cs[2]);
      const std::array<cplx, 2> lhs{z * cs[0], z * cs[1]};
      const std::array<cplx, 2> rhs{-a1 * cs[0] + q[0], d.rhohat[1] * cs[0] + q[1]};
      r.left = std::max(r.left, detail::pair_gap(lhs, rhs, detail::mag({lhs[0], lhs[1], q[0], q[1], cs[2]})));
    }
    for (int m = 1; 2 * m + 2 <= n; ++m) {
      const auto p = detail::apply(transposed(five_term_block(params, d, 2 * m, true)), cs[2 * m - 1], cs[2 * m]);
      const auto q = detail::apply(five_term_block(params, d, 2 * m + 1, false), cs[2 * m + 1], cs[2 * m + 2]);
      const std::array<cplx, 2> lhs{z * cs[2 * m], z * cs[2 * m + 1]};
      const double scale = detail::mag({lhs[0], lhs[1], p[0], p[1], q[0], q[1], cs[2 * m + 2]});
      r.left = std::max(r.left, detail::pair_gap(lhs, {p[0] + q[0], p[1] + q[1]}, scale));
    }
  }
  return r;
}

inline FiveTermResiduals five_term_residual(const SchurSequence& seq, int n, std::span<const cplx> samples) {
  return five_term_residual(build_chi(seq, n), seq.params(), seq.derived(), samples);
}

// ---------------------------------------------------------------------------
// Eigenvector polynomials

/// X_n = z^{floor((n-1)/2)} (chi_0, ..., chi_{n-1}) and
/// X_{n*} = z^{floor(n/2)} (chi_{0*}, ..., chi_{n-1*}) as ordinary polynomials.
struct EigvecPoly {
  std::vector<ComplexPoly> x;
  std::vector<ComplexPoly> xstar;
};

namespace detail {
inline ComplexPoly to_poly(const ComplexLaurent& f) {
  if (!f.supported_in(0, f.hi())) throw Error(ErrorCode::DegreeMismatch, "negative power survives the prefactor");
  std::vector<cplx> c(f.hi() + 1);
  for (int k = 0; k <= f.hi(); ++k) c[k] = f.coefficient(k);
  return ComplexPoly(std::move(c));
}
}  // namespace detail

inline EigvecPoly eigvec_poly(const ChiSequences& chi, int n) {
  if (n < 1 || n > chi.order() + 1) throw Error(ErrorCode::IndexOutOfRange, "eigenvector order out of range");
  EigvecPoly out;
  for (int k = 0; k < n; ++k) {
    out.x.push_back(detail::to_poly(chi.chi[k].shifted((n - 1) / 2)));
    out.xstar.push_back(detail::to_poly(chi.chistar[k].shifted(n / 2)));
  }
  return out;
}

/// V_n(lambda) and V_{n*}(lambda): (chi_k(lambda))_{k<n} and (chi_{k*}(lambda))_{k<n}
/// for lambda != 0, with the closed forms at lambda = 0:
///   V_n(0)     = (0, ..., rho_{n-1}, a_{n-1}) for even n, (0, ..., 0, 1) for odd n;
///   V_{n*}(0)  = (0, ..., 0, 1) for even n, (0, ..., rho_{n-1}, a_{n-1}) for odd n >= 3, (1) for n = 1.
struct Eigvecs {
  std::vector<cplx> v;
  std::vector<cplx> vstar;
};

inline Eigvecs eigvec_at(const SchurSequence& seq, int n, cplx lambda) {
  check_order(seq, n, 1);
  Eigvecs out;
  if (std::abs(lambda) > kZeroPointTol) {
    // chi_{n-1} needs parameters only up to n-1
    const auto c = chi_values(seq, n - 1, lambda);
    out.v = c.chi;
    out.vstar = c.chistar;
    return out;
  }
  out.v.assign(n, 0.0);
  out.vstar.assign(n, 0.0);
  auto tail = [&](std::vector<cplx>& v) {
    v[n - 2] = seq.rho(n - 1);
    v[n - 1] = seq.a(n - 1);
  };
  if (n % 2 == 0) {
    tail(out.v);
    out.vstar[n - 1] = 1.0;
  } else {
    out.v[n - 1] = 1.0;
    if (n == 1)
      out.vstar[0] = 1.0;
    else
      tail(out.vstar);
  }
  return out;
}

}  // namespace opuc
