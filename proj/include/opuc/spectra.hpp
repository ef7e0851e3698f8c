#pragma once

// Zeros of phi_n as matrix eigenvalues, eigenvector checks, multiplicity
// clustering, and annulus bounds for the zeros.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "opuc/cmv.hpp"
#include "opuc/error.hpp"
#include "opuc/laurent.hpp"
#include "opuc/schur.hpp"
#include "opuc/szego.hpp"

namespace opuc {

inline constexpr double kClusterTol = 1e-8;

/// det(zI - M) through a partial-pivot LU at the evaluation point.
inline cplx charpoly_eval(const MatrixXc& M, cplx z) {
  if (M.rows() != M.cols()) throw Error(ErrorCode::DimensionMismatch, "charpoly needs a square matrix");
  if (M.rows() == 0) return 1.0;
  const MatrixXc A = z * MatrixXc::Identity(M.rows(), M.cols()) - M;
  return Eigen::PartialPivLU<MatrixXc>(A).determinant();
}

enum class Backend { cmv_eig, hessenberg_eig, companion };

inline std::string_view to_string(Backend b) {
  switch (b) {
    case Backend::cmv_eig: return "cmv";
    case Backend::hessenberg_eig: return "hessenberg";
    case Backend::companion: return "companion";
  }
  return "cmv";
}

inline Backend parse_backend(std::string_view s) {
  if (s == "cmv" || s == "cmv_eig") return Backend::cmv_eig;
  if (s == "hessenberg" || s == "hessenberg_eig") return Backend::hessenberg_eig;
  if (s == "companion") return Backend::companion;
  throw Error(ErrorCode::InvalidArgument, "unknown backend '" + std::string(s) + "'");
}

struct Cluster {
  cplx centroid;
  std::vector<int> members;
  int multiplicity() const { return static_cast<int>(members.size()); }
};

/// Single-linkage clustering: two values share a cluster when a chain of
/// pairwise distances below `tol` links them. Clusters are ordered by their
/// smallest member index.
inline std::vector<Cluster> cluster_multiplicities(const std::vector<cplx>& eigs, double tol = kClusterTol) {
  if (!(tol > 0)) throw Error(ErrorCode::InvalidArgument, "cluster tolerance must be positive");
  const int n = static_cast<int>(eigs.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(eigs[i] - eigs[j]) < tol) parent[find(i)] = find(j);
  std::vector<Cluster> out;
  std::vector<int> slot(n, -1);
  for (int i = 0; i < n; ++i) {
    const int r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(out.size());
      out.push_back({});
    }
    out[slot[r]].members.push_back(i);
  }
  for (auto& c : out) {
    cplx s = 0.0;
    for (int i : c.members) s += eigs[i];
    c.centroid = s / double(c.members.size());
  }
  return out;
}

struct ZeroEntry {
  cplx value;
  int cluster = 0;
  int multiplicity = 1;
  double residual = 0.0;       // eigenvector residual ||(lambda I - M) v|| / ||v||
  double zero_residual = 0.0;  // |phi_n(lambda)| relative to its term scale
};

struct SpectrumResult {
  Backend backend = Backend::cmv_eig;
  int n = 0;
  std::vector<ZeroEntry> zeros;
  std::vector<Cluster> clusters;

  std::vector<cplx> values() const {
    std::vector<cplx> v;
    for (const auto& z : zeros) v.push_back(z.value);
    return v;
  }
};

/// Residuals of the closed-form eigenvectors at lambda:
/// right = ||(lambda I - F_n) V_n|| / ||V_n||,
/// left  = ||(lambda I - F_n^T) E_n V_{n*}|| / ||E_n V_{n*}||.
struct EigvecResidual {
  double right = 0.0;
  double left = 0.0;
  double max() const { return std::max(right, left); }
};

inline EigvecResidual eigvec_residual(const SchurSequence& seq, const CmvMatrix& F, cplx lambda) {
  const int n = F.n();
  const Eigvecs ev = eigvec_at(seq, n, lambda);
  VectorXc v = Eigen::Map<const VectorXc>(ev.v.data(), n);
  VectorXc w = Eigen::Map<const VectorXc>(ev.vstar.data(), n);
  for (int k = 0; k < n; ++k) w(k) *= double(seq.e(k));
  EigvecResidual r;
  r.right = (lambda * v - matvec(F, v)).norm() / v.norm();
  r.left = (lambda * w - F.dense().transpose() * w).norm() / w.norm();
  return r;
}

/// Eigenvector residuals at an accepted zero of phi_n.
inline EigvecResidual verify_eigvec(const SchurSequence& seq, int n, cplx lambda,
                                    double zero_tol = kZeroResidualTol) {
  check_order(seq, n, 1);
  const double res = zero_residual(seq, n, lambda);
  if (res > zero_tol) throw Error(ErrorCode::NotAZero, "phi_n(lambda) relative residual " + std::to_string(res));
  return eigvec_residual(seq, build_F(seq, n), lambda);
}

struct ZerosOptions {
  double cluster_tol = kClusterTol;
};

namespace detail {
inline void sort_values(std::vector<cplx>& v, std::vector<int>& order) {
  order.resize(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    if (v[i].real() != v[j].real()) return v[i].real() < v[j].real();
    return v[i].imag() < v[j].imag();
  });
}
}  // namespace detail

/// Zeros of phi_n as eigenvalues of F_n, H_n, or the companion matrix of phi_n.
/// Values are sorted by real then imaginary part. With the cmv backend the
/// residual column uses the closed-form eigenvector; otherwise it uses the
/// solver's own eigenvector.
inline SpectrumResult zeros(const SchurSequence& seq, int n, Backend backend = Backend::cmv_eig,
                            const ZerosOptions& opt = {}) {
  check_order(seq, n, 1);
  std::optional<CmvMatrix> F;
  MatrixXc M;
  switch (backend) {
    case Backend::cmv_eig:
      F = build_F(seq, n);
      M = F->dense();
      break;
    case Backend::hessenberg_eig: M = build_H(seq, n); break;
    case Backend::companion: M = companion(szego_sequences(seq, n).phi[n]); break;
  }
  if (!M.allFinite()) throw Error(ErrorCode::SolverFailure, "non-finite matrix entries (n=" + std::to_string(n) + ")");
  Eigen::ComplexEigenSolver<MatrixXc> es(M, true);
  if (es.info() != Eigen::Success)
    throw Error(ErrorCode::SolverFailure, std::string(to_string(backend)) + " eigensolver did not converge (n=" +
                                              std::to_string(n) + ")");
  std::vector<cplx> vals(es.eigenvalues().data(), es.eigenvalues().data() + n);
  std::vector<int> order;
  detail::sort_values(vals, order);

  SpectrumResult out;
  out.backend = backend;
  out.n = n;
  std::vector<cplx> sorted;
  for (int i : order) sorted.push_back(vals[i]);
  out.clusters = cluster_multiplicities(sorted, opt.cluster_tol);
  out.zeros.resize(n);
  const ComplexPoly monic = monic_coefficients(seq, n);
  for (int c = 0; c < static_cast<int>(out.clusters.size()); ++c)
    for (int i : out.clusters[c].members) {
      out.zeros[i].cluster = c;
      out.zeros[i].multiplicity = out.clusters[c].multiplicity();
    }
  for (int i = 0; i < n; ++i) {
    auto& z = out.zeros[i];
    z.value = sorted[i];
    z.zero_residual = zero_residual(monic, z.value);
    if (F) {
      z.residual = eigvec_residual(seq, *F, z.value).right;
    } else {
      const VectorXc v = es.eigenvectors().col(order[i]);
      z.residual = (z.value * v - M * v).norm() / v.norm();
    }
  }
  return out;
}

/// Number of singular values of (lambda I - M) below rtol * sigma_max.
inline int geometric_multiplicity(const MatrixXc& M, cplx lambda, double rtol = 1e-8) {
  const MatrixXc A = lambda * MatrixXc::Identity(M.rows(), M.cols()) - M;
  Eigen::JacobiSVD<MatrixXc> svd(A);
  const auto& s = svd.singularValues();
  const double top = std::max(s(0), 1.0);
  int k = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) < rtol * top) ++k;
  return k;
}

/// Bottleneck distance between two multisets of equal size: the smallest d
/// for which a perfect matching uses only pairs at distance <= d.
inline double matching_distance(const std::vector<cplx>& x, const std::vector<cplx>& y) {
  if (x.size() != y.size()) throw Error(ErrorCode::DimensionMismatch, "multisets differ in size");
  const int n = static_cast<int>(x.size());
  if (n == 0) return 0.0;
  std::vector<double> d(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d[i * n + j] = std::abs(x[i] - y[j]);
  std::vector<double> cand = d;
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  auto perfect = [&](double lim) {
    std::vector<int> match(n, -1);
    for (int i = 0; i < n; ++i) {
      std::vector<char> seen(n, 0);
      auto augment = [&](auto&& self, int u) -> bool {
        for (int v = 0; v < n; ++v) {
          if (d[u * n + v] > lim || seen[v]) continue;
          seen[v] = 1;
          if (match[v] < 0 || self(self, match[v])) {
            match[v] = u;
            return true;
          }
        }
        return false;
      };
      if (!augment(augment, i)) return false;
    }
    return true;
  };
  std::size_t lo = 0, hi = cand.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (perfect(cand[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  return cand[lo];
}

/// Smallest pairwise distance within a multiset (infinity for fewer than two values).
inline double min_separation(const std::vector<cplx>& x) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) m = std::min(m, std::abs(x[i] - x[j]));
  return m;
}

// ---------------------------------------------------------------------------
// Annulus bounds

struct AnnulusBound {
  double R1 = 0, R2 = 0, K = 0, K1 = 0, K2 = 0;
  double K1_effective() const { return std::max(K1, 0.0); }
};

/// Zeros of phi_n for parameters with R1 <= |a_k| <= R2 lie in K1 <= |z| <= K2, where
/// K = max(|1-R1^2|^{1/2}, |1-R2^2|^{1/2}), K2 = (R2+K)^2, K1 = R1^2 + R2^2 - K2.
inline AnnulusBound gershgorin_annulus(double R1, double R2) {
  if (!(R1 >= 0.0) || !(R2 >= R1) || !std::isfinite(R2))
    throw Error(ErrorCode::InvalidRadii, "radii must satisfy 0 <= R1 <= R2");
  if (std::abs(R1 - 1.0) <= kUnitCircleTol || std::abs(R2 - 1.0) <= kUnitCircleTol)
    throw Error(ErrorCode::InvalidRadii, "radii must differ from 1");
  AnnulusBound b;
  b.R1 = R1;
  b.R2 = R2;
  b.K = std::max(std::sqrt(std::abs(1.0 - R1 * R1)), std::sqrt(std::abs(1.0 - R2 * R2)));
  b.K2 = (R2 + b.K) * (R2 + b.K);
  b.K1 = R1 * R1 + R2 * R2 - b.K2;
  return b;
}

/// delta(eps) = sqrt(1 + eps^2 / (4(1+eps))) - 1: parameter moduli within
/// (1-delta, 1+delta) keep every zero modulus within (1-eps, 1+eps).
inline double delta_for_epsilon(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw Error(ErrorCode::InvalidEpsilon, "epsilon must be positive");
  return std::sqrt(1.0 + eps * eps / (4.0 * (1.0 + eps))) - 1.0;
}

}  // namespace opuc
