#pragma once

// Five-diagonal CMV matrix F, its left variant F*, the signature matrix E,
// the block-diagonal factors F1/F2, and the Hessenberg matrix H.

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "opuc/error.hpp"
#include "opuc/laurent.hpp"
#include "opuc/schur.hpp"
#include "opuc/szego.hpp"

namespace opuc {

using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;

/// Parameter accessor over a Schur sequence with a_0 = conj(a_0) = 1.
/// Anything with the same four members can drive the templated builders,
/// which is how perturbed and differentiated matrices are produced.
struct SeqEntries {
  const SchurSequence* seq;
  cplx a(int k) const { return seq->a(k); }
  cplx ab(int k) const { return std::conj(seq->a(k)); }
  cplx rho(int k) const { return seq->rho(k); }
  cplx rhohat(int k) const { return seq->rhohat(k); }
};

/// Entries of the order-n truncation of F, row r and column c 0-based:
///   odd r:  (r,r-1) = -rhohat_r a_{r+1}        (r,r)   = -conj(a_r) a_{r+1}
///           (r,r+1) = -rho_{r+1} a_{r+2}       (r,r+2) = rho_{r+1} rho_{r+2}
///   even r: (r,r-2) = rhohat_{r-1} rhohat_r    (r,r-1) = conj(a_{r-1}) rhohat_r
///           (r,r)   = -conj(a_r) a_{r+1}       (r,r+1) = conj(a_r) rho_{r+1}
///
/// `put(r, c, value)` receives every structurally nonzero entry.
template <class P, class Put>
void five_diagonal_entries(int n, const P& p, Put&& put) {
  for (int r = 0; r < n; ++r) {
    if (r % 2 == 1) {
      put(r, r - 1, -p.rhohat(r) * p.a(r + 1));
      put(r, r, -p.ab(r) * p.a(r + 1));
      if (r + 1 < n) put(r, r + 1, -p.rho(r + 1) * p.a(r + 2));
      if (r + 2 < n) put(r, r + 2, p.rho(r + 1) * p.rho(r + 2));
    } else {
      if (r >= 2) put(r, r - 2, p.rhohat(r - 1) * p.rhohat(r));
      if (r >= 1) put(r, r - 1, p.ab(r - 1) * p.rhohat(r));
      put(r, r, -p.ab(r) * p.a(r + 1));
      if (r + 1 < n) put(r, r + 1, p.ab(r) * p.rho(r + 1));
    }
  }
}

template <class T, class P>
Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> five_diagonal(int n, const P& p) {
  Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> F(n, n);
  F.setConstant(T(0.0));
  five_diagonal_entries(n, p, [&](int r, int c, const T& v) { F(r, c) = v; });
  return F;
}

/// Same accessor with rho and rhohat exchanged.
template <class P>
struct SwappedRho {
  const P& p;
  auto a(int k) const { return p.a(k); }
  auto ab(int k) const { return p.ab(k); }
  auto rho(int k) const { return p.rhohat(k); }
  auto rhohat(int k) const { return p.rho(k); }
};

/// Order-n truncation of F backed by its Theta blocks.
class CmvMatrix {
 public:
  CmvMatrix(std::vector<Block2> blocks, MatrixXc dense) : blocks_(std::move(blocks)), dense_(std::move(dense)) {}

  int n() const noexcept { return static_cast<int>(dense_.rows()); }
  /// Theta_1..Theta_n; blocks()[k-1] is Theta_k.
  const std::vector<Block2>& blocks() const noexcept { return blocks_; }
  const MatrixXc& dense() const noexcept { return dense_; }
  cplx operator()(int r, int c) const { return dense_(r, c); }

 private:
  std::vector<Block2> blocks_;
  MatrixXc dense_;
};

inline std::vector<Block2> theta_blocks(const SchurSequence& seq, int n) {
  std::vector<Block2> b;
  for (int k = 1; k <= n; ++k) b.push_back(theta_block(seq, k));
  return b;
}

inline CmvMatrix build_F(const SchurSequence& seq, int n) {
  check_order(seq, n, 1);
  return CmvMatrix(theta_blocks(seq, n), five_diagonal<cplx>(n, SeqEntries{&seq}));
}

/// E_n = diag(e_0, ..., e_{n-1}).
inline MatrixXc signature(const SchurSequence& seq, int n) {
  check_order(seq, n, 1);
  MatrixXc E = MatrixXc::Zero(n, n);
  for (int k = 0; k < n; ++k) E(k, k) = double(seq.e(k));
  return E;
}

/// F*_n = E_n F_n^T E_n.
inline CmvMatrix build_Fstar(const SchurSequence& seq, int n) {
  const CmvMatrix F = build_F(seq, n);
  const MatrixXc E = signature(seq, n);
  return CmvMatrix(F.blocks(), E * F.dense().transpose() * E);
}

/// F*_n assembled as F_n^T with rho and rhohat exchanged.
inline MatrixXc build_Fstar_swapped(const SchurSequence& seq, int n) {
  check_order(seq, n, 1);
  const SeqEntries p{&seq};
  return five_diagonal<cplx>(n, SwappedRho<SeqEntries>{p}).transpose();
}

/// F1_n = diag(Theta_1, Theta_3, ...) and F2_n = diag(1, Theta_2, Theta_4, ...),
/// each truncated to n x n.
struct FactorPair {
  MatrixXc F1;
  MatrixXc F2;
};

template <class T, class P>
std::pair<Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>, Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>>
block_factors(int n, const P& p) {
  using M = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
  M F1(n, n), F2(n, n);
  F1.setConstant(T(0.0));
  F2.setConstant(T(0.0));
  F2(0, 0) = T(1.0);
  for (int k = 1; k <= n; ++k) {
    M& F = (k % 2 == 1) ? F1 : F2;
    const int i = k - 1;  // Theta_k occupies rows/cols k-1, k
    F(i, i) = -p.a(k);
    if (k < n) {
      F(i, i + 1) = p.rho(k);
      F(i + 1, i) = p.rhohat(k);
      F(i + 1, i + 1) = p.ab(k);
    }
  }
  return {F1, F2};
}

inline FactorPair build_factors(const SchurSequence& seq, int n) {
  check_order(seq, n, 1);
  auto [F1, F2] = block_factors<cplx>(n, SeqEntries{&seq});
  return {F1, F2};
}

/// Lower Hessenberg matrix of multiplication by z in the monic basis:
///   (r, j) = -conj(a_j) a_{r+1} prod_{k=j+1..r} rhohat_k for j < r,
///   (r, r) = -conj(a_r) a_{r+1},  (r, r+1) = rho_{r+1}.
inline MatrixXc build_H(const SchurSequence& seq, int n) {
  check_order(seq, n, 1);
  MatrixXc H = MatrixXc::Zero(n, n);
  for (int r = 0; r < n; ++r) {
    const cplx an = seq.a(r + 1);
    double prod = 1.0;
    for (int j = r; j >= 0; --j) {
      H(r, j) = -std::conj(seq.a(j)) * an * prod;
      if (j >= 1) prod *= seq.rhohat(j);
    }
    if (r + 1 < n) H(r, r + 1) = seq.rho(r + 1);
  }
  return H;
}

/// Companion matrix of the monic phi_n (last column holds -c_0..-c_{n-1}).
inline MatrixXc companion(const ComplexPoly& monic) {
  const int n = monic.degree();
  if (n < 1) throw Error(ErrorCode::DegreeMismatch, "companion matrix needs degree >= 1");
  MatrixXc C = MatrixXc::Zero(n, n);
  for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) C(i, n - 1) = -monic[i] / monic[n];
  return C;
}

/// y = F x using only the five diagonals.
inline VectorXc matvec(const CmvMatrix& F, const VectorXc& x) {
  const int n = F.n();
  if (x.size() != n)
    throw Error(ErrorCode::DimensionMismatch,
                "vector length " + std::to_string(x.size()) + " vs order " + std::to_string(n));
  VectorXc y = VectorXc::Zero(n);
  const MatrixXc& D = F.dense();
  for (int r = 0; r < n; ++r) {
    const int lo = std::max(0, r - 2), hi = std::min(n - 1, r + 2);
    cplx acc = 0.0;
    for (int c = lo; c <= hi; ++c) acc += D(r, c) * x(c);
    y(r) = acc;
  }
  return y;
}

/// Tridiagonal pencil (A, B) whose generalized eigenvalues A v = lambda B v
/// are the zeros of phi_n. Odd n: (F1_n, conj F2_n) with eigenvector V_n;
/// even n: (F2_n, conj F1_n) with eigenvector V_{n*}.
struct Pencil {
  MatrixXc A;
  MatrixXc B;
  bool uses_left_vector;
};

inline Pencil build_pencil(const SchurSequence& seq, int n) {
  const FactorPair f = build_factors(seq, n);
  if (n % 2 == 1) return {f.F1, f.F2.conjugate(), false};
  return {f.F2, f.F1.conjugate(), true};
}

}  // namespace opuc
