#include <gtest/gtest.h>

#include "opuc/cmv.hpp"
#include "opuc/spectra.hpp"
#include "test_util.hpp"

using namespace opuc;
using namespace std::complex_literals;

namespace {

/// det(zI - M) coefficients by Faddeev-LeVerrier.
ComplexPoly charpoly_oracle(const MatrixXc& M) {
  const int n = int(M.rows());
  std::vector<cplx> c(n + 1);
  c[n] = 1.0;
  MatrixXc Mk = MatrixXc::Zero(n, n);
  const MatrixXc I = MatrixXc::Identity(n, n);
  for (int k = 1; k <= n; ++k) {
    Mk = M * Mk + c[n - k + 1] * I;
    c[n - k] = -(M * Mk).trace() / double(k);
  }
  return ComplexPoly(c);
}

}  // namespace

TEST(BuildF, TwoByTwo) {
  const auto s = SchurSequence::validate({0.5, 0.5});
  const auto F = build_F(s, 2);
  const double r = std::sqrt(0.75);
  EXPECT_NEAR(std::abs(F(0, 0) - (-0.5)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(F(0, 1) - r), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(F(1, 0) - (-0.5 * r)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(F(1, 1) - (-0.25)), 0.0, 1e-15);
  EXPECT_EQ(F.blocks().size(), 2u);
}

TEST(BuildF, FreeAndOrderOne) {
  const auto F = build_F(SchurSequence::validate({0.0, 0.0, 0.0}), 3).dense();
  // Only rho products survive; every zero of z^3 is 0.
  EXPECT_EQ(F.cwiseAbs().sum(), 2.0);
  EXPECT_LT(max_abs_diff(charpoly_oracle(F), ComplexPoly::monomial(3)), 1e-15);
  EXPECT_EQ(build_F(SchurSequence::validate({2.0}), 1)(0, 0), cplx(-2.0));
  EXPECT_THROW(build_F(SchurSequence::validate({0.5}), 2), Error);
}

TEST(BuildF, FiveDiagonalPattern) {
  std::mt19937_64 rng(21);
  const auto F = build_F(fixture::quasi(rng, 12), 12).dense();
  for (int r = 0; r < 12; ++r)
    for (int c = 0; c < 12; ++c)
      if (std::abs(r - c) > 2) EXPECT_EQ(F(r, c), cplx(0.0));
}

TEST(BuildF, CharacteristicPolynomialIsPhi) {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 40; ++t) {
    const int n = 1 + t % 10;
    const auto s = t % 2 ? fixture::quasi(rng, n) : fixture::positive(rng, n);
    EXPECT_LT(max_abs_diff(charpoly_oracle(build_F(s, n).dense()), szego_sequences(s, n).phi[n]), 1e-10);
    EXPECT_LT(max_abs_diff(charpoly_oracle(build_H(s, n)), szego_sequences(s, n).phi[n]), 1e-10);
  }
}

TEST(BuildFstar, SignatureAndSwappedFormsAgree) {
  const auto s = SchurSequence::validate({2.0, 0.5});
  const MatrixXc E = signature(s, 2);
  EXPECT_EQ(E(0, 0), cplx(1.0));
  EXPECT_EQ(E(1, 1), cplx(-1.0));
  EXPECT_LT((build_Fstar(s, 2).dense() - build_Fstar_swapped(s, 2)).norm(), 1e-15);

  std::mt19937_64 rng(23);
  for (int t = 0; t < 30; ++t) {
    const auto q = fixture::quasi(rng, 9);
    EXPECT_LT((build_Fstar(q, 9).dense() - build_Fstar_swapped(q, 9)).norm(), 1e-13);
    const auto p = fixture::positive(rng, 9);
    EXPECT_EQ((build_Fstar(p, 9).dense() - build_F(p, 9).dense().transpose()).norm(), 0.0);
  }
  EXPECT_EQ(build_Fstar(s, 1)(0, 0), build_F(s, 1)(0, 0));
}

TEST(Factors, ProductAndUnitarity) {
  const auto s = SchurSequence::validate({0.5, 0.5});
  const auto f = build_factors(s, 2);
  EXPECT_EQ(f.F2(0, 0), cplx(1.0));
  EXPECT_EQ(f.F2(1, 1), cplx(-0.5));
  EXPECT_LT((f.F2 * f.F1 - build_F(s, 2).dense()).norm(), 1e-15);

  std::mt19937_64 rng(24);
  for (int n = 1; n <= 12; ++n) {
    const auto q = fixture::quasi(rng, n);
    const auto g = build_factors(q, n);
    EXPECT_LT((g.F2 * g.F1 - build_F(q, n).dense()).norm(), 1e-13);
    const auto p = fixture::positive(rng, n);
    const auto h = build_factors(p, n);
    const MatrixXc I = MatrixXc::Identity(n, n);
    if (n % 2 == 0)
      EXPECT_LT((h.F1 * h.F1.adjoint() - I).norm(), 1e-13);
    else
      EXPECT_LT((h.F2 * h.F2.adjoint() - I).norm(), 1e-13);
  }
}

TEST(Hessenberg, MatchesFAtOrderTwoAndShape) {
  const auto s = SchurSequence::validate({0.5, 0.5});
  EXPECT_LT((build_H(s, 2) - build_F(s, 2).dense()).norm(), 1e-15);
  EXPECT_EQ(build_H(SchurSequence::validate({0.5}), 1)(0, 0), cplx(-0.5));
  std::mt19937_64 rng(25);
  const MatrixXc H = build_H(fixture::quasi(rng, 8), 8);
  for (int r = 0; r < 8; ++r)
    for (int c = r + 2; c < 8; ++c) EXPECT_EQ(H(r, c), cplx(0.0));
}

TEST(Companion, Shape) {
  const MatrixXc C = companion(ComplexPoly({0.5, 0.75, 1.0}));
  EXPECT_EQ(C(1, 0), cplx(1.0));
  EXPECT_EQ(C(0, 1), cplx(-0.5));
  EXPECT_EQ(C(1, 1), cplx(-0.75));
  EXPECT_THROW(companion(ComplexPoly::constant(1.0)), Error);
}

TEST(Matvec, BandedProductMatchesDense) {
  std::mt19937_64 rng(26);
  const auto F = build_F(fixture::quasi(rng, 11), 11);
  VectorXc x(11);
  for (int i = 0; i < 11; ++i) x(i) = fixture::disk(rng, 0.0, 1.0, 1)[0];
  EXPECT_LT((matvec(F, x) - F.dense() * x).norm(), 1e-14);
  EXPECT_THROW(matvec(F, VectorXc::Zero(3)), Error);
}

TEST(Pencil, GeneralizedEigenvaluesAreZeros) {
  std::mt19937_64 rng(27);
  for (int n = 1; n <= 8; ++n) {
    const auto s = fixture::positive(rng, n);
    const auto P = build_pencil(s, n);
    // B is unitary in the positive case, so B^{-1} A carries the spectrum.
    const MatrixXc M = P.B.inverse() * P.A;
    const auto phi = szego_sequences(s, n).phi[n];
    EXPECT_LT(max_abs_diff(charpoly_oracle(M), phi), 1e-10) << "n=" << n;
  }
}
