#include <gtest/gtest.h>

#include "opuc/szego.hpp"
#include "test_util.hpp"

using namespace opuc;
using namespace std::complex_literals;

namespace {

/// Both roots of z^2 + b z + c by the quadratic formula.
std::pair<cplx, cplx> quadratic_roots(cplx b, cplx c) {
  const cplx d = std::sqrt(b * b - 4.0 * c);
  return {(-b + d) / 2.0, (-b - d) / 2.0};
}

/// Direct kernel sum with e_k, built from the monic sequence only.
cplx kernel_oracle(const SchurSequence& s, int n, cplx z, cplx y) {
  cplx acc = 0.0;
  const auto polys = szego_sequences(s, n);
  for (int k = 0; k <= n; ++k) {
    const double kk = s.kappa(k);
    acc += double(s.e(k)) * kk * kk * polys.phi[k](z) * std::conj(polys.phi[k](y));
  }
  return acc;
}

}  // namespace

TEST(SzegoSequences, HandExpansion) {
  const auto s = SchurSequence::validate({0.5, 0.5});
  const auto p = szego_sequences(s, 2);
  EXPECT_LT(max_abs_diff(p.phi[2], ComplexPoly({0.5, 0.75, 1.0})), 1e-15);
  EXPECT_LT(max_abs_diff(p.phistar[2], ComplexPoly({1.0, 0.75, 0.5})), 1e-15);
  EXPECT_LT(p.reversal_mismatch, 1e-15);

  const auto free = szego_sequences(SchurSequence::validate({0.0, 0.0, 0.0}), 3);
  EXPECT_EQ(max_abs_diff(free.phi[3], ComplexPoly::monomial(3)), 0.0);

  const auto q = SchurSequence::validate({2.0});
  EXPECT_EQ(max_abs_diff(szego_sequences(q, 1).phi[1], ComplexPoly({2.0, 1.0})), 0.0);
  EXPECT_NEAR(q.rhohat(1), -std::sqrt(3.0), 1e-15);
}

TEST(SzegoSequences, OrderChecks) {
  const auto s = SchurSequence::validate({0.5, 0.5});
  EXPECT_THROW(szego_sequences(s, 3), Error);
  EXPECT_THROW(szego_sequences(s, -1), Error);
  EXPECT_EQ(szego_sequences(s, 0).order(), 0);
}

TEST(SzegoSequences, ReversalMatchesRunningStarFamily) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 60; ++t) {
    const auto s = t % 2 ? fixture::quasi(rng, 16) : fixture::positive(rng, 16);
    const auto p = szego_sequences(s, 16);
    for (int k = 0; k <= 16; ++k) EXPECT_LT(max_abs_diff(reversed(p.phi[k], k), p.phistar[k]), 1e-12);
    EXPECT_LT(max_abs_diff(monic_coefficients(s, 16), p.phi[16]), 1e-12);
  }
}

TEST(PointwiseEvaluation, MatchesCoefficientForm) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 60; ++t) {
    const auto s = t % 2 ? fixture::quasi(rng, 10) : fixture::positive(rng, 10);
    const auto p = szego_sequences(s, 10);
    const cplx z = fixture::disk(rng, 0.2, 1.3, 1)[0];
    const auto v = evaluate_orthonormal(s, 10, z);
    for (int k = 0; k <= 10; ++k) {
      const double kk = s.kappa(k);
      EXPECT_LT(fixture::rel(v.varphi[k], kk * p.phi[k](z)), 1e-11);
      EXPECT_LT(fixture::rel(v.varphistar[k], kk * p.phistar[k](z)), 1e-11);
      EXPECT_LT(fixture::rel(v.dvarphi[k], kk * p.phi[k].derivative()(z)), 1e-10);
    }
  }
}

TEST(Recurrences, PlugInAtOne) {
  // At z = 1 with a_1 = 0.5: 1 = rho_1 * varphi_1(1) - a_1.
  const auto s = SchurSequence::validate({0.5});
  const auto v = evaluate_orthonormal(s, 1, 1.0);
  EXPECT_NEAR(std::abs(s.rho(1) * v.varphi[1] - 0.5 - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(v.varphi[1].real(), 1.5 * 2.0 / std::sqrt(3.0), 1e-15);
}

TEST(Recurrences, ResidualsSmallOnRandomSequences) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 40; ++t) {
    const auto s = t % 2 ? fixture::quasi(rng, 20) : fixture::positive(rng, 20);
    std::vector<cplx> zs;
    for (int i = 0; i < 64; ++i) zs.push_back(std::polar(1.0, 2 * std::numbers::pi * uniform01(rng)));
    EXPECT_LT(recurrence_residuals(s, 20, zs).max(), 1e-10);
  }
}

TEST(Recurrences, CorruptedRhoIsDetected) {
  const auto s = SchurSequence::validate({0.5, 0.3 + 0.2i, -0.4});
  auto d = s.derived();
  d.rho[2] *= 1.1;
  d.rhohat[2] *= 1.1;
  const std::vector<cplx> zs{1.0, 1i, -1.0, std::polar(1.0, 0.3)};
  const auto r = recurrence_residuals(s.params(), d, szego_sequences(s, 3), zs);
  EXPECT_GT(r.max(), 1e-3);
}

TEST(Kernel, LowOrders) {
  const auto s = SchurSequence::validate({0.5});
  const cplx z = 0.3 + 0.4i, y = -0.7 + 0.1i;
  EXPECT_EQ(kernel(s, 0, z, y), cplx(1.0));
  const cplx expect = 1.0 + (4.0 / 3.0) * (z + 0.5) * (std::conj(y) + 0.5);
  EXPECT_LT(std::abs(kernel(s, 1, z, y) - expect), 1e-14);
  EXPECT_LT(std::abs(kernel(s, 1, z, y, KernelMethod::csd) - expect), 1e-13);
}

TEST(Kernel, SumAndClosedFormAgree) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 100; ++t) {
    const auto s = t % 2 ? fixture::quasi(rng, 12) : fixture::positive(rng, 12);
    const int n = t % 12;
    const cplx z = fixture::disk(rng, 0.1, 1.4, 1)[0];
    const cplx y = fixture::disk(rng, 0.1, 1.4, 1)[0];
    const cplx a = kernel(s, n, z, y), b = kernel(s, n, z, y, KernelMethod::csd);
    const cplx o = kernel_oracle(s, n, z, y);
    EXPECT_LT(fixture::rel(a, o), 1e-10);
    EXPECT_LT(std::abs(a - b) / (1.0 + std::abs(a)), 1e-9);
  }
}

TEST(Kernel, ConfluentBranch) {
  std::mt19937_64 rng(10);
  const auto s = fixture::positive(rng, 8);
  const cplx z = std::polar(0.9, 1.0);
  const cplx y = 1.0 / std::conj(z);
  EXPECT_LT(fixture::rel(kernel(s, 5, z, y, KernelMethod::csd), kernel_oracle(s, 5, z, y)), 1e-10);
}

TEST(KernelAtZero, FormulaMatchesSum) {
  const auto s = SchurSequence::validate({0.5, 0.5});
  const auto [l1, l2] = quadratic_roots(0.75, 0.5);
  EXPECT_NEAR(l1.real(), -0.375, 1e-15);
  for (const cplx l : {l1, l2}) {
    const auto k = kernel_on_inverse_conjugate(s, 2, l);
    EXPECT_LT(std::abs(k.formula - k.direct_sum), 1e-10);
  }
  const auto one = kernel_on_inverse_conjugate(SchurSequence::validate({0.5}), 1, -0.5);
  EXPECT_LT(std::abs(one.formula - 1.0), 1e-14);
  EXPECT_LT(std::abs(one.direct_sum - 1.0), 1e-14);
}

TEST(KernelAtZero, Errors) {
  const auto s = SchurSequence::validate({0.5, 0.5});
  try {
    kernel_on_inverse_conjugate(s, 2, 0.3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotAZero);
  }
  EXPECT_THROW(kernel_on_inverse_conjugate(SchurSequence::validate({0.0, 0.0}), 2, 0.0), Error);
}

TEST(ZeroResidual, BackwardError) {
  const ComplexPoly p({-1.0, 0.0, 1.0});
  EXPECT_EQ(zero_residual(p, 1.0), 0.0);
  EXPECT_NEAR(zero_residual(p, 0.0), 1.0, 1e-15);
}
