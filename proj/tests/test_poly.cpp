#include <gtest/gtest.h>

#include "opuc/poly.hpp"
#include "test_util.hpp"

using namespace opuc;
using namespace std::complex_literals;

namespace {

ComplexPoly random_poly(std::mt19937_64& rng, int deg) {
  std::vector<cplx> c;
  for (int i = 0; i <= deg; ++i) c.emplace_back(2 * uniform01(rng) - 1, 2 * uniform01(rng) - 1);
  return ComplexPoly(c);
}

}  // namespace

TEST(Polynomial, EvaluationMatchesPowers) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 100; ++t) {
    const auto p = random_poly(rng, 1 + t % 9);
    const cplx z = fixture::disk(rng, 0.0, 1.5, 1)[0];
    EXPECT_LT(fixture::rel(p(z), fixture::eval_naive(p.coeffs(), z)), 1e-13);
    const auto [v, d] = p.eval_with_derivative(z);
    EXPECT_LT(fixture::rel(v, p(z)), 1e-14);
    EXPECT_LT(fixture::rel(d, p.derivative()(z)), 1e-13);
  }
}

TEST(Polynomial, DegreeAndArithmetic) {
  const ComplexPoly p({1.0, 0.0, 0.0});
  EXPECT_EQ(p.degree(), 0);
  EXPECT_EQ(p.trimmed().size(), 1);
  EXPECT_EQ(ComplexPoly::monomial(3).degree(), 3);
  const ComplexPoly a({1.0, 1.0}), b({-1.0, 1.0});
  EXPECT_EQ(max_abs_diff(a * b, ComplexPoly({-1.0, 0.0, 1.0})), 0.0);
  EXPECT_EQ(max_abs_diff(a + b, ComplexPoly({0.0, 2.0})), 0.0);
  EXPECT_EQ(max_abs_diff(a - b, ComplexPoly::constant(2.0)), 0.0);
  EXPECT_EQ(max_abs_diff(a.shifted(2), ComplexPoly({0.0, 0.0, 1.0, 1.0})), 0.0);
}

TEST(Reversed, HandValues) {
  EXPECT_EQ(max_abs_diff(reversed(ComplexPoly({0.5, 1.0}), 1), ComplexPoly({1.0, 0.5})), 0.0);
  EXPECT_EQ(max_abs_diff(reversed(ComplexPoly({1i, 1.0}), 1), ComplexPoly({1.0, -1i})), 0.0);
  EXPECT_EQ(max_abs_diff(reversed(ComplexPoly::constant(1.0), 0), ComplexPoly::constant(1.0)), 0.0);
  // Declared degree above the true degree pads with leading zeros of the reversal.
  EXPECT_EQ(max_abs_diff(reversed(ComplexPoly::constant(1.0), 2), ComplexPoly::monomial(2)), 0.0);
}

TEST(Reversed, DegreeMismatch) {
  try {
    reversed(ComplexPoly({1.0, 2.0, 3.0}), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegreeMismatch);
  }
}

TEST(Reversed, InvolutionAndPointwiseDefinition) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + t % 8;
    const auto p = random_poly(rng, n);
    EXPECT_LT(max_abs_diff(reversed(reversed(p, n), n), p), 1e-15);
    const cplx z = fixture::disk(rng, 0.3, 1.7, 1)[0];
    const cplx expect = std::pow(z, double(n)) * std::conj(p(1.0 / std::conj(z)));
    EXPECT_LT(fixture::rel(reversed(p, n)(z), expect), 1e-12);
  }
}

TEST(Laurent, EvaluationAndSupport) {
  const ComplexLaurent f(-2, {1i, 0.0, 3.0});
  EXPECT_EQ(f.lo(), -2);
  EXPECT_EQ(f.hi(), 0);
  EXPECT_EQ(f.coefficient(-2), 1i);
  EXPECT_EQ(f.coefficient(5), cplx(0.0));
  const cplx z = 0.7 - 0.2i;
  EXPECT_LT(std::abs(f(z) - (1i / (z * z) + 3.0)), 1e-14);
  EXPECT_TRUE(f.supported_in(-2, 0));
  EXPECT_FALSE(f.supported_in(-1, 0));
  EXPECT_EQ(f.shifted(3).lo(), 1);
}

TEST(Substar, HandValues) {
  const auto z = ComplexLaurent(1, {1.0});
  const auto zs = substar(z);
  EXPECT_EQ(zs.coefficient(-1), cplx(1.0));
  EXPECT_TRUE(zs.supported_in(-1, -1));

  const auto g = substar(ComplexLaurent(-2, {1i, 0.0, 3.0}));
  EXPECT_EQ(g.coefficient(2), -1i);
  EXPECT_EQ(g.coefficient(0), cplx(3.0));
  EXPECT_TRUE(g.supported_in(0, 2));
}

TEST(Substar, InvolutionAndPointwiseDefinition) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    const int lo = int(uniform01(rng) * 9) - 4;
    const auto f = ComplexLaurent::from_poly(random_poly(rng, t % 7), lo);
    EXPECT_EQ(max_abs_diff(substar(substar(f)), f), 0.0);
    const cplx z = fixture::disk(rng, 0.5, 1.5, 1)[0];
    EXPECT_LT(fixture::rel(substar(f)(z), std::conj(f(1.0 / std::conj(z)))), 1e-12);
  }
}
