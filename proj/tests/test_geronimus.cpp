#include <gtest/gtest.h>

#include "opuc/geronimus.hpp"
#include "opuc/perturb.hpp"
#include "opuc/spectra.hpp"
#include "opuc/szego.hpp"
#include "test_util.hpp"

using namespace opuc;
using namespace std::complex_literals;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidArgument;
}

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST(Context, ArcData) {
  const GeronimusContext g(0.5);
  EXPECT_NEAR(std::cos(g.alpha()), 0.5, 1e-15);
  EXPECT_NEAR(g.rho(), std::sqrt(0.75), 1e-15);
  EXPECT_LT(std::abs(g.z_plus() - std::polar(1.0, kPi / 3)), 1e-15);
  EXPECT_EQ(g.z0(), cplx(1.0));
  EXPECT_NEAR(std::abs(GeronimusContext(0.3 + 0.4i).z0()), 1.0, 1e-15);
  EXPECT_EQ(code_of([] { GeronimusContext(0.0); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { GeronimusContext(1.0); }), ErrorCode::InvalidArgument);
  for (const cplx a : {cplx(0.5), cplx(-0.5), 0.2 + 0.6i})
    EXPECT_EQ(GeronimusContext(a).mass_point_present(), GeronimusContext(a).regime_gap() < 0);
}

TEST(WRoots, QuadraticAtOne) {
  const auto w = w_roots(GeronimusContext(0.5), 1.0);
  EXPECT_NEAR(std::abs(w.w1 - 1.5), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(w.w2 - 0.5), 0.0, 1e-15);
  EXPECT_FALSE(w.confluent);
}

TEST(WRoots, VietaOnRandomPoints) {
  std::mt19937_64 rng(51);
  for (int t = 0; t < 200; ++t) {
    const GeronimusContext g(fixture::disk(rng, 0.05, 0.95, 1)[0]);
    const cplx z = fixture::disk(rng, 0.0, 2.0, 1)[0];
    const auto w = w_roots(g, z);
    const double r2 = g.rho() * g.rho();
    EXPECT_LT(std::abs(w.w1 + w.w2 - (z + 1.0)), 1e-12);
    EXPECT_LT(std::abs(w.w1 * w.w2 - r2 * z), 1e-12);
    EXPECT_LT(std::abs((w.w1 - w.w2) * (w.w1 - w.w2) - (z - g.z_plus()) * (z - g.z_minus())), 1e-12);
  }
}

TEST(WRoots, ConfluentAtArcEndpoints) {
  const GeronimusContext g(0.3 - 0.2i);
  for (const cplx z : {g.z_plus(), g.z_minus()}) {
    const auto w = w_roots(g, z);
    EXPECT_TRUE(w.confluent);
    EXPECT_EQ(w.w1, w.w2);
    EXPECT_LT(std::abs(u_value(w, 3) - 3.0 * w.w1 * w.w1), 1e-14);
  }
}

TEST(ClosedForm, HandValues) {
  const GeronimusContext g(0.5);
  EXPECT_NEAR(std::abs(closed_form_phi(g, 1, 1.0).phi - 1.5 * 2 / std::sqrt(3.0)), 0.0, 1e-15);
  const auto p0 = closed_form_phi(g, 0, 0.3);
  EXPECT_EQ(p0.phi, cplx(1.0));
  EXPECT_EQ(p0.phistar, cplx(1.0));
  EXPECT_EQ(code_of([&] { closed_form_phi(g, -1, 0.3); }), ErrorCode::IndexOutOfRange);
}

TEST(ClosedForm, MatchesRecurrence) {
  std::mt19937_64 rng(52);
  for (const cplx a : {0.3 + 0.4i, cplx(-0.5), cplx(0.5), -0.1 + 0.8i}) {
    const GeronimusContext g(a);
    const auto s = g.sequence(30);
    for (int i = 0; i < 16; ++i) {
      const cplx z = i < 8 ? std::polar(1.0, 2 * kPi * uniform01(rng)) : fixture::disk(rng, 0.2, 1.2, 1)[0];
      const auto v = evaluate_orthonormal(s, 30, z);
      for (int n = 0; n <= 30; ++n) {
        const auto c = closed_form_phi(g, n, z);
        EXPECT_LT(fixture::rel(c.phi, v.varphi[n]), 1e-9);
        EXPECT_LT(fixture::rel(c.phistar, v.varphistar[n]), 1e-9);
      }
    }
  }
}

TEST(ZeroEquation, HoldsAtComputedZeros) {
  EXPECT_LT(zero_equation_residual(GeronimusContext(0.5), 1, -0.5), 1e-15);
  for (const cplx a : {cplx(-0.5), 0.3 + 0.4i}) {
    const GeronimusContext g(a);
    for (const int n : {6, 17, 32})
      for (const auto& z : zeros(g.sequence(n), n).zeros) EXPECT_LT(zero_equation_residual(g, n, z.value), 1e-8);
  }
  EXPECT_GT(zero_equation_residual(GeronimusContext(-0.5), 6, 0.3 + 0.2i), 1e-3);
}

TEST(Kernel, ClosedFormAgainstSum) {
  EXPECT_LT(std::abs(kernel_closed_form(GeronimusContext(0.5), 1, -0.5) - 1.0), 1e-14);
  for (const cplx a : {cplx(-0.5), 0.3 + 0.4i, cplx(0.5)}) {
    const GeronimusContext g(a);
    for (const int n : {2, 6, 12}) {
      const auto s = g.sequence(n);
      for (const auto& z : zeros(s, n).zeros) {
        if (std::abs(z.value) < 1e-12) continue;
        const cplx sum = kernel(s, n - 1, z.value, 1.0 / std::conj(z.value));
        EXPECT_LT(std::abs(kernel_closed_form(g, n, z.value) - sum) / std::abs(sum), 1e-8);
      }
    }
  }
}

TEST(Kernel, WronskianFormInsideHull) {
  const GeronimusContext g(-0.5);
  for (const int n : {6, 8, 16}) {
    for (const auto& z : zeros(g.sequence(n), n).zeros) {
      if (!in_hull_region(g, z.value, 1e-3)) continue;
      const cplx k = kernel_closed_form(g, n, z.value);
      EXPECT_LT(std::abs(kernel_wronskian(g, n, z.value) - k) / std::abs(k), 1e-8);
    }
  }
}

TEST(Kernel, Errors) {
  const GeronimusContext g(0.5);
  EXPECT_EQ(code_of([&] { kernel_closed_form(g, 3, g.z_plus()); }), ErrorCode::OnArcEndpoint);
  EXPECT_EQ(code_of([&] { kernel_wronskian(g, 3, g.z_minus()); }), ErrorCode::OnArcEndpoint);
  EXPECT_EQ(code_of([&] { kernel_wronskian(g, 3, 0.0); }), ErrorCode::ZeroArgument);
}

TEST(Simplicity, Thresholds) {
  EXPECT_NEAR(simplicity_bound(GeronimusContext(-0.5)), 6.0, 1e-14);
  EXPECT_EQ(simplicity_threshold(GeronimusContext(-0.5)), 7);
  EXPECT_NEAR(simplicity_bound(GeronimusContext(-0.3)), (1.3 / 0.39 + 1) / 0.18, 1e-12);
  EXPECT_EQ(simplicity_threshold(GeronimusContext(-0.3)), 25);
  EXPECT_EQ(code_of([] { simplicity_threshold(GeronimusContext(0.5)); }), ErrorCode::WrongRegime);
  EXPECT_EQ(code_of([] { kernel_lower_bound(GeronimusContext(0.5), 8); }), ErrorCode::WrongRegime);
}

TEST(Simplicity, SpectraAboveThresholdAreSimple) {
  for (const cplx a : {cplx(-0.5), -0.3 + 0.5i}) {
    const GeronimusContext g(a);
    const int ns = simplicity_threshold(g);
    for (int n = ns; n <= ns + 10; ++n)
      for (const auto& z : zeros(g.sequence(n), n).zeros) EXPECT_EQ(z.multiplicity, 1) << "n=" << n;
  }
}

TEST(KernelBound, HoldsInsideHull) {
  const GeronimusContext g(-0.5);
  EXPECT_NEAR(kernel_lower_bound(g, 8), 0.25, 1e-14);
  EXPECT_NEAR(kernel_lower_bound(g, 32), 3.25, 1e-14);
  for (const int n : {8, 16, 32})
    for (const auto& z : zeros(g.sequence(n), n).zeros)
      if (in_hull_region(g, z.value)) EXPECT_GT(std::abs(kernel_closed_form(g, n, z.value)), kernel_lower_bound(g, n));
}

TEST(KernelBound, ZeroNearOneStaysBounded) {
  // For a = -0.5 one zero approaches z0 = 1 and its kernel value levels off.
  const GeronimusContext g(-0.5);
  const auto s = g.sequence(32);
  cplx best = 0.0;
  for (const auto& z : zeros(s, 32).zeros)
    if (std::abs(z.value - 1.0) < std::abs(best - 1.0)) best = z.value;
  EXPECT_LT(std::abs(best - 1.0), 1e-3);
  EXPECT_FALSE(in_hull_region(g, best));
  EXPECT_NEAR(std::abs(kernel_closed_form(g, 32, best)), 1.5, 1e-2);
}

TEST(Hull, Region) {
  const GeronimusContext g(-0.5);
  EXPECT_TRUE(in_hull_region(g, 0.0));
  EXPECT_TRUE(in_hull_region(g, -0.9));
  EXPECT_FALSE(in_hull_region(g, 1.0));
  // cos(alpha) = 1 - 2|a|^2 = 0.5
  EXPECT_TRUE(in_hull_region(g, 0.45));
  EXPECT_FALSE(in_hull_region(g, 0.55));
  EXPECT_FALSE(in_hull_region(g, 0.45, 0.1));
  EXPECT_FALSE(in_hull_region(g, -1.1));
}

TEST(RotationBounds, HandValues) {
  const auto b = rotation_speed_bounds(0.5, 32, kPi / 2, 3 * kPi / 2);
  EXPECT_NEAR(b.c0, 0.25, 1e-15);
  // (2 rho^2 / c0)(1+a) / ((2 n a^2 - 1) c0 - (1+a)) = 6 * 1.5 / 2.25.
  EXPECT_NEAR(b.Cn, 4.0, 1e-13);
  ASSERT_TRUE(b.Cn_a.has_value());
  EXPECT_NEAR(*b.Cn_a, 9.0 / 2.25, 1e-13);
  EXPECT_NEAR(b.asymptote, 0.75 * 1.5 / (0.25 * 0.0625), 1e-12);

  // Both denominators vanish at n = 14 for a = 0.5.
  EXPECT_EQ(code_of([] { rotation_speed_bounds(0.5, 14, kPi / 2, 3 * kPi / 2); }), ErrorCode::RegimeViolation);
  EXPECT_FALSE(rotation_speed_bounds(0.5, 200, 1.2, 2.0).Cn_a.has_value());
  EXPECT_TRUE(rotation_speed_bounds(0.5, 15, kPi / 2, 3 * kPi / 2).Cn_a.has_value());
}

TEST(RotationBounds, Asymptote) {
  double prev = 1e300;
  for (const int n : {1000, 10000, 100000, 1000000}) {
    const auto b = rotation_speed_bounds(0.5, n, kPi / 2, 3 * kPi / 2);
    const double gap = std::abs(n * b.Cn - b.asymptote);
    EXPECT_LT(gap, prev);
    prev = gap;
  }
  EXPECT_LT(prev / 72.0, 1e-4);
}

TEST(RotationBounds, Regime) {
  EXPECT_EQ(code_of([] { rotation_speed_bounds(1.2, 32, 1.0, 2.0); }), ErrorCode::RegimeViolation);
  EXPECT_EQ(code_of([] { rotation_speed_bounds(0.5, 32, -0.5, 0.5); }), ErrorCode::RegimeViolation);
  EXPECT_EQ(code_of([] { rotation_speed_bounds(0.5, 32, 6.0, 6.5); }), ErrorCode::RegimeViolation);
  // c(t) = a^2 - a cos t <= 0 at t = 0.5 when a = 0.5.
  EXPECT_EQ(code_of([] { rotation_speed_bounds(0.5, 32, 0.5, 1.0); }), ErrorCode::RegimeViolation);
  EXPECT_EQ(code_of([] { rotation_speed_bounds(0.5, 2, kPi / 2, 3 * kPi / 2); }), ErrorCode::RegimeViolation);
}

TEST(RotationBounds, TrajectorySpeeds) {
  const auto b = rotation_speed_bounds(0.5, 32, kPi / 2, 3 * kPi / 2);
  const auto spec = PerturbationSpec::rotate_all(GeronimusContext(0.5).sequence(32), 32);
  for (int i = 0; i <= 16; ++i) {
    const double t = kPi / 2 + kPi * i / 16;
    for (const cplx z : spectrum_at(spec, t))
      EXPECT_LT(std::abs(analytic_derivative(spec, t, z).value / z), b.Cn) << "t=" << t;
  }
}

TEST(Report, Fields) {
  const auto j = geronimus_report(GeronimusContext(-0.5), {8, 16, 32}, kPi / 2, 3 * kPi / 2);
  EXPECT_EQ(j["n_star"], 7);
  EXPECT_EQ(j["C_n_table"].size(), 3u);
  EXPECT_TRUE(j["C_n_table"][2].contains("C_n"));
  EXPECT_TRUE(geronimus_report(GeronimusContext(0.5), {8}, kPi / 2, 3 * kPi / 2)["n_star"].is_null());
}
