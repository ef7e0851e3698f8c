#pragma once

// Geronimus polynomials: constant Schur parameter a with 0 < |a| < 1.
// Closed forms in terms of the roots w1, w2 of w^2 - (z+1) w + rho^2 z = 0,
// with u_n = (w1^n - w2^n) / (w1 - w2):
//   phi_n  = rho^{-n} (u_{n+1} - (1 - a) u_n)
//   phi*_n = rho^{-n} (u_{n+1} - (1 - conj a) z u_n)

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <vector>

#include <json.hpp>

#include "opuc/error.hpp"
#include "opuc/poly.hpp"
#include "opuc/schur.hpp"

namespace opuc {

inline constexpr double kConfluentTol = 1e-10;
inline constexpr double kArcEndpointTol = 1e-10;

class GeronimusContext {
 public:
  explicit GeronimusContext(cplx a) : a_(a) {
    const double m = std::norm(a);
    if (!(m > 0.0) || !(m < 1.0))
      throw Error(ErrorCode::InvalidArgument, "Geronimus parameter needs 0 < |a| < 1");
    rho_ = std::sqrt(1.0 - m);
    alpha_ = std::acos(1.0 - 2.0 * m);
    z0_ = (1.0 - a) / (1.0 - std::conj(a));
  }

  cplx a() const noexcept { return a_; }
  double rho() const noexcept { return rho_; }
  double alpha() const noexcept { return alpha_; }
  cplx z_plus() const { return std::polar(1.0, alpha_); }
  cplx z_minus() const { return std::polar(1.0, -alpha_); }
  cplx z0() const noexcept { return z0_; }
  /// |a|^2 - Re a; negative exactly when the mass point is present.
  double regime_gap() const noexcept { return std::norm(a_) - a_.real(); }
  bool mass_point_present() const noexcept { return a_.real() > std::norm(a_); }

  /// The order-n Schur sequence a, a, ..., a.
  SchurSequence sequence(int n) const { return SchurSequence::validate(std::vector<cplx>(n, a_)); }

 private:
  cplx a_;
  double rho_ = 0.0, alpha_ = 0.0;
  cplx z0_;
};

struct WRoots {
  cplx w1, w2;
  bool confluent = false;
};

/// Roots of w^2 - (z+1) w + rho^2 z, w1 on the + branch of the principal root.
inline WRoots w_roots(const GeronimusContext& ctx, cplx z) {
  const cplx s = z + 1.0;
  const cplx disc = s * s - 4.0 * ctx.rho() * ctx.rho() * z;
  if (std::abs(disc) < kConfluentTol) return {s / 2.0, s / 2.0, true};
  const cplx r = std::sqrt(disc);
  return {(s + r) / 2.0, (s - r) / 2.0, false};
}

/// u_n; n w^{n-1} in the confluent case.
inline cplx u_value(const WRoots& w, int n) {
  if (n == 0) return 0.0;
  if (w.confluent) return double(n) * ipow(w.w1, n - 1);
  return (ipow(w.w1, n) - ipow(w.w2, n)) / (w.w1 - w.w2);
}

struct ClosedFormPhi {
  cplx phi, phistar;
};

/// Orthonormal phi_n(z; a) and phi*_n(z; a).
inline ClosedFormPhi closed_form_phi(const GeronimusContext& ctx, int n, cplx z) {
  if (n < 0) throw Error(ErrorCode::IndexOutOfRange, "negative order");
  if (n == 0) return {1.0, 1.0};
  const WRoots w = w_roots(ctx, z);
  const cplx un = u_value(w, n), un1 = u_value(w, n + 1);
  const double scale = std::pow(ctx.rho(), -n);
  return {scale * (un1 - (1.0 - ctx.a()) * un), scale * (un1 - (1.0 - std::conj(ctx.a())) * z * un)};
}

/// Mismatch of w1^n (w1 - (1-a)) = w2^n (w2 - (1-a)), the zero equation
/// u_{n+1} = (1-a) u_n with the common factor w1 - w2 removed, relative to
/// the magnitudes of the four products involved. At a confluent point
/// u_{n+1} - (1-a) u_n is compared directly.
inline double zero_equation_residual(const GeronimusContext& ctx, int n, cplx z) {
  const WRoots w = w_roots(ctx, z);
  const cplx b = 1.0 - ctx.a();
  cplx diff;
  double scale;
  if (w.confluent) {
    diff = u_value(w, n + 1) - b * u_value(w, n);
    scale = std::abs(u_value(w, n + 1)) + std::abs(b * u_value(w, n));
  } else {
    const cplx p1 = ipow(w.w1, n), p2 = ipow(w.w2, n);
    diff = p1 * (w.w1 - b) - p2 * (w.w2 - b);
    scale = std::abs(p1) * (std::abs(w.w1) + std::abs(b)) + std::abs(p2) * (std::abs(w.w2) + std::abs(b));
  }
  return scale == 0.0 ? 0.0 : std::abs(diff) / scale;
}

namespace detail {

inline void require_off_endpoints(const GeronimusContext& ctx, cplx z) {
  if (std::abs(z - ctx.z_plus()) < kArcEndpointTol || std::abs(z - ctx.z_minus()) < kArcEndpointTol)
    throw Error(ErrorCode::OnArcEndpoint, "z coincides with an endpoint of the support arc");
}

}  // namespace detail

/// K_{n-1}(z, 1/conj z; a) at a zero z of phi_n, in simplified form.
inline cplx kernel_closed_form(const GeronimusContext& ctx, int n, cplx z) {
  detail::require_off_endpoints(ctx, z);
  const cplx a = ctx.a();
  const cplx num = (double(n) * (z - 1.0) + z) * (1.0 - std::conj(a)) * (z - ctx.z0()) + 2.0 * ctx.regime_gap() * z;
  return num / ((z - ctx.z_plus()) * (z - ctx.z_minus()));
}

/// The same kernel via z^{1-n} rho^{-2n} ((1-a) - (1-conj a) z) W(u_n, u_{n+1}).
inline cplx kernel_wronskian(const GeronimusContext& ctx, int n, cplx z) {
  detail::require_off_endpoints(ctx, z);
  if (z == 0.0) throw Error(ErrorCode::ZeroArgument, "Wronskian form needs z != 0");
  const WRoots w = w_roots(ctx, z);
  const cplx w1 = w.w1, w2 = w.w2, d = w1 - w2;
  const cplx dw1 = w1 * (w1 - 1.0) / (z * d);
  const cplx dw2 = w2 * (w2 - 1.0) / (z * (-d));
  const cplx dd = dw1 - dw2;
  auto u = [&](int m) { return (ipow(w1, m) - ipow(w2, m)) / d; };
  auto du = [&](int m) {
    const cplx N = ipow(w1, m) - ipow(w2, m);
    const cplx dN = double(m) * (ipow(w1, m - 1) * dw1 - ipow(w2, m - 1) * dw2);
    return (dN * d - N * dd) / (d * d);
  };
  const cplx W = u(n) * du(n + 1) - u(n + 1) * du(n);
  const cplx a = ctx.a();
  return ipow(z, 1 - n) * std::pow(ctx.rho(), -2 * n) * ((1.0 - a) - (1.0 - std::conj(a)) * z) * W;
}

/// Right-hand side of |K_{n-1}(z, 1/conj z; a)| > c/(2 rho^2) ((2n|a|^2 - 1) c/|1-a| - 1),
/// c = |a|^2 - Re a, valid for zeros when Re a < |a|^2.
inline double kernel_lower_bound(const GeronimusContext& ctx, int n) {
  const double c = ctx.regime_gap();
  if (c <= 0.0) throw Error(ErrorCode::WrongRegime, "kernel bound needs Re a < |a|^2");
  const double r2 = ctx.rho() * ctx.rho();
  return c / (2.0 * r2) * ((2.0 * n * std::norm(ctx.a()) - 1.0) * c / std::abs(1.0 - ctx.a()) - 1.0);
}

/// Bound (1/(2|a|^2)) (|1-a|/(|a|^2 - Re a) + 1) beyond which all zeros are simple.
inline double simplicity_bound(const GeronimusContext& ctx) {
  const double c = ctx.regime_gap();
  if (c <= 0.0) throw Error(ErrorCode::WrongRegime, "simplicity threshold needs Re a < |a|^2");
  return (std::abs(1.0 - ctx.a()) / c + 1.0) / (2.0 * std::norm(ctx.a()));
}

/// Least integer strictly above simplicity_bound.
inline int simplicity_threshold(const GeronimusContext& ctx) {
  return static_cast<int>(std::floor(simplicity_bound(ctx))) + 1;
}

/// Open convex hull of the arc: |z| < 1 and Re z < cos(alpha), shrunk by tol.
inline bool in_hull_region(const GeronimusContext& ctx, cplx z, double tol = 0.0) {
  return std::abs(z) < 1.0 - tol && z.real() < std::cos(ctx.alpha()) - tol;
}

struct RotationSpeedBounds {
  double c0 = 0.0;
  double Cn = 0.0;                 // C_n(a, t0, t1)
  std::optional<double> Cn_a;      // C_n(a) when Re a(t0), Re a(t1) <= 0 and n large enough
  double asymptote = 0.0;          // rho^2 (1+a) / (a^2 c0^2), the limit of n C_n(a, t0, t1)
};

/// Bounds on |z'(t)/z(t)| for the zeros of phi_n(z; a e^{it}), t in [t0, t1],
/// with a in (0, 1). c(t) = a^2 - a cos t must stay positive on the interval.
inline RotationSpeedBounds rotation_speed_bounds(double a, int n, double t0, double t1) {
  if (!(a > 0.0 && a < 1.0)) throw Error(ErrorCode::RegimeViolation, "rotation bounds need real a in (0, 1)");
  if (!(t0 < t1)) throw Error(ErrorCode::InvalidArgument, "need t0 < t1");
  auto c = [&](double t) { return a * a - a * std::cos(t); };
  const double two_pi = 2.0 * std::numbers::pi;
  // c is smallest where cos t = 1; such a point inside the interval leaves the regime
  if (std::floor(t1 / two_pi) > std::floor(t0 / two_pi) || std::fmod(t0, two_pi) == 0.0)
    throw Error(ErrorCode::RegimeViolation, "rotation passes through the mass-point region");
  RotationSpeedBounds out;
  out.c0 = std::min(c(t0), c(t1));
  if (out.c0 <= 0.0) throw Error(ErrorCode::RegimeViolation, "Re a(t) >= |a|^2 at an endpoint");
  const double r2 = 1.0 - a * a;
  const double den = (2.0 * n * a * a - 1.0) * out.c0 - (1.0 + a);
  if (den <= 0.0) throw Error(ErrorCode::RegimeViolation, "order too small for the rotation bound");
  out.Cn = 2.0 * r2 / out.c0 * (1.0 + a) / den;
  out.asymptote = r2 * (1.0 + a) / (a * a * out.c0 * out.c0);
  const double den_a = 2.0 * n * std::pow(a, 4) - (1.0 + a + a * a);
  // cos(pi/2) rounds to 6e-17, so Re a(t) <= 0 is tested with a small slack
  if (a * std::cos(t0) <= 1e-12 && a * std::cos(t1) <= 1e-12 && den_a > 0.0)
    out.Cn_a = 2.0 * r2 / (a * a) * (1.0 + a) / den_a;
  return out;
}

/// Summary of the example for one parameter: arc data, threshold, and a C_n table
/// over `orders` for the rotation interval [t0, t1] (entries null when out of regime).
inline nlohmann::json geronimus_report(const GeronimusContext& ctx, const std::vector<int>& orders, double t0,
                                       double t1) {
  auto c2j = [](cplx z) { return nlohmann::json::array({z.real(), z.imag()}); };
  nlohmann::json j;
  j["a"] = c2j(ctx.a());
  j["alpha"] = ctx.alpha();
  j["z_plus"] = c2j(ctx.z_plus());
  j["z_minus"] = c2j(ctx.z_minus());
  j["z0"] = c2j(ctx.z0());
  j["mass_point_present"] = ctx.mass_point_present();
  j["n_star"] = ctx.regime_gap() > 0.0 ? nlohmann::json(simplicity_threshold(ctx)) : nlohmann::json(nullptr);
  nlohmann::json table = nlohmann::json::array();
  const double ra = std::abs(ctx.a());
  for (const int n : orders) {
    nlohmann::json row{{"n", n}, {"t0", t0}, {"t1", t1}};
    try {
      const auto b = rotation_speed_bounds(ra, n, t0, t1);
      row["c0"] = b.c0;
      row["C_n"] = b.Cn;
      row["C_n_a"] = b.Cn_a ? nlohmann::json(*b.Cn_a) : nlohmann::json(nullptr);
    } catch (const Error& e) {
      row["C_n"] = nullptr;
      row["error"] = e.what();
    }
    table.push_back(row);
  }
  j["C_n_table"] = table;
  return j;
}

}  // namespace opuc
