#pragma once

// Randomized invariant suites over populations of Schur sequences. Each check
// reports the worst observed value against its tolerance.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "opuc/cmv.hpp"
#include "opuc/geronimus.hpp"
#include "opuc/laurent.hpp"
#include "opuc/perturb.hpp"
#include "opuc/precision.hpp"
#include "opuc/schur.hpp"
#include "opuc/spectra.hpp"
#include "opuc/szego.hpp"

namespace opuc {

struct CheckResult {
  std::string name;
  double worst = 0.0;
  double tolerance = 0.0;
  long count = 0;  // number of individual comparisons
  bool pass = true;
  std::string note;

  /// Folds one observation into the result; NaN counts as a failure.
  void observe(double v) {
    ++count;
    if (std::isnan(v) || v > worst) worst = std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
    pass = worst <= tolerance;
  }
  void fail(std::string why) {
    pass = false;
    if (!note.empty()) note += "; ";
    note += std::move(why);
  }
  /// Combines sub-checks: worst of the tolerance-normalized values.
  void absorb(const CheckResult& o) {
    count += o.count;
    if (!o.pass) fail(o.name + (o.note.empty() ? "" : " (" + o.note + ")") + " worst " + std::to_string(o.worst));
  }
};

inline nlohmann::json to_json(const CheckResult& r) {
  auto num = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); };
  return {{"name", r.name}, {"worst", num(r.worst)}, {"tolerance", r.tolerance}, {"count", r.count},
          {"pass", r.pass}, {"note", r.note}};
}

// ---------------------------------------------------------------------------
// Populations

/// |a_k| uniform in [0.1, 0.9].
inline SchurSequence random_positive(std::mt19937_64& rng, int N) {
  return SchurSequence::validate(draw_disk(rng, 0.1, 0.9, N));
}

/// Each |a_k| uniform in [0.1, 0.9] or [1.1, 2.0] with probability 1/2; at
/// least one parameter lies outside the disk.
inline SchurSequence random_quasi(std::mt19937_64& rng, int N) {
  std::vector<cplx> p;
  bool outside = false;
  for (int k = 0; k < N; ++k) {
    const bool out = uniform01(rng) < 0.5;
    outside = outside || out;
    p.push_back(draw_disk(rng, out ? 1.1 : 0.1, out ? 2.0 : 0.9, 1)[0]);
  }
  if (!outside) p[rng() % N] = draw_disk(rng, 1.1, 2.0, 1)[0];
  return SchurSequence::validate(p);
}

inline std::vector<SchurSequence> mixed_population(std::mt19937_64& rng, int positive, int quasi, int N) {
  std::vector<SchurSequence> out;
  for (int i = 0; i < positive; ++i) out.push_back(random_positive(rng, N));
  for (int i = 0; i < quasi; ++i) out.push_back(random_quasi(rng, N));
  return out;
}

/// Points with modulus uniform in [0, r_max] and uniform phase.
inline std::vector<cplx> random_points(std::mt19937_64& rng, int count, double r_max) {
  return draw_disk(rng, 0.0, r_max, count);
}

// ---------------------------------------------------------------------------
// Characteristic polynomial

/// |det(zI - F_n) - phi_n(z)| / (1 + |phi_n(z)|) for n = 1..n_max.
inline CheckResult check_charpoly(const std::vector<SchurSequence>& pop, int n_max, int points, std::mt19937_64& rng,
                                  double tol = 1e-8) {
  CheckResult r{"charpoly", 0.0, tol};
  for (const auto& s : pop)
    for (int n = 1; n <= std::min(n_max, s.size()); ++n) {
      const MatrixXc F = build_F(s, n).dense();
      for (const cplx z : random_points(rng, points, 1.5)) {
        const cplx phi = monic_phi(s, n, z).first;
        r.observe(std::abs(charpoly_eval(F, z) - phi) / (1.0 + std::abs(phi)));
      }
    }
  return r;
}

// ---------------------------------------------------------------------------
// Backend agreement

/// Matching tolerance: absolute `base` for n <= 32, scaled by n (1 + max|a_k|)
/// beyond.
inline double backend_tolerance(const SchurSequence& s, int n, double base = 1e-7) {
  if (n <= 32) return base;
  double m = 0.0;
  for (int k = 1; k <= n; ++k) m = std::max(m, std::abs(s.a(k)));
  return base * n * (1.0 + m);
}

/// Bottleneck distance between the spectra of F_n, H_n and the companion
/// matrix, normalized by the tolerance (pass iff <= 1).
inline CheckResult check_backends(const std::vector<SchurSequence>& pop, int n_max, double base = 1e-7) {
  CheckResult r{"backends", 0.0, 1.0};
  r.note = "values are distance / tolerance";
  for (const auto& s : pop)
    for (int n = 1; n <= std::min(n_max, s.size()); ++n) {
      const auto f = zeros(s, n, Backend::cmv_eig).values();
      const auto h = zeros(s, n, Backend::hessenberg_eig).values();
      const auto c = zeros(s, n, Backend::companion).values();
      const double tol = backend_tolerance(s, n, base);
      r.observe(std::max({matching_distance(f, h), matching_distance(f, c), matching_distance(h, c)}) / tol);
    }
  return r;
}

// ---------------------------------------------------------------------------
// Eigenvectors

/// Closed-form eigenvector residuals at every simple computed zero, evaluated
/// in quad precision at the refined zero.
inline CheckResult check_eigvec(const std::vector<SchurSequence>& pop, int n_max, double tol = 1e-8) {
  CheckResult r{"eigvec", 0.0, tol};
  for (const auto& s : pop) {
    const ExtendedChecker chk(s);
    for (int n = 1; n <= std::min(n_max, s.size()); ++n)
      for (const auto& z : zeros(s, n).zeros) {
        if (z.multiplicity > 1) continue;
        try {
          r.observe(chk.verify(n, z.value).residual.max());
        } catch (const Error& e) {
          r.observe(std::numeric_limits<double>::infinity());
          r.fail(e.what());
        }
      }
  }
  return r;
}

/// lambda = 0 closed-form branch on sequences with a_n = 0 and a_{n-1} != 0.
inline CheckResult check_eigvec_at_origin(std::mt19937_64& rng, int trials, int n_max, double tol = 1e-12) {
  CheckResult r{"eigvec_origin", 0.0, tol};
  for (int t = 0; t < trials; ++t) {
    const int n = 1 + static_cast<int>(rng() % n_max);
    auto p = (t % 2 == 0 ? random_positive(rng, n) : random_quasi(rng, std::max(n, 1))).params();
    std::vector<cplx> q(p.begin(), p.end());
    q[n - 1] = 0.0;
    const auto s = SchurSequence::validate(q);
    r.observe(eigvec_residual(s, build_F(s, n), 0.0).max());
  }
  return r;
}

// ---------------------------------------------------------------------------
// Factorization and unitarity

struct FactorizationChecks {
  CheckResult product{"factor_product", 0.0, 1e-13};
  CheckResult rows{"row_orthonormality", 0.0, 1e-12};
  CheckResult theta{"theta_unitarity", 0.0, 1e-14};
};

/// ||F_n - F2_n F1_n||_inf, orthonormality of the first n rows of F_{n+2}
/// (positive-definite sequences), and Theta_k conj(Theta_k) = I.
inline FactorizationChecks check_factorization(const std::vector<SchurSequence>& pop, int n_max) {
  FactorizationChecks r;
  for (const auto& s : pop) {
    for (int k = 1; k <= s.size(); ++k) r.theta.observe(theta_unitarity_defect(theta_block(s, k)));
    for (int n = 1; n <= std::min(n_max, s.size()); ++n) {
      const auto f = build_factors(s, n);
      r.product.observe((build_F(s, n).dense() - f.F2 * f.F1).cwiseAbs().rowwise().sum().maxCoeff());
      if (s.definiteness() == Definiteness::positive && n + 2 <= s.size()) {
        const MatrixXc top = build_F(s, n + 2).dense().topRows(n);
        r.rows.observe((top * top.adjoint() - MatrixXc::Identity(n, n)).cwiseAbs().maxCoeff());
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Recurrences, Laurent relations and kernels

struct RecurrenceChecks {
  CheckResult szego{"szego_recurrences", 0.0, 1e-10};
  CheckResult theta{"theta_relations", 0.0, 1e-10};
  CheckResult five_term{"five_term", 0.0, 1e-10};
  CheckResult kernel{"kernel_forms", 0.0, 1e-10};
};

/// Residuals at `points` random points per sequence, for order n_max. Kernel
/// forms are compared at generic pairs and on the confluent set y = 1/conj(z);
/// the gap is scaled by 1 + the largest term in the sum.
inline RecurrenceChecks check_recurrences(const std::vector<SchurSequence>& pop, int n_max, int points,
                                          std::mt19937_64& rng) {
  RecurrenceChecks r;
  for (const auto& s : pop) {
    const int n = std::min(n_max, s.size());
    const auto pts = random_points(rng, points, 1.5);
    r.szego.observe(recurrence_residuals(s, n, pts).max());
    const auto chi = build_chi(s, n);
    std::vector<cplx> nz;
    for (const cplx z : pts)
      if (std::abs(z) > 1e-3) nz.push_back(z);
    r.theta.observe(theta_relations_residual(chi, s.params(), s.derived(), nz).max());
    if (n >= 2) r.five_term.observe(five_term_residual(chi, s.params(), s.derived(), nz).max());
    const auto ys = random_points(rng, points, 1.5);
    for (int i = 0; i < points; ++i) {
      const cplx z = pts[i];
      for (const cplx y : {ys[i], std::abs(z) > 1e-3 ? 1.0 / std::conj(z) : ys[i]}) {
        const int m = n - 1;
        const auto vz = evaluate_orthonormal(s, m, z), vy = evaluate_orthonormal(s, m, y);
        double scale = 0.0;
        for (int k = 0; k <= m; ++k) scale = std::max(scale, std::abs(vz.varphi[k] * std::conj(vy.varphi[k])));
        const cplx a = kernel(s, m, z, y, KernelMethod::sum), b = kernel(s, m, z, y, KernelMethod::csd);
        r.kernel.observe(std::abs(a - b) / (1.0 + scale));
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Zero location

/// Every zero modulus within [K1_eff, K2] for parameters with moduli in [R1, R2].
inline CheckResult check_annulus(std::mt19937_64& rng, double R1, double R2, int trials, int N) {
  CheckResult r{"annulus", 0.0, 0.0};
  r.note = "values are the largest excursion outside [K1_eff, K2]";
  const AnnulusBound b = gershgorin_annulus(R1, R2);
  for (int t = 0; t < trials; ++t) {
    const auto s = SchurSequence::validate(draw_disk(rng, R1, R2, N));
    for (int n = 1; n <= N; ++n)
      for (const cplx z : zeros(s, n).values()) {
        const double m = std::abs(z);
        r.observe(std::max({0.0, m - b.K2, b.K1_effective() - m}));
      }
  }
  return r;
}

/// Moduli in (1 - delta, 1 + delta) minus the circle keep every zero modulus
/// within (1 - eps, 1 + eps).
inline CheckResult check_delta(std::mt19937_64& rng, double eps, int trials, int N) {
  CheckResult r{"delta_eps", 0.0, 0.0};
  r.note = "values are the largest excursion outside (1-eps, 1+eps)";
  const double delta = delta_for_epsilon(eps);
  for (int t = 0; t < trials; ++t) {
    std::vector<cplx> p;
    for (int k = 0; k < N; ++k) {
      double m;
      do {
        m = 1.0 - delta + 2.0 * delta * uniform01(rng);
      } while (std::abs(m - 1.0) <= 1e-9);
      p.push_back(std::polar(m, 2.0 * std::numbers::pi * uniform01(rng)));
    }
    const auto s = SchurSequence::validate(p);
    for (int n = 1; n <= N; ++n)
      for (const cplx z : zeros(s, n).values()) {
        const double d = std::abs(std::abs(z) - 1.0);
        r.observe(d < eps ? 0.0 : std::max(d - eps, std::numeric_limits<double>::min()));
      }
  }
  return r;
}

/// Positive-definite zeros satisfy |a_n| < |lambda| < 1, up to `slack`
/// (n = 1 attains |lambda| = |a_1|).
inline CheckResult check_product_law(const std::vector<SchurSequence>& pop, int n_max, double slack = 1e-10) {
  CheckResult r{"product_law", 0.0, 0.0};
  r.note = "values are the largest violation of |a_n| - slack < |lambda| < 1 + slack";
  for (const auto& s : pop) {
    if (s.definiteness() != Definiteness::positive) continue;
    for (int n = 1; n <= std::min(n_max, s.size()); ++n) {
      const double an = std::abs(s.a(n));
      for (const cplx z : zeros(s, n).values()) {
        const double m = std::abs(z);
        const double low = an - slack, high = 1.0 + slack;
        r.observe(m > low && m < high ? 0.0 : std::max({low - m, m - high, std::numeric_limits<double>::min()}));
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Perturbations

struct PerturbationChecks {
  CheckResult extension{"extension_derivative", 0.0, 1e-5};
  CheckResult rotate_one{"rotate_one_derivative", 0.0, 1e-5};
  CheckResult rotate_all{"rotate_all_derivative", 0.0, 1e-5};
  CheckResult closed_forms{"n1_closed_forms", 0.0, 1e-10};
  CheckResult hellmann_feynman{"hellmann_feynman", 0.0, 1e-5};
};

/// Analytic vs finite-difference derivatives on random sequences until each
/// kind has at least `min_zeros` simple nonzero zeros. Orders are drawn from
/// 2..n_max; quasi-definite sequences are mixed in when `quasi`.
inline PerturbationChecks check_perturbations(std::mt19937_64& rng, int min_zeros, int n_max, bool quasi) {
  PerturbationChecks r;
  auto run = [&](CheckResult& c, const PerturbationSpec& spec, cplx t, cplx lambda, bool hf) {
    try {
      const auto rep = derivative_report(spec, t, lambda);
      c.observe(rep.rel_err);
      if (hf) r.hellmann_feynman.observe(hellmann_feynman_check(spec, lambda, t).residual_fd);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::MultipleZero) {
        c.observe(std::numeric_limits<double>::infinity());
        c.fail(e.what());
      }
    }
  };
  int trial = 0;
  while (r.extension.count < min_zeros || r.rotate_one.count < min_zeros || r.rotate_all.count < min_zeros) {
    const int n = 2 + static_cast<int>(rng() % (n_max - 1));
    const auto s = (quasi && trial % 2 == 1) ? random_quasi(rng, n) : random_positive(rng, n);
    const int k = 1 + static_cast<int>(rng() % n);
    ++trial;
    for (const auto& z : zeros(s, n).zeros) {
      if (z.multiplicity > 1 || std::abs(z.value) <= kZeroPointTol) continue;
      run(r.extension, PerturbationSpec::extend_last(s, n), s.a(n), z.value, true);
      run(r.rotate_one, PerturbationSpec::rotate_one(s, n, k), 0.0, z.value, true);
      run(r.rotate_all, PerturbationSpec::rotate_all(s, n), 0.0, z.value, true);
    }
  }
  // n = 1: lambda' = i lambda under rotation of all parameters, lambda' = -1 under extension
  for (int i = 0; i < 16; ++i) {
    const auto s = i % 2 ? random_quasi(rng, 1) : random_positive(rng, 1);
    const cplx lambda = -s.a(1);
    const auto ra = rotate_all_derivative(s, 1, 0.0, lambda);
    r.closed_forms.observe(std::abs(ra.analytic - cplx(0, 1) * lambda) / std::abs(lambda));
    r.closed_forms.observe(std::abs(ra.fd - cplx(0, 1) * lambda) / std::abs(lambda));
    const auto ex = extension_derivative(1, lambda, s.a(1));
    r.closed_forms.observe(std::abs(ex.analytic + 1.0));
    r.closed_forms.observe(std::abs(ex.fd + 1.0));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Geronimus example

struct GeronimusChecks {
  CheckResult closed_form{"geronimus_closed_form", 0.0, 1e-9};
  CheckResult zero_equation{"geronimus_zero_equation", 0.0, 1e-8};
  CheckResult kernel{"geronimus_kernel", 0.0, 1e-8};
  CheckResult simplicity{"geronimus_simplicity", 0.0, 0.0};
  CheckResult kernel_bound{"geronimus_kernel_bound", 0.0, 0.0};
  CheckResult speed{"geronimus_rotation_speed", 0.0, 1.0};
};

/// Closed forms against the recurrence (n <= 30), the zero equation and the
/// kernel at computed zeros, simplicity for n*..n*+10, the kernel lower bound
/// at n in {8, 16, 32}, and |z'/z| / C_n along a 256-point rotation grid at
/// n = 32 over [pi/2, 3pi/2] for the parameter |a|.
inline GeronimusChecks check_geronimus(cplx a, std::mt19937_64& rng, bool with_trajectory = true) {
  GeronimusChecks r;
  const GeronimusContext ctx(a);
  const auto seq = ctx.sequence(32);
  for (int n = 0; n <= 30; ++n)
    for (const cplx z : draw_disk(rng, 0.2, 1.2, 16)) {
      const auto cf = closed_form_phi(ctx, n, z);
      const auto v = evaluate_orthonormal(seq, n, z);
      r.closed_form.observe(std::abs(cf.phi - v.varphi[n]) / std::max(std::abs(v.varphi[n]), 1e-300));
      r.closed_form.observe(std::abs(cf.phistar - v.varphistar[n]) / std::max(std::abs(v.varphistar[n]), 1e-300));
    }
  for (int n = 1; n <= 32; ++n)
    for (const cplx z : zeros(seq, n).values()) {
      r.zero_equation.observe(zero_equation_residual(ctx, n, z));
      const cplx K = kernel(seq, n - 1, z, 1.0 / std::conj(z), KernelMethod::sum);
      r.kernel.observe(std::abs(kernel_closed_form(ctx, n, z) - K) / std::abs(K));
    }
  if (ctx.regime_gap() > 0.0) {
    const int ns = simplicity_threshold(ctx);
    const auto long_seq = ctx.sequence(ns + 10);
    r.simplicity.note = "n* = " + std::to_string(ns) + "; values count multiple zeros";
    for (int n = ns; n <= ns + 10; ++n) {
      int multiple = 0;
      for (const auto& z : zeros(long_seq, n).zeros) multiple += z.multiplicity > 1;
      r.simplicity.observe(multiple);
    }
    int outside = 0;
    for (const int n : {8, 16, 32}) {
      const double lb = kernel_lower_bound(ctx, n);
      for (const cplx z : zeros(seq, n).values()) {
        const double K = std::abs(kernel(seq, n - 1, z, 1.0 / std::conj(z), KernelMethod::sum));
        outside += !in_hull_region(ctx, z);
        r.kernel_bound.observe(K > lb ? 0.0 : lb - K);
        if (K <= lb)
          r.kernel_bound.fail("n=" + std::to_string(n) + " z=" + std::to_string(z.real()) + "," +
                              std::to_string(z.imag()) + " |K|=" + std::to_string(K) + " bound=" + std::to_string(lb));
      }
    }
    r.kernel_bound.note += (r.kernel_bound.note.empty() ? "" : "; ") + std::to_string(outside) +
                           " zeros outside the convex hull of the arc";
  } else {
    r.simplicity.note = r.kernel_bound.note = "not applicable: Re a >= |a|^2";
  }
  if (with_trajectory) {
    const double ra = std::abs(a);
    const double t0 = std::numbers::pi / 2, t1 = 3 * std::numbers::pi / 2;
    const int n = 32;
    const auto b = rotation_speed_bounds(ra, n, t0, t1);
    const auto spec = PerturbationSpec::rotate_all(GeronimusContext(ra).sequence(n), n);
    std::vector<double> grid;
    for (int i = 0; i < 256; ++i) grid.push_back(t0 + (t1 - t0) * i / 255.0);
    const auto tr = fd_continuation(spec, grid);
    r.speed.note = "values are |z'/z| / C_n, C_n = " + std::to_string(b.Cn);
    for (const auto& row : tr.rows) {
      if (row.status != RowStatus::ok) {
        r.speed.fail("row status " + std::string(to_string(row.status)));
        continue;
      }
      r.speed.observe(std::abs(row.fd / row.lambda) / b.Cn);
    }
    if (r.speed.worst >= 1.0) r.speed.fail("bound reached");
  }
  return r;
}

}  // namespace opuc
