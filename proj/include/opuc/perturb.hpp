#pragma once

// Derivatives of the zeros of phi_n under three one-parameter perturbations
// of the Schur data, with a finite-difference continuation oracle.
//
//   extend_last : a_n = t (complex), a_1..a_{n-1} fixed
//   rotate_one  : a_k(t) = e^{it} a_k (t real)
//   rotate_all  : a_j(t) = e^{it} a_j for every j (t real)

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <tuple>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "opuc/cmv.hpp"
#include "opuc/error.hpp"
#include "opuc/laurent.hpp"
#include "opuc/precision.hpp"
#include "opuc/schur.hpp"
#include "opuc/spectra.hpp"
#include "opuc/szego.hpp"

namespace opuc {

inline constexpr double kFdStep = 1e-6;

enum class PerturbKind { extend_last, rotate_one, rotate_all };

inline std::string_view to_string(PerturbKind k) {
  switch (k) {
    case PerturbKind::extend_last: return "extend";
    case PerturbKind::rotate_one: return "rotate-one";
    case PerturbKind::rotate_all: return "rotate-all";
  }
  return "extend";
}

class PerturbationSpec {
 public:
  /// phi_n^t = z phi_{n-1} + t phi*_{n-1}; uses base a_1..a_{n-1}.
  static PerturbationSpec extend_last(std::vector<cplx> base, int n) {
    if (n < 1) throw Error(ErrorCode::IndexOutOfRange, "order must be >= 1");
    if (static_cast<int>(base.size()) < n - 1)
      throw Error(ErrorCode::IndexOutOfRange, "extension to order " + std::to_string(n) + " needs " +
                                                  std::to_string(n - 1) + " base parameters");
    base.resize(n - 1);
    if (!base.empty()) SchurSequence::validate(base);
    return PerturbationSpec(PerturbKind::extend_last, std::move(base), n, 0);
  }
  static PerturbationSpec extend_last(const SchurSequence& base, int n) {
    return extend_last(std::vector<cplx>(base.params().begin(), base.params().end()), n);
  }
  static PerturbationSpec rotate_one(const SchurSequence& base, int n, int k) {
    check_order(base, n, 1);
    if (k < 1 || k > n)
      throw Error(ErrorCode::IndexOutOfRange,
                  "rotated index " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
    return PerturbationSpec(PerturbKind::rotate_one, {base.params().begin(), base.params().begin() + n}, n, k);
  }
  static PerturbationSpec rotate_all(const SchurSequence& base, int n) {
    check_order(base, n, 1);
    return PerturbationSpec(PerturbKind::rotate_all, {base.params().begin(), base.params().begin() + n}, n, 0);
  }

  PerturbKind kind() const noexcept { return kind_; }
  int n() const noexcept { return n_; }
  int k() const noexcept { return k_; }
  const std::vector<cplx>& base() const noexcept { return base_; }
  bool is_rotation() const noexcept { return kind_ != PerturbKind::extend_last; }

  /// The order-n sequence at parameter value t.
  SchurSequence at(cplx t) const {
    std::vector<cplx> p = base_;
    if (kind_ == PerturbKind::extend_last) {
      p.push_back(t);
      return SchurSequence::validate(p);
    }
    if (t.imag() != 0.0) throw Error(ErrorCode::InvalidArgument, "rotation parameter must be real");
    const cplx w = std::polar(1.0, t.real());
    if (kind_ == PerturbKind::rotate_one)
      p[k_ - 1] *= w;
    else
      for (auto& a : p) a *= w;
    return SchurSequence::validate(p);
  }

  /// Parameters at t formed in quad precision (the rotation factor included),
  /// so that tiny parameter steps are not swamped by rounding of a_k e^{it}.
  std::vector<qcplx> quad_params(cplx t) const {
    std::vector<qcplx> p;
    for (const cplx a : base_) p.push_back(to_quad(a));
    if (kind_ == PerturbKind::extend_last) {
      p.push_back(to_quad(t));
      return p;
    }
    const qreal th(t.real());
    const qcplx w(cos(th), sin(th));
    if (kind_ == PerturbKind::rotate_one)
      p[k_ - 1] *= w;
    else
      for (auto& a : p) a *= w;
    return p;
  }

 private:
  PerturbationSpec(PerturbKind kind, std::vector<cplx> base, int n, int k)
      : kind_(kind), base_(std::move(base)), n_(n), k_(k) {}

  PerturbKind kind_;
  std::vector<cplx> base_;
  int n_;
  int k_;
};

// ---------------------------------------------------------------------------
// Analytic derivatives

struct AnalyticDerivative {
  cplx value;
  cplx kernel;  // K_{n-1}(lambda, 1/conj(lambda)); unused (0) on the lambda = 0 branch
};

namespace detail {

inline cplx kernel_inverse_conjugate(const SchurSequence& s, int n, cplx lambda) {
  return kernel(s, n - 1, lambda, 1.0 / std::conj(lambda), KernelMethod::sum);
}

inline void require_nonzero_kernel(cplx K, cplx lambda) {
  if (std::abs(K) == 0.0 || !std::isfinite(std::abs(K)))
    throw Error(ErrorCode::MultipleZero, "kernel vanishes at lambda = " + std::to_string(lambda.real()) + "+" +
                                             std::to_string(lambda.imag()) + "i");
}

}  // namespace detail

/// lambda'(t) for a zero lambda of phi_n^t under the given perturbation.
/// Simplicity is not checked here; see derivative_report.
inline AnalyticDerivative analytic_derivative(const PerturbationSpec& spec, cplx t, cplx lambda) {
  const SchurSequence s = spec.at(t);
  const int n = spec.n();
  const bool at_zero = std::abs(lambda) <= kZeroPointTol;
  switch (spec.kind()) {
    case PerturbKind::extend_last: {
      if (at_zero) {
        const cplx an1 = s.a(n - 1);
        if (an1 == 0.0) throw Error(ErrorCode::ZeroDenominator, "a_{n-1} = 0 on the lambda = 0 branch");
        return {-double(s.e(n - 1)) / an1, 0.0};
      }
      const cplx K = detail::kernel_inverse_conjugate(s, n, lambda);
      detail::require_nonzero_kernel(K, lambda);
      const cplx ps = evaluate_orthonormal(s, n - 1, lambda).varphistar[n - 1];
      return {-double(s.e(n - 1)) * ipow(lambda, 1 - n) * ps * ps / K, K};
    }
    case PerturbKind::rotate_one: {
      if (at_zero) throw Error(ErrorCode::ZeroArgument, "single-parameter rotation needs lambda != 0");
      const int k = spec.k();
      const cplx K = detail::kernel_inverse_conjugate(s, n, lambda);
      detail::require_nonzero_kernel(K, lambda);
      const auto v = evaluate_orthonormal(s, k, lambda);
      const cplx ak = s.a(k);
      const cplx bracket = double(s.e(k - 1)) * ak * v.varphistar[k - 1] * v.varphistar[k - 1] +
                           double(s.e(k)) * std::conj(ak) * v.varphi[k] * v.varphi[k];
      return {cplx(0, -1) * ipow(lambda, 1 - k) * bracket / K, K};
    }
    case PerturbKind::rotate_all: {
      if (at_zero) throw Error(ErrorCode::ZeroArgument, "rotation of all parameters needs lambda != 0");
      const cplx K = detail::kernel_inverse_conjugate(s, n, lambda);
      detail::require_nonzero_kernel(K, lambda);
      return {cplx(0, 1) * lambda / K, K};
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Finite-difference oracle

/// Eigenvalues of F_n at parameter t.
inline std::vector<cplx> spectrum_at(const PerturbationSpec& spec, cplx t) {
  return zeros(spec.at(t), spec.n(), Backend::cmv_eig).values();
}

namespace detail {

struct Tracked {
  qcplx value;
  double gap_ratio;  // second-nearest distance over nearest distance
};

/// For each guess, the nearest eigenvalue of F_n(t), refined on phi_n^t in
/// quad precision so that differences over small steps keep their digits.
inline std::vector<Tracked> track(const PerturbationSpec& spec, cplx t, const std::vector<cplx>& guesses) {
  const SchurSequence s = spec.at(t);
  const QuadEntries q(spec.quad_params(t));
  const auto eigs = zeros(s, spec.n(), Backend::cmv_eig).values();
  std::vector<Tracked> out;
  for (const cplx g : guesses) {
    double best = std::numeric_limits<double>::infinity(), second = best;
    cplx pick = g;
    for (const cplx e : eigs) {
      const double d = std::abs(e - g);
      if (d < best) {
        second = best;
        best = d;
        pick = e;
      } else if (d < second) {
        second = d;
      }
    }
    const double ratio = best > 0 ? second / best : std::numeric_limits<double>::infinity();
    out.push_back({polish_zero(q, spec.n(), pick, 2).value, ratio});
  }
  return out;
}

}  // namespace detail

struct FdDerivative {
  cplx value;             // Richardson-refined estimate
  double error_estimate;  // |refined - D(h/2)|
  double cr_residual;     // extension only: mismatch of the real and imaginary directions
  double min_gap_ratio;   // worst matching ratio among the shifted solves
};

/// Central differences with Richardson refinement (h, h/2) for every zero in
/// `lambdas` at parameter t. Rotations step along real t; extensions step
/// along t and i t and average the two directional derivatives.
inline std::vector<FdDerivative> fd_derivatives(const PerturbationSpec& spec, cplx t,
                                                const std::vector<cplx>& lambdas, double h = kFdStep) {
  const std::size_t m = lambdas.size();
  std::vector<double> min_ratio(m, std::numeric_limits<double>::infinity());
  auto directional = [&](cplx dir) {
    std::vector<cplx> d[2];
    for (int level = 0; level < 2; ++level) {
      const double hh = level == 0 ? h : h / 2;
      const cplx tp = t + dir * hh, tm = t - dir * hh;
      const auto plus = detail::track(spec, tp, lambdas);
      const auto minus = detail::track(spec, tm, lambdas);
      // the realized step, so rounding of t +- h does not bias the quotient
      const qcplx step = to_quad(tp) - to_quad(tm);
      for (std::size_t i = 0; i < m; ++i) {
        d[level].push_back(to_double((plus[i].value - minus[i].value) / step));
        min_ratio[i] = std::min({min_ratio[i], plus[i].gap_ratio, minus[i].gap_ratio});
      }
    }
    std::vector<std::pair<cplx, double>> r;
    for (std::size_t i = 0; i < m; ++i) {
      const cplx refined = (4.0 * d[1][i] - d[0][i]) / 3.0;
      r.push_back({refined, std::abs(refined - d[1][i])});
    }
    return r;
  };
  std::vector<FdDerivative> out(m);
  const auto re = directional(1.0);
  if (spec.is_rotation()) {
    for (std::size_t i = 0; i < m; ++i) out[i] = {re[i].first, re[i].second, 0.0, min_ratio[i]};
    return out;
  }
  const auto im = directional(cplx(0, 1));
  for (std::size_t i = 0; i < m; ++i) {
    const cplx avg = 0.5 * (re[i].first + im[i].first);
    const double cr = std::abs(re[i].first - im[i].first) / std::max(std::abs(avg), 1e-300);
    out[i] = {avg, std::max(re[i].second, im[i].second), cr, min_ratio[i]};
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reports

struct DerivativeReport {
  cplx t;
  cplx lambda;
  cplx analytic;
  cplx fd;
  double rel_err = 0.0;  // |analytic - fd| / (|analytic| + 1e-12)
  cplx kernel_value;
  double fd_error_estimate = 0.0;
  double cr_residual = 0.0;
  /// lambda'/lambda = r'/r + i theta' (rotations with lambda != 0).
  double radial_rate = 0.0;
  double angular_rate = 0.0;
};

namespace detail {

/// Throws NotAZero / MultipleZero unless lambda is a simple zero of phi_n^t.
inline void gate_simple_zero(const PerturbationSpec& spec, cplx t, cplx lambda, double cluster_tol) {
  const SchurSequence s = spec.at(t);
  const double res = zero_residual(s, spec.n(), lambda);
  if (res > kZeroResidualTol)
    throw Error(ErrorCode::NotAZero, "phi_n^t(lambda) relative residual " + std::to_string(res));
  const auto spec_res = zeros(s, spec.n(), Backend::cmv_eig, {cluster_tol});
  double best = std::numeric_limits<double>::infinity();
  int mult = 1;
  for (const auto& z : spec_res.zeros)
    if (std::abs(z.value - lambda) < best) {
      best = std::abs(z.value - lambda);
      mult = z.multiplicity;
    }
  if (mult > 1) throw Error(ErrorCode::MultipleZero, "zero has multiplicity " + std::to_string(mult));
}

}  // namespace detail

inline DerivativeReport derivative_report(const PerturbationSpec& spec, cplx t, cplx lambda, bool with_fd = true,
                                          double h = kFdStep, double cluster_tol = kClusterTol) {
  detail::gate_simple_zero(spec, t, lambda, cluster_tol);
  DerivativeReport r;
  r.t = t;
  r.lambda = lambda;
  const auto a = analytic_derivative(spec, t, lambda);
  r.analytic = a.value;
  r.kernel_value = a.kernel;
  if (spec.is_rotation() && lambda != 0.0) {
    const cplx q = r.analytic / lambda;
    r.radial_rate = q.real();
    r.angular_rate = q.imag();
  }
  if (with_fd) {
    const auto fd = fd_derivatives(spec, t, {lambda}, h)[0];
    r.fd = fd.value;
    r.fd_error_estimate = fd.error_estimate;
    r.cr_residual = fd.cr_residual;
    r.rel_err = std::abs(r.analytic - r.fd) / (std::abs(r.analytic) + 1e-12);
  }
  return r;
}

/// Zero path of phi_n^t = z phi_{n-1} + t phi*_{n-1} through lambda.
inline DerivativeReport extension_derivative(const SchurSequence& seq_without_last, int n, cplx lambda, cplx t) {
  return derivative_report(PerturbationSpec::extend_last(seq_without_last, n), t, lambda);
}
inline DerivativeReport extension_derivative(int n, cplx lambda, cplx t) {
  return derivative_report(PerturbationSpec::extend_last(std::vector<cplx>{}, n), t, lambda);
}

inline DerivativeReport rotate_one_derivative(const SchurSequence& seq, int n, int k, double t, cplx lambda) {
  return derivative_report(PerturbationSpec::rotate_one(seq, n, k), t, lambda);
}

inline DerivativeReport rotate_all_derivative(const SchurSequence& seq, int n, double t, cplx lambda) {
  return derivative_report(PerturbationSpec::rotate_all(seq, n), t, lambda);
}

// ---------------------------------------------------------------------------
// Bilinear identity with the derivative of the matrix

/// Value plus first-order coefficient, enough to differentiate the matrix
/// entries (each a product of at most two parameter factors).
struct Dual {
  cplx v{0.0};
  cplx d{0.0};
  Dual() = default;
  Dual(cplx value, cplx deriv = 0.0) : v(value), d(deriv) {}
  Dual(double value) : v(value) {}
  friend Dual operator+(const Dual& x, const Dual& y) { return {x.v + y.v, x.d + y.d}; }
  friend Dual operator-(const Dual& x, const Dual& y) { return {x.v - y.v, x.d - y.d}; }
  friend Dual operator-(const Dual& x) { return {-x.v, -x.d}; }
  friend Dual operator*(const Dual& x, const Dual& y) { return {x.v * y.v, x.d * y.v + x.v * y.d}; }
};

/// Parameters of phi_n^t with their t-derivatives attached.
struct PerturbedEntries {
  const PerturbationSpec* spec;
  SchurSequence s;
  Dual a(int j) const {
    const cplx v = s.a(j);
    if (j == 0) return {v};
    switch (spec->kind()) {
      case PerturbKind::extend_last: return {v, j == spec->n() ? 1.0 : 0.0};
      case PerturbKind::rotate_one: return {v, j == spec->k() ? cplx(0, 1) * v : 0.0};
      case PerturbKind::rotate_all: return {v, cplx(0, 1) * v};
    }
    return {v};
  }
  Dual ab(int j) const {
    const cplx v = std::conj(s.a(j));
    if (j == 0) return {v};
    switch (spec->kind()) {
      case PerturbKind::extend_last: return {v};  // F_n is holomorphic in a_n
      case PerturbKind::rotate_one: return {v, j == spec->k() ? cplx(0, -1) * v : 0.0};
      case PerturbKind::rotate_all: return {v, cplx(0, -1) * v};
    }
    return {v};
  }
  Dual rho(int j) const { return {s.rho(j)}; }
  Dual rhohat(int j) const { return {s.rhohat(j)}; }
};

/// dF_n/dt at parameter t.
inline MatrixXc matrix_derivative(const PerturbationSpec& spec, cplx t) {
  const int n = spec.n();
  PerturbedEntries p{&spec, spec.at(t)};
  MatrixXc D = MatrixXc::Zero(n, n);
  five_diagonal_entries(n, p, [&](int r, int c, const Dual& v) { D(r, c) = v.d; });
  return D;
}

struct HellmannFeynmanCheck {
  cplx lhs;           // V_{n*}^T E_n F_n' V_n
  cplx rhs_analytic;  // K lambda' (lambda != 0) or e_{n-1} a_{n-1} lambda' (lambda = 0), analytic lambda'
  cplx rhs_fd;        // same with the finite-difference lambda'
  double residual_fd = 0.0;
  double residual_analytic = 0.0;
};

/// The bilinear identity V_{n*}(lambda)^T E_n F_n'(t) V_n(lambda) = c lambda'(t),
/// with c = K_{n-1}(lambda, 1/conj(lambda)) for lambda != 0 and
/// c = e_{n-1} a_{n-1} for lambda = 0. Residuals are relative to |lhs| + 1e-12.
inline HellmannFeynmanCheck hellmann_feynman_check(const PerturbationSpec& spec, cplx lambda, cplx t = 0.0,
                                                   double h = kFdStep) {
  detail::gate_simple_zero(spec, t, lambda, kClusterTol);
  const SchurSequence s = spec.at(t);
  const int n = spec.n();
  const bool at_zero = std::abs(lambda) <= kZeroPointTol;
  cplx c;
  if (at_zero) {
    c = double(s.e(n - 1)) * s.a(n - 1);
    if (c == 0.0) throw Error(ErrorCode::MultipleZero, "a_{n-1} = 0 makes lambda = 0 a multiple zero");
  } else {
    c = detail::kernel_inverse_conjugate(s, n, lambda);
    detail::require_nonzero_kernel(c, lambda);
  }
  const Eigvecs ev = eigvec_at(s, n, lambda);
  const MatrixXc D = matrix_derivative(spec, t);
  VectorXc v = Eigen::Map<const VectorXc>(ev.v.data(), n);
  VectorXc w = Eigen::Map<const VectorXc>(ev.vstar.data(), n);
  for (int k = 0; k < n; ++k) w(k) *= double(s.e(k));
  HellmannFeynmanCheck out;
  out.lhs = (w.transpose() * D * v)(0);
  const auto fd = fd_derivatives(spec, t, {lambda}, h)[0].value;
  out.rhs_fd = c * fd;
  out.residual_fd = std::abs(out.lhs - out.rhs_fd) / (std::abs(out.lhs) + 1e-12);
  // the analytic formulas exclude lambda = 0 under rotations
  if (!(at_zero && spec.is_rotation())) {
    out.rhs_analytic = c * analytic_derivative(spec, t, lambda).value;
    out.residual_analytic = std::abs(out.lhs - out.rhs_analytic) / (std::abs(out.lhs) + 1e-12);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Continuation over a grid

enum class RowStatus { ok, ambiguous, multiple, zero_excluded };

inline std::string_view to_string(RowStatus s) {
  switch (s) {
    case RowStatus::ok: return "ok";
    case RowStatus::ambiguous: return "ambiguous";
    case RowStatus::multiple: return "multiple";
    case RowStatus::zero_excluded: return "zero";
  }
  return "ok";
}

struct TrajectoryRow {
  int grid_index = 0;
  double s = 0.0;  // grid coordinate
  cplx t;          // parameter value
  int zero_index = 0;
  cplx lambda;
  cplx analytic{std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  cplx fd{std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  double rel_err = std::numeric_limits<double>::quiet_NaN();
  cplx kernel{std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  double gap_ratio = std::numeric_limits<double>::infinity();
  RowStatus status = RowStatus::ok;
};

struct Trajectory {
  std::vector<TrajectoryRow> rows;
  int ambiguous_rows = 0;
};

struct ContinuationOptions {
  double h = kFdStep;
  double cluster_tol = kClusterTol;
  double min_gap_ratio = 2.0;
  bool strict = false;       // throw PathAmbiguity instead of flagging rows
  double imag_offset = 0.0;  // extension paths run along t = s + i * offset
};

/// Continues every zero of phi_n^t across the grid. Zeros at consecutive grid
/// points are paired greedily by increasing distance; a pairing whose
/// runner-up candidate is closer than `min_gap_ratio` times the chosen one is
/// ambiguous. Each row carries the analytic derivative and the local
/// Richardson finite-difference estimate.
inline Trajectory fd_continuation(const PerturbationSpec& spec, const std::vector<double>& grid,
                                  const ContinuationOptions& opt = {}) {
  Trajectory out;
  const int n = spec.n();
  std::vector<cplx> prev;
  for (int g = 0; g < static_cast<int>(grid.size()); ++g) {
    const double sv = grid[g];
    const cplx t = spec.is_rotation() ? cplx(sv, 0.0) : cplx(sv, opt.imag_offset);
    const SchurSequence s = spec.at(t);
    const SpectrumResult sr = zeros(s, n, Backend::cmv_eig, {opt.cluster_tol});
    const auto eigs = sr.values();

    std::vector<int> assign(n, -1);  // path index -> eigenvalue index
    std::vector<double> ratio(n, std::numeric_limits<double>::infinity());
    if (g == 0) {
      for (int i = 0; i < n; ++i) assign[i] = i;
    } else {
      std::vector<std::tuple<double, int, int>> pairs;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) pairs.emplace_back(std::abs(prev[i] - eigs[j]), i, j);
      std::sort(pairs.begin(), pairs.end());
      std::vector<char> used(n, 0);
      for (const auto& [d, i, j] : pairs)
        if (assign[i] < 0 && !used[j]) {
          assign[i] = j;
          used[j] = 1;
        }
      for (int i = 0; i < n; ++i) {
        const double chosen = std::abs(prev[i] - eigs[assign[i]]);
        double runner = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j)
          if (j != assign[i]) runner = std::min(runner, std::abs(prev[i] - eigs[j]));
        ratio[i] = chosen > 0 ? runner / chosen : std::numeric_limits<double>::infinity();
      }
    }

    std::vector<cplx> cur(n);
    for (int i = 0; i < n; ++i) cur[i] = eigs[assign[i]];
    const auto fd = fd_derivatives(spec, t, cur, opt.h);
    for (int i = 0; i < n; ++i) {
      TrajectoryRow row;
      row.grid_index = g;
      row.s = sv;
      row.t = t;
      row.zero_index = i;
      row.lambda = cur[i];
      row.gap_ratio = ratio[i];
      row.fd = fd[i].value;
      const int mult = sr.zeros[assign[i]].multiplicity;
      if (ratio[i] < opt.min_gap_ratio) {
        if (opt.strict)
          throw Error(ErrorCode::PathAmbiguity, "grid point " + std::to_string(g) + ", zero " + std::to_string(i) +
                                                    ": gap ratio " + std::to_string(ratio[i]));
        row.status = RowStatus::ambiguous;
        ++out.ambiguous_rows;
      } else if (mult > 1) {
        row.status = RowStatus::multiple;
      } else if (std::abs(cur[i]) <= kZeroPointTol && spec.is_rotation()) {
        row.status = RowStatus::zero_excluded;
      }
      if (row.status == RowStatus::ok || row.status == RowStatus::ambiguous) {
        try {
          const auto a = analytic_derivative(spec, t, cur[i]);
          row.analytic = a.value;
          row.kernel = a.kernel;
          row.rel_err = std::abs(a.value - row.fd) / (std::abs(a.value) + 1e-12);
        } catch (const Error&) {
          row.status = RowStatus::multiple;
        }
      }
      out.rows.push_back(row);
    }
    prev = cur;
  }
  return out;
}

}  // namespace opuc
