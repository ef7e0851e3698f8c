#pragma once

// Dense univariate polynomials and Laurent polynomials over complex scalars.

#include <algorithm>
#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "opuc/error.hpp"

namespace opuc {

namespace detail {
template <class T>
T conj_of(const T& x) {
  if constexpr (requires { std::conj(x); typename T::value_type; })
    return std::conj(x);
  else
    return x;
}
}  // namespace detail

/// z^k by repeated squaring; negative k inverts.
template <class T>
T ipow(T z, int k) {
  if (k < 0) return T(1) / ipow(z, -k);
  T r(1);
  while (k > 0) {
    if (k & 1) r *= z;
    z *= z;
    k >>= 1;
  }
  return r;
}

/// Coefficient i holds the coefficient of z^i. Always stores at least one
/// coefficient; the zero polynomial has degree -1.
template <class T>
class Polynomial {
 public:
  using value_type = T;

  Polynomial() : c_{T{}} {}
  explicit Polynomial(std::vector<T> c) : c_(std::move(c)) {
    if (c_.empty()) c_.push_back(T{});
  }

  static Polynomial constant(T v) { return Polynomial(std::vector<T>{v}); }
  static Polynomial monomial(int k, T coef = T(1)) {
    std::vector<T> c(k + 1, T{});
    c[k] = coef;
    return Polynomial(std::move(c));
  }

  const std::vector<T>& coeffs() const noexcept { return c_; }
  int size() const noexcept { return static_cast<int>(c_.size()); }

  int degree() const noexcept {
    for (int i = size() - 1; i >= 0; --i)
      if (c_[i] != T{}) return i;
    return -1;
  }

  T operator[](int i) const { return (i >= 0 && i < size()) ? c_[i] : T{}; }
  T& coef(int i) {
    if (i >= size()) c_.resize(i + 1, T{});
    return c_[i];
  }

  /// Horner evaluation.
  T operator()(const T& z) const {
    T acc = c_.back();
    for (int i = size() - 2; i >= 0; --i) acc = acc * z + c_[i];
    return acc;
  }

  /// (p(z), p'(z)) in one Horner pass.
  std::pair<T, T> eval_with_derivative(const T& z) const {
    T p = c_.back();
    T dp{};
    for (int i = size() - 2; i >= 0; --i) {
      dp = dp * z + p;
      p = p * z + c_[i];
    }
    return {p, dp};
  }

  Polynomial derivative() const {
    if (size() == 1) return Polynomial();
    std::vector<T> d(size() - 1);
    for (int i = 1; i < size(); ++i) d[i - 1] = c_[i] * static_cast<double>(i);
    return Polynomial(std::move(d));
  }

  /// z^k * p for k >= 0.
  Polynomial shifted(int k) const {
    std::vector<T> c(size() + k, T{});
    std::copy(c_.begin(), c_.end(), c.begin() + k);
    return Polynomial(std::move(c));
  }

  /// Drops trailing zero coefficients (keeps one entry for the zero polynomial).
  Polynomial trimmed() const {
    std::vector<T> c(c_.begin(), c_.begin() + std::max(1, degree() + 1));
    return Polynomial(std::move(c));
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<T> c(std::max(a.size(), b.size()), T{});
    for (int i = 0; i < a.size(); ++i) c[i] += a.c_[i];
    for (int i = 0; i < b.size(); ++i) c[i] += b.c_[i];
    return Polynomial(std::move(c));
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }
  friend Polynomial operator-(const Polynomial& a) { return a * T(-1); }
  friend Polynomial operator*(const Polynomial& p, const T& s) {
    std::vector<T> c = p.c_;
    for (auto& x : c) x *= s;
    return Polynomial(std::move(c));
  }
  friend Polynomial operator*(const T& s, const Polynomial& p) { return p * s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    std::vector<T> c(a.size() + b.size() - 1, T{});
    for (int i = 0; i < a.size(); ++i)
      for (int j = 0; j < b.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(c));
  }

  /// max_i |a_i - b_i| over the union of supports.
  friend double max_abs_diff(const Polynomial& a, const Polynomial& b) {
    double m = 0.0;
    for (int i = 0; i < std::max(a.size(), b.size()); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
  }

 private:
  std::vector<T> c_;
};

/// Reversed polynomial of declared degree n: z^n * conj(p(1/conj(z))).
/// Coefficient i of the result is conj(coefficient n-i of p).
template <class T>
Polynomial<T> reversed(const Polynomial<T>& p, int n) {
  if (n < 0) throw Error(ErrorCode::DegreeMismatch, "declared degree must be non-negative");
  if (p.degree() > n)
    throw Error(ErrorCode::DegreeMismatch,
                "degree " + std::to_string(p.degree()) + " exceeds declared degree " + std::to_string(n));
  std::vector<T> c(n + 1);
  for (int i = 0; i <= n; ++i) c[i] = detail::conj_of(p[n - i]);
  return Polynomial<T>(std::move(c));
}

/// Laurent polynomial with contiguous support z^lo .. z^hi.
template <class T>
class LaurentPoly {
 public:
  using value_type = T;

  LaurentPoly() : lo_(0), c_{T{}} {}
  LaurentPoly(int lo, std::vector<T> c) : lo_(lo), c_(std::move(c)) {
    if (c_.empty()) c_.push_back(T{});
  }
  /// z^shift * p.
  static LaurentPoly from_poly(const Polynomial<T>& p, int shift = 0) { return LaurentPoly(shift, p.coeffs()); }

  int lo() const noexcept { return lo_; }
  int hi() const noexcept { return lo_ + static_cast<int>(c_.size()) - 1; }
  const std::vector<T>& coeffs() const noexcept { return c_; }

  /// Coefficient of z^k (zero outside the stored support).
  T coefficient(int k) const {
    const int i = k - lo_;
    return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i] : T{};
  }

  T operator()(const T& z) const {
    T acc = c_.back();
    for (int i = static_cast<int>(c_.size()) - 2; i >= 0; --i) acc = acc * z + c_[i];
    if (lo_ == 0) return acc;
    return acc * ipow(z, lo_);
  }

  /// z^k * f.
  LaurentPoly shifted(int k) const { return LaurentPoly(lo_ + k, c_); }

  /// True if every nonzero coefficient lies within exponents [m, n].
  bool supported_in(int m, int n) const {
    for (int k = lo(); k <= hi(); ++k)
      if (coefficient(k) != T{} && (k < m || k > n)) return false;
    return true;
  }

  friend double max_abs_diff(const LaurentPoly& a, const LaurentPoly& b) {
    double m = 0.0;
    for (int k = std::min(a.lo(), b.lo()); k <= std::max(a.hi(), b.hi()); ++k)
      m = std::max(m, std::abs(a.coefficient(k) - b.coefficient(k)));
    return m;
  }

 private:
  int lo_;
  std::vector<T> c_;
};

/// Substar conjugate f_*(z) = conj(f(1/conj(z))): exponent k of the result
/// is conj of exponent -k of f.
template <class T>
LaurentPoly<T> substar(const LaurentPoly<T>& f) {
  const auto& c = f.coeffs();
  std::vector<T> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = detail::conj_of(c[c.size() - 1 - i]);
  return LaurentPoly<T>(-f.hi(), std::move(out));
}

using ComplexPoly = Polynomial<std::complex<double>>;
using ComplexLaurent = LaurentPoly<std::complex<double>>;

}  // namespace opuc
