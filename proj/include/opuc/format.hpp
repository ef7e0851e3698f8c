#pragma once

// CSV and JSON renderings of matrices, zero tables, bounds and trajectories.
// Doubles are written in their shortest round-trip form. CSV files start with
// a "# config <json>" line so every output carries the run configuration.

#include <charconv>
#include <complex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "opuc/perturb.hpp"
#include "opuc/poly.hpp"
#include "opuc/spectra.hpp"

namespace opuc {

inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

class CsvWriter {
 public:
  explicit CsvWriter(const nlohmann::json& config = nullptr) {
    if (!config.is_null()) out_ << "# config " << config.dump() << '\n';
  }

  CsvWriter& header(std::initializer_list<std::string_view> cols) {
    bool first = true;
    for (auto c : cols) {
      if (!first) out_ << ',';
      out_ << c;
      first = false;
    }
    out_ << '\n';
    return *this;
  }

  CsvWriter& cell(double x) { return raw(format_double(x)); }
  CsvWriter& cell(int x) { return raw(std::to_string(x)); }
  CsvWriter& cell(std::string_view s) { return raw(std::string(s)); }
  CsvWriter& cell(cplx z) { return cell(z.real()).cell(z.imag()); }

  CsvWriter& end_row() {
    out_ << '\n';
    fresh_ = true;
    return *this;
  }

  std::string str() const { return out_.str(); }

 private:
  CsvWriter& raw(const std::string& s) {
    if (!fresh_) out_ << ',';
    out_ << s;
    fresh_ = false;
    return *this;
  }

  std::ostringstream out_;
  bool fresh_ = true;
};

inline nlohmann::json complex_json(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

/// (row, col, re, im); only nonzero entries unless `dense`.
inline std::string matrix_csv(const MatrixXc& M, bool dense, const nlohmann::json& config = nullptr) {
  CsvWriter w(config);
  w.header({"row", "col", "re", "im"});
  for (int r = 0; r < M.rows(); ++r)
    for (int c = 0; c < M.cols(); ++c)
      if (dense || M(r, c) != cplx(0.0)) w.cell(r).cell(c).cell(M(r, c)).end_row();
  return w.str();
}

inline nlohmann::json matrix_json(const MatrixXc& M, bool dense) {
  nlohmann::json entries = nlohmann::json::array();
  for (int r = 0; r < M.rows(); ++r)
    for (int c = 0; c < M.cols(); ++c)
      if (dense || M(r, c) != cplx(0.0))
        entries.push_back({{"row", r}, {"col", c}, {"re", M(r, c).real()}, {"im", M(r, c).imag()}});
  return {{"rows", M.rows()}, {"cols", M.cols()}, {"entries", entries}};
}

/// (exponent, re, im) for every stored coefficient.
inline std::string coefficient_csv(const ComplexLaurent& f, const nlohmann::json& config = nullptr) {
  CsvWriter w(config);
  w.header({"exponent", "re", "im"});
  for (int e = f.lo(); e <= f.hi(); ++e) w.cell(e).cell(f.coefficient(e)).end_row();
  return w.str();
}

inline std::string coefficient_csv(const ComplexPoly& p, const nlohmann::json& config = nullptr) {
  return coefficient_csv(ComplexLaurent::from_poly(p), config);
}

inline nlohmann::json annulus_json(const AnnulusBound& b) {
  return {{"R1", b.R1}, {"R2", b.R2}, {"K", b.K}, {"K1", b.K1}, {"K2", b.K2}, {"K1_effective", b.K1_effective()}};
}

/// Zero table; with an annulus, an `in_annulus` column flags K1_eff <= |z| <= K2.
inline std::string zeros_csv(const SpectrumResult& s, const std::optional<AnnulusBound>& annulus = std::nullopt,
                             const nlohmann::json& config = nullptr) {
  CsvWriter w(config);
  if (annulus)
    w.header({"index", "re", "im", "modulus", "multiplicity", "residual", "in_annulus"});
  else
    w.header({"index", "re", "im", "modulus", "multiplicity", "residual"});
  for (std::size_t i = 0; i < s.zeros.size(); ++i) {
    const ZeroEntry& z = s.zeros[i];
    const double m = std::abs(z.value);
    w.cell(int(i)).cell(z.value).cell(m).cell(z.multiplicity).cell(z.residual);
    if (annulus) w.cell(m >= annulus->K1_effective() && m <= annulus->K2 ? 1 : 0);
    w.end_row();
  }
  return w.str();
}

inline nlohmann::json zeros_json(const SpectrumResult& s) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < s.zeros.size(); ++i) {
    const ZeroEntry& z = s.zeros[i];
    rows.push_back({{"index", i},
                    {"re", z.value.real()},
                    {"im", z.value.imag()},
                    {"modulus", std::abs(z.value)},
                    {"multiplicity", z.multiplicity},
                    {"residual", z.residual}});
  }
  return {{"backend", to_string(s.backend)}, {"n", s.n}, {"zeros", rows}};
}

/// Trajectory rows plus a trailing status column (ok, ambiguous, multiple, zero).
inline std::string trajectory_csv(const Trajectory& tr, const nlohmann::json& config = nullptr) {
  CsvWriter w(config);
  w.header({"t", "zero_index", "re", "im", "modulus", "analytic_dre", "analytic_dim", "fd_dre", "fd_dim", "rel_err",
            "kernel_re", "kernel_im", "status"});
  for (const auto& r : tr.rows) {
    w.cell(r.s).cell(r.zero_index).cell(r.lambda).cell(std::abs(r.lambda)).cell(r.analytic).cell(r.fd).cell(r.rel_err);
    w.cell(r.kernel).cell(to_string(r.status)).end_row();
  }
  return w.str();
}

inline nlohmann::json trajectory_json(const Trajectory& tr) {
  auto num = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); };
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : tr.rows)
    rows.push_back({{"t", r.s},
                    {"zero_index", r.zero_index},
                    {"re", r.lambda.real()},
                    {"im", r.lambda.imag()},
                    {"analytic", {num(r.analytic.real()), num(r.analytic.imag())}},
                    {"fd", {num(r.fd.real()), num(r.fd.imag())}},
                    {"rel_err", num(r.rel_err)},
                    {"kernel", {num(r.kernel.real()), num(r.kernel.imag())}},
                    {"status", to_string(r.status)}});
  return {{"ambiguous_rows", tr.ambiguous_rows}, {"rows", rows}};
}

}  // namespace opuc
