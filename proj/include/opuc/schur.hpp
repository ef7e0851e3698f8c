#pragma once

// Schur (Verblunsky) parameter sequences and the scalars derived from them.
//
// Parameters are indexed 1..N to match the usual OPUC notation; a_0 = 1 is a
// convention and is never stored. Every accessor taking an index `k` uses
// this 1-based numbering, and index 0 returns the conventional value.

#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "opuc/error.hpp"

namespace opuc {

using cplx = std::complex<double>;

/// Reject a parameter whose modulus is within this distance of 1.
inline constexpr double kUnitCircleTol = 1e-12;

enum class Definiteness { positive, quasi };
enum class Mode { positive, quasi, automatic };

inline std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::positive: return "positive";
    case Mode::quasi: return "quasi";
    case Mode::automatic: return "auto";
  }
  return "auto";
}

inline Mode parse_mode(std::string_view s) {
  if (s == "positive") return Mode::positive;
  if (s == "quasi") return Mode::quasi;
  if (s == "auto") return Mode::automatic;
  throw Error(ErrorCode::InvalidArgument, "unknown mode '" + std::string(s) + "'");
}

/// rho_n, eps_n, rhohat_n, kappa_n and e_n for n = 0..N. Entries at index 0
/// hold kappa_0 = e_0 = 1; rho/eps/rhohat at index 0 are unused and set to 1.
struct DerivedScalars {
  std::vector<double> rho;
  std::vector<int> eps;
  std::vector<double> rhohat;
  std::vector<double> kappa;
  std::vector<int> e;
};

class SchurSequence {
 public:
  /// Validates `raw` (a_1..a_N) under `mode` and caches the derived scalars.
  static SchurSequence validate(std::span<const cplx> raw, Mode mode = Mode::automatic) {
    if (raw.empty()) throw Error(ErrorCode::EmptySequence, "at least one Schur parameter is required");
    bool all_inside = true;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const cplx a = raw[i];
      const int k = static_cast<int>(i) + 1;
      if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
        throw Error(ErrorCode::InvalidArgument, "a_" + std::to_string(k) + " is not finite", k);
      const double m = std::abs(a);
      if (std::abs(m - 1.0) <= kUnitCircleTol)
        throw Error(ErrorCode::UnitModulusParameter,
                    "|a_" + std::to_string(k) + "| is 1 within tolerance", k);
      if (m > 1.0) {
        all_inside = false;
        if (mode == Mode::positive)
          throw Error(ErrorCode::ModeViolation,
                      "|a_" + std::to_string(k) + "| > 1 in positive-definite mode", k);
      }
    }
    SchurSequence s;
    s.params_.assign(raw.begin(), raw.end());
    s.mode_ = mode;
    s.definiteness_ = all_inside ? Definiteness::positive : Definiteness::quasi;
    s.compute_derived();
    return s;
  }

  static SchurSequence validate(std::initializer_list<cplx> raw, Mode mode = Mode::automatic) {
    return validate(std::span<const cplx>(raw.begin(), raw.size()), mode);
  }

  int size() const noexcept { return static_cast<int>(params_.size()); }
  Definiteness definiteness() const noexcept { return definiteness_; }
  Mode mode() const noexcept { return mode_; }
  std::span<const cplx> params() const noexcept { return params_; }
  const DerivedScalars& derived() const noexcept { return derived_; }

  /// a_k for 0 <= k <= N, with a_0 = 1.
  cplx a(int k) const {
    check(k, 0);
    return k == 0 ? cplx(1.0, 0.0) : params_[k - 1];
  }
  double rho(int k) const { check(k, 1); return derived_.rho[k]; }
  int eps(int k) const { check(k, 1); return derived_.eps[k]; }
  double rhohat(int k) const { check(k, 1); return derived_.rhohat[k]; }
  double kappa(int k) const { check(k, 0); return derived_.kappa[k]; }
  int e(int k) const { check(k, 0); return derived_.e[k]; }

  /// The leading segment a_1..a_n.
  SchurSequence truncated(int n) const {
    if (n < 1 || n > size()) throw Error(ErrorCode::IndexOutOfRange, "truncation order out of range");
    return validate(std::span<const cplx>(params_.data(), static_cast<std::size_t>(n)), mode_);
  }

  /// Copy with a_k replaced by `value`; definiteness is re-inferred.
  SchurSequence with_param(int k, cplx value) const {
    check(k, 1);
    auto p = params_;
    p[k - 1] = value;
    return validate(p, Mode::automatic);
  }

  /// Copy with `value` appended as a_{N+1}.
  SchurSequence extended(cplx value) const {
    auto p = params_;
    p.push_back(value);
    return validate(p, Mode::automatic);
  }

 private:
  void check(int k, int lo) const {
    if (k < lo || k > size())
      throw Error(ErrorCode::IndexOutOfRange,
                  "parameter index " + std::to_string(k) + " outside [" + std::to_string(lo) + ", " +
                      std::to_string(size()) + "]");
  }

  void compute_derived() {
    const int n = size();
    auto& d = derived_;
    d.rho.assign(n + 1, 1.0);
    d.eps.assign(n + 1, 1);
    d.rhohat.assign(n + 1, 1.0);
    d.kappa.assign(n + 1, 1.0);
    d.e.assign(n + 1, 1);
    for (int k = 1; k <= n; ++k) {
      const double gap = 1.0 - std::norm(params_[k - 1]);
      d.rho[k] = std::sqrt(std::abs(gap));
      d.eps[k] = gap > 0 ? 1 : -1;
      d.rhohat[k] = d.eps[k] * d.rho[k];
      d.kappa[k] = d.kappa[k - 1] / d.rho[k];
      d.e[k] = d.e[k - 1] * d.eps[k];
    }
  }

  std::vector<cplx> params_;
  Mode mode_ = Mode::automatic;
  Definiteness definiteness_ = Definiteness::positive;
  DerivedScalars derived_;
};

// ---------------------------------------------------------------------------
// Generators

struct ConstantGen {
  cplx a;
};
struct DiskRandomGen {
  double r_min;
  double r_max;
  std::uint64_t seed;
};
struct FileGen {
  std::filesystem::path path;
};
using Generator = std::variant<ConstantGen, DiskRandomGen, FileGen>;

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Draws `count` parameters with modulus uniform in [r_min, r_max] and
/// uniform phase.
inline std::vector<cplx> draw_disk(std::mt19937_64& rng, double r_min, double r_max, int count) {
  std::vector<cplx> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double r = r_min + (r_max - r_min) * uniform01(rng);
    const double th = 2.0 * std::numbers::pi * uniform01(rng);
    out.push_back(std::polar(r, th));
  }
  return out;
}

SchurSequence read_sequence_file(const std::filesystem::path& path);

/// Builds a sequence of length `n` from a generator. For files, `n == 0`
/// keeps every parameter and a positive `n` keeps the leading `n`.
inline SchurSequence generate(const Generator& gen, int n, Mode mode = Mode::automatic) {
  if (const auto* c = std::get_if<ConstantGen>(&gen)) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "N must be >= 1");
    std::vector<cplx> p(n, c->a);
    return SchurSequence::validate(p, mode);
  }
  if (const auto* r = std::get_if<DiskRandomGen>(&gen)) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "N must be >= 1");
    if (!(r->r_min >= 0.0) || !(r->r_max >= r->r_min))
      throw Error(ErrorCode::InvalidArgument, "disk radii must satisfy 0 <= r_min <= r_max");
    if (r->r_min <= 1.0 + kUnitCircleTol && r->r_max >= 1.0 - kUnitCircleTol)
      throw Error(ErrorCode::InvalidArgument, "disk radii must not straddle the unit circle");
    std::mt19937_64 rng(r->seed);
    return SchurSequence::validate(draw_disk(rng, r->r_min, r->r_max, n), mode);
  }
  const auto& f = std::get<FileGen>(gen);
  auto seq = read_sequence_file(f.path);
  if (mode != Mode::automatic) seq = SchurSequence::validate(seq.params(), mode);
  if (n > 0) {
    if (n > seq.size())
      throw Error(ErrorCode::IndexOutOfRange, "file holds " + std::to_string(seq.size()) +
                                                  " parameters, " + std::to_string(n) + " requested");
    seq = seq.truncated(n);
  }
  return seq;
}

// ---------------------------------------------------------------------------
// JSON parameter files: {"mode": "positive"|"quasi"|"auto", "params": [[re, im], ...]}

inline nlohmann::json to_json(const SchurSequence& seq) {
  nlohmann::json j;
  j["mode"] = std::string(to_string(seq.mode()));
  auto arr = nlohmann::json::array();
  for (const cplx& a : seq.params()) arr.push_back({a.real(), a.imag()});
  j["params"] = std::move(arr);
  return j;
}

/// Parses the parameter-file schema. `origin` names the source in diagnostics.
inline SchurSequence parse_sequence_json(const std::string& text, const std::string& origin = "<input>") {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& ex) {
    // Recover line/column from the byte offset for a readable diagnostic.
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(ex.byte == 0 ? 0 : ex.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorCode::IoError, origin + ":" + std::to_string(line) + ":" + std::to_string(col) +
                                        ": malformed JSON (" + ex.what() + ")");
  }
  if (!j.is_object()) throw Error(ErrorCode::IoError, origin + ": top level must be an object");
  Mode mode = Mode::automatic;
  if (j.contains("mode")) {
    if (!j["mode"].is_string()) throw Error(ErrorCode::IoError, origin + ": \"mode\" must be a string");
    try {
      mode = parse_mode(j["mode"].get<std::string>());
    } catch (const Error& e) {
      throw Error(ErrorCode::IoError, origin + ": " + e.what());
    }
  }
  if (!j.contains("params") || !j["params"].is_array())
    throw Error(ErrorCode::IoError, origin + ": \"params\" must be an array of [re, im] pairs");
  std::vector<cplx> p;
  for (std::size_t i = 0; i < j["params"].size(); ++i) {
    const auto& e = j["params"][i];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw Error(ErrorCode::IoError,
                  origin + ": params[" + std::to_string(i) + "] is not a [re, im] number pair");
    p.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  return SchurSequence::validate(p, mode);
}

inline SchurSequence read_sequence_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, path.string() + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_sequence_json(buf.str(), path.string());
}

inline void write_sequence_file(const SchurSequence& seq, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, path.string() + ": cannot open for writing");
  out << to_json(seq).dump(2) << '\n';
}

}  // namespace opuc
