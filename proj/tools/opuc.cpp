// opuc: build CMV/Hessenberg matrices, compute zeros, follow zeros under
// perturbations, run the invariant suites and report the Geronimus example.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or I/O error.

#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "opuc/opuc.hpp"

namespace {

using opuc::cplx;
using nlohmann::json;

struct Input {
  std::string params_path;
  std::string constant;
  std::string random;  // "rmin:rmax"
  std::uint64_t seed = 0;
  int length = 0;      // generated length; defaults to n
  std::string mode = "auto";
};

struct Output {
  std::string path;
  std::string format = "json";
};

struct Tolerances {
  double zero = opuc::kZeroResidualTol;
  double cluster = opuc::kClusterTol;
  double fd_step = opuc::kFdStep;
};

double parse_number(std::string s) {
  for (const char* pi : {"2pi", "2π"})
    if (s == pi) return 2 * std::numbers::pi;
  for (const char* pi : {"pi", "π"}) {
    const auto p = s.find(pi);
    if (p != std::string::npos) {
      const std::string head = s.substr(0, p), tail = s.substr(p + std::string(pi).size());
      double f = head.empty() ? 1.0 : head == "-" ? -1.0 : std::stod(head);
      double d = 1.0;
      if (!tail.empty()) {
        if (tail[0] != '/') throw std::invalid_argument("bad number: " + s);
        d = std::stod(tail.substr(1));
      }
      return f * std::numbers::pi / d;
    }
  }
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad number: " + s);
  return v;
}

/// "re" or "re,im".
cplx parse_complex(const std::string& s) {
  const auto c = s.find(',');
  if (c == std::string::npos) return {parse_number(s), 0.0};
  return {parse_number(s.substr(0, c)), parse_number(s.substr(c + 1))};
}

/// "lo:hi:count", endpoints included.
std::vector<double> parse_grid(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 3) throw opuc::Error(opuc::ErrorCode::InvalidArgument, "grid must be lo:hi:count");
  const double lo = parse_number(parts[0]), hi = parse_number(parts[1]);
  const int count = std::stoi(parts[2]);
  if (count < 1) throw opuc::Error(opuc::ErrorCode::InvalidArgument, "grid count must be >= 1");
  std::vector<double> g;
  for (int i = 0; i < count; ++i) g.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
  return g;
}

void add_input(CLI::App* app, Input& in) {
  auto* src = app->add_option_group("input", "parameter source");
  src->add_option("--params", in.params_path, "JSON parameter file")->check(CLI::ExistingFile);
  src->add_option("--constant", in.constant, "constant parameter a, as re or re,im");
  src->add_option("--random", in.random, "random moduli in rmin:rmax with uniform phase");
  src->require_option(1);
  app->add_option("--seed", in.seed, "seed for --random");
  app->add_option("--length", in.length, "generated sequence length (default: the order)");
  app->add_option("--mode", in.mode, "positive | quasi | auto")->check(CLI::IsMember({"positive", "quasi", "auto"}));
}

void add_output(CLI::App* app, Output& out) {
  app->add_option("--out", out.path, "output file (default: stdout)");
  app->add_option("--format", out.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
}

void add_tolerances(CLI::App* app, Tolerances& tol) {
  app->add_option("--zero-tol", tol.zero, "zero acceptance tolerance")->check(CLI::PositiveNumber);
  app->add_option("--cluster-tol", tol.cluster, "multiplicity clustering radius")->check(CLI::PositiveNumber);
  app->add_option("--fd-step", tol.fd_step, "finite-difference step")->check(CLI::PositiveNumber);
}

opuc::SchurSequence load(const Input& in, int n) {
  const opuc::Mode mode = opuc::parse_mode(in.mode);
  const int len = in.length > 0 ? in.length : n;
  if (!in.params_path.empty()) return opuc::generate(opuc::FileGen{in.params_path}, 0, mode);
  if (!in.constant.empty()) return opuc::generate(opuc::ConstantGen{parse_complex(in.constant)}, len, mode);
  const auto c = in.random.find(':');
  if (c == std::string::npos) throw opuc::Error(opuc::ErrorCode::InvalidArgument, "--random expects rmin:rmax");
  return opuc::generate(
      opuc::DiskRandomGen{parse_number(in.random.substr(0, c)), parse_number(in.random.substr(c + 1)), in.seed}, len,
      mode);
}

json input_config(const Input& in) {
  json j{{"mode", in.mode}, {"seed", in.seed}};
  if (!in.params_path.empty()) j["params"] = in.params_path;
  if (!in.constant.empty()) j["constant"] = in.constant;
  if (!in.random.empty()) j["random"] = in.random;
  if (in.length > 0) j["length"] = in.length;
  return j;
}

void emit(const Output& out, const std::string& payload) {
  if (out.path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream f(out.path, std::ios::binary);
  if (!f) throw opuc::Error(opuc::ErrorCode::IoError, "cannot open " + out.path + " for writing");
  f << payload;
  if (!f) throw opuc::Error(opuc::ErrorCode::IoError, "write failed: " + out.path);
}

std::string wrap_json(const json& config, const json& data) { return json{{"config", config}, {"data", data}}.dump(2) + "\n"; }

// ---------------------------------------------------------------------------

struct BuildArgs {
  Input in;
  Output out;
  int n = 0;
  std::vector<std::string> emit{"F"};
  bool dense = false;
};

int run_build(const BuildArgs& a) {
  const auto seq = load(a.in, a.n);
  std::vector<std::pair<std::string, opuc::MatrixXc>> mats;
  for (const auto& e : a.emit) {
    if (e == "F" || e == "all") mats.emplace_back("F", opuc::build_F(seq, a.n).dense());
    if (e == "Fstar" || e == "all") mats.emplace_back("Fstar", opuc::build_Fstar(seq, a.n).dense());
    if (e == "H" || e == "all") mats.emplace_back("H", opuc::build_H(seq, a.n));
    if (e == "E" || e == "all") mats.emplace_back("E", opuc::signature(seq, a.n));
    if (e == "factors" || e == "all") {
      const auto f = opuc::build_factors(seq, a.n);
      mats.emplace_back("F1", f.F1);
      mats.emplace_back("F2", f.F2);
    }
  }
  json config{{"command", "build"}, {"n", a.n}, {"emit", a.emit}, {"dense", a.dense}, {"input", input_config(a.in)}};
  if (a.out.format == "json") {
    json data;
    for (const auto& [name, M] : mats) data[name] = opuc::matrix_json(M, a.dense);
    emit(a.out, wrap_json(config, data));
  } else {
    std::string s = "# config " + config.dump() + "\n";
    for (const auto& [name, M] : mats) s += "# matrix " + name + "\n" + opuc::matrix_csv(M, a.dense);
    emit(a.out, s);
  }
  return 0;
}

struct ZerosArgs {
  Input in;
  Output out;
  Tolerances tol;
  int n = 0;
  std::string backend = "cmv";
  bool check_bounds = false;
};

int run_zeros(const ZerosArgs& a) {
  const auto seq = load(a.in, a.n);
  const auto res = opuc::zeros(seq, a.n, opuc::parse_backend(a.backend), {a.tol.cluster});
  std::optional<opuc::AnnulusBound> ann;
  if (a.check_bounds) {
    double r1 = std::abs(seq.a(1)), r2 = r1;
    for (int k = 1; k <= a.n; ++k) {
      r1 = std::min(r1, std::abs(seq.a(k)));
      r2 = std::max(r2, std::abs(seq.a(k)));
    }
    ann = opuc::gershgorin_annulus(r1, r2);
  }
  json config{{"command", "zeros"}, {"n", a.n}, {"backend", a.backend}, {"cluster_tol", a.tol.cluster},
              {"check_bounds", a.check_bounds}, {"input", input_config(a.in)}};
  if (a.out.format == "json") {
    json data = opuc::zeros_json(res);
    if (ann) {
      data["annulus"] = opuc::annulus_json(*ann);
      for (auto& z : data["zeros"]) {
        const double m = z["modulus"];
        z["in_annulus"] = m >= ann->K1_effective() && m <= ann->K2;
      }
    }
    emit(a.out, wrap_json(config, data));
  } else {
    std::string s = opuc::zeros_csv(res, ann, config);
    if (ann) s += "# annulus " + opuc::annulus_json(*ann).dump() + "\n";
    emit(a.out, s);
  }
  return 0;
}

struct PerturbArgs {
  Input in;
  Output out;
  Tolerances tol;
  int n = 0;
  std::string kind;
  int k = 1;
  std::string grid = "0:2pi:64";
  double imag_offset = 0.0;
  bool strict = false;
};

int run_perturb(const PerturbArgs& a) {
  const auto seq = load(a.in, a.kind == "extend" ? std::max(a.n - 1, 1) : a.n);
  opuc::PerturbationSpec spec = a.kind == "extend"       ? opuc::PerturbationSpec::extend_last(seq, a.n)
                                : a.kind == "rotate-one" ? opuc::PerturbationSpec::rotate_one(seq, a.n, a.k)
                                                         : opuc::PerturbationSpec::rotate_all(seq, a.n);
  opuc::ContinuationOptions opt;
  opt.h = a.tol.fd_step;
  opt.cluster_tol = a.tol.cluster;
  opt.strict = a.strict;
  opt.imag_offset = a.imag_offset;
  const auto tr = opuc::fd_continuation(spec, parse_grid(a.grid), opt);
  json config{{"command", "perturb"}, {"kind", a.kind}, {"n", a.n}, {"grid", a.grid}, {"fd_step", a.tol.fd_step},
              {"cluster_tol", a.tol.cluster}, {"input", input_config(a.in)}};
  if (a.kind == "rotate-one") config["k"] = a.k;
  if (a.kind == "extend") config["imag_offset"] = a.imag_offset;
  if (a.out.format == "json")
    emit(a.out, wrap_json(config, opuc::trajectory_json(tr)));
  else
    emit(a.out, opuc::trajectory_csv(tr, config));
  return 0;
}

struct VerifyArgs {
  Output out;
  std::uint64_t seed = 7;
  int trials = 50;
  int n_max = 32;
  bool quasi = false;
  std::string geronimus;
};

int run_verify(const VerifyArgs& a) {
  std::mt19937_64 rng(a.seed);
  std::vector<opuc::CheckResult> checks;
  if (a.geronimus.empty()) {
    const int half = a.quasi ? a.trials / 2 : a.trials;
    const auto pop = opuc::mixed_population(rng, half, a.trials - half, a.n_max);
    checks.push_back(opuc::check_charpoly(pop, a.n_max, 16, rng));
    checks.push_back(opuc::check_backends(pop, a.n_max));
    checks.push_back(opuc::check_eigvec(pop, a.n_max));
    checks.push_back(opuc::check_eigvec_at_origin(rng, a.trials, a.n_max));
    const auto f = opuc::check_factorization(pop, a.n_max);
    checks.insert(checks.end(), {f.product, f.rows, f.theta});
    const auto r = opuc::check_recurrences(pop, a.n_max, 64, rng);
    checks.insert(checks.end(), {r.szego, r.theta, r.five_term, r.kernel});
    checks.push_back(opuc::check_product_law(pop, a.n_max));
    checks.push_back(opuc::check_annulus(rng, 0.2, 0.8, a.trials, std::min(a.n_max, 16)));
    const auto p = opuc::check_perturbations(rng, a.trials, 8, a.quasi);
    checks.insert(checks.end(), {p.extension, p.rotate_one, p.rotate_all, p.closed_forms, p.hellmann_feynman});
  } else {
    const auto g = opuc::check_geronimus(parse_complex(a.geronimus), rng);
    checks.insert(checks.end(), {g.closed_form, g.zero_equation, g.kernel, g.simplicity, g.kernel_bound, g.speed});
  }
  bool ok = true;
  json suites = json::array();
  for (const auto& c : checks) {
    ok = ok && c.pass;
    suites.push_back(opuc::to_json(c));
  }
  json config{{"command", "verify"}, {"seed", a.seed}, {"trials", a.trials}, {"n_max", a.n_max}, {"quasi", a.quasi}};
  if (!a.geronimus.empty()) config["geronimus"] = a.geronimus;
  emit(a.out, wrap_json(config, {{"pass", ok}, {"suites", suites}}));
  return ok ? 0 : 1;
}

struct GeronimusArgs {
  Output out;
  std::string a = "-0.5";
  std::vector<int> orders{8, 16, 32};
  std::string t0 = "pi/2", t1 = "3pi/2";
};

int run_geronimus(const GeronimusArgs& g) {
  const opuc::GeronimusContext ctx(parse_complex(g.a));
  const json data = opuc::geronimus_report(ctx, g.orders, parse_number(g.t0), parse_number(g.t1));
  json config{{"command", "geronimus"}, {"a", g.a}, {"orders", g.orders}, {"t0", g.t0}, {"t1", g.t1}};
  emit(g.out, wrap_json(config, data));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orthogonal polynomials on the unit circle: five-diagonal matrices, zeros and perturbations"};
  app.require_subcommand(1);

  BuildArgs build;
  auto* b = app.add_subcommand("build", "materialize F, F*, H, E and the block factors");
  add_input(b, build.in);
  add_output(b, build.out);
  b->add_option("--n", build.n, "truncation order")->required()->check(CLI::PositiveNumber);
  b->add_option("--emit", build.emit, "F | Fstar | H | E | factors | all (repeatable)")
      ->check(CLI::IsMember({"F", "Fstar", "H", "E", "factors", "all"}));
  b->add_flag("--dense", build.dense, "dump every entry, zeros included");

  ZerosArgs zs;
  auto* z = app.add_subcommand("zeros", "zeros of phi_n with residuals and multiplicities");
  add_input(z, zs.in);
  add_output(z, zs.out);
  add_tolerances(z, zs.tol);
  z->add_option("--n", zs.n, "polynomial degree")->required()->check(CLI::PositiveNumber);
  z->add_option("--backend", zs.backend, "cmv | hessenberg | companion")
      ->check(CLI::IsMember({"cmv", "hessenberg", "companion"}));
  z->add_flag("--check-bounds", zs.check_bounds, "append the annulus bound and containment flags");

  PerturbArgs pt;
  auto* p = app.add_subcommand("perturb", "follow zeros along a perturbation and compare derivatives");
  add_input(p, pt.in);
  add_output(p, pt.out);
  add_tolerances(p, pt.tol);
  p->add_option("kind", pt.kind, "extend | rotate-one | rotate-all")
      ->required()
      ->check(CLI::IsMember({"extend", "rotate-one", "rotate-all"}));
  p->add_option("--n", pt.n, "polynomial degree")->required()->check(CLI::PositiveNumber);
  p->add_option("--k", pt.k, "rotated index for rotate-one");
  p->add_option("--grid,--t-grid", pt.grid, "lo:hi:count (pi accepted, e.g. 0:2pi:256)");
  p->add_option("--imag-offset", pt.imag_offset, "extension paths run along t = s + i*offset");
  p->add_flag("--strict", pt.strict, "fail on ambiguous continuation instead of flagging rows");

  VerifyArgs vf;
  auto* v = app.add_subcommand("verify", "run the invariant suites; exit 1 if any fails");
  add_output(v, vf.out);
  v->add_option("--seed", vf.seed, "random seed");
  v->add_option("--trials", vf.trials, "sequences per suite")->check(CLI::PositiveNumber);
  v->add_option("--n-max", vf.n_max, "largest order")->check(CLI::Range(2, 64));
  v->add_flag("--quasi", vf.quasi, "include quasi-definite sequences");
  v->add_option("--geronimus", vf.geronimus, "run the Geronimus checks for parameter a (re or re,im)");

  GeronimusArgs gr;
  auto* g = app.add_subcommand("geronimus", "arc data, simplicity threshold and rotation-speed bounds");
  add_output(g, gr.out);
  g->add_option("--a", gr.a, "constant parameter, re or re,im");
  g->add_option("--orders", gr.orders, "orders for the C_n table");
  g->add_option("--t0", gr.t0, "rotation interval start");
  g->add_option("--t1", gr.t1, "rotation interval end");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*b) return run_build(build);
    if (*z) return run_zeros(zs);
    if (*p) return run_perturb(pt);
    if (*v) return run_verify(vf);
    if (*g) return run_geronimus(gr);
  } catch (const opuc::Error& e) {
    std::cerr << "opuc: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "opuc: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
