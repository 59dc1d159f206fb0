#include "peakmodel_app/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>

#include "peakmodel/sampling.hpp"
#include "peakmodel_app/verify.hpp"

namespace peakmodel::app {

namespace {

// Bad flag values; reported as kind "usage", exit 2.
class UsageError : public std::runtime_error {
public:
  UsageError(std::string code, const std::string& what) : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

private:
  std::string code_;
};

void emit_error(std::ostream& err, const std::string& kind, const std::string& code, const std::string& message,
                const std::string& path = "") {
  json e = {{"kind", kind}, {"code", code}, {"message", message}};
  if (!path.empty()) e["path"] = path;
  err << json{{"error", e}}.dump() << '\n';
}

double parse_double(const std::string& s, const std::string& flag) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw UsageError("INVALID_ARGUMENT", flag + ": '" + s + "' is not a finite number");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

// "a" or "a:b:n"
std::vector<double> parse_axis(const std::string& s, const std::string& flag) {
  const auto parts = split(s, ':');
  if (parts.size() == 1) return {parse_double(parts[0], flag)};
  if (parts.size() != 3) throw UsageError("INVALID_GRID", flag + ": expected 'a' or 'a:b:n', got '" + s + "'");
  const double a = parse_double(parts[0], flag), b = parse_double(parts[1], flag);
  const double n = parse_double(parts[2], flag);
  if (n < 1 || n != std::floor(n) || n > 100000)
    throw UsageError("INVALID_GRID", flag + ": point count must be an integer in [1, 100000]");
  std::vector<double> out;
  const int k = int(n);
  for (int i = 0; i < k; ++i) out.push_back(k == 1 ? a : a + (b - a) * i / (k - 1));
  return out;
}

// "re0:re1:n,im" (either axis may be a single value or a range); row-major in (im, re)
std::vector<cplx> parse_grid(const std::string& s) {
  const auto parts = split(s, ',');
  if (parts.size() != 2) throw UsageError("INVALID_GRID", "--grid: expected 're0:re1:n,im', got '" + s + "'");
  const auto re = parse_axis(parts[0], "--grid"), im = parse_axis(parts[1], "--grid");
  std::vector<cplx> out;
  for (double y : im)
    for (double x : re) out.emplace_back(x, y);
  return out;
}

cplx parse_z(const std::string& s) {
  const auto parts = split(s, ',');
  if (parts.size() == 1) return {parse_double(parts[0], "--z"), 0.0};
  if (parts.size() != 2) throw UsageError("INVALID_ARGUMENT", "--z: expected 're,im', got '" + s + "'");
  return {parse_double(parts[0], "--z"), parse_double(parts[1], "--z")};
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("", "cannot read file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError("", "invalid JSON in '" + path + "': " + e.what());
  }
}

enum class Branch { classical, reference, peak, b, omega };

Branch parse_branch(const std::string& s) {
  if (s == "classical") return Branch::classical;
  if (s == "reference") return Branch::reference;
  if (s == "peak") return Branch::peak;
  if (s == "b") return Branch::b;
  if (s == "omega") return Branch::omega;
  throw UsageError("INVALID_BRANCH", "--branch: unknown branch '" + s + "'");
}

struct Model {
  RunConfig cfg;
  Peak peak;
};

Model load_model(const std::string& path) {
  RunConfig cfg = load_config(path);
  const Setup s = build_setup(cfg);
  return {std::move(cfg), make_peak(s)};
}

bool gz_hermitian(const Peak& p) { return hermiticity_report(p.s, p.g).gz_hermitian; }

TripleHandle handle_for(const Model& mdl, Branch br) {
  const Peak& p = mdl.peak;
  switch (br) {
    case Branch::classical: return classical_handle(p.s);
    case Branch::reference: return reference_handle(make_frame(p));
    case Branch::peak:
      if (!gz_hermitian(p))
        throw Error(ErrorCode::NonHermitianGZ, "the peak triple needs a Hermitian G_Z (real Z, j-diagonal Gram)");
      return peak_handle(p);
    case Branch::b: return b_branch_handle(p);
    case Branch::omega: return omega_handle(p, make_iota(p, iota_spec(mdl.cfg, p)));
  }
  return classical_handle(p.s);
}

double im_margin(const MatC& M, cplx z) {
  const MatC im = (M - M.adjoint()) / cplx(0, 2);
  const double lo = Eigen::SelfAdjointEigenSolver<MatC>(im).eigenvalues()[0];
  return z.imag() < 0 ? -Eigen::SelfAdjointEigenSolver<MatC>(im).eigenvalues()[M.rows() - 1] : lo;
}

json matrix_entry(const MatC& a) { return {{"shape", {a.rows(), a.cols()}}, {"data", matrix_to_json(a)}}; }

json relation_to_json(const LinearRelationFD& t) {
  return {{"C", matrix_to_json(t.C)}, {"D", matrix_to_json(t.D)}};
}

LinearRelationFD theta_from(const std::string& spec, const Model& mdl) {
  const int d = mdl.peak.s.d;
  if (spec == "zero") return relation_zero_domain(d);
  if (spec == "config") {
    if (!mdl.cfg.theta) throw SchemaError("/theta", "--theta config: the configuration has no theta");
    return *mdl.cfg.theta;
  }
  const json j = load_json_file(spec);
  if (!j.is_object() || !j.contains("C") || !j.contains("D"))
    throw SchemaError("", "theta file must be an object with C and D");
  const MatC C = matrix_from_json(j.at("C"), "/C"), D = matrix_from_json(j.at("D"), "/D");
  if (C.rows() != d || D.rows() != d || C.cols() != D.cols() || C.cols() == 0)
    throw SchemaError("", "theta C and D must both have d rows and equal, nonzero column counts");
  return make_relation(C, D);
}

struct Common {
  std::string config;
  std::uint64_t seed = 1;
};

void print(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

// ---------------------------------------------------------------- commands

int cmd_validate(const Common& c, std::ostream& out) {
  const Model mdl = load_model(c.config);
  const Peak& p = mdl.peak;
  const HermiticityReport h = hermiticity_report(p.s, p.g);
  json j = {{"schema", "peakmodel/validate/v1"},
            {"config", config_to_json(mdl.cfg)},
            {"valid", true},
            {"N", p.s.N},
            {"m", p.s.m},
            {"d", p.s.d},
            {"md", p.s.md()},
            {"hermiticity",
             {{"gz_hermitian", h.gz_hermitian},
              {"gram_j_diagonal", h.gram_j_diagonal},
              {"z_all_real", h.z_all_real},
              {"R_constant_hermitian", h.R_constant_hermitian},
              {"gz_residual", h.gz_residual},
              {"j_offdiag_residual", h.j_offdiag_residual},
              {"R_spread_residual", h.R_spread_residual},
              {"consistent", h.consistent()}}},
            {"condition", {{"gram", p.g.cond_G}}},
            {"dim_ker_gb_star", p.g.KerGbStar.cols()},
            {"branches",
             {{"classical", true},
              {"reference", true},
              {"peak", h.gz_hermitian},
              {"b", p.s.m > 1},
              {"omega", h.gz_hermitian}}},
            {"warnings", p.g.warnings}};
  const VecR ev = Eigen::SelfAdjointEigenSolver<MatC>(p.g.G).eigenvalues();
  j["condition"]["gram_eigen_min"] = ev[0];
  j["condition"]["gram_eigen_max"] = ev[ev.size() - 1];
  if (mdl.cfg.theta) j["theta_self_adjoint"] = is_self_adjoint(*mdl.cfg.theta);
  print(out, j);
  return exit_ok;
}

int cmd_gram(const Common& c, std::ostream& out) {
  const Model mdl = load_model(c.config);
  const GramData& g = mdl.peak.g;
  json mats = {{"G", matrix_entry(g.G)},         {"G_inverse", matrix_entry(g.Ginv)},
               {"G_b", matrix_entry(g.Gb)},       {"b_hat", matrix_entry(g.bhat)},
               {"G_min", matrix_entry(g.Gmin)},   {"Z_d", matrix_entry(g.Zd())},
               {"G_Z", matrix_entry(g.GZ)},       {"H_b", matrix_entry(g.Hb)},
               {"ker_G_b_star", matrix_entry(g.KerGbStar)},
               {"Delta", matrix_entry(g.Delta)}, {"Delta_hat", matrix_entry(g.DeltaHat)},
               {"X", matrix_entry(g.X)},         {"M_cal", matrix_entry(g.Mcal)}};
  const HermiticityReport h = hermiticity_report(mdl.peak.s, g);
  print(out, {{"schema", "peakmodel/gram/v1"},
              {"config", config_to_json(mdl.cfg)},
              {"matrices", mats},
              {"cond_G", g.cond_G},
              {"gz_hermitian", h.gz_hermitian}});
  return exit_ok;
}

void require_branch(const Model& mdl, Branch br) {
  const Peak& p = mdl.peak;
  if ((br == Branch::peak || br == Branch::omega) && !gz_hermitian(p))
    throw Error(ErrorCode::NonHermitianGZ, "the peak and omega triples need a Hermitian G_Z (real Z, j-diagonal Gram)");
  if (br == Branch::b) require_b_branch(p, default_z_ref(p.s));
}

std::string branch_name(const std::string& s) { return s; }

int cmd_weyl(const Common& c, const std::string& grid_s, const std::string& branch_s, const std::string& format,
             std::ostream& out) {
  const Branch br = parse_branch(branch_s);
  if (format != "json" && format != "csv") throw UsageError("INVALID_FORMAT", "--format must be json or csv");
  const auto grid = parse_grid(grid_s);
  const Model mdl = load_model(c.config);
  require_branch(mdl, br);
  const TripleHandle h = handle_for(mdl, br);

  json rows = json::array();
  std::ostringstream csv;
  csv << std::setprecision(17) << "re,im,skipped,reason,im_margin";
  for (int a = 0; a < h.d; ++a)
    for (int b = 0; b < h.d; ++b) csv << ",M" << a << b << "_re,M" << a << b << "_im";
  csv << '\n';
  for (cplx z : grid) {
    try {
      const MatC M = h.weyl(z);
      const double margin = im_margin(M, z);
      rows.push_back({{"z", complex_to_json(z)}, {"M", matrix_to_json(M)}, {"im_margin", margin}});
      csv << z.real() << ',' << z.imag() << ",0,," << margin;
      for (int a = 0; a < h.d; ++a)
        for (int b = 0; b < h.d; ++b) csv << ',' << M(a, b).real() << ',' << M(a, b).imag();
      csv << '\n';
    } catch (const Error& e) {
      const std::string code(code_name(e.code()));
      rows.push_back({{"z", complex_to_json(z)}, {"skipped", true}, {"reason", code}});
      csv << z.real() << ',' << z.imag() << ",1," << code << ',';
      for (int k = 0; k < 2 * h.d * h.d; ++k) csv << ',';
      csv << '\n';
    }
  }
  if (format == "csv")
    out << csv.str();
  else
    print(out, {{"schema", "peakmodel/weyl/v1"},
                {"config", config_to_json(mdl.cfg)},
                {"branch", branch_name(branch_s)},
                {"d", h.d},
                {"rows", rows}});
  return exit_ok;
}

int cmd_resolvent(const Common& c, const std::string& z_s, const std::string& theta_s, const std::string& input,
                  const std::string& branch_s, std::ostream& out) {
  const Branch br = parse_branch(branch_s);
  const cplx z = parse_z(z_s);
  const Model mdl = load_model(c.config);
  const std::string theta_spec = theta_s.empty() ? (mdl.cfg.theta ? "config" : "zero") : theta_s;
  const LinearRelationFD th = theta_from(theta_spec, mdl);
  require_branch(mdl, br);
  const TripleHandle h = handle_for(mdl, br);

  VecC v;
  if (input.empty()) {
    Rng rng(c.seed);
    v = random_cvec(rng, h.dim);
  } else {
    v = vector_from_json(load_json_file(input), "");
    if (v.size() != h.dim)
      throw SchemaError("", "input vector has length " + std::to_string(v.size()) + ", the " + branch_s +
                                " space has dimension " + std::to_string(h.dim));
  }
  const KreinResult r = krein_solve(h, th, z, v);
  print(out, {{"schema", "peakmodel/resolvent/v1"},
              {"config", config_to_json(mdl.cfg)},
              {"branch", branch_name(branch_s)},
              {"z", complex_to_json(z)},
              {"theta", relation_to_json(th)},
              {"seed", c.seed},
              {"dim", h.dim},
              {"input", vector_to_json(v)},
              {"y", vector_to_json(r.y)},
              {"y0", vector_to_json(r.y0)},
              {"h", vector_to_json(r.h)},
              {"graph_residual", h.graph_residual(th, z, v, r)}});
  return exit_ok;
}

int cmd_verify(const Common& c, const std::string& suite_s, int trials, const std::string& inject_s,
               std::ostream& out) {
  VerifyOptions opt;
  const auto suite = parse_suite(suite_s);
  if (!suite) throw UsageError("INVALID_SUITE", "--suite: unknown suite '" + suite_s + "'");
  const auto inject = parse_inject(inject_s);
  if (!inject) throw UsageError("INVALID_INJECT", "--inject: unknown fault '" + inject_s + "'");
  if (trials < 1 || trials > 10000) throw UsageError("INVALID_ARGUMENT", "--trials must be in [1, 10000]");
  opt.suite = *suite;
  opt.inject = *inject;
  opt.seed = c.seed;
  opt.trials = trials;

  std::optional<RunConfig> cfg;
  if (!c.config.empty()) cfg = load_config(c.config);
  const VerifyReport rep = run_verify(opt, cfg ? &*cfg : nullptr);
  json j = report_to_json(rep);
  if (cfg) j["config"] = config_to_json(*cfg);
  print(out, j);
  return rep.pass() ? exit_ok : exit_verify_failed;
}

int cmd_dispersion(const Common& c, const std::string& grid_s, const std::string& branch_s,
                   const std::string& theta_s, std::ostream& out) {
  const Branch br = parse_branch(branch_s);
  const auto grid = parse_grid(grid_s);
  const Model mdl = load_model(c.config);
  const std::string theta_spec = theta_s.empty() ? (mdl.cfg.theta ? "config" : "zero") : theta_s;
  const LinearRelationFD th = theta_from(theta_spec, mdl);
  require_branch(mdl, br);
  const TripleHandle h = handle_for(mdl, br);

  json rows = json::array();
  json best;
  for (const DispersionPoint& pt : dispersion_scan(h, th, grid)) {
    if (pt.skipped) {
      rows.push_back({{"z", complex_to_json(pt.z)}, {"skipped", true}, {"reason", pt.reason}});
      continue;
    }
    rows.push_back({{"z", complex_to_json(pt.z)}, {"smin", pt.smin}});
    if (best.is_null() || pt.smin < best["smin"].get<double>()) best = {{"z", complex_to_json(pt.z)}, {"smin", pt.smin}};
  }
  print(out, {{"schema", "peakmodel/dispersion/v1"},
              {"config", config_to_json(mdl.cfg)},
              {"branch", branch_name(branch_s)},
              {"theta", relation_to_json(th)},
              {"rows", rows},
              {"minimum", best}});
  return exit_ok;
}

std::uint64_t seed_override(std::uint64_t seed) {
  const char* env = std::getenv("PEAKMODEL_SEED");
  if (!env) return seed;
  const std::string s(env);
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos || s.size() > 19)
    throw UsageError("INVALID_SEED", "PEAKMODEL_SEED must be a non-negative decimal integer, got '" + s + "'");
  return std::stoull(s);
}

// ---------------------------------------------------------------- schema

template <class... K>
std::optional<std::string> need(const json& j, const std::string& where, K... keys) {
  for (const char* k : {keys...})
    if (!j.contains(k)) return where + ": missing '" + k + "'";
  return std::nullopt;
}

bool is_complex(const json& j) {
  return j.is_array() && j.size() == 2 && (j[0].is_number() || j[0].is_null()) && (j[1].is_number() || j[1].is_null());
}

bool is_vector(const json& j) {
  if (!j.is_array()) return false;
  for (const auto& e : j)
    if (!is_complex(e)) return false;
  return true;
}

bool is_matrix(const json& j) {
  if (!j.is_array()) return false;
  for (const auto& r : j)
    if (!is_vector(r) || r.size() != j[0].size()) return false;
  return true;
}

std::optional<std::string> check_rows(const json& rows, bool weyl) {
  if (!rows.is_array()) return "rows: not an array";
  for (const auto& r : rows) {
    if (!r.is_object() || !r.contains("z") || !is_complex(r["z"])) return "rows: entry without z";
    if (r.contains("skipped")) {
      if (!r["reason"].is_string()) return "rows: skipped entry without reason";
    } else if (weyl ? !(is_matrix(r["M"]) && r["im_margin"].is_number()) : !r["smin"].is_number()) {
      return "rows: malformed entry";
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::string> output_schema_error(const json& j) {
  if (!j.is_object() || !j.contains("schema") || !j["schema"].is_string()) return "missing schema tag";
  const std::string tag = j["schema"];
  if (j.contains("config")) {
    try {
      parse_config(j["config"]);
    } catch (const SchemaError& e) {
      return "config echo does not re-parse: " + std::string(e.what()) + " at " + e.path();
    }
  }
  if (tag == "peakmodel/validate/v1") {
    if (auto e = need(j, tag, "config", "valid", "N", "m", "d", "md", "hermiticity", "condition", "dim_ker_gb_star",
                      "branches"))
      return e;
    if (j["md"].get<long>() - j["d"].get<long>() != j["dim_ker_gb_star"].get<long>())
      return tag + ": dim_ker_gb_star ≠ md − d";
    return std::nullopt;
  }
  if (tag == "peakmodel/gram/v1") {
    if (auto e = need(j, tag, "config", "matrices", "cond_G")) return e;
    for (const auto& [name, m] : j["matrices"].items()) {
      if (!m.contains("shape") || !is_matrix(m["data"])) return tag + ": malformed matrix " + name;
      const auto& data = m["data"];
      const long rows = m["shape"][0], cols = m["shape"][1];
      if (long(data.size()) != rows || (rows > 0 && long(data[0].size()) != cols))
        return tag + ": shape mismatch for " + name;
    }
    return std::nullopt;
  }
  if (tag == "peakmodel/weyl/v1") {
    if (auto e = need(j, tag, "config", "branch", "d", "rows")) return e;
    return check_rows(j["rows"], true);
  }
  if (tag == "peakmodel/dispersion/v1") {
    if (auto e = need(j, tag, "config", "branch", "theta", "rows", "minimum")) return e;
    return check_rows(j["rows"], false);
  }
  if (tag == "peakmodel/resolvent/v1") {
    if (auto e = need(j, tag, "config", "branch", "z", "theta", "dim", "input", "y", "y0", "h", "graph_residual"))
      return e;
    const std::size_t dim = j["dim"];
    for (const char* k : {"input", "y", "y0"})
      if (!is_vector(j[k]) || j[k].size() != dim) return tag + ": malformed vector " + k;
    if (!is_vector(j["h"]) || !is_complex(j["z"])) return tag + ": malformed h or z";
    return std::nullopt;
  }
  if (tag == "peakmodel/verify/v1") {
    if (auto e = need(j, tag, "suite", "seed", "trials", "inject", "pass", "checks", "failures")) return e;
    for (const auto& c : j["checks"])
      if (auto e = need(c, tag + " check", "suite", "name", "identity", "value", "tolerance", "comparison", "samples",
                        "errors", "pass"))
        return e;
    return std::nullopt;
  }
  return "unknown schema tag '" + tag + "'";
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite peak-model boundary triples, Weyl functions and resolvents", "peakmodel"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  Common com;
  std::string grid = "-4:4:9,0.5", branch = "classical", format = "json", z = "0,1", theta, input;
  std::string suite = "all", inject = "none";
  int trials = 20;

  auto with_config = [&](CLI::App* sc, bool required) {
    auto* o = sc->add_option("--config,-c", com.config, "run configuration (JSON)");
    if (required) o->required();
    sc->add_option("--seed", com.seed, "random seed (overridden by PEAKMODEL_SEED)");
  };
  auto* validate = app.add_subcommand("validate", "check a configuration and report its structure");
  with_config(validate, true);
  auto* gram = app.add_subcommand("gram", "emit the Gram-algebra matrices");
  with_config(gram, true);
  auto* weyl = app.add_subcommand("weyl", "evaluate a Weyl function on a grid");
  with_config(weyl, true);
  weyl->add_option("--grid", grid, "re0:re1:n,im (either axis may be a range)");
  weyl->add_option("--branch", branch, "classical | reference | peak | b | omega");
  weyl->add_option("--format", format, "json | csv");
  auto* resolvent = app.add_subcommand("resolvent", "Krein–Naimark resolvent R_Θ(z)v with graph check");
  with_config(resolvent, true);
  resolvent->add_option("--z", z, "re,im");
  resolvent->add_option("--theta", theta, "zero | config | FILE with {C, D}");
  resolvent->add_option("--input", input, "JSON vector file (default: random vector from the seed)");
  resolvent->add_option("--branch", branch, "classical | reference | peak | b | omega");
  auto* verify = app.add_subcommand("verify", "randomized identity suites");
  with_config(verify, false);
  verify->add_option("--suite", suite, "all | gram | peak | reference | omega");
  verify->add_option("--trials", trials, "random configurations per suite");
  verify->add_option("--inject", inject, "none | gram-offdiag (fault injection)");
  auto* dispersion = app.add_subcommand("dispersion", "smallest singular value of D − M(z)C on a grid");
  with_config(dispersion, true);
  dispersion->add_option("--grid", grid, "re0:re1:n,im (either axis may be a range)");
  dispersion->add_option("--branch", branch, "classical | reference | peak | b | omega");
  dispersion->add_option("--theta", theta, "zero | config | FILE with {C, D}");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    emit_error(err, "usage", "USAGE", e.what());
    return exit_schema;
  }

  try {
    com.seed = seed_override(com.seed);
    if (validate->parsed()) return cmd_validate(com, out);
    if (gram->parsed()) return cmd_gram(com, out);
    if (weyl->parsed()) return cmd_weyl(com, grid, branch, format, out);
    if (resolvent->parsed()) return cmd_resolvent(com, z, theta, input, branch, out);
    if (verify->parsed()) return cmd_verify(com, suite, trials, inject, out);
    if (dispersion->parsed()) return cmd_dispersion(com, grid, branch, theta, out);
  } catch (const SchemaError& e) {
    emit_error(err, "schema", "SCHEMA_VIOLATION", e.what(), e.path());
    return exit_schema;
  } catch (const UsageError& e) {
    emit_error(err, "usage", e.code(), e.what());
    return exit_schema;
  } catch (const Error& e) {
    emit_error(err, "math", std::string(code_name(e.code())), e.what());
    return exit_math;
  }
  return exit_schema;
}

}  // namespace peakmodel::app
