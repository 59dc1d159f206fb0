#include "peakmodel_app/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace peakmodel::app {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw SchemaError(path, msg); }

void only_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
  if (!j.is_object()) fail(path, "expected an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) fail(path + "/" + k, "unknown key '" + k + "'");
}

const json& required(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) fail(path + "/" + key, std::string("missing required key '") + key + "'");
  return j.at(key);
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) fail(path, "expected a finite number");
  return x;
}

int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

double positive(const json& j, const std::string& path) {
  const double x = number(j, path);
  if (!(x > 0)) fail(path, "expected a positive number");
  return x;
}

std::uint64_t seed_of(const json& j, const std::string& path) {
  if (!j.is_number_unsigned()) fail(path, "expected a non-negative integer");
  return j.get<std::uint64_t>();
}

}  // namespace

std::vector<double> laplacian_1d_eigenvalues(int n) {
  std::vector<double> ev(n);
  for (int k = 1; k <= n; ++k) {
    const double s = std::sin(k * M_PI / (2.0 * (n + 1)));
    ev[k - 1] = 4.0 * s * s;
  }
  return ev;
}

VecC laplacian_1d_delta(int n, int site) {
  VecC phi(n);
  const double c = std::sqrt(2.0 / (n + 1));
  for (int k = 1; k <= n; ++k) phi[k - 1] = c * std::sin(double(k) * site * M_PI / (n + 1));
  return phi;
}

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json vector_to_json(const VecC& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(complex_to_json(v[i]));
  return a;
}

json matrix_to_json(const MatC& m) {
  json a = json::array();
  for (Index r = 0; r < m.rows(); ++r) a.push_back(vector_to_json(m.row(r).transpose()));
  return a;
}

cplx complex_from_json(const json& j, const std::string& path) {
  if (j.is_number()) return number(j, path);
  if (!j.is_array() || j.size() != 2) fail(path, "expected a complex number [re, im]");
  return {number(j[0], path + "/0"), number(j[1], path + "/1")};
}

VecC vector_from_json(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected a list of complex numbers");
  VecC v(Index(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[Index(i)] = complex_from_json(j[i], path + "/" + std::to_string(i));
  return v;
}

MatC matrix_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty list of rows");
  const Index rows = Index(j.size());
  Index cols = -1;
  MatC m;
  for (Index r = 0; r < rows; ++r) {
    const VecC row = vector_from_json(j[r], path + "/" + std::to_string(r));
    if (cols < 0) {
      cols = row.size();
      if (cols == 0) fail(path, "matrix rows must be non-empty");
      m.resize(rows, cols);
    } else if (row.size() != cols) {
      fail(path + "/" + std::to_string(r), "ragged matrix");
    }
    m.row(r) = row.transpose();
  }
  return m;
}

RunConfig parse_config(const json& j) {
  only_keys(j, "", {"model", "functionals", "m", "d", "Z", "scaling", "admissible_mode", "theta", "iota",
                    "tolerances"});
  RunConfig c;

  const json& model = required(j, "", "model");
  if (model.is_object() && model.contains("generator")) {
    only_keys(model, "/model", {"generator", "size"});
    const json& g = model.at("generator");
    if (g != "laplacian_1d") fail("/model/generator", "unknown generator (expected \"laplacian_1d\")");
    c.laplacian_size = integer(required(model, "/model", "size"), "/model/size");
    if (c.laplacian_size < 1) fail("/model/size", "size must be positive");
    c.eigenvalues = laplacian_1d_eigenvalues(c.laplacian_size);
  } else {
    only_keys(model, "/model", {"eigenvalues"});
    const json& ev = required(model, "/model", "eigenvalues");
    if (!ev.is_array()) fail("/model/eigenvalues", "expected a list of real numbers");
    for (std::size_t i = 0; i < ev.size(); ++i) c.eigenvalues.push_back(number(ev[i], "/model/eigenvalues/" + std::to_string(i)));
  }
  const Index N = Index(c.eigenvalues.size());

  c.m = integer(required(j, "", "m"), "/m");
  if (c.m < 1) fail("/m", "m must be a positive integer");
  c.d = integer(required(j, "", "d"), "/d");
  if (c.d < 1) fail("/d", "d must be a positive integer");

  const json& fs = required(j, "", "functionals");
  std::vector<VecC> cols;
  auto add_delta = [&](int site, const std::string& path) {
    if (c.laplacian_size == 0) fail(path, "delta_site needs the laplacian_1d generator");
    if (site < 1 || site > c.laplacian_size) fail(path, "delta_site out of range 1..size");
    c.delta_sites.push_back(site);
    cols.push_back(laplacian_1d_delta(c.laplacian_size, site));
  };
  if (fs.is_object()) {
    only_keys(fs, "/functionals", {"delta_sites"});
    const json& ds = required(fs, "/functionals", "delta_sites");
    if (!ds.is_array()) fail("/functionals/delta_sites", "expected a list of sites");
    for (std::size_t i = 0; i < ds.size(); ++i) {
      const std::string p = "/functionals/delta_sites/" + std::to_string(i);
      add_delta(integer(ds[i], p), p);
    }
  } else if (fs.is_array()) {
    for (std::size_t i = 0; i < fs.size(); ++i) {
      const std::string p = "/functionals/" + std::to_string(i);
      if (fs[i].is_object()) {
        only_keys(fs[i], p, {"delta_site"});
        add_delta(integer(required(fs[i], p, "delta_site"), p + "/delta_site"), p + "/delta_site");
      } else {
        if (!c.delta_sites.empty()) fail(p, "do not mix delta_site entries with explicit vectors");
        cols.push_back(vector_from_json(fs[i], p));
        if (cols.back().size() != N) fail(p, "functional length must equal the number of eigenvalues");
      }
    }
    if (!c.delta_sites.empty() && c.delta_sites.size() != cols.size())
      fail("/functionals", "do not mix delta_site entries with explicit vectors");
  } else {
    fail("/functionals", "expected a list of functionals or {\"delta_sites\": [...]}");
  }
  if (int(cols.size()) != c.d) fail("/d", "d must equal the number of functionals");
  c.phi.resize(N, c.d);
  for (int k = 0; k < c.d; ++k) c.phi.col(k) = cols[k];

  const json& Z = required(j, "", "Z");
  if (!Z.is_array()) fail("/Z", "expected a list of complex numbers");
  for (std::size_t i = 0; i < Z.size(); ++i) c.Z.push_back(complex_from_json(Z[i], "/Z/" + std::to_string(i)));
  if (int(c.Z.size()) != c.m) fail("/Z", "Z must contain exactly m points");
  if (N < Index(c.m) * c.d) fail("/model", "the model needs at least m*d eigenvalues");

  if (j.contains("scaling")) {
    const json& s = j.at("scaling");
    if (s == "canonical") c.scaling = Scaling::canonical;
    else if (s == "tilde") c.scaling = Scaling::tilde;
    else fail("/scaling", "expected \"canonical\" or \"tilde\"");
  }

  if (j.contains("admissible_mode")) {
    const json& a = j.at("admissible_mode");
    if (a == "direct") {
      c.mode = AdmissibleMode::direct();
    } else {
      only_keys(a, "/admissible_mode", {"renormalized"});
      const json& r = required(a, "/admissible_mode", "renormalized");
      only_keys(r, "/admissible_mode/renormalized", {"R0", "z0"});
      const MatC R0 = matrix_from_json(required(r, "/admissible_mode/renormalized", "R0"), "/admissible_mode/renormalized/R0");
      if (R0.rows() != c.d || R0.cols() != c.d) fail("/admissible_mode/renormalized/R0", "R0 must be d×d");
      c.mode = AdmissibleMode::renormalized(
          R0, complex_from_json(required(r, "/admissible_mode/renormalized", "z0"), "/admissible_mode/renormalized/z0"));
    }
  }

  if (j.contains("theta")) {
    const json& t = j.at("theta");
    only_keys(t, "/theta", {"C", "D"});
    const MatC C = matrix_from_json(required(t, "/theta", "C"), "/theta/C");
    const MatC D = matrix_from_json(required(t, "/theta", "D"), "/theta/D");
    if (C.rows() != c.d || D.rows() != c.d) fail("/theta", "C and D must have d rows");
    if (C.cols() != D.cols()) fail("/theta", "C and D must have the same number of columns");
    c.theta = LinearRelationFD{C, D};
  }

  if (j.contains("iota")) {
    const json& io = j.at("iota");
    if (io == "identity") {
      c.iota.kind = IotaConfig::Kind::identity;
    } else if (io.is_object() && io.contains("random")) {
      only_keys(io, "/iota", {"random"});
      const json& r = io.at("random");
      only_keys(r, "/iota/random", {"seed", "strength"});
      c.iota.kind = IotaConfig::Kind::random;
      c.iota.seed = seed_of(required(r, "/iota/random", "seed"), "/iota/random/seed");
      if (r.contains("strength")) c.iota.strength = positive(r.at("strength"), "/iota/random/strength");
    } else if (io.is_object() && io.contains("fixing")) {
      only_keys(io, "/iota", {"fixing"});
      const json& f = io.at("fixing");
      only_keys(f, "/iota/fixing", {"z", "seed", "strength"});
      c.iota.kind = IotaConfig::Kind::fixing;
      c.iota.fix_z = complex_from_json(required(f, "/iota/fixing", "z"), "/iota/fixing/z");
      if (f.contains("seed")) c.iota.seed = seed_of(f.at("seed"), "/iota/fixing/seed");
      if (f.contains("strength")) c.iota.strength = positive(f.at("strength"), "/iota/fixing/strength");
    } else {
      fail("/iota", "expected \"identity\", {\"random\": ...} or {\"fixing\": ...}");
    }
  }

  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    only_keys(t, "/tolerances", {"spectral_gap", "identity", "krein"});
    if (t.contains("spectral_gap")) c.tol.spectral_gap = positive(t.at("spectral_gap"), "/tolerances/spectral_gap");
    if (t.contains("identity")) c.tol.identity = positive(t.at("identity"), "/tolerances/identity");
    if (t.contains("krein")) c.tol.krein = positive(t.at("krein"), "/tolerances/krein");
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("", "cannot read config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    fail("", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

json config_to_json(const RunConfig& c) {
  json j;
  if (c.laplacian_size > 0)
    j["model"] = {{"generator", "laplacian_1d"}, {"size", c.laplacian_size}};
  else
    j["model"] = {{"eigenvalues", c.eigenvalues}};
  if (!c.delta_sites.empty()) {
    j["functionals"] = json::array();
    for (int s : c.delta_sites) j["functionals"].push_back({{"delta_site", s}});
  } else {
    j["functionals"] = json::array();
    for (Index k = 0; k < c.phi.cols(); ++k) j["functionals"].push_back(vector_to_json(c.phi.col(k)));
  }
  j["m"] = c.m;
  j["d"] = c.d;
  j["Z"] = json::array();
  for (cplx z : c.Z) j["Z"].push_back(complex_to_json(z));
  j["scaling"] = c.scaling == Scaling::canonical ? "canonical" : "tilde";
  if (c.mode.kind == AdmissibleMode::Kind::direct)
    j["admissible_mode"] = "direct";
  else
    j["admissible_mode"] = {{"renormalized", {{"R0", matrix_to_json(c.mode.R0)}, {"z0", complex_to_json(c.mode.z0)}}}};
  if (c.theta) j["theta"] = {{"C", matrix_to_json(c.theta->C)}, {"D", matrix_to_json(c.theta->D)}};
  switch (c.iota.kind) {
    case IotaConfig::Kind::identity: j["iota"] = "identity"; break;
    case IotaConfig::Kind::random:
      j["iota"] = {{"random", {{"seed", c.iota.seed}, {"strength", c.iota.strength}}}};
      break;
    case IotaConfig::Kind::fixing:
      j["iota"] = {{"fixing", {{"z", complex_to_json(c.iota.fix_z)}, {"seed", c.iota.seed}, {"strength", c.iota.strength}}}};
      break;
  }
  j["tolerances"] = {{"identity", c.tol.identity}, {"krein", c.tol.krein}};
  if (c.tol.spectral_gap > 0) j["tolerances"]["spectral_gap"] = c.tol.spectral_gap;
  return j;
}

Setup build_setup(const RunConfig& c) {
  const SpectralModel model = build_model(c.eigenvalues, c.m, c.tol.spectral_gap);
  const RegularSet Z = make_regular_set(model, c.Z);
  const FunctionalFamily fam = make_family(model, c.phi);
  return make_setup(model, Z, fam, c.scaling, c.mode);
}

IotaSpec iota_spec(const RunConfig& c, const Peak& p) {
  switch (c.iota.kind) {
    case IotaConfig::Kind::identity: return IotaSpec::identity();
    case IotaConfig::Kind::random: return IotaSpec::random(c.iota.seed, c.iota.strength);
    case IotaConfig::Kind::fixing: {
      std::vector<PeakVector> F;
      for (int sg = 0; sg < p.s.d; ++sg) F.push_back(peak_gamma(p, c.iota.fix_z, VecC::Unit(p.s.d, sg)));
      return IotaSpec::fixing(std::move(F), c.iota.seed, c.iota.strength);
    }
  }
  return IotaSpec::identity();
}

}  // namespace peakmodel::app
