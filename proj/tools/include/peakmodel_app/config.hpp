#pragma once

// Run configuration: JSON ingestion, normalization and model construction.
// Complex numbers are [re, im] pairs (a bare number is accepted as real);
// matrices are lists of rows.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "peakmodel/omega_transform.hpp"
#include "peakmodel/reference_space.hpp"

namespace peakmodel::app {

using json = nlohmann::json;

// Malformed or inconsistent configuration; `path` is a JSON pointer.
class SchemaError : public std::runtime_error {
public:
  SchemaError(std::string path, const std::string& what) : std::runtime_error(what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

private:
  std::string path_;
};

struct IotaConfig {
  enum class Kind { identity, random, fixing };
  Kind kind = Kind::identity;
  std::uint64_t seed = 0;
  double strength = 0.5;
  cplx fix_z = 0.0;  // fixing: ι fixes every F_σ(fix_z)
};

struct Tolerances {
  double spectral_gap = -1.0;  // ≤ 0: library default
  double identity = 1e-10;
  double krein = 1e-9;
};

struct RunConfig {
  std::vector<double> eigenvalues;
  MatC phi;  // N×d, eigenbasis coordinates
  int m = 1;
  int d = 1;
  std::vector<cplx> Z;
  Scaling scaling = Scaling::canonical;
  AdmissibleMode mode;
  std::optional<LinearRelationFD> theta;
  IotaConfig iota;
  Tolerances tol;
  int laplacian_size = 0;       // > 0: eigenvalues come from the laplacian_1d generator
  std::vector<int> delta_sites;  // nonempty: functionals given as δ at these sites
};

// Dirichlet second-difference matrix on n sites, diagonalized analytically.
std::vector<double> laplacian_1d_eigenvalues(int n);
VecC laplacian_1d_delta(int n, int site);  // site is 1-based

RunConfig parse_config(const json& j);
RunConfig load_config(const std::string& path);  // SchemaError on unreadable/invalid JSON
json config_to_json(const RunConfig& c);

Setup build_setup(const RunConfig& c);  // throws peakmodel::Error
IotaSpec iota_spec(const RunConfig& c, const Peak& p);

json complex_to_json(cplx z);
json vector_to_json(const VecC& v);
json matrix_to_json(const MatC& a);
cplx complex_from_json(const json& j, const std::string& path);
VecC vector_from_json(const json& j, const std::string& path);
MatC matrix_from_json(const json& j, const std::string& path);

}  // namespace peakmodel::app
