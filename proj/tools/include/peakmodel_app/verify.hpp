#pragma once

// Randomized verification suites.  Each check is an identity of the model,
// evaluated over `trials` random configurations (plus the user configuration
// when one is given) and reported as its worst residual.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "peakmodel_app/config.hpp"

namespace peakmodel::app {

enum class Suite { all, gram, peak, reference, omega };
enum class Inject { none, gram_offdiag };

struct CheckResult {
  std::string suite;
  std::string name;
  std::string identity;      // the identity, stated mathematically
  double value = 0.0;        // worst residual (or smallest value for lower bounds)
  double tolerance = 0.0;
  bool lower_bound = false;  // pass iff value > tolerance (otherwise value <= tolerance)
  int samples = 0;
  std::vector<std::string> errors;  // evaluation failures, by error code

  bool pass() const {
    if (!errors.empty() || samples == 0) return false;
    return lower_bound ? value > tolerance : value <= tolerance;
  }
};

struct VerifyOptions {
  Suite suite = Suite::all;
  std::uint64_t seed = 1;
  int trials = 20;
  Inject inject = Inject::none;
};

struct VerifyReport {
  VerifyOptions options;
  std::vector<CheckResult> checks;
  bool pass() const;
};

VerifyReport run_verify(const VerifyOptions& opt, const RunConfig* config);
json report_to_json(const VerifyReport& r);

std::optional<Suite> parse_suite(const std::string& s);
std::string suite_name(Suite s);
std::optional<Inject> parse_inject(const std::string& s);
std::string inject_name(Inject i);

}  // namespace peakmodel::app
