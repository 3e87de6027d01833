#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nsmodel/io.hpp"

namespace nsmodel {

struct Check {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct SuiteResult {
  std::string name;
  std::vector<Check> checks;
  Json info = Json::object();
  bool passed() const;
};

struct VerifyOptions {
  std::uint64_t seed = 42;
  double tol_scale = 1.0;
  // "suite/check" -> tolerance, replaces the scaled default
  std::map<std::string, double> overrides;
};

// residual < tolerance passes, so a zero tolerance always fails
class VerifyContext {
 public:
  explicit VerifyContext(const VerifyOptions& o) : opts_(o) {}
  Check check(const std::string& suite, const std::string& name, double residual, double nominal) const;
  std::uint64_t seed(int stream) const { return opts_.seed * 1000003ULL + static_cast<std::uint64_t>(stream); }

 private:
  VerifyOptions opts_;
};

SuiteResult suite_boundary_triple(const VerifyContext& ctx);
SuiteResult suite_generalized_resolvent(const VerifyContext& ctx);
SuiteResult suite_residue_oracle(const VerifyContext& ctx);
SuiteResult suite_parseval(const VerifyContext& ctx);
SuiteResult suite_resolvent_diagonalisation(const VerifyContext& ctx);
// Nevanlinna fit and Poisson identity share one long measure.
std::vector<SuiteResult> suite_nevanlinna_poisson(const VerifyContext& ctx);

std::vector<SuiteResult> run_verify(const VerifyOptions& opts);
Json verify_report(const VerifyOptions& opts, const std::vector<SuiteResult>& suites);

}  // namespace nsmodel
