#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "chaos/io.hpp"

namespace chaos {

// Parsed command line.  Exit codes: 0 success/pass, 1 violation, 2 usage,
// 3 capacity.
struct RunConfig {
  std::string command;      // norms | bound | verify | nets | partition | fit-c
  std::string tensor_path;  // optional for fit-c
  int m = 1;
  double x = 0.0;           // tail level for bound/verify, Gaussian scale t for nets
  int s = 0;                // 0 = every s for norms
  double c = 1.0;
  std::uint64_t seed = 1;
  std::size_t samples = 100000;
  int restarts = 20;
  std::string output;       // empty = stdout
  std::string format = "json";
  double budget = 1e8;
};

// One member of a fit-c sweep.
struct FitMember {
  std::size_t index = 0;
  int d = 2;
  std::vector<int> dims;
  int m = 1;
  double oracle = 0.0;     // moment of the normalized member
  bool oracle_exact = true;
  double raw_factor = 0.0;
  double c_required = 0.0;
};

struct FitReport {
  std::vector<FitMember> members;
  double c_star_moment = 0.0;
  double c_star_tail = 0.0;
};

// Deterministic random family for fit-c: orders alternate between 2 and 3 at
// desk-scale dimensions, entries standard normal.
std::vector<CoefficientTensor> random_fit_family(std::size_t count, std::uint64_t seed);

// Normalizes each member per moment order, computes the exact (or MC) moment
// and the smallest admissible constant per (member, M); c_star is the family
// maximum.  The tail constant is fitted against empirical frequencies at the
// 0.90/0.95/0.99 quantiles.
FitReport fit_c_family(const std::vector<CoefficientTensor>& family, int m_max,
                       std::size_t samples, std::uint64_t seed, const AlsConfig& cfg,
                       double budget);

// Report builders (pure; used by the CLI and by tests).
Json norms_report(const CoefficientTensor& a, const RunConfig& cfg);
Json bound_report_json(const CoefficientTensor& a, const RunConfig& cfg);
Json verify_report(const CoefficientTensor& a, const RunConfig& cfg, bool& violation);
Json nets_report(const CoefficientTensor& a, const RunConfig& cfg, bool& violation);
Json partition_report(const CoefficientTensor& a, const RunConfig& cfg, bool& violation);
Json fit_c_report(const std::optional<CoefficientTensor>& tensor, const RunConfig& cfg);

// Executes cfg, writing the report to `out` (or cfg.output when set) and
// diagnostics to `err`.  Returns the process exit code.
int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace chaos
