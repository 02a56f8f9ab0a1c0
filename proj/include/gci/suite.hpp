#ifndef GCI_SUITE_HPP
#define GCI_SUITE_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "gci/inequality_lab.hpp"

namespace gci::cli {

/// Batch configuration. `suite` is one of
///   gcc2d        correlation inequality on random bodies, n forced to 2
///   ellipsoid    correlation inequality against a random ellipsoid factor
///   main_theorem random trigonometric quintuples on random bodies
///   corollary1   the (4/3)^{n/2} inequality on random bodies
///   small_radius correlation inequality inside 0.374 sqrt(n) Ball
///   lemma_shao   product-set lemma and the correlated-pair inequality
///   h_profile    section-profile properties on random bodies
///   chernoff     tail-bound constants and the dominance grid
///   all          every suite above, in that order
struct SuiteConfig {
  std::string suite = "all";
  int n = 4;
  int trials = 50;
  std::int64_t samples = 1'000'000;
  std::uint64_t seed = 42;
  double confidence = 0.99;
  std::string output;  // CSV path; empty writes to stdout only
};

/// Command-line values that were explicitly given; they override the file.
struct FlagValues {
  std::optional<std::string> suite;
  std::optional<int> n;
  std::optional<int> trials;
  std::optional<std::int64_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<double> confidence;
  std::optional<std::string> output;
};

/// Merges defaults, an optional JSON config file and explicit flags (in
/// ascending precedence) and validates ranges. Throws std::invalid_argument
/// on malformed files or out-of-range values.
SuiteConfig parse_config(const std::string& config_path, const FlagValues& flags);

struct SuiteResult {
  int confirmed = 0;
  int inconclusive = 0;
  int violated = 0;
  std::string csv;      // header plus one row per report
  std::string summary;  // one human-readable line
};

/// Runs the configured suite. Trial t of suite s draws its seed from
/// derive_seed(config.seed, s*1000000 + t), so any row can be reproduced in
/// isolation. Identical configs produce byte-identical CSV. Writes the CSV
/// to config.output when set.
SuiteResult run_suite(const SuiteConfig& config);

}  // namespace gci::cli

#endif  // GCI_SUITE_HPP
