#pragma once

// Numerical certificates for the kernel, weak-norm, pairing, velocity-bound
// and stretching estimates. Each check compares a measured value with a bound
// (measured <= bound * (1 + tolerance)) or an expected value
// (|measured - expected| <= tolerance).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace axeuler::verify {

enum class CheckKind { Inequality, Equality };

struct CheckResult {
  std::string name;
  CheckKind kind = CheckKind::Inequality;
  double measured = 0.0;
  double bound = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

/// Corpus constants committed with the repository.
struct Baseline {
  double stretching_ratio_max = 0.0;
  double holder_ratio_max = 0.0;
  /// Growth rate used by the sup-vorticity envelope: (d - 2) times the
  /// stretching constant, i.e. 2 * stretching_ratio_max for d = 4.
  double envelope_constant = 0.0;
  std::uint64_t seed = 0;
  std::size_t corpus_size = 0;
  std::size_t resolution = 0;
};

std::string baseline_to_json(const Baseline& b);
/// Throws std::runtime_error on malformed input.
Baseline baseline_from_json(const std::string& text);
Baseline read_baseline(const std::string& path);

struct VerifyOptions {
  /// Empty runs every check; otherwise a check name or group prefix
  /// ("g-weak-norm" selects g-weak-norm and g-weak-norm-*).
  std::string lemma;
  std::size_t resolution = 2048;
  std::size_t corpus_size = 50;
  std::size_t corpus_resolution = 128;
  std::uint64_t seed = 7;
  std::optional<Baseline> baseline;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  VerifyOptions options;
  /// Filled when the corresponding group ran.
  std::optional<double> stretching_ratio_max;
  std::optional<double> holder_ratio_max;

  bool passed() const;
  /// Baseline from this run's corpus constants; requires both groups to have run.
  Baseline to_baseline() const;
};

/// Known check names in execution order.
const std::vector<std::string>& check_names();

/// True if `lemma` selects at least one check.
bool lemma_known(const std::string& lemma);

VerifyReport run_verification(const VerifyOptions& options);

/// Deterministic JSON rendering (no timings, fixed key order).
std::string report_to_json(const VerifyReport& report);

/// One line per check.
std::string report_to_text(const VerifyReport& report);

}  // namespace axeuler::verify
