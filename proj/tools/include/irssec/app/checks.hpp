// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace irssec::app {

struct CheckOptions {
  std::uint64_t seed = 1;
  /// Smaller sample counts, no full-size game and a small reproducibility config.
  bool quick = false;
  unsigned threads = 0;
  /// When set, reproducibility runs this executable's `run-all` twice;
  /// otherwise it calls run_experiment in-process.
  std::filesystem::path cli;
  /// Scratch space for reproducibility outputs; defaults to a temp directory.
  std::filesystem::path work_dir;
};

struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  bool soft = false;  // a failure is reported but does not fail the suite
  std::string detail;
  double seconds = 0.0;
};

/// The numbered checks 1..11. `only` restricts to the listed ids.
std::vector<CheckResult> run_checks(const CheckOptions& opt, const std::vector<int>& only = {});

/// "PASS [3] name: detail (1.2 s)". A soft failure prints FAIL with a
/// "(soft)" marker.
std::string format_check(const CheckResult& r);

}  // namespace irssec::app
