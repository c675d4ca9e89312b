#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "procosh/fixtures.hpp"

// Named verification suites over the shipped fixtures. Every failing case
// carries a replayable seed and a serialized witness. Suites run against
// the corrupt fixture set when asked, which is how the negative-controls
// suite exercises the failure path.

namespace procosh {

struct SuiteOptions {
  std::uint64_t seed = 7;
  int truncation = 4;
  int window = 3;
  int cases = 0;  // 0 = suite default
  bool use_corrupt = false;
  std::string fixture_dir;  // optional registry override directory
};

struct CaseFailure {
  std::string case_id;
  std::uint64_t seed = 0;
  Json witness;
};

struct SuiteReport {
  std::string suite;
  int cases_run = 0;
  int passed = 0;
  std::vector<CaseFailure> failures;
  int exact_flags = 0;
  int truncated_flags = 0;
  double millis = 0;
  bool ok() const { return failures.empty() && cases_run > 0; }
};

std::vector<std::string> suite_names();
bool is_suite_name(const std::string& name);
SuiteReport run_suite(const std::string& name, const SuiteOptions& opt);
std::vector<SuiteReport> run_all_suites(const SuiteOptions& opt);

Json report_to_json(const SuiteReport& r, bool include_timing = true);
std::string report_to_text(const SuiteReport& r);

// deterministic cross-platform generator for seeded cases
struct SplitMix {
  std::uint64_t state;
  explicit SplitMix(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  int below(int n) { return n <= 1 ? 0 : static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
};

}  // namespace procosh
