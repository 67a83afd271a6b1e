#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lens {

// One verification check. Most rows pass when value <= tolerance; rows whose
// quantity measures an order, a minimum eigenvalue, or a separation pass when
// value >= tolerance. The producer decides; `pass` is authoritative.
struct CheckResult {
  std::string suite;
  std::string name;
  std::string quantity;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

// Every runner is deterministic in the seed: same seed, same rows, bitwise.
std::vector<CheckResult> verify_green(uint64_t seed);
std::vector<CheckResult> verify_hodge(uint64_t seed);
std::vector<CheckResult> verify_bvp(uint64_t seed);
std::vector<CheckResult> verify_canonical(uint64_t seed);
std::vector<CheckResult> verify_radical(uint64_t seed);
std::vector<CheckResult> verify_flux(uint64_t seed);
std::vector<CheckResult> verify_weyl(uint64_t seed);
std::vector<CheckResult> verify_states(uint64_t seed);
std::vector<CheckResult> verify_relativisation(uint64_t seed);
std::vector<CheckResult> verify_observer_charges(uint64_t seed);
std::vector<CheckResult> verify_truncation(uint64_t seed);
std::vector<CheckResult> verify_gluing(uint64_t seed);
// re-runs a fixed subset of the suites twice and compares the reports bytewise
std::vector<CheckResult> verify_reproducibility(uint64_t seed);

const std::vector<std::string>& verify_suite_names();

// one suite by name, or "all"; unknown names throw ValidationError
std::vector<CheckResult> run_verify(const std::string& suite, uint64_t seed);

bool all_passed(const std::vector<CheckResult>& results);

// canonical report: rows sorted by (suite, case, quantity), seed in the
// header, every value printed with %.17g so reruns compare bytewise
std::string csv_report(std::vector<CheckResult> results, uint64_t seed);

}  // namespace lens
