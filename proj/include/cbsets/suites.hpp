#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cbsets {

/// Tally of one property suite. `first_failure` holds replayable inputs.
struct SuiteResult {
  std::string name;
  std::size_t checked = 0;
  std::size_t failed = 0;
  std::optional<std::string> first_failure;
  std::vector<std::pair<std::string, double>> metrics;

  void check(bool ok, const std::string& inputs) {
    ++checked;
    if (!ok) {
      ++failed;
      if (!first_failure) first_failure = inputs;
    }
  }
  bool passed() const { return failed == 0 && checked > 0; }
};

/// Names accepted by run_suite, in a stable order.
std::vector<std::string> suite_names();

/// Runs a named property suite; throws std::invalid_argument on unknown names.
/// Results depend only on (name, seed).
SuiteResult run_suite(const std::string& name, std::uint64_t seed);

}  // namespace cbsets
