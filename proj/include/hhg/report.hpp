#pragma once

#include <sstream>
#include <string>
#include <vector>

namespace hhg {

/* Outcome of a structure verification: passed means no recorded failure.
 * Failures are human-readable lines naming the axiom, the degree and the
 * offending basis labels, in deterministic order. */
struct CheckReport {
  std::vector<std::string> failures;

  bool passed() const { return failures.empty(); }
  void fail(const std::string& line) { failures.push_back(line); }
  void absorb(const CheckReport& other, const std::string& prefix) {
    for (const auto& f : other.failures) failures.push_back(prefix + f);
  }
  std::string summary() const {
    if (passed()) return "pass";
    std::ostringstream os;
    os << "fail";
    for (const auto& f : failures) os << "\n  - " << f;
    return os.str();
  }
};

}  // namespace hhg
