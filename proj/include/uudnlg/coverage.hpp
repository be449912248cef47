#ifndef UUDNLG_COVERAGE_HPP
#define UUDNLG_COVERAGE_HPP

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "uudnlg/ir.hpp"
#include "uudnlg/text.hpp"

namespace uudnlg::coverage {

// Token-level check of a realization against its IR. Only tokens that occur
// in the IR are inspected; function words the realizer adds are never
// flagged.
struct CoverageReport {
  std::vector<std::string> missing;   // generated count < IR count
  std::vector<std::string> repeated;  // generated count > IR count + allowance

  bool pass() const { return missing.empty() && repeated.empty(); }

  std::string summary() const {
    return std::string(pass() ? "pass" : "fail") + "\tmissing=" + text::join(missing, ",") +
           "\trepeated=" + text::join(repeated, ",");
  }
};

inline CoverageReport lint_coverage(const ir::IRSequence& ir,
                                    const std::vector<std::string>& generated,
                                    std::size_t allowance = 0) {
  std::map<std::string, std::size_t> expected;
  std::vector<std::string> order;  // first occurrence in the IR
  for (const auto& t : ir.tokens()) {
    if (ir::is_marker(t)) continue;
    if (expected[t]++ == 0) order.push_back(t);
  }
  std::map<std::string, std::size_t> produced;
  for (const auto& t : generated) {
    if (expected.count(t)) ++produced[t];
  }
  CoverageReport r;
  for (const auto& t : order) {
    const std::size_t want = expected[t];
    const std::size_t got = produced[t];
    if (got < want) r.missing.push_back(t);
    if (got > want + allowance) r.repeated.push_back(t);
  }
  return r;
}

}  // namespace uudnlg::coverage

#endif  // UUDNLG_COVERAGE_HPP
