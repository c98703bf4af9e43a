#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace vring {

/// One row of the built-in verification battery.
struct SelfTestRow {
  std::string check;       ///< stable machine-readable name
  double max_error = 0.0;  ///< worst value observed for the check's metric
  double threshold = 0.0;  ///< the metric must stay at or below this
  bool ok = false;
};

struct SelfTestReport {
  std::vector<SelfTestRow> rows;
  bool pass() const;
};

/// Cross-validates the fast kernel routes against direct quadrature, the
/// split recomposition, the stream-function relations, and the remainder
/// shape bound.  With inject_fault the elliptic route used by the battery is
/// perturbed by one part in 10^6, which must make the battery fail; this
/// proves the checks can actually detect a broken kernel.
SelfTestReport run_kernel_selftest(bool inject_fault = false);

/// Writes the report as CSV with columns check,max_error,threshold,status.
void write_selftest_csv(const SelfTestReport& report, const std::filesystem::path& path);

}  // namespace vring
