#pragma once
// Common result record for inequality checks. Theorem-backed checks assert
// (status asserted_pass / asserted_fail); conjecture probes and diagnostics
// are report_only and never fail a run by themselves.

#include <cstddef>
#include <string>
#include <vector>

namespace mctk {

enum class ReportStatus { asserted_pass, asserted_fail, report_only };

const char* to_string(ReportStatus status);

struct InequalityReport {
  std::string name;
  double constant = 0.0;     // the bound the ratio is compared against
  double worst_ratio = 0.0;  // worst observed value of the scanned quantity
  std::string witness;       // serialized input attaining worst_ratio
  std::size_t trials = 0;
  ReportStatus status = ReportStatus::report_only;
  std::string notes;
};

// Serialize a vector with full round-trip precision (17 significant digits,
// comma separated); witnesses written this way let the worst ratio be
// recomputed to 1e-8.
std::string witness_vector(const std::vector<double>& values);

// Parse the output of witness_vector back into numbers.
std::vector<double> parse_witness_vector(const std::string& text);

}  // namespace mctk
