#include "mctk/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace mctk {

const char* to_string(ReportStatus status) {
  switch (status) {
    case ReportStatus::asserted_pass:
      return "asserted_pass";
    case ReportStatus::asserted_fail:
      return "asserted_fail";
    case ReportStatus::report_only:
      return "report_only";
  }
  return "unknown";
}

std::string witness_vector(const std::vector<double>& values) {
  std::string out;
  char buf[40];
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", values[i]);
    if (i) out += ',';
    out += buf;
  }
  return out;
}

std::vector<double> parse_witness_vector(const std::string& text) {
  std::vector<double> out;
  const char* p = text.c_str();
  while (*p) {
    char* end = nullptr;
    const double v = std::strtod(p, &end);
    if (end == p) throw std::invalid_argument("malformed witness vector");
    out.push_back(v);
    p = end;
    if (*p == ',') ++p;
  }
  return out;
}

}  // namespace mctk
