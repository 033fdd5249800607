#include "mctk/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <vector>

#include "mctk/rng.hpp"
#include "mctk/transport.hpp"

namespace mctk {
namespace {

constexpr double kTol = 1e-9;

std::vector<double> kernel_row(const FiniteChain& chain, std::size_t x) {
  const auto row = chain.kernel().row(x);
  return std::vector<double>(row.begin(), row.end());
}

bool support_adjacent(const FiniteChain& chain, std::size_t x, std::size_t y) {
  return chain.kernel()(x, y) > 0.0 || chain.kernel()(y, x) > 0.0;
}

}  // namespace

CurvatureResult coarse_ricci(const FiniteChain& chain, CurvatureMode mode,
                             bool keep_table) {
  if (mode == CurvatureMode::neighbors_only &&
      !chain.metric_is_graph_distance())
    throw std::invalid_argument(
        "coarse_ricci: neighbors_only mode requires the metric to be the "
        "support-graph distance");

  const std::size_t n = chain.size();
  CurvatureResult result;
  if (keep_table) result.per_pair_table = Matrix(n, n, 0.0);

  double max_ratio = 0.0;
  bool any_pair = false;
  for (std::size_t x = 0; x < n; ++x) {
    const std::vector<double> row_x = kernel_row(chain, x);
    for (std::size_t y = x + 1; y < n; ++y) {
      if (mode == CurvatureMode::neighbors_only &&
          !support_adjacent(chain, x, y))
        continue;
      const double dist = chain.metric()(x, y);
      const double value =
          optimal_transport(row_x, kernel_row(chain, y), chain.metric()).value;
      const double ratio = value / dist;
      if (keep_table) {
        (*result.per_pair_table)(x, y) = ratio;
        (*result.per_pair_table)(y, x) = ratio;
      }
      if (!any_pair || ratio > max_ratio) {
        max_ratio = ratio;
        result.witness_x = x;
        result.witness_y = y;
      }
      any_pair = true;
    }
  }
  if (any_pair) {
    result.witness_ratio = max_ratio;
    result.kappa = 1.0 - max_ratio;
  }  // else: single state, kappa = 1 by convention
  result.alpha = result.kappa > 0.0
                     ? 1.0 / result.kappa
                     : std::numeric_limits<double>::infinity();
  return result;
}

double lipschitz_norm(const std::vector<double>& f, const Matrix& metric) {
  const std::size_t n = f.size();
  if (metric.rows() != n || metric.cols() != n)
    throw std::invalid_argument("lipschitz_norm: size mismatch");
  double worst = 0.0;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y) {
      const double diff = std::abs(f[x] - f[y]);
      if (diff == 0.0) continue;
      const double d = metric(x, y);
      if (d <= 0.0) return std::numeric_limits<double>::infinity();
      worst = std::max(worst, diff / d);
    }
  return worst;
}

InequalityReport lipschitz_contraction_check(const FiniteChain& chain,
                                             const CurvatureResult& curvature,
                                             std::size_t trials,
                                             std::uint64_t seed) {
  const std::size_t n = chain.size();
  const double factor = 1.0 - curvature.kappa;
  InequalityReport report;
  report.name = "lipschitz_contraction";
  report.constant = factor;
  report.status = ReportStatus::asserted_pass;

  // Test family: random functions plus the distance functions d(x0, .).
  std::vector<std::vector<double>> family;
  Rng rng(split_seed(seed, 0x4c6970));
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<double> g(n);
    for (auto& v : g) v = rng.uniform(-1.0, 1.0);
    family.push_back(std::move(g));
  }
  for (std::size_t x0 : {std::size_t{0}, n / 2, n - 1}) {
    std::vector<double> g(n);
    for (std::size_t y = 0; y < n; ++y) g[y] = chain.metric()(x0, y);
    if (std::find(family.begin(), family.end(), g) == family.end())
      family.push_back(std::move(g));
  }

  double worst = 0.0;
  for (const auto& g : family) {
    const double base = lipschitz_norm(g, chain.metric());
    if (base == 0.0) continue;
    std::vector<double> iterate = g;
    for (int step = 1; step <= 3; ++step) {
      iterate = apply_kernel_power(chain, iterate, 1);
      const double norm = lipschitz_norm(iterate, chain.metric());
      const double bound = std::pow(factor, step) * base;
      if (norm > bound + kTol) {
        report.status = ReportStatus::asserted_fail;
        report.witness = witness_vector(g);
        char buf[128];
        std::snprintf(buf, sizeof buf,
                      "violation at step %d: norm %.12g > bound %.12g", step,
                      norm, bound);
        report.notes = buf;
      }
      const double ratio = bound > 0.0 ? norm / bound
                           : (norm <= kTol ? 0.0 : std::numeric_limits<double>::infinity());
      if (ratio > worst) {
        worst = ratio;
        if (report.status != ReportStatus::asserted_fail)
          report.witness = witness_vector(g);
      }
    }
    ++report.trials;
  }
  report.worst_ratio = worst;

  // Sharpness: the dual potential of the witness pair attains the factor.
  if (factor > 1e-12 && n > 1) {
    const auto plan = optimal_transport(
        kernel_row(chain, curvature.witness_x),
        kernel_row(chain, curvature.witness_y), chain.metric());
    const auto pushed = apply_kernel_power(chain, plan.dual_potential, 1);
    const double attained = lipschitz_norm(pushed, chain.metric());
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "sharpness: witness dual potential gives ||P g||_Lip = "
                  "%.12g vs 1 - kappa = %.12g",
                  attained, factor);
    if (!report.notes.empty()) report.notes += "; ";
    report.notes += buf;
    if (std::abs(attained - factor) > kTol)
      report.status = ReportStatus::asserted_fail;
  } else {
    if (!report.notes.empty()) report.notes += "; ";
    report.notes += "sharpness check skipped (contraction factor is 0)";
  }
  return report;
}

InequalityReport diameter_bound_check(const FiniteChain& chain,
                                      const CurvatureResult& curvature) {
  InequalityReport report;
  report.name = "diameter_bound";
  report.trials = 1;
  const double diameter = chain.diameter();
  if (!(curvature.kappa > 0.0)) {
    report.status = ReportStatus::report_only;
    report.worst_ratio = diameter;
    report.notes = "not applicable: kappa <= 0, so 2/kappa is unbounded";
    return report;
  }
  if (!chain.metric_is_graph_distance()) {
    report.status = ReportStatus::report_only;
    report.worst_ratio = diameter;
    report.notes =
        "metric is not the support-graph distance; the 2/kappa bound is "
        "stated for graph walks and is reported without assertion";
    return report;
  }
  const double bound = 2.0 * curvature.alpha;
  report.constant = bound;
  report.worst_ratio = diameter / bound;
  report.status = diameter <= bound + kTol ? ReportStatus::asserted_pass
                                           : ReportStatus::asserted_fail;
  char buf[120];
  std::snprintf(buf, sizeof buf, "diameter %.12g vs 2/kappa = %.12g", diameter,
                bound);
  report.notes = buf;
  report.witness = witness_vector({diameter, curvature.kappa});
  return report;
}

}  // namespace mctk
