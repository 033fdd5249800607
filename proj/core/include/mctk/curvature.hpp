#pragma once
// Coarse Ricci curvature of a finite chain under its metric, and the two
// consequences it certifies: Lipschitz contraction of the transition operator
// and the diameter bound for positively curved chains.

#include <cstdint>
#include <optional>

#include "mctk/chain.hpp"
#include "mctk/matrix.hpp"
#include "mctk/report.hpp"

namespace mctk {

enum class CurvatureMode { all_pairs, neighbors_only };

struct CurvatureResult {
  // kappa = 1 - max over evaluated pairs x != y of W1(p(x,.), p(y,.))/d(x,y).
  double kappa = 1.0;
  // 1/kappa when kappa > 0, +infinity otherwise.
  double alpha = 1.0;
  // Pair attaining the maximal ratio (witness_ratio = 1 - kappa).
  std::size_t witness_x = 0;
  std::size_t witness_y = 0;
  double witness_ratio = 0.0;
  // Ratio for every evaluated pair (0 on the diagonal and, in neighbors_only
  // mode, on non-adjacent pairs); present when requested.
  std::optional<Matrix> per_pair_table;
};

// Exact curvature via one exact W1 solve per evaluated pair. neighbors_only
// restricts to support-graph edges, which yields the same kappa when the
// metric is the graph distance (W1 contraction glues along geodesics); it
// throws std::invalid_argument when the metric is not the graph distance.
CurvatureResult coarse_ricci(const FiniteChain& chain,
                             CurvatureMode mode = CurvatureMode::all_pairs,
                             bool keep_table = false);

// max over x != y of |f(x) - f(y)| / d(x,y); 0 for constant f.
double lipschitz_norm(const std::vector<double>& f, const Matrix& metric);

// Asserts ||P^n g||_Lip <= (1 - kappa)^n ||g||_Lip for n in {1,2,3} over
// `trials` random g plus the structured family {d(x0,.)}; additionally checks
// that the witness pair's optimal dual potential attains ||P g||_Lip = 1 -
// kappa, making the contraction factor sharp.
InequalityReport lipschitz_contraction_check(const FiniteChain& chain,
                                             const CurvatureResult& curvature,
                                             std::size_t trials,
                                             std::uint64_t seed);

// Asserts diam(Omega, d) <= 2/kappa when kappa > 0 and the metric is the
// graph distance; otherwise returns a report_only record explaining why the
// bound does not apply.
InequalityReport diameter_bound_check(const FiniteChain& chain,
                                      const CurvatureResult& curvature);

}  // namespace mctk
