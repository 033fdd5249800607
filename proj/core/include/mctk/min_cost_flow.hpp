#pragma once

#include <cstddef>
#include <tuple>
#include <vector>

#include "mctk/matrix.hpp"

namespace mctk {

// Optimal transshipment of a signed imbalance across the complete directed
// graph on states with edge costs from a metric.
struct FlowSolution {
  double cost = 0.0;
  // (source, target, amount) triples of the path-decomposed optimal flow:
  // each triple moves `amount` mass from a surplus state to a deficit state.
  std::vector<std::tuple<std::size_t, std::size_t, double>> moves;
  // Node potentials certifying optimality: potential is 1-Lipschitz with
  // respect to the cost metric and tight (difference = cost) on every arc
  // that carries flow.
  std::vector<double> potential;
};

// Successive shortest paths with Dijkstra reduced costs over the complete
// graph on all states. `imbalance` must sum to ~0 (surplus positive, deficit
// negative); `cost` must be a metric (symmetric, zero diagonal, triangle
// inequality) so transshipment cost equals direct move cost. Mass below
// 1e-12 is treated as saturated.
FlowSolution solve_transshipment(const std::vector<double>& imbalance,
                                 const Matrix& cost);

}  // namespace mctk
