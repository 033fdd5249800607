#pragma once
// Exact optimal transport (1-Wasserstein) between laws on a finite metric
// space, plus the elementary distance/divergence helpers built on it.

#include <vector>

#include "mctk/chain.hpp"
#include "mctk/matrix.hpp"

namespace mctk {

// An optimal coupling together with its certificate. Invariants established
// (and re-verified, throwing std::logic_error on failure) by the solver:
//   * coupling is entrywise nonnegative with row marginal mu and column
//     marginal nu (within 1e-9 in the sup norm);
//   * value equals the coupling's transport cost;
//   * dual_potential is 1-Lipschitz for the metric and satisfies
//     sum_x dual_potential(x) * (mu(x) - nu(x)) = value, certifying
//     optimality by weak duality.
struct TransportPlan {
  double value = 0.0;
  Matrix coupling;
  std::vector<double> dual_potential;
};

// Exact W1 between mu and nu under the given metric. The metric must satisfy
// the metric axioms (symmetry, zero diagonal, triangle inequality); chains
// built by build_chain provide one via FiniteChain::metric().
TransportPlan optimal_transport(const std::vector<double>& mu,
                                const std::vector<double>& nu,
                                const Matrix& metric);

// Convenience wrapper: W1 under the chain's metric.
TransportPlan w1(const FiniteChain& chain, const Distribution& mu,
                 const Distribution& nu);

// Total variation distance (1/2) * sum |mu - nu|.
double total_variation(const std::vector<double>& mu,
                       const std::vector<double>& nu);

// Relative entropy D(nu || mu) = sum nu log(nu/mu), +infinity when nu puts
// mass where mu does not. Bitwise-identical inputs return exactly 0.
double relative_entropy(const std::vector<double>& nu,
                        const std::vector<double>& mu);

// The classical total-variation transport-entropy comparison:
// TV(nu, mu) <= sqrt(D(nu || mu) / 2).
struct PinskerCheck {
  double tv = 0.0;
  double divergence = 0.0;
  double bound = 0.0;  // sqrt(divergence / 2)
  double slack = 0.0;  // bound - tv
  bool holds = false;
};
PinskerCheck pinsker_check(const std::vector<double>& nu,
                           const std::vector<double>& mu);

// Delta^2 / 2 where Delta is the diameter of the support of mu under the
// metric: every law supported on a set of diameter Delta satisfies
// W1(nu, mu)^2 <= (Delta^2 / 2) * D(nu || mu) for nu supported there too.
// Point masses give 0.
double diameter_t1_constant(const std::vector<double>& mu,
                            const Matrix& metric);

}  // namespace mctk
