#pragma once
// Independent brute-force oracles used by the test suites. Everything here is
// implemented from first principles, deliberately sharing no code with the
// library solvers it is used to cross-check.

#include <cstddef>
#include <vector>

#include "mctk/chain.hpp"
#include "mctk/matrix.hpp"

namespace mctk::oracle {

// Exact optimal-transport cost by enumerating every vertex of the transport
// polytope (spanning trees of the complete bipartite supply/demand graph,
// solved by leaf peeling). Exact for n <= 4; throws std::invalid_argument for
// larger instances.
double w1_vertex_enumeration(const std::vector<double>& mu,
                             const std::vector<double>& nu, const Matrix& cost);

// Exact optimal-transport cost for integer-valued metrics by enumerating all
// integral dual potentials g in {0..D}^n (D = metric diameter), keeping the
// 1-Lipschitz ones, and maximizing sum g * (mu - nu). Total unimodularity of
// the difference-constraint system makes an integral optimum exist. Throws if
// the metric is not integral or (D+1)^n exceeds the enumeration budget.
double w1_dual_enumeration(const std::vector<double>& mu,
                           const std::vector<double>& nu, const Matrix& cost);

// Exact optimal-transport cost between two laws on the cycle graph C_n with
// its shortest-path metric: min over c of sum_k |S_k - c| where S_k are the
// prefix sums of mu - nu (minimized at a median).
double w1_cycle_prefix(const std::vector<double>& mu,
                       const std::vector<double>& nu);

// Stationary law by long power iteration on the half-lazy kernel (I + P)/2,
// independent of the library's linear solve.
std::vector<double> stationary_power_oracle(const Matrix& kernel,
                                            std::size_t max_iters = 400000);

// Grid-zoom estimates of the two entropy-functional constants on chains with
// 2..4 states: iteratively refined grids over log f (one coordinate pinned).
// Accurate to ~1e-6 relative on benign landscapes; used at 1e-3 tolerance.
double lsi_grid_oracle(const FiniteChain& chain);   // inf E(sqrt f)/Ent(f)
double mlsi_grid_oracle(const FiniteChain& chain);  // inf E(f, log f)/Ent(f)

}  // namespace mctk::oracle
