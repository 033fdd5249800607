#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mctk/matrix.hpp"

namespace mctk {

struct ChainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when no unique stationary distribution can be certified.
struct ErgodicityError : ChainError {
  using ChainError::ChainError;
};

// Probability distribution over the state indices of a chain.
// Invariants: weights nonnegative, sum within 1e-12 of 1.
class Distribution {
 public:
  explicit Distribution(std::vector<double> weights);

  static Distribution point_mass(std::size_t n, std::size_t at);
  static Distribution uniform(std::size_t n);

  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }
  // Indices with strictly positive mass.
  const std::vector<std::size_t>& support() const { return support_; }

  friend bool operator==(const Distribution&, const Distribution&) = default;

 private:
  std::vector<double> weights_;
  std::vector<std::size_t> support_;
};

// Raw ingredients accepted by build_chain. Exactly one of kernel /
// conductances must be present.
struct ChainSpec {
  std::vector<std::string> states;
  std::optional<Matrix> kernel;        // row-stochastic, n x n
  std::optional<Matrix> conductances;  // symmetric nonnegative, n x n (self-loops on diagonal)
  std::optional<Matrix> metric;        // optional user metric, defaults to graph distance
  std::optional<double> laziness;      // p <- laziness*I + (1-laziness)*p
};

// Validated finite-state Markov chain: kernel, metric, stationary measure.
//
// Construction runs every structural check (stochastic rows, metric axioms,
// support-graph connectivity) and precomputes the graph metric and the
// stationary measure, so a FiniteChain value is immutable and cheap to share
// across threads afterwards.
class FiniteChain {
 public:
  std::size_t size() const { return states_.size(); }
  const std::vector<std::string>& states() const { return states_; }
  const std::string& state_name(std::size_t i) const { return states_[i]; }

  const Matrix& kernel() const { return kernel_; }
  const std::optional<Matrix>& conductances() const { return conductances_; }

  // Metric in force (user-supplied or the graph distance).
  const Matrix& metric() const { return metric_; }
  // Shortest-path distance on the undirected support graph (always computed;
  // self-loops ignored).
  const Matrix& graph_metric() const { return graph_metric_; }
  bool metric_is_graph_distance() const { return metric_is_graph_; }
  double diameter() const { return diameter_; }

  // Unique stationary distribution. Throws ErgodicityError when the chain
  // does not determine one.
  const Distribution& stationary() const;

  // Non-fatal diagnostics gathered while building (e.g. a user metric that
  // assigns distance > 1 to a kernel edge).
  const std::vector<std::string>& warnings() const { return warnings_; }

  friend FiniteChain build_chain(const ChainSpec& spec);

 private:
  FiniteChain() = default;

  std::vector<std::string> states_;
  Matrix kernel_;
  std::optional<Matrix> conductances_;
  Matrix metric_;
  Matrix graph_metric_;
  bool metric_is_graph_ = true;
  double diameter_ = 0.0;
  std::optional<Distribution> stationary_;
  std::string stationary_error_;
  std::vector<std::string> warnings_;
};

// Validates the description and assembles the chain. Throws ChainError with
// a field-level message on any violated invariant.
FiniteChain build_chain(const ChainSpec& spec);

// Unique stationary measure of the chain (direct linear solve with a power
// iteration fallback; both cross-checked against pi P = pi).
Distribution stationary_measure(const FiniteChain& chain);

// BFS shortest-path distances on the undirected support graph.
Matrix graph_distance(const FiniteChain& chain);

// True iff every holding probability p(x,x) >= 1/2.
bool is_lazy(const FiniteChain& chain);

// Detailed balance pi(x) p(x,y) = pi(y) p(y,x) within 1e-10.
bool is_reversible(const FiniteChain& chain, const Distribution& pi);
// Against the chain's own stationary measure.
bool is_reversible(const FiniteChain& chain);

// Law of the chain after t steps started from mu (row action mu P^t).
Distribution propagate(const FiniteChain& chain, const Distribution& mu, int t);

// P^t f: expectation of f after t steps as a function of the start state.
std::vector<double> apply_kernel_power(const FiniteChain& chain,
                                       std::span<const double> f, int t);

// Named example chains.
//   family "complete":  lazy walk on K_n; param = holding probability.
//   family "cycle":     lazy walk on the n-cycle; param = holding probability.
//   family "hypercube": lazy walk on {0,1}^n (2^n states); param = holding
//                       probability.
//   family "two_state": kernel [[1-a, a], [a, 1-a]]; param = flip probability a.
// All are built from conductances (hence reversible by construction) except
// two_state, which is symmetric and carries its own conductance table.
FiniteChain chain_zoo(const std::string& family, std::size_t n, double param);

}  // namespace mctk
