#pragma once
// Entropy-optimal bridge ("Follmer drift") for a finite chain: the Doob
// h-transform steering the walk from a start state to a target endpoint law
// in T steps, its exactness checks, and the continuous-time information rate.

#include <cstdint>
#include <vector>

#include "mctk/chain.hpp"
#include "mctk/matrix.hpp"
#include "mctk/report.hpp"

namespace mctk {

// Thrown when the target law puts mass the base walk cannot reach.
class AbsoluteContinuityError : public ChainError {
 public:
  using ChainError::ChainError;
};

struct DriftSchedule {
  std::size_t x0 = 0;     // start state (X_0 = x0 deterministically)
  std::size_t horizon = 0;  // T
  // f = d nu / d mu_T on supp(mu_T), zero elsewhere.
  std::vector<double> density;
  // kernels[t] drives the step from time t to t+1 (t in [0, T)); rows at
  // states the bridge cannot occupy are placeholder copies of p(x,.).
  std::vector<Matrix> kernels;
  // backward[k] = P^k f (so backward[0] = density, backward[T](x0) = 1).
  std::vector<std::vector<double>> backward;
  // reachable[t][x] = 1 iff p^t(x0, x) > 0 (combinatorial, not floating).
  std::vector<std::vector<char>> reachable;
  Distribution target = Distribution::uniform(1);         // nu
  Distribution base_endpoint = Distribution::uniform(1);   // mu_T = p^T(x0, .)
};

// Builds the schedule with q_t(x,y) = p(x,y) * (P^{T-t-1} f)(y) / (P^{T-t} f)(x)
// on occupiable rows. Throws AbsoluteContinuityError when supp(nu) is not
// contained in the support of p^T(x0, .).
DriftSchedule build_discrete_drift(const FiniteChain& chain,
                                   const Distribution& nu, std::size_t x0,
                                   std::size_t horizon);

// Pushes delta_{x0} through the schedule kernels; equals nu within 1e-10.
Distribution endpoint_law(const FiniteChain& chain,
                          const DriftSchedule& schedule);

// Exhaustively checks the path identity
//   P[bridge path] = P[base path] * f(x_T)
// on every trajectory (tolerance 1e-10) plus total mass 1. Throws
// std::invalid_argument when |Omega|^T exceeds 1e6 paths.
InequalityReport path_density_check(const FiniteChain& chain,
                                    const DriftSchedule& schedule);

// Per-step expected divergences E[D(q_t(X_t,.) || p(X_t,.))] under the
// bridge's forward marginals; their sum is the bridge-vs-base path
// divergence and equals D(nu || mu_T).
std::vector<double> chain_rule_decomposition(const FiniteChain& chain,
                                             const DriftSchedule& schedule);
double path_relative_entropy(const FiniteChain& chain,
                             const DriftSchedule& schedule);

// Brute-force path-table divergence (same enumeration cutoff as
// path_density_check); agrees with path_relative_entropy within 1e-9.
double path_divergence_enumerated(const FiniteChain& chain,
                                  const DriftSchedule& schedule);

// Builds `rival_count` alternative processes with the same start state and
// endpoint law (perturbed kernels, endpoint mass re-weighted on the path
// table) and asserts each one's path divergence is >= D(nu || mu_T) - 1e-9:
// the schedule is entropy-minimal among processes with its endpoints.
InequalityReport entropy_optimality_check(const FiniteChain& chain,
                                          const DriftSchedule& schedule,
                                          std::size_t rival_count,
                                          std::uint64_t seed);

// ---- continuous time ----------------------------------------------------

// Rate matrix of the continuous-time bridge at time t in [0, T):
// off-diagonal q(x,y) = p(x,y) * H_{T-t}f(y) / H_{T-t}f(x), diagonal set so
// rows sum to zero. Requires strictly positive f (rescaled internally so
// E_pi f = 1; the rates are scale-invariant).
Matrix continuous_drift_rates(const FiniteChain& chain,
                              const std::vector<double>& f, double horizon,
                              double t);

// D(bridge restricted to [0,t] || base walk restricted to [0,t]) for the
// continuous-time bridge started at x0 with terminal tilt f:
//   (1/c) * H_t(G log G)(x0) - log c,  G = H_{T-t} f,  c = H_T f(x0).
// Accepts t slightly above T (t <= T + 0.1) for finite differencing.
// Bitwise-constant f returns exactly 0.
double cumulative_path_entropy(const FiniteChain& chain,
                               const std::vector<double>& f, std::size_t x0,
                               double horizon, double t);

// Information spent per unit time at t = T (the derivative of
// cumulative_path_entropy at its endpoint), evaluated in closed form:
//   I_T = (1/c) * H_T(u)(x0),
//   u(x) = sum_y p(x,y) [ f(x) - f(y) + f(y) (log f(y) - log f(x)) ] >= 0.
// For reversible chains I_T -> E(f, log f) as T grows. Bitwise-constant f
// returns exactly 0.
double information_rate(const FiniteChain& chain, const std::vector<double>& f,
                        std::size_t x0, double horizon);

// Centered finite difference of cumulative_path_entropy at t = T; matches
// information_rate within ~1e-5 relative for h = 1e-4.
double information_rate_fd(const FiniteChain& chain,
                           const std::vector<double>& f, std::size_t x0,
                           double horizon, double h = 1e-4);

}  // namespace mctk
