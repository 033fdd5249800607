#pragma once
// Entropy functional, Dirichlet form, log-Sobolev-type constants, and the
// continuous-time heat semigroup of a reversible finite chain.

#include <cstdint>
#include <string>
#include <vector>

#include "mctk/chain.hpp"
#include "mctk/matrix.hpp"
#include "mctk/report.hpp"

namespace mctk {

// Ent_pi(f) = E_pi[f log f] - E_pi[f] log E_pi[f] for f >= 0 (0 log 0 = 0).
// Throws std::invalid_argument when f has a negative entry or E_pi[f] = 0.
double entropy_functional(const std::vector<double>& pi,
                          const std::vector<double>& f);

// E(f,g) = (1/2) sum_{x,y} pi(x) p(x,y) (f(x)-f(y)) (g(x)-g(y)).
// Requires a reversible chain (the form is symmetric and nonnegative-definite
// exactly in that setting); equals <f, (I-P)g>_pi there.
double dirichlet_form(const FiniteChain& chain, const std::vector<double>& f,
                      const std::vector<double>& g);

// Ratio functionals behind the two constants. Both require non-constant f;
// the modified ratio additionally requires strictly positive f.
double lsi_ratio(const FiniteChain& chain, const std::vector<double>& f);
double mlsi_ratio(const FiniteChain& chain, const std::vector<double>& f);

struct SobolevOptions {
  std::size_t restarts = 32;
  std::size_t iteration_cap = 10000;
  std::uint64_t seed = 0;
};

// Upper-bound estimate of an infimum ratio: value is the ratio at minimizer
// (a feasible positive function with E_pi[minimizer] = 1), so it always upper
// bounds the true constant.
struct SobolevEstimate {
  double value = 0.0;
  std::vector<double> minimizer;
  std::size_t restarts = 0;
  std::string status;  // "converged" or "iteration_cap"
};

// rho   = inf over non-constant f >= 0 of E(sqrt f, sqrt f) / Ent_pi(f)
// rho_0 = inf over positive non-constant f of E(f, log f) / Ent_pi(f)
// Estimated by projected gradient descent on f = exp(g) with restarts.
SobolevEstimate lsi_constant(const FiniteChain& chain,
                             const SobolevOptions& options = {});
SobolevEstimate mlsi_constant(const FiniteChain& chain,
                              const SobolevOptions& options = {});

// Heat semigroup H_t = exp(-t (I - P)) evaluated by uniformization: the
// Poisson-weighted series over kernel powers, truncated once the tail is
// below 1e-12 and renormalized. Positivity-preserving and stochastic.
class HeatOperator {
 public:
  HeatOperator(const FiniteChain& chain, double t);
  double time() const { return t_; }
  const Matrix& matrix() const { return h_; }
  // H_t f (functions evolve by the operator itself).
  std::vector<double> apply(const std::vector<double>& f) const;
  // mu H_t (measures evolve by the adjoint flow).
  std::vector<double> apply_to_measure(const std::vector<double>& mu) const;

 private:
  double t_;
  Matrix h_;
};

// One-shot helpers. heat_apply accepts small negative t (|t| <= 0.1) via the
// convergent power series for exp(-t(I-P)), which the finite-difference
// cross-checks need; heat_measure requires t >= 0.
std::vector<double> heat_apply(const FiniteChain& chain,
                               const std::vector<double>& f, double t);
Distribution heat_measure(const FiniteChain& chain, const Distribution& mu,
                          double t);

// Evaluates Ent_pi(H_t f) against e^{-rho0 t} Ent_pi(f) on the grid. Always
// report_only: rho0 is an upper-bound estimate, so a violation indicates the
// optimizer missed the true infimum rather than a broken theorem. The notes
// record whether the entropy sequence was nonincreasing (which is a theorem
// and is asserted by callers).
struct EntropyDecayReport {
  std::vector<double> times;
  std::vector<double> entropies;
  std::vector<double> bounds;  // e^{-rho0 t} Ent(f)
  bool monotone = true;        // Ent(H_t f) nonincreasing along the grid
  InequalityReport report;
};
EntropyDecayReport entropy_decay_check(const FiniteChain& chain,
                                       const std::vector<double>& f,
                                       double rho0,
                                       const std::vector<double>& t_grid);

}  // namespace mctk
