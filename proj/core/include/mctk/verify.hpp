#pragma once
// Concentration consequences of positive coarse Ricci curvature, checked on
// concrete chains: transport-entropy inequalities for the stationary law and
// for single kernel rows, the Gaussian moment bound dual to them, a coupled
// simulation of the entropy-optimal bridge against the base walk, and two
// report-only conjecture probes (Peres-Tetali and the interpolation bound).

#include <cstdint>
#include <optional>
#include <vector>

#include "mctk/chain.hpp"
#include "mctk/curvature.hpp"
#include "mctk/drift.hpp"
#include "mctk/functional.hpp"
#include "mctk/report.hpp"

namespace mctk {

// Largest one-step transport-entropy constant over kernel rows:
// max_x Delta(supp p(x,.))^2 / 2. Graph-metric chains with nearest-neighbour
// rows give exactly 2.
double onestep_t1_constant(const FiniteChain& chain);

// Asserts the row-wise inequality W1(nu, p(x,.))^2 <= C_x D(nu || p(x,.))
// with C_x the row's diameter constant, over random laws nu supported on
// supp p(x,.). worst_ratio is the largest normalized ratio (bound 1).
InequalityReport onestep_t1_report(const FiniteChain& chain,
                                   std::size_t samples, std::uint64_t seed);

// Scans the stationary transport-entropy inequality
//   W1(mu, pi)^2 <= [C / (kappa (2 - kappa))] D(mu || pi)
// over Dirichlet draws, every point mass, and two-point mixtures. The
// one-step constant C defaults to 2 on graph-metric chains and to
// onestep_t1_constant otherwise; c_override replaces it (an unattainably
// small override produces an honest asserted_fail with the witness law).
// Chains with kappa <= 0 yield a report_only record: this route to the
// inequality needs positive curvature.
InequalityReport t1_scan(const FiniteChain& chain, std::size_t samples,
                         std::uint64_t seed,
                         std::optional<double> c_override = std::nullopt);

// Dual form of the same inequality (Bobkov-Goetze): for every Lipschitz h,
//   log E_pi e^h <= E_pi h + (t1_constant / 4) ||h||_Lip^2.
// Checked over distance functions and McShane-regularized random functions
// at log-uniform scales; worst_ratio is normalized so the bound is 1.
InequalityReport gaussian_concentration_check(const FiniteChain& chain,
                                              double t1_constant,
                                              std::size_t trials,
                                              std::uint64_t seed);

// Coupled simulation of the entropy-optimal bridge (X) against the base
// walk (Y), both from x0: each step samples the pair from an exact optimal
// coupling of their conditional laws, and every coupling solved on the way
// is asserted against the one-step estimate
//   W1(q_t(a,.), p(b,.)) <= sqrt(C D(q_t(a,.) || p(a,.))) + (1-kappa) d(a,b).
// For kappa > 0 the endpoint estimate
//   E d(X_T, Y_T) <= sqrt(C D(nu || mu_T) / (kappa (2 - kappa)))
// is asserted within 3 standard errors, together with the exact
// W1(nu, mu_T) <= mean + 3 SE and an endpoint-histogram sanity check.
struct CouplingSimResult {
  double kappa = 0.0;
  double constant = 0.0;       // one-step constant C
  double divergence = 0.0;     // D(nu || mu_T)
  double bound = 0.0;          // sqrt(C * divergence / (kappa (2-kappa)))
  double mean_distance = 0.0;  // empirical E d(X_T, Y_T)
  double std_error = 0.0;
  double exact_w1 = 0.0;       // W1(nu, mu_T) from the exact solver
  double endpoint_tv = 0.0;    // TV(empirical law of X_T, nu)
  InequalityReport report;
};
CouplingSimResult coupling_simulation(const FiniteChain& chain,
                                      const Distribution& nu, std::size_t x0,
                                      std::size_t horizon,
                                      std::size_t n_samples,
                                      std::uint64_t seed);

// Report-only probe of the Peres-Tetali conjecture: the modified log-Sobolev
// constant of a lazy reversible chain should be bounded below by a universal
// multiple of its coarse Ricci curvature. rho0 comes from the optimizer (an
// upper bound), so ratio = rho0 / kappa overestimates nothing: a tiny ratio
// is genuine evidence of a gap.
struct PeresTetaliReport {
  double kappa = 0.0;
  double rho0 = 0.0;
  double ratio = 0.0;  // rho0 / kappa when kappa > 0, else 0
  SobolevEstimate mlsi;
  InequalityReport report;
};
PeresTetaliReport peres_tetali_report(const FiniteChain& chain,
                                      const SobolevOptions& options = {});

// Report-only probe of the interpolation conjecture: for the continuous-time
// bridge with terminal tilt f (E_pi f = 1 after internal rescaling) and each
// horizon T in the grid,
//   D_T = D(bridge || base on [0, T])   should satisfy   D_T <= alpha * I_T,
// where I_T is the terminal information rate and alpha = 1/kappa. The report
// records D_T, I_T, and D_T / (alpha I_T) per grid point plus the T -> inf
// limits Ent_pi(f) and E(f, log f). Requires a reversible chain.
struct Conjecture2Report {
  std::vector<double> t_grid;
  std::vector<double> divergence;   // D_T
  std::vector<double> information;  // I_T
  std::vector<double> ratio;        // D_T / (alpha I_T); 0 when undefined
  double entropy_limit = 0.0;       // Ent_pi(f) = lim D_T
  double dirichlet_limit = 0.0;     // E(f, log f) = lim I_T
  double kappa = 0.0;
  double alpha = 0.0;
  InequalityReport report;
};
Conjecture2Report conjecture2_report(const FiniteChain& chain,
                                     const std::vector<double>& f,
                                     std::size_t x0,
                                     const std::vector<double>& t_grid);

}  // namespace mctk
