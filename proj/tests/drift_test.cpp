// Entropy-optimal bridge: exact endpoint steering, the path-density identity,
// the chain-rule decomposition, optimality against rivals, and the
// continuous-time information rate.

#include "mctk/drift.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "mctk/chain.hpp"
#include "mctk/functional.hpp"
#include "mctk/matrix.hpp"
#include "mctk/rng.hpp"
#include "mctk/transport.hpp"

namespace {

using mctk::AbsoluteContinuityError;
using mctk::build_chain;
using mctk::build_discrete_drift;
using mctk::chain_zoo;
using mctk::ChainSpec;
using mctk::Distribution;
using mctk::DriftSchedule;
using mctk::FiniteChain;
using mctk::Matrix;
using mctk::ReportStatus;

FiniteChain random_positive_chain(mctk::Rng& rng, std::size_t n) {
  // Dirichlet-ish rows blended with the uniform law: strictly positive
  // kernel, hence ergodic and absolutely continuous at every horizon.
  Matrix k(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(n);
    double sum = 0.0;
    for (double& v : row) {
      v = rng.gamma(0.8);
      sum += v;
    }
    for (std::size_t j = 0; j < n; ++j)
      k(i, j) = 0.7 * row[j] / sum + 0.3 / static_cast<double>(n);
  }
  ChainSpec spec;
  spec.states.reserve(n);
  for (std::size_t i = 0; i < n; ++i) spec.states.push_back("s" + std::to_string(i));
  spec.kernel = k;
  return build_chain(spec);
}

Distribution random_target(mctk::Rng& rng, std::size_t n) {
  std::vector<double> w(n);
  double sum = 0.0;
  for (double& v : w) {
    v = rng.gamma(0.7) + 1e-4;
    sum += v;
  }
  for (double& v : w) v /= sum;
  return Distribution(w);
}

TEST(DiscreteBridge, SteersExactlyOnRandomChains) {
  mctk::Rng rng(mctk::split_seed(17, 0));
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng.below(4);  // 2..5 states
    FiniteChain chain = random_positive_chain(rng, n);
    const std::size_t x0 = rng.below(n);
    const std::size_t horizon = 1 + rng.below(5);  // 1..5 steps
    const Distribution nu = random_target(rng, n);

    DriftSchedule schedule = build_discrete_drift(chain, nu, x0, horizon);
    ASSERT_EQ(schedule.kernels.size(), horizon);
    EXPECT_EQ(schedule.x0, x0);
    EXPECT_EQ(schedule.horizon, horizon);

    // Endpoint law is exactly nu.
    const Distribution endpoint = endpoint_law(chain, schedule);
    for (std::size_t i = 0; i < n; ++i)
      EXPECT_NEAR(endpoint[i], nu[i], 1e-10) << "trial " << trial;

    // Every trajectory satisfies P[bridge] = P[base] * f(endpoint).
    auto density = path_density_check(chain, schedule);
    EXPECT_EQ(density.status, ReportStatus::asserted_pass)
        << density.notes << " trial " << trial;

    // Chain rule: per-step divergences sum to D(nu || mu_T), which matches
    // the brute-force path-table divergence.
    const std::vector<double> steps = chain_rule_decomposition(chain, schedule);
    ASSERT_EQ(steps.size(), horizon);
    double sum = 0.0;
    for (double s : steps) {
      EXPECT_GE(s, -1e-12);
      sum += s;
    }
    const double total = path_relative_entropy(chain, schedule);
    const double target = mctk::relative_entropy(
        nu.weights(), schedule.base_endpoint.weights());
    EXPECT_NEAR(sum, total, 1e-9) << "trial " << trial;
    EXPECT_NEAR(total, target, 1e-9) << "trial " << trial;
    EXPECT_NEAR(path_divergence_enumerated(chain, schedule), total, 1e-9)
        << "trial " << trial;
  }
}

TEST(DiscreteBridge, BeatsEveryRival) {
  mctk::Rng rng(mctk::split_seed(17, 1));
  for (int trial = 0; trial < 6; ++trial) {
    const std::size_t n = 2 + rng.below(3);
    FiniteChain chain = random_positive_chain(rng, n);
    const Distribution nu = random_target(rng, n);
    DriftSchedule schedule =
        build_discrete_drift(chain, nu, rng.below(n), 1 + rng.below(4));
    auto report = entropy_optimality_check(chain, schedule, 12, 99 + trial);
    EXPECT_EQ(report.status, ReportStatus::asserted_pass)
        << report.notes << " trial " << trial;
    EXPECT_EQ(report.trials, 12u);
  }
}

TEST(DiscreteBridge, RejectsUnreachableTargets) {
  // On the 6-cycle, state 3 is graph distance 3 from state 0: unreachable
  // in 2 steps, so delta_3 is not absolutely continuous w.r.t. p^2(0, .).
  FiniteChain chain = chain_zoo("cycle", 6, 0.5);
  EXPECT_THROW(
      build_discrete_drift(chain, Distribution::point_mass(6, 3), 0, 2),
      AbsoluteContinuityError);
  // Three steps suffice.
  DriftSchedule ok =
      build_discrete_drift(chain, Distribution::point_mass(6, 3), 0, 3);
  const Distribution endpoint = endpoint_law(chain, ok);
  EXPECT_NEAR(endpoint[3], 1.0, 1e-12);
}

TEST(DiscreteBridge, ValidatesArguments) {
  FiniteChain chain = chain_zoo("complete", 3, 0.5);
  const Distribution nu = Distribution::uniform(3);
  EXPECT_THROW(build_discrete_drift(chain, nu, 7, 2), std::invalid_argument);
  EXPECT_THROW(build_discrete_drift(chain, nu, 0, 0), std::invalid_argument);
  EXPECT_THROW(build_discrete_drift(chain, Distribution::uniform(4), 0, 2),
               std::invalid_argument);
}

TEST(DiscreteBridge, ReachableSetsAreMetricBalls) {
  FiniteChain chain = chain_zoo("cycle", 7, 0.5);
  DriftSchedule schedule =
      build_discrete_drift(chain, Distribution::point_mass(7, 1), 0, 3);
  ASSERT_EQ(schedule.reachable.size(), 4u);  // times 0..3
  for (std::size_t t = 0; t <= 3; ++t) {
    for (std::size_t x = 0; x < 7; ++x) {
      const bool expected = chain.graph_metric()(0, x) <= static_cast<double>(t);
      EXPECT_EQ(schedule.reachable[t][x] != 0, expected)
          << "t=" << t << " x=" << x;
    }
  }
  // Backward recursion grounds at the start state: (P^T f)(x0) = 1.
  EXPECT_NEAR(schedule.backward[3][0], 1.0, 1e-12);
}

TEST(ContinuousBridge, RatesFormAGenerator) {
  FiniteChain chain = chain_zoo("complete", 4, 0.5);
  const std::vector<double> f{1.6, 0.4, 0.9, 1.1};
  Matrix rates = mctk::continuous_drift_rates(chain, f, 4.0, 1.5);
  for (std::size_t x = 0; x < 4; ++x) {
    double row = 0.0;
    for (std::size_t y = 0; y < 4; ++y) {
      if (x != y) {
        EXPECT_GE(rates(x, y), 0.0);
      }
      row += rates(x, y);
    }
    EXPECT_NEAR(row, 0.0, 1e-12);
  }
  EXPECT_THROW(mctk::continuous_drift_rates(chain, f, 4.0, 4.0),
               std::invalid_argument);
  EXPECT_THROW(mctk::continuous_drift_rates(chain, {1.0, -1.0, 1.0, 1.0}, 4.0, 1.0),
               std::invalid_argument);
}

TEST(ContinuousBridge, CumulativeEntropyStartsAtZero) {
  FiniteChain chain = chain_zoo("two_state", 2, 0.25);
  const std::vector<double> f{1.5, 0.5};
  // Zero at t = 0 (no information has been spent yet); only rounding in the
  // final division separates the two logarithms.
  EXPECT_NEAR(mctk::cumulative_path_entropy(chain, f, 0, 3.0, 0.0), 0.0, 1e-15);
  // Nondecreasing in t.
  double prev = 0.0;
  for (double t : {0.5, 1.0, 2.0, 3.0}) {
    const double phi = mctk::cumulative_path_entropy(chain, f, 0, 3.0, t);
    EXPECT_GE(phi, prev - 1e-12);
    prev = phi;
  }
}

TEST(ContinuousBridge, ConstantTiltSpendsNothing) {
  FiniteChain chain = chain_zoo("complete", 4, 0.5);
  const std::vector<double> ones(4, 1.0);
  EXPECT_EQ(mctk::information_rate(chain, ones, 0, 2.0), 0.0);
  EXPECT_EQ(mctk::cumulative_path_entropy(chain, ones, 0, 2.0, 1.0), 0.0);
}

TEST(ContinuousBridge, InformationRateMatchesFiniteDifference) {
  FiniteChain chain = chain_zoo("cycle", 5, 0.5);
  const std::vector<double> f{2.0, 0.5, 0.8, 1.2, 0.6};
  for (double horizon : {0.5, 2.0}) {
    const double exact = mctk::information_rate(chain, f, 1, horizon);
    const double fd = mctk::information_rate_fd(chain, f, 1, horizon);
    EXPECT_GT(exact, 0.0);
    EXPECT_NEAR(fd, exact, 1e-5 * exact) << "horizon " << horizon;
  }
  EXPECT_THROW(mctk::information_rate_fd(chain, f, 1, 2.0, 0.5),
               std::invalid_argument);
}

TEST(ContinuousBridge, InformationRateIsScaleInvariant) {
  FiniteChain chain = chain_zoo("complete", 4, 0.5);
  const std::vector<double> f{1.6, 0.4, 0.9, 1.1};
  std::vector<double> scaled = f;
  for (double& v : scaled) v *= 7.5;
  const double a = mctk::information_rate(chain, f, 2, 3.0);
  const double b = mctk::information_rate(chain, scaled, 2, 3.0);
  EXPECT_NEAR(a, b, 1e-12 * std::max(1.0, std::fabs(a)));
}

TEST(ContinuousBridge, InformationRateConvergesToDirichletLimit) {
  // For reversible chains I_T -> E(f, log f) as the horizon grows.
  FiniteChain chain = chain_zoo("two_state", 2, 0.25);
  std::vector<double> f{1.5, 0.5};
  // Normalize E_pi f = 1 so the Dirichlet limit is for the same function the
  // rate sees internally.
  double mean = 0.0;
  for (std::size_t x = 0; x < 2; ++x) mean += chain.stationary()[x] * f[x];
  for (double& v : f) v /= mean;
  std::vector<double> logf{std::log(f[0]), std::log(f[1])};
  const double limit = mctk::dirichlet_form(chain, f, logf);
  const double at40 = mctk::information_rate(chain, f, 0, 40.0);
  EXPECT_NEAR(at40, limit, 1e-6);
  // And the convergence is monotone-ish: T = 8 is already much closer than T = 1.
  const double at1 = std::fabs(mctk::information_rate(chain, f, 0, 1.0) - limit);
  const double at8 = std::fabs(mctk::information_rate(chain, f, 0, 8.0) - limit);
  EXPECT_LT(at8, at1);
}

TEST(ContinuousBridge, RejectsNonPositiveTilts) {
  FiniteChain chain = chain_zoo("complete", 3, 0.5);
  EXPECT_THROW(mctk::information_rate(chain, {1.0, 0.0, 2.0}, 0, 1.0),
               std::invalid_argument);
  EXPECT_THROW(mctk::cumulative_path_entropy(chain, {1.0, -0.5, 2.0}, 0, 1.0, 0.5),
               std::invalid_argument);
}

}  // namespace
