// Coarse Ricci curvature: closed forms on the example families, mode
// equivalence, and the contraction/diameter consequences.

#include "mctk/curvature.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "mctk/chain.hpp"
#include "mctk/matrix.hpp"
#include "mctk/report.hpp"

namespace {

using mctk::chain_zoo;
using mctk::coarse_ricci;
using mctk::CurvatureMode;
using mctk::CurvatureResult;
using mctk::FiniteChain;
using mctk::InequalityReport;
using mctk::Matrix;
using mctk::ReportStatus;

TEST(CoarseRicci, TwoStateClosedForm) {
  // kappa = 2a for the symmetric flip chain.
  CurvatureResult r = coarse_ricci(chain_zoo("two_state", 2, 0.25));
  EXPECT_NEAR(r.kappa, 0.5, 1e-12);
  EXPECT_NEAR(r.alpha, 2.0, 1e-12);
  EXPECT_NEAR(r.witness_ratio, 0.5, 1e-12);

  CurvatureResult s = coarse_ricci(chain_zoo("two_state", 2, 0.4));
  EXPECT_NEAR(s.kappa, 0.8, 1e-12);
}

TEST(CoarseRicci, CompleteGraphClosedForm) {
  // Lazy walk on K_n: kappa = n / (2 (n - 1)).
  for (std::size_t n : {3u, 5u, 9u, 16u}) {
    CurvatureResult r = coarse_ricci(chain_zoo("complete", n, 0.5));
    const double expect = static_cast<double>(n) / (2.0 * (n - 1));
    EXPECT_NEAR(r.kappa, expect, 1e-12) << "n=" << n;
    EXPECT_NEAR(r.alpha, 1.0 / expect, 1e-12) << "n=" << n;
  }
}

TEST(CoarseRicci, CycleClosedForms) {
  EXPECT_NEAR(coarse_ricci(chain_zoo("cycle", 4, 0.5)).kappa, 0.5, 1e-12);
  EXPECT_NEAR(coarse_ricci(chain_zoo("cycle", 5, 0.5)).kappa, 0.25, 1e-12);
  // n >= 6: flat, for any holding probability.
  for (std::size_t n : {6u, 9u}) {
    CurvatureResult r = coarse_ricci(chain_zoo("cycle", n, 0.5));
    EXPECT_NEAR(r.kappa, 0.0, 1e-12) << "n=" << n;
    EXPECT_TRUE(std::isinf(r.alpha)) << "n=" << n;
  }
  EXPECT_NEAR(coarse_ricci(chain_zoo("cycle", 8, 0.3)).kappa, 0.0, 1e-12);
}

TEST(CoarseRicci, HypercubeClosedForm) {
  // Lazy walk on {0,1}^m: kappa = 1/m.
  for (std::size_t m : {2u, 3u, 4u}) {
    CurvatureResult r = coarse_ricci(chain_zoo("hypercube", m, 0.5));
    EXPECT_NEAR(r.kappa, 1.0 / static_cast<double>(m), 1e-12) << "m=" << m;
  }
}

TEST(CoarseRicci, NeighborsOnlyMatchesAllPairsOnGraphMetrics) {
  for (const char* family : {"complete", "cycle", "hypercube"}) {
    const std::size_t n = family == std::string("hypercube") ? 3 : 6;
    FiniteChain chain = chain_zoo(family, n, 0.5);
    CurvatureResult all = coarse_ricci(chain, CurvatureMode::all_pairs);
    CurvatureResult nbr = coarse_ricci(chain, CurvatureMode::neighbors_only);
    EXPECT_NEAR(all.kappa, nbr.kappa, 1e-12) << family;
  }
}

TEST(CoarseRicci, NeighborsOnlyRejectsNonGraphMetric) {
  mctk::ChainSpec spec;
  spec.states = {"a", "b", "c"};
  Matrix k(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) k(i, j) = i == j ? 0.5 : 0.25;
  spec.kernel = k;
  Matrix d(3, 3, 0.0);
  d(0, 1) = d(1, 0) = 0.5;
  d(0, 2) = d(2, 0) = 0.5;
  d(1, 2) = d(2, 1) = 0.5;
  spec.metric = d;
  FiniteChain chain = mctk::build_chain(spec);
  EXPECT_THROW(coarse_ricci(chain, CurvatureMode::neighbors_only),
               std::invalid_argument);
  // all_pairs still works and sees the scaled metric.
  EXPECT_NEAR(coarse_ricci(chain).kappa, 0.75, 1e-12);
}

TEST(CoarseRicci, PerPairTableAttainsWitness) {
  FiniteChain chain = chain_zoo("cycle", 5, 0.5);
  CurvatureResult r = coarse_ricci(chain, CurvatureMode::all_pairs, true);
  ASSERT_TRUE(r.per_pair_table.has_value());
  const Matrix& table = *r.per_pair_table;
  double max_ratio = 0.0;
  for (std::size_t x = 0; x < 5; ++x) {
    EXPECT_DOUBLE_EQ(table(x, x), 0.0);
    for (std::size_t y = 0; y < 5; ++y) max_ratio = std::max(max_ratio, table(x, y));
  }
  EXPECT_NEAR(max_ratio, r.witness_ratio, 1e-12);
  EXPECT_NEAR(table(r.witness_x, r.witness_y), r.witness_ratio, 1e-12);
}

TEST(LipschitzNorm, Basics) {
  FiniteChain chain = chain_zoo("cycle", 6, 0.5);
  std::vector<double> constant(6, 3.25);
  EXPECT_DOUBLE_EQ(mctk::lipschitz_norm(constant, chain.metric()), 0.0);

  // Distance to a fixed state is exactly 1-Lipschitz.
  std::vector<double> dist(6);
  for (std::size_t i = 0; i < 6; ++i) dist[i] = chain.metric()(0, i);
  EXPECT_NEAR(mctk::lipschitz_norm(dist, chain.metric()), 1.0, 1e-12);

  // Scaling scales the norm.
  for (double& v : dist) v *= 2.5;
  EXPECT_NEAR(mctk::lipschitz_norm(dist, chain.metric()), 2.5, 1e-12);
}

TEST(Consequences, ContractionHoldsOnCurvedChains) {
  for (const char* family : {"complete", "hypercube"}) {
    FiniteChain chain = chain_zoo(family, family == std::string("complete") ? 6 : 3, 0.5);
    CurvatureResult curv = coarse_ricci(chain);
    InequalityReport report = mctk::lipschitz_contraction_check(chain, curv, 40, 123);
    EXPECT_EQ(report.status, ReportStatus::asserted_pass) << report.notes;
    // worst_ratio is normalized against (1 - kappa)^step * ||g||_Lip.
    EXPECT_LE(report.worst_ratio, 1.0 + 1e-9);
    EXPECT_GT(report.trials, 40u);  // structured family adds to the trials
  }
}

TEST(Consequences, ContractionHoldsOnFlatChains) {
  // kappa = 0 still asserts ||P g||_Lip <= ||g||_Lip.
  FiniteChain chain = chain_zoo("cycle", 8, 0.5);
  CurvatureResult curv = coarse_ricci(chain);
  InequalityReport report = mctk::lipschitz_contraction_check(chain, curv, 25, 7);
  EXPECT_EQ(report.status, ReportStatus::asserted_pass) << report.notes;
}

TEST(Consequences, DiameterBound) {
  FiniteChain cube = chain_zoo("hypercube", 4, 0.5);
  CurvatureResult curv = coarse_ricci(cube);
  InequalityReport report = mctk::diameter_bound_check(cube, curv);
  EXPECT_EQ(report.status, ReportStatus::asserted_pass) << report.notes;
  // diam = 4 <= 2/kappa = 8.
  EXPECT_NEAR(report.constant, 8.0, 1e-9);

  // Flat chain: the bound does not apply, and the check must say so rather
  // than fail.
  FiniteChain flat = chain_zoo("cycle", 10, 0.5);
  InequalityReport na = mctk::diameter_bound_check(flat, coarse_ricci(flat));
  EXPECT_EQ(na.status, ReportStatus::report_only);
}

}  // namespace
