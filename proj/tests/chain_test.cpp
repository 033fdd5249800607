// Structural checks for chain construction, stationary measures, metrics,
// and the built-in example families.

#include "mctk/chain.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "mctk/matrix.hpp"
#include "mctk/rng.hpp"
#include "oracles.hpp"

namespace {

using mctk::build_chain;
using mctk::chain_zoo;
using mctk::ChainError;
using mctk::ChainSpec;
using mctk::Distribution;
using mctk::ErgodicityError;
using mctk::FiniteChain;
using mctk::Matrix;

Matrix rows(std::size_t n, std::initializer_list<double> flat) {
  Matrix m(n, n);
  std::size_t k = 0;
  for (double v : flat) m.data()[k++] = v;
  EXPECT_EQ(k, n * n);
  return m;
}

std::vector<std::string> names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("s" + std::to_string(i));
  return out;
}

TEST(Distribution, BasicsAndValidation) {
  Distribution u = Distribution::uniform(4);
  EXPECT_EQ(u.size(), 4u);
  EXPECT_DOUBLE_EQ(u[2], 0.25);
  EXPECT_EQ(u.support().size(), 4u);

  Distribution p = Distribution::point_mass(3, 1);
  EXPECT_EQ(p.support(), (std::vector<std::size_t>{1}));
  EXPECT_DOUBLE_EQ(p[1], 1.0);
  EXPECT_DOUBLE_EQ(p[0], 0.0);

  EXPECT_THROW(Distribution({0.5, 0.4}), ChainError);
  EXPECT_THROW(Distribution({1.2, -0.2}), ChainError);
  EXPECT_EQ(Distribution({0.5, 0.5}), Distribution({0.5, 0.5}));
  EXPECT_FALSE(Distribution({0.5, 0.5}) == Distribution({0.25, 0.75}));
}

TEST(BuildChain, RejectsNonStochasticKernel) {
  ChainSpec spec;
  spec.states = names(2);
  spec.kernel = rows(2, {0.5, 0.4, 0.5, 0.5});  // first row sums to 0.9
  EXPECT_THROW(build_chain(spec), ChainError);

  spec.kernel = rows(2, {1.1, -0.1, 0.5, 0.5});  // negative entry
  EXPECT_THROW(build_chain(spec), ChainError);
}

TEST(BuildChain, RejectsDisconnectedSupport) {
  ChainSpec spec;
  spec.states = names(4);
  // Two disjoint 2-cycles: no path between the halves.
  spec.kernel = rows(4, {0.5, 0.5, 0.0, 0.0,  //
                         0.5, 0.5, 0.0, 0.0,  //
                         0.0, 0.0, 0.5, 0.5,  //
                         0.0, 0.0, 0.5, 0.5});
  EXPECT_THROW(build_chain(spec), ChainError);
  // ErgodicityError specializes ChainError so callers can catch either.
  static_assert(std::is_base_of_v<ChainError, ErgodicityError>);
}

TEST(BuildChain, RejectsBadMetric) {
  ChainSpec spec;
  spec.states = names(3);
  spec.kernel = rows(3, {0.5, 0.25, 0.25,  //
                         0.25, 0.5, 0.25,  //
                         0.25, 0.25, 0.5});

  Matrix asym = rows(3, {0, 1, 1, 2, 0, 1, 1, 1, 0});  // not symmetric
  spec.metric = asym;
  EXPECT_THROW(build_chain(spec), ChainError);

  Matrix triangle = rows(3, {0, 1, 3, 1, 0, 1, 3, 1, 0});  // d(0,2) > d(0,1)+d(1,2)
  spec.metric = triangle;
  EXPECT_THROW(build_chain(spec), ChainError);

  Matrix diag = rows(3, {0.5, 1, 1, 1, 0, 1, 1, 1, 0});  // nonzero diagonal
  spec.metric = diag;
  EXPECT_THROW(build_chain(spec), ChainError);

  // A legal metric that differs from the graph distance (which is 1 for
  // every pair here, the support graph being complete).
  Matrix good = rows(3, {0, 1, 2, 1, 0, 1, 2, 1, 0});
  spec.metric = good;
  FiniteChain chain = build_chain(spec);
  EXPECT_FALSE(chain.metric_is_graph_distance());
  EXPECT_DOUBLE_EQ(chain.diameter(), 2.0);
  EXPECT_DOUBLE_EQ(chain.graph_metric()(0, 2), 1.0);
}

TEST(BuildChain, RequiresExactlyOneOfKernelOrConductances) {
  ChainSpec spec;
  spec.states = names(2);
  EXPECT_THROW(build_chain(spec), ChainError);  // neither

  spec.kernel = rows(2, {0.5, 0.5, 0.5, 0.5});
  spec.conductances = rows(2, {0, 1, 1, 0});
  EXPECT_THROW(build_chain(spec), ChainError);  // both
}

TEST(BuildChain, ConductanceRouteIsReversible) {
  ChainSpec spec;
  spec.states = names(4);
  // Weighted path 0-1-2-3 with unequal edge weights and a self-loop at 0.
  Matrix c(4, 4, 0.0);
  c(0, 1) = c(1, 0) = 2.0;
  c(1, 2) = c(2, 1) = 1.0;
  c(2, 3) = c(3, 2) = 3.0;
  c(0, 0) = 1.0;
  spec.conductances = c;
  spec.laziness = 0.5;
  FiniteChain chain = build_chain(spec);
  EXPECT_TRUE(mctk::is_lazy(chain));
  EXPECT_TRUE(mctk::is_reversible(chain));
  // p(x,y) = c(x,y) / sum_z c(x,z), so pi is proportional to the row sums
  // of the conductance table (a self-loop counts once); laziness keeps pi.
  const Distribution& pi = chain.stationary();
  const double z = 3.0 + 3.0 + 4.0 + 3.0;
  EXPECT_NEAR(pi[0], 3.0 / z, 1e-12);
  EXPECT_NEAR(pi[1], 3.0 / z, 1e-12);
  EXPECT_NEAR(pi[2], 4.0 / z, 1e-12);
  EXPECT_NEAR(pi[3], 3.0 / z, 1e-12);
}

TEST(BuildChain, LazinessMixesTowardIdentity) {
  ChainSpec spec;
  spec.states = names(2);
  spec.kernel = rows(2, {0.0, 1.0, 1.0, 0.0});
  spec.laziness = 0.25;
  FiniteChain chain = build_chain(spec);
  EXPECT_DOUBLE_EQ(chain.kernel()(0, 0), 0.25);
  EXPECT_DOUBLE_EQ(chain.kernel()(0, 1), 0.75);
  EXPECT_DOUBLE_EQ(chain.kernel()(1, 1), 0.25);
  EXPECT_FALSE(mctk::is_lazy(chain));  // holding mass below 1/2

  spec.laziness = 0.5;
  EXPECT_TRUE(mctk::is_lazy(build_chain(spec)));
}

TEST(Stationary, AsymmetricTwoStateClosedForm) {
  // p(0->1) = a, p(1->0) = b: pi = (b, a) / (a + b).
  const double a = 0.3, b = 0.1;
  ChainSpec spec;
  spec.states = {"u", "v"};
  spec.kernel = rows(2, {1 - a, a, b, 1 - b});
  FiniteChain chain = build_chain(spec);
  EXPECT_TRUE(mctk::is_reversible(chain));  // every two-state chain is
  const Distribution& pi = chain.stationary();
  EXPECT_NEAR(pi[0], b / (a + b), 1e-12);
  EXPECT_NEAR(pi[1], a / (a + b), 1e-12);
}

TEST(Stationary, MatchesPowerIterationOracleOnRandomChains) {
  mctk::Rng rng(mctk::split_seed(7, 0));
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 2 + rng.below(4);
    Matrix kernel(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      double sum = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        // Strictly positive entries guarantee ergodicity.
        kernel(i, j) = 0.05 + rng.u01();
        sum += kernel(i, j);
      }
      for (std::size_t j = 0; j < n; ++j) kernel(i, j) /= sum;
    }
    ChainSpec spec;
    spec.states = names(n);
    spec.kernel = kernel;
    FiniteChain chain = build_chain(spec);
    const std::vector<double> oracle = mctk::oracle::stationary_power_oracle(kernel);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_NEAR(chain.stationary()[i], oracle[i], 1e-9)
          << "trial " << trial << " state " << i;
    }
  }
}

TEST(GraphDistance, CycleClosedForm) {
  FiniteChain chain = chain_zoo("cycle", 7, 0.5);
  const Matrix& d = chain.graph_metric();
  for (std::size_t i = 0; i < 7; ++i) {
    for (std::size_t j = 0; j < 7; ++j) {
      const std::size_t k = i > j ? i - j : j - i;
      const double expect = static_cast<double>(std::min(k, 7 - k));
      EXPECT_DOUBLE_EQ(d(i, j), expect) << i << "," << j;
    }
  }
  EXPECT_TRUE(chain.metric_is_graph_distance());
  EXPECT_DOUBLE_EQ(chain.diameter(), 3.0);
}

TEST(Propagate, AgreesWithKernelPowers) {
  FiniteChain chain = chain_zoo("cycle", 5, 0.5);
  Distribution mu({0.2, 0.3, 0.1, 0.25, 0.15});
  Distribution nu = propagate(chain, mu, 3);

  // Same computation through the function-side action: <mu P^3, e_j> must
  // match mu . (P^3 e_j).
  for (std::size_t j = 0; j < 5; ++j) {
    std::vector<double> e(5, 0.0);
    e[j] = 1.0;
    std::vector<double> pe = apply_kernel_power(chain, e, 3);
    double dot = 0.0;
    for (std::size_t i = 0; i < 5; ++i) dot += mu[i] * pe[i];
    EXPECT_NEAR(nu[j], dot, 1e-12);
  }

  EXPECT_EQ(propagate(chain, mu, 0), mu);
  EXPECT_THROW(propagate(chain, mu, -1), ChainError);
}

TEST(Zoo, FamiliesAndProperties) {
  FiniteChain cube = chain_zoo("hypercube", 3, 0.5);
  EXPECT_EQ(cube.size(), 8u);
  EXPECT_EQ(cube.state_name(0), "000");
  EXPECT_EQ(cube.state_name(5), "101");
  EXPECT_TRUE(mctk::is_lazy(cube));
  EXPECT_TRUE(mctk::is_reversible(cube));
  // Uniform stationary law and graph diameter = dimension.
  EXPECT_NEAR(cube.stationary()[3], 1.0 / 8.0, 1e-12);
  EXPECT_DOUBLE_EQ(cube.diameter(), 3.0);

  FiniteChain complete = chain_zoo("complete", 6, 0.5);
  EXPECT_EQ(complete.size(), 6u);
  EXPECT_DOUBLE_EQ(complete.kernel()(0, 0), 0.5);
  EXPECT_NEAR(complete.kernel()(0, 1), 0.1, 1e-12);
  EXPECT_TRUE(mctk::is_reversible(complete));

  FiniteChain two = chain_zoo("two_state", 2, 0.25);
  EXPECT_DOUBLE_EQ(two.kernel()(0, 1), 0.25);
  EXPECT_DOUBLE_EQ(two.kernel()(0, 0), 0.75);
  EXPECT_THROW(chain_zoo("two_state", 3, 0.25), ChainError);
  EXPECT_THROW(chain_zoo("nosuch", 4, 0.5), ChainError);
  EXPECT_THROW(chain_zoo("cycle", 2, 0.5), ChainError);
}

TEST(Zoo, WarnsNothingOnCleanChains) {
  EXPECT_TRUE(chain_zoo("complete", 5, 0.5).warnings().empty());
  EXPECT_TRUE(chain_zoo("cycle", 6, 0.5).warnings().empty());
}

}  // namespace
