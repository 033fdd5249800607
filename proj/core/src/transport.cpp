#include "mctk/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mctk/min_cost_flow.hpp"

namespace mctk {
namespace {

constexpr double kCertTol = 1e-9;

void certify(const TransportPlan& plan, const std::vector<double>& mu,
             const std::vector<double>& nu, const Matrix& metric) {
  const std::size_t n = mu.size();
  double worst = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    double row = 0.0;
    for (std::size_t y = 0; y < n; ++y) {
      const double g = plan.coupling(x, y);
      if (g < -kCertTol)
        throw std::logic_error("transport certificate: negative coupling entry");
      row += g;
    }
    worst = std::max(worst, std::abs(row - mu[x]));
  }
  for (std::size_t y = 0; y < n; ++y) {
    double col = 0.0;
    for (std::size_t x = 0; x < n; ++x) col += plan.coupling(x, y);
    worst = std::max(worst, std::abs(col - nu[y]));
  }
  if (worst > kCertTol)
    throw std::logic_error("transport certificate: coupling marginal mismatch");

  double cost = 0.0;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      cost += plan.coupling(x, y) * metric(x, y);
  if (std::abs(cost - plan.value) > kCertTol)
    throw std::logic_error("transport certificate: cost mismatch");

  const std::vector<double>& g = plan.dual_potential;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (std::abs(g[a] - g[b]) > metric(a, b) + kCertTol)
        throw std::logic_error(
            "transport certificate: dual potential not 1-Lipschitz");
  double dual_value = 0.0;
  for (std::size_t x = 0; x < n; ++x) dual_value += g[x] * (mu[x] - nu[x]);
  if (std::abs(dual_value - plan.value) > kCertTol)
    throw std::logic_error("transport certificate: duality gap");
}

}  // namespace

TransportPlan optimal_transport(const std::vector<double>& mu,
                                const std::vector<double>& nu,
                                const Matrix& metric) {
  const std::size_t n = mu.size();
  if (n == 0) throw std::invalid_argument("optimal_transport: empty input");
  if (nu.size() != n || metric.rows() != n || metric.cols() != n)
    throw std::invalid_argument("optimal_transport: size mismatch");

  TransportPlan plan;
  plan.coupling = Matrix(n, n, 0.0);
  plan.dual_potential.assign(n, 0.0);

  // Shared mass stays put; only the imbalance moves.
  for (std::size_t i = 0; i < n; ++i)
    plan.coupling(i, i) = std::min(mu[i], nu[i]);
  if (mu == nu) {
    plan.value = 0.0;
    return plan;  // exact zero, no solver roundoff
  }

  std::vector<double> imbalance(n);
  for (std::size_t i = 0; i < n; ++i) imbalance[i] = mu[i] - nu[i];
  FlowSolution flow = solve_transshipment(imbalance, metric);
  for (const auto& [x, y, amt] : flow.moves) plan.coupling(x, y) += amt;
  plan.value = flow.cost;
  plan.dual_potential = std::move(flow.potential);

  certify(plan, mu, nu, metric);
  return plan;
}

TransportPlan w1(const FiniteChain& chain, const Distribution& mu,
                 const Distribution& nu) {
  if (mu.size() != chain.size() || nu.size() != chain.size())
    throw std::invalid_argument("w1: law size does not match chain size");
  return optimal_transport(mu.weights(), nu.weights(), chain.metric());
}

double total_variation(const std::vector<double>& mu,
                       const std::vector<double>& nu) {
  if (mu.size() != nu.size())
    throw std::invalid_argument("total_variation: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) acc += std::abs(mu[i] - nu[i]);
  return 0.5 * acc;
}

double relative_entropy(const std::vector<double>& nu,
                        const std::vector<double>& mu) {
  if (mu.size() != nu.size())
    throw std::invalid_argument("relative_entropy: size mismatch");
  if (nu == mu) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < nu.size(); ++i) {
    if (nu[i] <= 0.0) continue;
    if (mu[i] <= 0.0) return std::numeric_limits<double>::infinity();
    acc += nu[i] * std::log(nu[i] / mu[i]);
  }
  return std::max(acc, 0.0);  // clamp roundoff on near-equal laws
}

double diameter_t1_constant(const std::vector<double>& mu,
                            const Matrix& metric) {
  const std::size_t n = mu.size();
  if (metric.rows() != n || metric.cols() != n)
    throw std::invalid_argument("diameter_t1_constant: size mismatch");
  double diameter = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    if (mu[a] <= 0.0) continue;
    for (std::size_t b = a + 1; b < n; ++b)
      if (mu[b] > 0.0) diameter = std::max(diameter, metric(a, b));
  }
  return 0.5 * diameter * diameter;
}

PinskerCheck pinsker_check(const std::vector<double>& nu,
                           const std::vector<double>& mu) {
  PinskerCheck out;
  out.tv = total_variation(mu, nu);
  out.divergence = relative_entropy(nu, mu);
  out.bound = std::isinf(out.divergence)
                  ? std::numeric_limits<double>::infinity()
                  : std::sqrt(0.5 * out.divergence);
  out.slack = out.bound - out.tv;
  out.holds = out.tv <= out.bound + 1e-12;
  return out;
}

}  // namespace mctk
