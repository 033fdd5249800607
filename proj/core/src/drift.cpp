#include "mctk/drift.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "mctk/functional.hpp"
#include "mctk/rng.hpp"
#include "mctk/transport.hpp"

namespace mctk {
namespace {

constexpr double kPathTol = 1e-10;
constexpr double kEntropyTol = 1e-9;
constexpr double kMaxPaths = 1e6;

void require_state(const FiniteChain& chain, std::size_t x0,
                   const char* where) {
  if (x0 >= chain.size()) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s: start state index %zu out of range",
                  where, x0);
    throw std::invalid_argument(buf);
  }
}

bool bitwise_constant(const std::vector<double>& f) {
  for (double v : f)
    if (v != f[0]) return false;
  return true;
}

std::vector<double> normalized_density(const FiniteChain& chain,
                                       const std::vector<double>& f,
                                       const char* where) {
  if (f.size() != chain.size()) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s: function size %zu, chain size %zu",
                  where, f.size(), chain.size());
    throw std::invalid_argument(buf);
  }
  for (double v : f)
    if (!(v > 0.0)) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "%s: requires strictly positive f",
                    where);
      throw std::invalid_argument(buf);
    }
  const auto& pi = chain.stationary().weights();
  double mean = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) mean += pi[i] * f[i];
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i] / mean;
  return out;
}

std::size_t checked_path_count(std::size_t n, std::size_t horizon,
                               const char* where) {
  double count = 1.0;
  for (std::size_t t = 0; t < horizon; ++t) {
    count *= static_cast<double>(n);
    if (count > kMaxPaths) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "%s: exhaustive enumeration needs |Omega|^T <= %.0f paths "
                    "(instance has %zu^%zu); use sampled spot checks instead",
                    where, kMaxPaths, n, horizon);
      throw std::invalid_argument(buf);
    }
  }
  return static_cast<std::size_t>(count);
}

// Calls fn(path, base_prob, bridge_prob) for every trajectory (x_1..x_T).
template <typename Fn>
void for_each_path(const FiniteChain& chain, const DriftSchedule& schedule,
                   Fn&& fn) {
  const std::size_t n = chain.size();
  const std::size_t horizon = schedule.horizon;
  std::vector<std::size_t> path(horizon, 0);
  for (;;) {
    double base = 1.0, bridge = 1.0;
    std::size_t prev = schedule.x0;
    for (std::size_t t = 0; t < horizon; ++t) {
      base *= chain.kernel()(prev, path[t]);
      bridge *= schedule.kernels[t](prev, path[t]);
      prev = path[t];
    }
    fn(path, base, bridge);
    std::size_t pos = 0;
    while (pos < horizon && path[pos] == n - 1) path[pos++] = 0;
    if (pos == horizon) break;
    ++path[pos];
  }
}

}  // namespace

DriftSchedule build_discrete_drift(const FiniteChain& chain,
                                   const Distribution& nu, std::size_t x0,
                                   std::size_t horizon) {
  require_state(chain, x0, "build_discrete_drift");
  if (horizon == 0)
    throw std::invalid_argument("build_discrete_drift: horizon must be >= 1");
  if (nu.size() != chain.size())
    throw std::invalid_argument(
        "build_discrete_drift: target law size does not match chain");
  const std::size_t n = chain.size();

  DriftSchedule schedule;
  schedule.x0 = x0;
  schedule.horizon = horizon;
  schedule.target = nu;

  // Forward marginals of the base walk and combinatorial reach sets.
  schedule.reachable.assign(horizon + 1, std::vector<char>(n, 0));
  schedule.reachable[0][x0] = 1;
  std::vector<double> mu(n, 0.0);
  mu[x0] = 1.0;
  for (std::size_t t = 1; t <= horizon; ++t) {
    for (std::size_t y = 0; y < n; ++y) {
      for (std::size_t x = 0; x < n && !schedule.reachable[t][y]; ++x)
        if (schedule.reachable[t - 1][x] && chain.kernel()(x, y) > 0.0)
          schedule.reachable[t][y] = 1;
    }
    mu = vec_mat(mu, chain.kernel());
  }
  schedule.base_endpoint = Distribution(mu);

  for (std::size_t y = 0; y < n; ++y) {
    if (nu.weights()[y] > 0.0 &&
        (!schedule.reachable[horizon][y] || mu[y] <= 0.0)) {
      char buf[200];
      std::snprintf(buf, sizeof buf,
                    "target law puts mass %.12g on state '%s', which the base "
                    "walk cannot reach from '%s' in %zu steps",
                    nu.weights()[y], chain.states()[y].c_str(),
                    chain.states()[x0].c_str(), horizon);
      throw AbsoluteContinuityError(buf);
    }
  }

  schedule.density.assign(n, 0.0);
  for (std::size_t y = 0; y < n; ++y)
    if (schedule.reachable[horizon][y] && mu[y] > 0.0)
      schedule.density[y] = nu.weights()[y] / mu[y];

  schedule.backward.assign(horizon + 1, {});
  schedule.backward[0] = schedule.density;
  for (std::size_t k = 1; k <= horizon; ++k)
    schedule.backward[k] = apply_kernel_power(chain, schedule.backward[k - 1], 1);
  if (std::abs(schedule.backward[horizon][x0] - 1.0) > kEntropyTol)
    throw std::logic_error(
        "drift construction: backward density mass at the start state is "
        "not 1");

  schedule.kernels.reserve(horizon);
  for (std::size_t t = 0; t < horizon; ++t) {
    Matrix q(n, n, 0.0);
    const auto& ahead = schedule.backward[horizon - t - 1];
    const auto& here = schedule.backward[horizon - t];
    for (std::size_t x = 0; x < n; ++x) {
      if (schedule.reachable[t][x] && here[x] > 0.0) {
        double row_sum = 0.0;
        for (std::size_t y = 0; y < n; ++y) {
          const double v = chain.kernel()(x, y) * ahead[y];
          q(x, y) = v;
          row_sum += v;
        }
        for (std::size_t y = 0; y < n; ++y) q(x, y) /= row_sum;
      } else {
        for (std::size_t y = 0; y < n; ++y) q(x, y) = chain.kernel()(x, y);
      }
    }
    schedule.kernels.push_back(std::move(q));
  }
  return schedule;
}

Distribution endpoint_law(const FiniteChain& chain,
                          const DriftSchedule& schedule) {
  std::vector<double> mu(chain.size(), 0.0);
  mu[schedule.x0] = 1.0;
  for (const auto& q : schedule.kernels) mu = vec_mat(mu, q);
  double mass = 0.0;
  for (double v : mu) mass += v;
  for (auto& v : mu) v /= mass;
  return Distribution(mu);
}

InequalityReport path_density_check(const FiniteChain& chain,
                                    const DriftSchedule& schedule) {
  const std::size_t paths =
      checked_path_count(chain.size(), schedule.horizon, "path_density_check");
  InequalityReport report;
  report.name = "bridge_path_density";
  report.trials = paths;
  report.status = ReportStatus::asserted_pass;

  double worst = 0.0, mass = 0.0;
  std::vector<double> worst_path;
  for_each_path(chain, schedule,
                [&](const std::vector<std::size_t>& path, double base,
                    double bridge) {
                  mass += bridge;
                  const double predicted =
                      base * schedule.density[path.back()];
                  const double err = std::abs(bridge - predicted);
                  if (err > worst) {
                    worst = err;
                    worst_path.assign(path.begin(), path.end());
                  }
                });
  const double mass_err = std::abs(mass - 1.0);
  report.worst_ratio = worst;
  report.constant = kPathTol;
  if (worst > kPathTol || mass_err > kPathTol)
    report.status = ReportStatus::asserted_fail;
  {
    std::vector<double> w(worst_path.begin(), worst_path.end());
    report.witness = witness_vector(w);
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "max |P_bridge - P_base * f(end)| = %.3g over %zu paths; "
                "total bridge mass off by %.3g",
                worst, paths, mass_err);
  report.notes = buf;
  return report;
}

std::vector<double> chain_rule_decomposition(const FiniteChain& chain,
                                             const DriftSchedule& schedule) {
  const std::size_t n = chain.size();
  std::vector<double> terms;
  terms.reserve(schedule.horizon);
  std::vector<double> m(n, 0.0);
  m[schedule.x0] = 1.0;
  for (std::size_t t = 0; t < schedule.horizon; ++t) {
    const Matrix& q = schedule.kernels[t];
    double term = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      if (m[x] <= 0.0) continue;
      double row = 0.0;
      for (std::size_t y = 0; y < n; ++y) {
        const double qq = q(x, y);
        if (qq > 0.0) row += qq * std::log(qq / chain.kernel()(x, y));
      }
      term += m[x] * std::max(0.0, row);
    }
    terms.push_back(term);
    m = vec_mat(m, q);
  }
  return terms;
}

double path_relative_entropy(const FiniteChain& chain,
                             const DriftSchedule& schedule) {
  double total = 0.0;
  for (double term : chain_rule_decomposition(chain, schedule)) total += term;
  return total;
}

double path_divergence_enumerated(const FiniteChain& chain,
                                  const DriftSchedule& schedule) {
  checked_path_count(chain.size(), schedule.horizon,
                     "path_divergence_enumerated");
  double total = 0.0;
  for_each_path(chain, schedule,
                [&](const std::vector<std::size_t>&, double base,
                    double bridge) {
                  if (bridge > 0.0) total += bridge * std::log(bridge / base);
                });
  return std::max(0.0, total);
}

InequalityReport entropy_optimality_check(const FiniteChain& chain,
                                          const DriftSchedule& schedule,
                                          std::size_t rival_count,
                                          std::uint64_t seed) {
  const std::size_t n = chain.size();
  checked_path_count(n, schedule.horizon, "entropy_optimality_check");
  const double target_divergence = relative_entropy(
      schedule.target.weights(), schedule.base_endpoint.weights());

  InequalityReport report;
  report.name = "bridge_entropy_optimality";
  report.constant = target_divergence;
  report.status = ReportStatus::asserted_pass;

  // The schedule itself attains the bound (sanity for the notes).
  const double own = path_divergence_enumerated(chain, schedule);

  double min_rival = std::numeric_limits<double>::infinity();
  double min_slack = std::numeric_limits<double>::infinity();
  std::size_t worst_rival = 0, skipped = 0;
  for (std::size_t r = 0; r < rival_count; ++r) {
    Rng rng(split_seed(seed, 0x524956 + r));
    // Rival kernels: blend the bridge with a noisy copy of the base kernel;
    // support stays inside the base walk's support.
    std::vector<Matrix> rivals;
    rivals.reserve(schedule.horizon);
    for (std::size_t t = 0; t < schedule.horizon; ++t) {
      Matrix rk(n, n, 0.0);
      for (std::size_t x = 0; x < n; ++x) {
        double row_sum = 0.0;
        for (std::size_t y = 0; y < n; ++y) {
          const double p = chain.kernel()(x, y);
          if (p <= 0.0) continue;
          const double v = 0.5 * schedule.kernels[t](x, y) +
                           0.5 * p * std::exp(0.5 * rng.normal());
          rk(x, y) = v;
          row_sum += v;
        }
        for (std::size_t y = 0; y < n; ++y) rk(x, y) /= row_sum;
      }
      rivals.push_back(std::move(rk));
    }
    // Endpoint law of the rival Markov part, then reweight it to nu.
    std::vector<double> tilde(n, 0.0);
    tilde[schedule.x0] = 1.0;
    for (const auto& rk : rivals) tilde = vec_mat(tilde, rk);
    std::vector<double> weight(n, 0.0);
    bool ok = true;
    for (std::size_t z = 0; z < n; ++z) {
      const double target = schedule.target.weights()[z];
      if (target > 0.0) {
        if (tilde[z] <= 0.0) {
          ok = false;
          break;
        }
        weight[z] = target / tilde[z];
      }
    }
    if (!ok) {
      ++skipped;
      continue;
    }
    double divergence = 0.0;
    std::vector<std::size_t> rpath(schedule.horizon, 0);
    for (;;) {
      double base = 1.0, rival = 1.0;
      std::size_t prev = schedule.x0;
      for (std::size_t t = 0; t < schedule.horizon; ++t) {
        base *= chain.kernel()(prev, rpath[t]);
        rival *= rivals[t](prev, rpath[t]);
        prev = rpath[t];
      }
      const double reweighted = rival * weight[rpath.back()];
      if (reweighted > 0.0)
        divergence += reweighted * std::log(reweighted / base);
      std::size_t pos = 0;
      while (pos < schedule.horizon && rpath[pos] == n - 1) rpath[pos++] = 0;
      if (pos == schedule.horizon) break;
      ++rpath[pos];
    }
    const double slack = divergence - target_divergence;
    if (slack < min_slack) {
      min_slack = slack;
      min_rival = divergence;
      worst_rival = r;
    }
    if (slack < -kEntropyTol) report.status = ReportStatus::asserted_fail;
    ++report.trials;
  }

  report.worst_ratio =
      target_divergence > 1e-12 && std::isfinite(min_rival)
          ? min_rival / target_divergence
          : 1.0;
  report.witness = witness_vector(
      {static_cast<double>(worst_rival), min_rival, target_divergence});
  char buf[240];
  std::snprintf(buf, sizeof buf,
                "min rival path divergence %.12g vs D(nu||mu_T) = %.12g "
                "(slack %.3g); schedule's own divergence %.12g; rivals "
                "skipped %zu; witness = (rival index, divergence, bound)",
                min_rival, target_divergence, min_slack, own, skipped);
  report.notes = buf;
  if (std::abs(own - target_divergence) > kEntropyTol)
    report.status = ReportStatus::asserted_fail;
  return report;
}

Matrix continuous_drift_rates(const FiniteChain& chain,
                              const std::vector<double>& f, double horizon,
                              double t) {
  if (!(t >= 0.0) || !(t < horizon))
    throw std::invalid_argument(
        "continuous_drift_rates: need 0 <= t < horizon");
  const auto fn = normalized_density(chain, f, "continuous_drift_rates");
  const std::size_t n = chain.size();
  const auto g = heat_apply(chain, fn, horizon - t);
  Matrix rates(n, n, 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    double off = 0.0;
    for (std::size_t y = 0; y < n; ++y) {
      if (y == x) continue;
      const double p = chain.kernel()(x, y);
      if (p > 0.0) {
        rates(x, y) = p * g[y] / g[x];
        off += rates(x, y);
      }
    }
    rates(x, x) = -off;
  }
  return rates;
}

double cumulative_path_entropy(const FiniteChain& chain,
                               const std::vector<double>& f, std::size_t x0,
                               double horizon, double t) {
  require_state(chain, x0, "cumulative_path_entropy");
  if (!(horizon >= 0.0) || !(t >= 0.0) || t > horizon + 0.1)
    throw std::invalid_argument(
        "cumulative_path_entropy: need 0 <= t <= horizon (+ small "
        "finite-difference overshoot)");
  if (bitwise_constant(f) && f[0] > 0.0) return 0.0;
  const auto fn = normalized_density(chain, f, "cumulative_path_entropy");

  auto g = heat_apply(chain, fn, horizon - t);
  for (double v : g)
    if (!(v > 0.0))
      throw std::logic_error(
          "cumulative_path_entropy: heat flow produced a nonpositive value");
  std::vector<double> glg(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) glg[i] = g[i] * std::log(g[i]);

  const HeatOperator flow(chain, t);
  const double c = flow.apply(g)[x0];
  const double value = flow.apply(glg)[x0];
  return value / c - std::log(c);
}

double information_rate(const FiniteChain& chain, const std::vector<double>& f,
                        std::size_t x0, double horizon) {
  require_state(chain, x0, "information_rate");
  if (!(horizon >= 0.0))
    throw std::invalid_argument("information_rate: horizon must be >= 0");
  if (bitwise_constant(f) && f[0] > 0.0) return 0.0;
  const auto fn = normalized_density(chain, f, "information_rate");
  const std::size_t n = chain.size();

  std::vector<double> logf(n);
  for (std::size_t i = 0; i < n; ++i) logf[i] = std::log(fn[i]);
  // Bregman form of the rate integrand: each summand is >= 0, so the sum is
  // free of cancellation.
  std::vector<double> u(n, 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    double acc = 0.0;
    for (std::size_t y = 0; y < n; ++y) {
      const double p = chain.kernel()(x, y);
      if (p > 0.0)
        acc += p * (fn[x] - fn[y] + fn[y] * (logf[y] - logf[x]));
    }
    u[x] = std::max(0.0, acc);
  }
  const HeatOperator flow(chain, horizon);
  return flow.apply(u)[x0] / flow.apply(fn)[x0];
}

double information_rate_fd(const FiniteChain& chain,
                           const std::vector<double>& f, std::size_t x0,
                           double horizon, double h) {
  if (!(h > 0.0) || h > 0.05)
    throw std::invalid_argument("information_rate_fd: need 0 < h <= 0.05");
  const double ahead = cumulative_path_entropy(chain, f, x0, horizon, horizon + h);
  const double behind =
      cumulative_path_entropy(chain, f, x0, horizon, horizon - h);
  return (ahead - behind) / (2.0 * h);
}

}  // namespace mctk
