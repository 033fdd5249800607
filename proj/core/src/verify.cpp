#include "mctk/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>

#include "mctk/rng.hpp"
#include "mctk/transport.hpp"

namespace mctk {
namespace {

constexpr double kTol = 1e-9;

std::vector<double> kernel_row(const FiniteChain& chain, std::size_t x) {
  std::vector<double> row(chain.size());
  for (std::size_t y = 0; y < chain.size(); ++y) row[y] = chain.kernel()(x, y);
  return row;
}

void append_note(std::string& notes, const std::string& extra) {
  if (!notes.empty()) notes += "; ";
  notes += extra;
}

// One-step constant C with its provenance note: user override, the
// unit-ball value 2 on graph-metric chains, or the measured row maximum.
double step_constant(const FiniteChain& chain,
                     const std::optional<double>& c_override,
                     std::string& notes) {
  if (c_override) {
    char buf[80];
    std::snprintf(buf, sizeof buf, "one-step constant C = %.12g (user override)",
                  *c_override);
    append_note(notes, buf);
    return *c_override;
  }
  if (chain.metric_is_graph_distance()) {
    append_note(notes,
                "one-step constant C = 2 (rows live in closed unit balls of "
                "the graph metric)");
    return 2.0;
  }
  const double c = onestep_t1_constant(chain);
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "one-step constant C = %.12g (max row diameter constant; "
                "metric is not the graph distance)",
                c);
  append_note(notes, buf);
  return c;
}

}  // namespace

double onestep_t1_constant(const FiniteChain& chain) {
  double worst = 0.0;
  for (std::size_t x = 0; x < chain.size(); ++x)
    worst = std::max(worst,
                     diameter_t1_constant(kernel_row(chain, x), chain.metric()));
  return worst;
}

InequalityReport onestep_t1_report(const FiniteChain& chain,
                                   std::size_t samples, std::uint64_t seed) {
  const std::size_t n = chain.size();
  InequalityReport report;
  report.name = "onestep_transport_entropy";
  report.constant = 1.0;  // normalized: W1^2 / (C_x * D) <= 1
  report.status = ReportStatus::asserted_pass;

  Rng rng(split_seed(seed, 0x4f4e4531));
  double worst = 0.0;
  std::size_t worst_row = 0;
  std::vector<double> worst_law;
  for (std::size_t x = 0; x < n; ++x) {
    const auto row = kernel_row(chain, x);
    const double c_x = diameter_t1_constant(row, chain.metric());
    if (c_x <= 0.0) continue;  // point-mass row: nothing to scan
    std::vector<std::size_t> support;
    for (std::size_t y = 0; y < n; ++y)
      if (row[y] > 0.0) support.push_back(y);
    for (std::size_t s = 0; s < samples; ++s) {
      const double beta =
          std::exp(rng.uniform(std::log(0.05), std::log(20.0)));
      const auto w = rng.dirichlet(support.size(), beta);
      std::vector<double> nu(n, 0.0);
      for (std::size_t k = 0; k < support.size(); ++k) nu[support[k]] = w[k];
      const double div = relative_entropy(nu, row);
      if (div < 1e-15) continue;
      const double dist = optimal_transport(nu, row, chain.metric()).value;
      const double ratio = dist * dist / (c_x * div);
      ++report.trials;
      if (ratio > worst) {
        worst = ratio;
        worst_row = x;
        worst_law = nu;
      }
    }
  }
  report.worst_ratio = worst;
  if (worst > 1.0 + kTol) report.status = ReportStatus::asserted_fail;
  if (!worst_law.empty()) {
    std::vector<double> witness;
    witness.push_back(static_cast<double>(worst_row));
    witness.insert(witness.end(), worst_law.begin(), worst_law.end());
    report.witness = witness_vector(witness);
  }
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "max W1(nu, p(x,.))^2 / (C_x D(nu || p(x,.))) = %.12g at row "
                "%zu; max row constant C = %.12g; witness = (row, nu)",
                worst, worst_row, onestep_t1_constant(chain));
  report.notes = buf;
  return report;
}

InequalityReport t1_scan(const FiniteChain& chain, std::size_t samples,
                         std::uint64_t seed,
                         std::optional<double> c_override) {
  const std::size_t n = chain.size();
  InequalityReport report;
  report.name = "transport_entropy_t1";

  const CurvatureResult curvature = coarse_ricci(chain);
  const double kappa = curvature.kappa;
  if (kappa <= 0.0) {
    report.status = ReportStatus::report_only;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "curvature is not positive (kappa = %.12g): the curvature "
                  "route to the stationary transport-entropy bound does not "
                  "apply",
                  kappa);
    report.notes = buf;
    return report;
  }

  std::string notes;
  const double c_step = step_constant(chain, c_override, notes);
  const double bound = c_step / (kappa * (2.0 - kappa));
  report.constant = bound;
  report.status = ReportStatus::asserted_pass;
  {
    char buf[120];
    std::snprintf(buf, sizeof buf,
                  "kappa = %.12g; stationary bound C / (kappa (2 - kappa)) = "
                  "%.12g",
                  kappa, bound);
    append_note(notes, buf);
  }

  const auto& pi = chain.stationary().weights();
  double worst = 0.0;
  std::vector<double> worst_law;
  const auto consider = [&](const std::vector<double>& mu) {
    const double div = relative_entropy(mu, pi);
    if (div < 1e-15) return;
    const double dist = optimal_transport(mu, pi, chain.metric()).value;
    const double ratio = dist * dist / div;
    ++report.trials;
    if (ratio > worst) {
      worst = ratio;
      worst_law = mu;
    }
  };

  // Point masses.
  for (std::size_t x = 0; x < n; ++x) {
    std::vector<double> mu(n, 0.0);
    mu[x] = 1.0;
    consider(mu);
  }
  // Two-point mixtures: all pairs when feasible, else a deterministic sample.
  Rng pair_rng(split_seed(seed, 0x545031));
  static const double kWeights[] = {0.25, 0.5, 0.75};
  const std::size_t all_pairs = n * (n - 1) / 2;
  if (3 * all_pairs <= 1200) {
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = x + 1; y < n; ++y)
        for (const double w : kWeights) {
          std::vector<double> mu(n, 0.0);
          mu[x] = w;
          mu[y] = 1.0 - w;
          consider(mu);
        }
  } else {
    for (std::size_t s = 0; s < 400; ++s) {
      const std::size_t x = pair_rng.below(n);
      std::size_t y = pair_rng.below(n - 1);
      if (y >= x) ++y;
      for (const double w : kWeights) {
        std::vector<double> mu(n, 0.0);
        mu[x] = w;
        mu[y] = 1.0 - w;
        consider(mu);
      }
    }
  }
  // Dirichlet draws across concentration scales.
  Rng rng(split_seed(seed, 0x545030));
  for (std::size_t s = 0; s < samples; ++s) {
    const double beta = std::exp(rng.uniform(std::log(0.01), std::log(100.0)));
    consider(rng.dirichlet(n, beta));
  }

  report.worst_ratio = worst;
  if (worst > bound * (1.0 + kTol))
    report.status = ReportStatus::asserted_fail;
  if (!worst_law.empty()) report.witness = witness_vector(worst_law);
  {
    char buf[120];
    std::snprintf(buf, sizeof buf,
                  "max W1(mu, pi)^2 / D(mu || pi) = %.12g over %zu laws; "
                  "witness = mu",
                  worst, report.trials);
    append_note(notes, buf);
  }
  report.notes = notes;
  return report;
}

InequalityReport gaussian_concentration_check(const FiniteChain& chain,
                                              double t1_constant,
                                              std::size_t trials,
                                              std::uint64_t seed) {
  if (!(t1_constant > 0.0))
    throw std::invalid_argument(
        "gaussian_concentration_check: t1_constant must be positive");
  const std::size_t n = chain.size();
  const auto& pi = chain.stationary().weights();
  const Matrix& d = chain.metric();

  InequalityReport report;
  report.name = "gaussian_concentration";
  report.constant = 1.0;  // normalized: (log E e^h - E h) / ((C/4) L^2) <= 1
  report.status = ReportStatus::asserted_pass;

  double worst = -std::numeric_limits<double>::infinity();
  std::vector<double> worst_h;
  const auto consider = [&](const std::vector<double>& h) {
    const double lip = lipschitz_norm(h, d);
    if (!(lip > 1e-12) || !std::isfinite(lip)) return;
    double mean = 0.0, hmax = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      mean += pi[i] * h[i];
      hmax = std::max(hmax, h[i]);
    }
    double mgf = 0.0;
    for (std::size_t i = 0; i < n; ++i) mgf += pi[i] * std::exp(h[i] - hmax);
    const double log_mgf = std::log(mgf) + hmax;
    const double ratio =
        (log_mgf - mean) / (0.25 * t1_constant * lip * lip);
    ++report.trials;
    if (ratio > worst) {
      worst = ratio;
      worst_h = h;
    }
  };

  // Distance functions are 1-Lipschitz and extremal for many chains.
  for (std::size_t x0 = 0; x0 < n; ++x0) {
    std::vector<double> h(n);
    for (std::size_t y = 0; y < n; ++y) h[y] = d(x0, y);
    consider(h);
  }
  // McShane-regularized noise at log-uniform amplitudes.
  Rng rng(split_seed(seed, 0x47435348));
  for (std::size_t s = 0; s < trials; ++s) {
    const double scale = std::exp(rng.uniform(std::log(0.1), std::log(10.0)));
    std::vector<double> raw(n);
    for (auto& v : raw) v = scale * rng.normal();
    std::vector<double> h(n);
    for (std::size_t x = 0; x < n; ++x) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t y = 0; y < n; ++y)
        best = std::min(best, raw[y] + d(x, y));
      h[x] = best;
    }
    const double lambda = std::exp(rng.uniform(std::log(0.1), std::log(10.0)));
    for (auto& v : h) v *= lambda;
    consider(h);
  }

  report.worst_ratio = worst;
  if (worst > 1.0 + kTol) report.status = ReportStatus::asserted_fail;
  if (!worst_h.empty()) report.witness = witness_vector(worst_h);
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "max (log E_pi e^h - E_pi h) / ((C/4) ||h||_Lip^2) = %.12g "
                "with C = %.12g over %zu functions; witness = h",
                worst, t1_constant, report.trials);
  report.notes = buf;
  return report;
}

CouplingSimResult coupling_simulation(const FiniteChain& chain,
                                      const Distribution& nu, std::size_t x0,
                                      std::size_t horizon,
                                      std::size_t n_samples,
                                      std::uint64_t seed) {
  if (n_samples == 0)
    throw std::invalid_argument("coupling_simulation: need n_samples >= 1");
  const std::size_t n = chain.size();
  const DriftSchedule schedule = build_discrete_drift(chain, nu, x0, horizon);
  const CurvatureResult curvature = coarse_ricci(chain);

  CouplingSimResult result;
  result.kappa = curvature.kappa;
  std::string notes;
  result.constant = onestep_t1_constant(chain);
  {
    char buf[96];
    std::snprintf(buf, sizeof buf,
                  "one-step constant C = %.12g (max row diameter constant)",
                  result.constant);
    append_note(notes, buf);
  }
  result.divergence =
      relative_entropy(nu.weights(), schedule.base_endpoint.weights());
  const bool curved = curvature.kappa > 0.0;
  result.bound =
      curved ? std::sqrt(result.constant * result.divergence /
                         (curvature.kappa * (2.0 - curvature.kappa)))
             : std::numeric_limits<double>::infinity();

  result.report.name = "path_coupling_bound";
  result.report.constant = result.bound;
  result.report.status =
      curved ? ReportStatus::asserted_pass : ReportStatus::report_only;
  result.report.trials = n_samples;
  bool lemma_ok = true;
  double lemma_worst = -std::numeric_limits<double>::infinity();

  // Memoized exact couplings of (bridge row at a, base row at b) per step.
  struct PairSampler {
    std::vector<double> cdf;
    std::vector<std::pair<std::size_t, std::size_t>> states;
  };
  std::unordered_map<std::size_t, PairSampler> memo;
  const auto sampler_for = [&](std::size_t t, std::size_t a,
                               std::size_t b) -> const PairSampler& {
    const std::size_t key = (t * n + a) * n + b;
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    std::vector<double> qrow(n), prow_b(n);
    for (std::size_t y = 0; y < n; ++y) {
      qrow[y] = schedule.kernels[t](a, y);
      prow_b[y] = chain.kernel()(b, y);
    }
    const TransportPlan plan =
        optimal_transport(qrow, prow_b, chain.metric());
    // One-step estimate behind the endpoint bound, asserted on every
    // coupling actually solved: W1(q_t(a,.), p(b,.)) is at most the
    // transport cost of first repairing the drift tilt, then contracting.
    const double step_div = relative_entropy(qrow, kernel_row(chain, a));
    const double lemma_bound =
        std::sqrt(result.constant * std::max(0.0, step_div)) +
        (1.0 - curvature.kappa) * chain.metric()(a, b);
    lemma_worst = std::max(lemma_worst, plan.value - lemma_bound);
    if (plan.value > lemma_bound + kTol) lemma_ok = false;
    PairSampler sampler;
    double total = 0.0;
    for (std::size_t y1 = 0; y1 < n; ++y1)
      for (std::size_t y2 = 0; y2 < n; ++y2) {
        const double mass = plan.coupling(y1, y2);
        if (mass > 0.0) {
          total += mass;
          sampler.states.emplace_back(y1, y2);
          sampler.cdf.push_back(total);
        }
      }
    for (auto& c : sampler.cdf) c /= total;
    sampler.cdf.back() = 1.0;
    return memo.emplace(key, std::move(sampler)).first->second;
  };

  Rng rng(split_seed(seed, 0xC0));
  double mean = 0.0, m2 = 0.0;
  std::vector<double> endpoint_hist(n, 0.0);
  for (std::size_t s = 0; s < n_samples; ++s) {
    std::size_t x = x0, y = x0;
    for (std::size_t t = 0; t < horizon; ++t) {
      const PairSampler& sampler = sampler_for(t, x, y);
      const double u = rng.u01();
      const std::size_t idx =
          std::upper_bound(sampler.cdf.begin(), sampler.cdf.end(), u) -
          sampler.cdf.begin();
      const auto& pair = sampler.states[std::min(idx, sampler.states.size() - 1)];
      x = pair.first;
      y = pair.second;
    }
    endpoint_hist[x] += 1.0;
    const double dist = chain.metric()(x, y);
    const double delta = dist - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (dist - mean);
  }
  const double variance =
      n_samples > 1 ? m2 / static_cast<double>(n_samples - 1) : 0.0;
  result.mean_distance = mean;
  result.std_error = std::sqrt(variance / static_cast<double>(n_samples));
  for (auto& v : endpoint_hist) v /= static_cast<double>(n_samples);
  result.endpoint_tv = total_variation(endpoint_hist, nu.weights());
  result.exact_w1 = w1(chain, nu, schedule.base_endpoint).value;

  const double tv_threshold = std::max(
      0.02, 5.0 * std::sqrt(static_cast<double>(n) /
                            static_cast<double>(n_samples)));
  bool failed = false;
  if (!lemma_ok) {
    failed = true;
    append_note(notes, "one-step coupling estimate violated");
  }
  if (curved && mean - 3.0 * result.std_error > result.bound) {
    failed = true;
    append_note(notes, "mean coupled distance exceeds the endpoint bound");
  }
  if (result.exact_w1 > mean + 3.0 * result.std_error + kTol) {
    failed = true;
    append_note(notes,
                "exact W1 exceeds the simulated coupling cost: the sampler "
                "is not a coupling");
  }
  if (result.endpoint_tv > tv_threshold) {
    failed = true;
    append_note(notes, "bridge endpoint histogram is far from the target law");
  }
  if (failed) result.report.status = ReportStatus::asserted_fail;

  result.report.worst_ratio = mean;
  result.report.witness =
      witness_vector({mean, result.std_error, result.exact_w1});
  char buf[420];
  std::snprintf(
      buf, sizeof buf,
      "kappa = %.12g; E d(X_T, Y_T) = %.12g (SE %.3g) vs bound %.12g; exact "
      "W1(nu, mu_T) = %.12g; endpoint TV = %.3g (threshold %.3g); one-step "
      "estimate worst slack = %.3g over %zu couplings; witness = (mean, SE, "
      "exact W1)",
      curvature.kappa, mean, result.std_error, result.bound, result.exact_w1,
      result.endpoint_tv, tv_threshold, lemma_worst, memo.size());
  append_note(notes, buf);
  if (!curved)
    append_note(notes,
                "curvature is not positive, so the endpoint bound is vacuous "
                "(report only)");
  result.report.notes = notes;
  return result;
}

PeresTetaliReport peres_tetali_report(const FiniteChain& chain,
                                      const SobolevOptions& options) {
  PeresTetaliReport result;
  const CurvatureResult curvature = coarse_ricci(chain);
  result.kappa = curvature.kappa;
  result.mlsi = mlsi_constant(chain, options);
  result.rho0 = result.mlsi.value;
  result.ratio = curvature.kappa > 0.0 ? result.rho0 / curvature.kappa : 0.0;

  result.report.name = "peres_tetali_ratio";
  result.report.status = ReportStatus::report_only;
  result.report.constant = result.kappa;
  result.report.worst_ratio = result.ratio;
  result.report.trials = result.mlsi.restarts;

  std::string notes;
  {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "rho0 estimate = %.12g (optimizer upper bound, %s); kappa "
                  "= %.12g; rho0 / kappa = %.12g",
                  result.rho0, result.mlsi.status.c_str(), result.kappa,
                  result.ratio);
    append_note(notes, buf);
  }
  if (!is_lazy(chain))
    append_note(notes, "warning: chain is not lazy (conjecture assumes "
                       "holding probability >= 1/2)");
  if (!is_reversible(chain, chain.stationary()))
    append_note(notes, "warning: chain is not reversible");
  if (result.kappa <= 0.0)
    append_note(notes, "curvature is not positive: the conjectured lower "
                       "bound is vacuous here");
  else if (result.ratio < 0.01)
    append_note(notes, "ratio below 0.01: potential counterexample material, "
                       "worth a closer look");
  append_note(notes, "conjecture probe, never asserted");
  result.report.notes = notes;
  return result;
}

Conjecture2Report conjecture2_report(const FiniteChain& chain,
                                     const std::vector<double>& f,
                                     std::size_t x0,
                                     const std::vector<double>& t_grid) {
  const std::size_t n = chain.size();
  if (!is_reversible(chain, chain.stationary()))
    throw std::invalid_argument(
        "conjecture2_report: requires a reversible chain");
  if (f.size() != n)
    throw std::invalid_argument(
        "conjecture2_report: function size does not match chain");
  if (x0 >= n)
    throw std::invalid_argument("conjecture2_report: start state out of range");
  for (double v : f)
    if (!(v > 0.0))
      throw std::invalid_argument(
          "conjecture2_report: requires strictly positive f");

  const auto& pi = chain.stationary().weights();
  double mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) mass += pi[i] * f[i];
  std::vector<double> fn(n), logf(n);
  for (std::size_t i = 0; i < n; ++i) {
    fn[i] = f[i] / mass;
    logf[i] = std::log(fn[i]);
  }

  const CurvatureResult curvature = coarse_ricci(chain);
  Conjecture2Report result;
  result.kappa = curvature.kappa;
  result.alpha = curvature.alpha;
  result.entropy_limit = entropy_functional(pi, fn);
  result.dirichlet_limit = dirichlet_form(chain, fn, logf);
  result.t_grid = t_grid;

  const bool curved = curvature.kappa > 0.0;
  double worst = 0.0;
  for (const double t : t_grid) {
    if (!(t >= 0.0))
      throw std::invalid_argument(
          "conjecture2_report: horizons must be nonnegative");
    const double div = cumulative_path_entropy(chain, fn, x0, t, t);
    const double info = information_rate(chain, fn, x0, t);
    result.divergence.push_back(div);
    result.information.push_back(info);
    const double ratio =
        curved && info > 1e-15 ? div / (curvature.alpha * info) : 0.0;
    result.ratio.push_back(ratio);
    worst = std::max(worst, ratio);
  }

  result.report.name = "conjecture2_interpolation";
  result.report.status = ReportStatus::report_only;
  result.report.constant = 1.0;
  result.report.worst_ratio = worst;
  result.report.trials = t_grid.size();
  std::string notes;
  {
    char buf[240];
    std::snprintf(buf, sizeof buf,
                  "max D_T / (alpha I_T) = %.12g over the grid; kappa = "
                  "%.12g, alpha = %.12g; limits: Ent_pi(f) = %.12g, "
                  "E(f, log f) = %.12g",
                  worst, result.kappa, result.alpha, result.entropy_limit,
                  result.dirichlet_limit);
    append_note(notes, buf);
  }
  if (!curved)
    append_note(notes,
                "curvature is not positive: alpha is infinite and the "
                "conjectured comparison is vacuous (ratios reported as 0)");
  else if (worst > 1.0)
    append_note(notes, "ratio exceeds 1 somewhere: evidence against the "
                       "conjectured constant on this chain");
  append_note(notes, "conjecture probe, never asserted");
  result.report.notes = notes;
  return result;
}

}  // namespace mctk
