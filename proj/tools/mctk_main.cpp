// mctk: analyze finite-state Markov chains — exact W1 transport, coarse
// Ricci curvature, transport-entropy and concentration checks, entropy-
// optimal bridges, log-Sobolev constants, heat-flow decay, and the two
// conjecture reports. Every subcommand emits a self-describing report
// (table, CSV, or JSON) whose bytes are determined by the inputs and seed.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mctk/chain.hpp"
#include "mctk/curvature.hpp"
#include "mctk/drift.hpp"
#include "mctk/functional.hpp"
#include "mctk/io.hpp"
#include "mctk/rng.hpp"
#include "mctk/transport.hpp"
#include "mctk/verify.hpp"

namespace {

using namespace mctk;

// ---------------------------------------------------------------------------
// Shared options and plumbing

struct CommonOptions {
  std::string zoo;          // family:n
  std::string chain_file;   // path
  double laziness = 0.5;    // holding probability (flip prob for two_state)
  std::uint64_t seed = 0;
  std::string format = "table";
  std::string out_path;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
  auto* zoo = cmd->add_option(
      "--zoo", opt.zoo,
      "Example chain as family:n with family in {complete, cycle, hypercube, "
      "two_state} (hypercube n = dimension)");
  auto* file = cmd->add_option("--chain", opt.chain_file,
                               "Chain description file (JSON)");
  zoo->excludes(file);
  cmd->add_option("--laziness", opt.laziness,
                  "Holding probability for zoo chains (flip probability for "
                  "two_state); default 0.5")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--seed", opt.seed, "Root seed for all randomness");
  cmd->add_option("--format", opt.format, "Output format: table, csv, json")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  cmd->add_option("--out", opt.out_path, "Write the report to this file");
}

FiniteChain resolve_chain(const CommonOptions& opt) {
  if (!opt.chain_file.empty()) return load_chain_file(opt.chain_file);
  if (opt.zoo.empty())
    throw std::invalid_argument("no chain given: pass --zoo family:n or --chain file");
  const auto colon = opt.zoo.find(':');
  if (colon == std::string::npos || colon + 1 >= opt.zoo.size())
    throw std::invalid_argument("--zoo must look like family:n (e.g. complete:8)");
  const std::string family = opt.zoo.substr(0, colon);
  const std::string count = opt.zoo.substr(colon + 1);
  char* end = nullptr;
  const unsigned long n = std::strtoul(count.c_str(), &end, 10);
  if (end == count.c_str() || *end != '\0' || n == 0)
    throw std::invalid_argument("bad size in --zoo '" + opt.zoo + "'");
  return chain_zoo(family, static_cast<std::size_t>(n), opt.laziness);
}

std::string chain_label(const CommonOptions& opt) {
  return opt.chain_file.empty() ? "zoo:" + opt.zoo : opt.chain_file;
}

void push_config(ResultDocument& doc, const std::string& key,
                 const std::string& value) {
  doc.config.emplace_back(key, value);
}
void push_config(ResultDocument& doc, const std::string& key, double value) {
  doc.config.emplace_back(key, format_double(value));
}
void push_config(ResultDocument& doc, const std::string& key,
                 std::uint64_t value) {
  doc.config.emplace_back(key, std::to_string(value));
}

// Configuration header shared by every subcommand (reproducibility: the
// report carries everything needed to rerun it).
ResultDocument begin_document(const std::string& command,
                              const CommonOptions& opt,
                              const FiniteChain& chain) {
  ResultDocument doc;
  push_config(doc, "command", command);
  push_config(doc, "chain", chain_label(opt));
  push_config(doc, "states", static_cast<std::uint64_t>(chain.size()));
  if (opt.chain_file.empty()) push_config(doc, "laziness", opt.laziness);
  push_config(doc, "seed", opt.seed);
  return doc;
}

// Renders, writes, and turns check statuses into the exit code
// (0 pass/report_only, 1 any asserted_fail).
int emit(const ResultDocument& doc, const CommonOptions& opt) {
  push_config(const_cast<ResultDocument&>(doc), "format", opt.format);
  const std::string text = render(doc, parse_format(opt.format));
  if (!opt.out_path.empty()) {
    std::ofstream out(opt.out_path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write to '" + opt.out_path + "'");
    out << text;
  } else {
    std::cout << text;
  }
  for (const auto& check : doc.checks)
    if (check.status == ReportStatus::asserted_fail) return 1;
  return 0;
}

// Default observable when none is given: 1 + d(s0, .) / diam, normalized to
// E_pi f = 1 — positive, non-constant on every chain with more than one
// state, and metric-aware.
std::vector<double> default_density(const FiniteChain& chain) {
  const std::size_t n = chain.size();
  std::vector<double> f(n, 1.0);
  if (chain.diameter() > 0.0)
    for (std::size_t i = 0; i < n; ++i)
      f[i] = 1.0 + chain.metric()(0, i) / chain.diameter();
  const auto& pi = chain.stationary().weights();
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += pi[i] * f[i];
  for (auto& v : f) v /= mean;
  return f;
}

std::vector<double> resolve_density(const FiniteChain& chain,
                                    const std::string& f_text,
                                    ResultDocument& doc) {
  if (f_text.empty()) {
    push_config(doc, "f", "default (1 + d(s0,.)/diam, normalized)");
    return default_density(chain);
  }
  auto f = parse_number_list(f_text);
  if (f.size() != chain.size())
    throw std::invalid_argument("--f needs exactly one value per state");
  push_config(doc, "f", f_text);
  return f;
}

Distribution resolve_law(const FiniteChain& chain, const std::string& text,
                         const char* flag) {
  auto w = parse_number_list(text);
  if (w.size() != chain.size())
    throw std::invalid_argument(std::string(flag) +
                                " needs exactly one value per state");
  return Distribution(w);
}

// The stationary transport-entropy constant C / (kappa (2 - kappa)) with its
// provenance, or nothing when curvature is not positive.
std::optional<double> stationary_t1_constant(const FiniteChain& chain,
                                             double kappa,
                                             std::string& provenance) {
  if (kappa <= 0.0) return std::nullopt;
  const double c_step = chain.metric_is_graph_distance()
                            ? 2.0
                            : onestep_t1_constant(chain);
  provenance = chain.metric_is_graph_distance()
                   ? "C = 2 (graph metric)"
                   : "C = max row diameter constant";
  return c_step / (kappa * (2.0 - kappa));
}

// ---------------------------------------------------------------------------
// Subcommand bodies

struct CurvatureArgs {
  CommonOptions common;
  std::string mode = "all_pairs";
  std::size_t trials = 50;
  bool verbose = false;
};

int run_curvature(const CurvatureArgs& args) {
  const FiniteChain chain = resolve_chain(args.common);
  ResultDocument doc = begin_document("curvature", args.common, chain);
  push_config(doc, "mode", args.mode);
  push_config(doc, "trials", static_cast<std::uint64_t>(args.trials));

  const CurvatureMode mode = args.mode == "neighbors_only"
                                 ? CurvatureMode::neighbors_only
                                 : CurvatureMode::all_pairs;
  const CurvatureResult curv = coarse_ricci(chain, mode, args.verbose);
  doc.scalars.emplace_back("kappa", curv.kappa);
  doc.scalars.emplace_back("alpha", curv.alpha);
  doc.scalars.emplace_back("witness_x", static_cast<double>(curv.witness_x));
  doc.scalars.emplace_back("witness_y", static_cast<double>(curv.witness_y));
  doc.scalars.emplace_back("witness_ratio", curv.witness_ratio);

  doc.checks.push_back(
      lipschitz_contraction_check(chain, curv, args.trials, args.common.seed));
  doc.checks.push_back(diameter_bound_check(chain, curv));

  if (args.verbose && curv.per_pair_table) {
    TableData table;
    table.title = "per-pair contraction ratios";
    table.columns = {"x", "y", "W1(p(x,.),p(y,.))/d(x,y)"};
    for (std::size_t x = 0; x < chain.size(); ++x)
      for (std::size_t y = x + 1; y < chain.size(); ++y) {
        const double r = (*curv.per_pair_table)(x, y);
        if (r > 0.0 || mode == CurvatureMode::all_pairs)
          table.rows.push_back(
              {static_cast<double>(x), static_cast<double>(y), r});
      }
    doc.tables.push_back(std::move(table));
  }
  return emit(doc, args.common);
}

struct W1Args {
  CommonOptions common;
  std::string mu_text, nu_text;
};

int run_w1(const W1Args& args) {
  const FiniteChain chain = resolve_chain(args.common);
  ResultDocument doc = begin_document("w1", args.common, chain);
  push_config(doc, "mu", args.mu_text);
  push_config(doc, "nu", args.nu_text);

  const Distribution mu = resolve_law(chain, args.mu_text, "--mu");
  const Distribution nu = resolve_law(chain, args.nu_text, "--nu");
  const TransportPlan plan = w1(chain, mu, nu);
  doc.scalars.emplace_back("w1", plan.value);

  TableData coupling;
  coupling.title = "optimal coupling (positive entries)";
  coupling.columns = {"from", "to", "mass"};
  for (std::size_t x = 0; x < chain.size(); ++x)
    for (std::size_t y = 0; y < chain.size(); ++y)
      if (plan.coupling(x, y) > 0.0)
        coupling.rows.push_back({static_cast<double>(x),
                                 static_cast<double>(y),
                                 plan.coupling(x, y)});
  doc.tables.push_back(std::move(coupling));

  TableData dual;
  dual.title = "optimal dual potential (1-Lipschitz)";
  dual.columns = {"state", "potential"};
  for (std::size_t x = 0; x < chain.size(); ++x)
    dual.rows.push_back({static_cast<double>(x), plan.dual_potential[x]});
  doc.tables.push_back(std::move(dual));
  return emit(doc, args.common);
}

struct T1Args {
  CommonOptions common;
  std::size_t samples = 1000;
  double c_override = 0.0;
  bool has_c = false;
};

int run_t1_scan(const T1Args& args) {
  const FiniteChain chain = resolve_chain(args.common);
  ResultDocument doc = begin_document("t1-scan", args.common, chain);
  push_config(doc, "samples", static_cast<std::uint64_t>(args.samples));
  if (args.has_c) push_config(doc, "C", args.c_override);

  const CurvatureResult curv = coarse_ricci(chain);
  doc.scalars.emplace_back("kappa", curv.kappa);
  doc.scalars.emplace_back("alpha", curv.alpha);
  doc.scalars.emplace_back("onestep_constant", onestep_t1_constant(chain));

  doc.checks.push_back(t1_scan(
      chain, args.samples, args.common.seed,
      args.has_c ? std::optional<double>(args.c_override) : std::nullopt));
  doc.checks.push_back(
      onestep_t1_report(chain, std::max<std::size_t>(1, args.samples / 10),
                        args.common.seed));
  return emit(doc, args.common);
}

struct ConcentrationArgs {
  CommonOptions common;
  std::size_t trials = 200;
  double c_override = 0.0;
  bool has_c = false;
};

int run_concentration(const ConcentrationArgs& args) {
  const FiniteChain chain = resolve_chain(args.common);
  ResultDocument doc = begin_document("concentration", args.common, chain);
  push_config(doc, "trials", static_cast<std::uint64_t>(args.trials));

  double constant;
  if (args.has_c) {
    constant = args.c_override;
    push_config(doc, "C", constant);
  } else {
    const CurvatureResult curv = coarse_ricci(chain);
    doc.scalars.emplace_back("kappa", curv.kappa);
    std::string provenance;
    const auto c = stationary_t1_constant(chain, curv.kappa, provenance);
    if (!c)
      throw std::invalid_argument(
          "curvature is not positive, so no transport-entropy constant is "
          "available; pass --C explicitly");
    constant = *c;
    push_config(doc, "C", format_double(constant) + " (" + provenance +
                              ", divided by kappa(2-kappa))");
  }
  doc.scalars.emplace_back("t1_constant", constant);
  doc.checks.push_back(gaussian_concentration_check(chain, constant,
                                                    args.trials,
                                                    args.common.seed));
  return emit(doc, args.common);
}

struct CouplingArgs {
  CommonOptions common;
  std::string nu_text;
  std::size_t x0 = 0;
  std::size_t horizon = 6;
  std::size_t samples = 20000;
};

int run_coupling_sim(const CouplingArgs& args) {
  const FiniteChain chain = resolve_chain(args.common);
  ResultDocument doc = begin_document("coupling-sim", args.common, chain);
  push_config(doc, "nu", args.nu_text);
  push_config(doc, "x0", static_cast<std::uint64_t>(args.x0));
  push_config(doc, "T", static_cast<std::uint64_t>(args.horizon));
  push_config(doc, "samples", static_cast<std::uint64_t>(args.samples));

  const Distribution nu = resolve_law(chain, args.nu_text, "--nu");
  const CouplingSimResult sim = coupling_simulation(
      chain, nu, args.x0, args.horizon, args.samples, args.common.seed);
  doc.scalars.emplace_back("kappa", sim.kappa);
  doc.scalars.emplace_back("onestep_constant", sim.constant);
  doc.scalars.emplace_back("divergence", sim.divergence);
  doc.scalars.emplace_back("bound", sim.bound);
  doc.scalars.emplace_back("mean_distance", sim.mean_distance);
  doc.scalars.emplace_back("std_error", sim.std_error);
  doc.scalars.emplace_back("exact_w1", sim.exact_w1);
  doc.scalars.emplace_back("endpoint_tv", sim.endpoint_tv);
  doc.checks.push_back(sim.report);
  return emit(doc, args.common);
}

struct DriftArgs {
  CommonOptions common;
  std::string nu_text;
  std::size_t x0 = 0;
  std::size_t horizon = 4;
  std::size_t rivals = 20;
};

int run_drift(const DriftArgs& args) {
  const FiniteChain chain = resolve_chain(args.common);
  ResultDocument doc = begin_document("drift", args.common, chain);
  push_config(doc, "nu", args.nu_text);
  push_config(doc, "x0", static_cast<std::uint64_t>(args.x0));
  push_config(doc, "T", static_cast<std::uint64_t>(args.horizon));
  push_config(doc, "rivals", static_cast<std::uint64_t>(args.rivals));

  const Distribution nu = resolve_law(chain, args.nu_text, "--nu");
  const DriftSchedule schedule =
      build_discrete_drift(chain, nu, args.x0, args.horizon);

  // Endpoint exactness (the h-transform must hit nu on the nose).
  const Distribution end = endpoint_law(chain, schedule);
  double worst = 0.0;
  for (std::size_t i = 0; i < chain.size(); ++i)
    worst = std::max(worst, std::fabs(end[i] - nu[i]));
  InequalityReport endpoint;
  endpoint.name = "bridge_endpoint_law";
  endpoint.constant = 1e-10;
  endpoint.worst_ratio = worst;
  endpoint.trials = chain.size();
  endpoint.status = worst <= 1e-10 ? ReportStatus::asserted_pass
                                   : ReportStatus::asserted_fail;
  endpoint.notes = "max |endpoint - nu| over states";
  doc.checks.push_back(endpoint);

  const auto steps = chain_rule_decomposition(chain, schedule);
  const double divergence =
      relative_entropy(nu.weights(), schedule.base_endpoint.weights());
  double total = 0.0;
  for (const double s : steps) total += s;
  InequalityReport chain_rule;
  chain_rule.name = "bridge_chain_rule";
  chain_rule.constant = 1e-9;
  chain_rule.worst_ratio = std::fabs(total - divergence);
  chain_rule.trials = steps.size();
  chain_rule.status = chain_rule.worst_ratio <= 1e-9
                          ? ReportStatus::asserted_pass
                          : ReportStatus::asserted_fail;
  chain_rule.notes = "per-step divergences sum to D(nu || mu_T) = " +
                     format_double(divergence);
  doc.checks.push_back(chain_rule);
  doc.scalars.emplace_back("divergence", divergence);

  // Path-table checks only when the trajectory space is enumerable.
  const double path_count =
      std::pow(static_cast<double>(chain.size()),
               static_cast<double>(args.horizon));
  if (path_count <= 1e6) {
    doc.checks.push_back(path_density_check(chain, schedule));
    doc.checks.push_back(entropy_optimality_check(chain, schedule, args.rivals,
                                                  args.common.seed));
  } else {
    InequalityReport skipped;
    skipped.name = "bridge_path_density";
    skipped.status = ReportStatus::report_only;
    skipped.notes = "trajectory space too large to enumerate (" +
                    format_double(path_count) +
                    " paths); endpoint and chain-rule checks above still ran";
    doc.checks.push_back(skipped);
  }

  TableData table;
  table.title = "per-step expected divergence";
  table.columns = {"t", "E D(q_t(X_t,.) || p(X_t,.))"};
  for (std::size_t t = 0; t < steps.size(); ++t)
    table.rows.push_back({static_cast<double>(t), steps[t]});
  doc.tables.push_back(std::move(table));
  return emit(doc, args.common);
}

struct SobolevArgs {
  CommonOptions common;
  std::size_t restarts = 32;
};

int run_sobolev(const SobolevArgs& args, bool modified) {
  const FiniteChain chain = resolve_chain(args.common);
  ResultDocument doc =
      begin_document(modified ? "mlsi" : "lsi", args.common, chain);
  push_config(doc, "restarts", static_cast<std::uint64_t>(args.restarts));

  SobolevOptions options;
  options.restarts = args.restarts;
  options.seed = args.common.seed;
  const SobolevEstimate estimate =
      modified ? mlsi_constant(chain, options) : lsi_constant(chain, options);
  doc.scalars.emplace_back(modified ? "rho0" : "rho", estimate.value);

  InequalityReport rep;
  rep.name = modified ? "mlsi_estimate" : "lsi_estimate";
  rep.constant = estimate.value;
  rep.worst_ratio = estimate.value;
  rep.trials = estimate.restarts;
  rep.status = ReportStatus::report_only;
  rep.witness = witness_vector(estimate.minimizer);
  rep.notes = std::string("optimizer upper bound on the infimum (") +
              estimate.status + "); witness = minimizing density";
  doc.checks.push_back(rep);
  return emit(doc, args.common);
}

struct HeatArgs {
  CommonOptions common;
  double t = 1.0;
  std::string f_text;
  std::string grid_text;
  std::size_t restarts = 8;
};

int run_heat(const HeatArgs& args) {
  const FiniteChain chain = resolve_chain(args.common);
  ResultDocument doc = begin_document("heat", args.common, chain);
  push_config(doc, "T", args.t);
  const std::vector<double> f = resolve_density(chain, args.f_text, doc);

  const auto& pi = chain.stationary().weights();
  const auto ht = heat_apply(chain, f, args.t);
  double mean_before = 0.0, mean_after = 0.0;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    mean_before += pi[i] * f[i];
    mean_after += pi[i] * ht[i];
  }
  doc.scalars.emplace_back("E_pi_f", mean_before);
  doc.scalars.emplace_back("E_pi_Htf", mean_after);
  doc.scalars.emplace_back("Ent_f", entropy_functional(pi, f));
  doc.scalars.emplace_back("Ent_Htf", entropy_functional(pi, ht));

  InequalityReport mass;
  mass.name = "heat_mass_conservation";
  mass.constant = 1e-9;
  mass.worst_ratio = std::fabs(mean_after - mean_before);
  mass.trials = 1;
  mass.status = mass.worst_ratio <= 1e-9 ? ReportStatus::asserted_pass
                                         : ReportStatus::asserted_fail;
  mass.notes = "|E_pi H_t f - E_pi f|";
  doc.checks.push_back(mass);

  // Semigroup law H_{t/2} H_{t/2} = H_t on this f.
  const auto half = heat_apply(chain, heat_apply(chain, f, args.t / 2.0),
                               args.t / 2.0);
  double law_err = 0.0;
  for (std::size_t i = 0; i < chain.size(); ++i)
    law_err = std::max(law_err, std::fabs(half[i] - ht[i]));
  InequalityReport law;
  law.name = "heat_semigroup_law";
  law.constant = 1e-9;
  law.worst_ratio = law_err;
  law.trials = 1;
  law.status = law_err <= 1e-9 ? ReportStatus::asserted_pass
                               : ReportStatus::asserted_fail;
  law.notes = "max |H_{t/2} H_{t/2} f - H_t f|";
  doc.checks.push_back(law);

  if (!args.grid_text.empty()) {
    const auto grid = parse_number_list(args.grid_text);
    push_config(doc, "T_grid", args.grid_text);
    SobolevOptions options;
    options.restarts = args.restarts;
    options.seed = args.common.seed;
    const SobolevEstimate mlsi = mlsi_constant(chain, options);
    doc.scalars.emplace_back("rho0", mlsi.value);
    const EntropyDecayReport decay =
        entropy_decay_check(chain, f, mlsi.value, grid);
    doc.checks.push_back(decay.report);
    TableData dtable;
    dtable.title = "entropy decay along the heat flow";
    dtable.columns = {"t", "Ent(H_t f)", "exp(-rho0 t) Ent(f)"};
    for (std::size_t i = 0; i < decay.times.size(); ++i)
      dtable.rows.push_back(
          {decay.times[i], decay.entropies[i], decay.bounds[i]});
    doc.tables.push_back(std::move(dtable));
  }

  TableData table;
  table.title = "heat flow at time T";
  table.columns = {"state", "f", "H_T f"};
  for (std::size_t i = 0; i < chain.size(); ++i)
    table.rows.push_back({static_cast<double>(i), f[i], ht[i]});
  doc.tables.push_back(std::move(table));
  return emit(doc, args.common);
}

struct InterpArgs {
  CommonOptions common;
  std::string f_text;
  std::size_t x0 = 0;
  std::string grid_text = "0.5,1,2,4,8";
};

int run_interp_scan(const InterpArgs& args) {
  const FiniteChain chain = resolve_chain(args.common);
  ResultDocument doc = begin_document("interp-scan", args.common, chain);
  push_config(doc, "x0", static_cast<std::uint64_t>(args.x0));
  push_config(doc, "T_grid", args.grid_text);
  const std::vector<double> f = resolve_density(chain, args.f_text, doc);
  const auto grid = parse_number_list(args.grid_text);

  const Conjecture2Report rep = conjecture2_report(chain, f, args.x0, grid);
  doc.scalars.emplace_back("kappa", rep.kappa);
  doc.scalars.emplace_back("alpha", rep.alpha);
  doc.scalars.emplace_back("entropy_limit", rep.entropy_limit);
  doc.scalars.emplace_back("dirichlet_limit", rep.dirichlet_limit);
  doc.checks.push_back(rep.report);

  TableData table;
  table.title = "entropic interpolation scan";
  table.columns = {"T", "D_T", "I_T", "D_T/(alpha I_T)"};
  for (std::size_t i = 0; i < grid.size(); ++i)
    table.rows.push_back(
        {rep.t_grid[i], rep.divergence[i], rep.information[i], rep.ratio[i]});
  doc.tables.push_back(std::move(table));
  return emit(doc, args.common);
}

struct ReportAllArgs {
  CommonOptions common;
  std::string f_text;
  std::string nu_text;
  std::size_t x0 = 0;
  std::size_t horizon = 6;
  std::size_t samples = 300;
  std::size_t trials = 100;
  std::size_t restarts = 16;
  std::string grid_text = "0.5,1,2,4";
};

int run_report_all(const ReportAllArgs& args) {
  const FiniteChain chain = resolve_chain(args.common);
  ResultDocument doc = begin_document("report-all", args.common, chain);
  push_config(doc, "samples", static_cast<std::uint64_t>(args.samples));
  push_config(doc, "trials", static_cast<std::uint64_t>(args.trials));
  push_config(doc, "restarts", static_cast<std::uint64_t>(args.restarts));
  push_config(doc, "T_grid", args.grid_text);
  if (!args.nu_text.empty()) {
    push_config(doc, "nu", args.nu_text);
    push_config(doc, "x0", static_cast<std::uint64_t>(args.x0));
    push_config(doc, "T", static_cast<std::uint64_t>(args.horizon));
  }
  const std::vector<double> f = resolve_density(chain, args.f_text, doc);
  const auto grid = parse_number_list(args.grid_text);

  // Curvature and its certified consequences.
  const CurvatureResult curv = coarse_ricci(chain);
  doc.scalars.emplace_back("kappa", curv.kappa);
  doc.scalars.emplace_back("alpha", curv.alpha);
  doc.checks.push_back(lipschitz_contraction_check(
      chain, curv, args.trials, split_seed(args.common.seed, 1)));
  doc.checks.push_back(diameter_bound_check(chain, curv));

  // Transport-entropy layer.
  doc.scalars.emplace_back("onestep_constant", onestep_t1_constant(chain));
  doc.checks.push_back(onestep_t1_report(
      chain, std::max<std::size_t>(1, args.samples / 10),
      split_seed(args.common.seed, 2)));
  doc.checks.push_back(
      t1_scan(chain, args.samples, split_seed(args.common.seed, 3)));
  std::string provenance;
  const auto t1c = stationary_t1_constant(chain, curv.kappa, provenance);
  if (t1c) {
    doc.scalars.emplace_back("t1_constant", *t1c);
    doc.checks.push_back(gaussian_concentration_check(
        chain, *t1c, args.trials, split_seed(args.common.seed, 4)));
  }

  // Bridge simulation when a target is supplied.
  if (!args.nu_text.empty()) {
    const Distribution nu = resolve_law(chain, args.nu_text, "--nu");
    const CouplingSimResult sim = coupling_simulation(
        chain, nu, args.x0, args.horizon,
        std::max<std::size_t>(2000, 20 * args.samples),
        split_seed(args.common.seed, 5));
    doc.scalars.emplace_back("coupling_bound", sim.bound);
    doc.scalars.emplace_back("coupling_mean", sim.mean_distance);
    doc.checks.push_back(sim.report);
  }

  // Functional constants and the two conjecture probes.
  SobolevOptions options;
  options.restarts = args.restarts;
  options.seed = split_seed(args.common.seed, 6);
  const SobolevEstimate lsi = lsi_constant(chain, options);
  doc.scalars.emplace_back("rho", lsi.value);
  const PeresTetaliReport pt = peres_tetali_report(chain, options);
  doc.scalars.emplace_back("rho0", pt.rho0);
  doc.checks.push_back(pt.report);

  const Conjecture2Report c2 = conjecture2_report(chain, f, args.x0, grid);
  doc.scalars.emplace_back("entropy_limit", c2.entropy_limit);
  doc.scalars.emplace_back("dirichlet_limit", c2.dirichlet_limit);
  doc.checks.push_back(c2.report);
  TableData interp;
  interp.title = "entropic interpolation scan";
  interp.columns = {"T", "D_T", "I_T", "D_T/(alpha I_T)"};
  for (std::size_t i = 0; i < grid.size(); ++i)
    interp.rows.push_back(
        {c2.t_grid[i], c2.divergence[i], c2.information[i], c2.ratio[i]});
  doc.tables.push_back(std::move(interp));

  const EntropyDecayReport decay = entropy_decay_check(chain, f, pt.rho0, grid);
  doc.checks.push_back(decay.report);
  TableData dtable;
  dtable.title = "entropy decay along the heat flow";
  dtable.columns = {"t", "Ent(H_t f)", "exp(-rho0 t) Ent(f)"};
  for (std::size_t i = 0; i < decay.times.size(); ++i)
    dtable.rows.push_back({decay.times[i], decay.entropies[i], decay.bounds[i]});
  doc.tables.push_back(std::move(dtable));

  return emit(doc, args.common);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "mctk: curvature, transport, and entropy analysis of finite Markov "
      "chains"};
  app.require_subcommand(1);

  CurvatureArgs curvature_args;
  auto* curvature_cmd = app.add_subcommand(
      "curvature", "Coarse Ricci curvature with contraction certificates");
  add_common(curvature_cmd, curvature_args.common);
  curvature_cmd->add_option("--mode", curvature_args.mode,
                            "all_pairs or neighbors_only")
      ->check(CLI::IsMember({"all_pairs", "neighbors_only"}));
  curvature_cmd->add_option("--trials", curvature_args.trials,
                            "Random Lipschitz functions for the contraction check");
  curvature_cmd->add_flag("--verbose", curvature_args.verbose,
                          "Include the per-pair ratio table");

  W1Args w1_args;
  auto* w1_cmd = app.add_subcommand(
      "w1", "Exact W1 distance with optimal coupling and dual certificate");
  add_common(w1_cmd, w1_args.common);
  w1_cmd->add_option("--mu", w1_args.mu_text, "First law (comma-separated)")
      ->required();
  w1_cmd->add_option("--nu", w1_args.nu_text, "Second law (comma-separated)")
      ->required();

  T1Args t1_args;
  auto* t1_cmd = app.add_subcommand(
      "t1-scan", "Transport-entropy inequality scan for the stationary law");
  add_common(t1_cmd, t1_args.common);
  t1_cmd->add_option("--samples", t1_args.samples, "Dirichlet sample count");
  t1_cmd->add_option("--C", t1_args.c_override,
                     "Override the one-step constant in the bound")
      ->each([&t1_args](const std::string&) { t1_args.has_c = true; });

  ConcentrationArgs conc_args;
  auto* conc_cmd = app.add_subcommand(
      "concentration", "Gaussian moment bound for Lipschitz observables");
  add_common(conc_cmd, conc_args.common);
  conc_cmd->add_option("--trials", conc_args.trials, "Random test functions");
  conc_cmd->add_option("--C", conc_args.c_override,
                       "Transport-entropy constant to test against")
      ->each([&conc_args](const std::string&) { conc_args.has_c = true; });

  CouplingArgs coupling_args;
  auto* coupling_cmd = app.add_subcommand(
      "coupling-sim", "Coupled bridge/base simulation against the W1 bound");
  add_common(coupling_cmd, coupling_args.common);
  coupling_cmd->add_option("--nu", coupling_args.nu_text, "Target endpoint law")
      ->required();
  coupling_cmd->add_option("--x0", coupling_args.x0, "Start state index");
  coupling_cmd->add_option("--T", coupling_args.horizon, "Number of steps");
  coupling_cmd->add_option("--samples", coupling_args.samples,
                           "Simulated trajectory pairs");

  DriftArgs drift_args;
  auto* drift_cmd = app.add_subcommand(
      "drift", "Entropy-optimal bridge construction and exactness checks");
  add_common(drift_cmd, drift_args.common);
  drift_cmd->add_option("--nu", drift_args.nu_text, "Target endpoint law")
      ->required();
  drift_cmd->add_option("--x0", drift_args.x0, "Start state index");
  drift_cmd->add_option("--T", drift_args.horizon, "Number of steps");
  drift_cmd->add_option("--rivals", drift_args.rivals,
                        "Rival processes for the optimality check");

  SobolevArgs lsi_args;
  auto* lsi_cmd = app.add_subcommand(
      "lsi", "Log-Sobolev constant estimate (optimizer upper bound)");
  add_common(lsi_cmd, lsi_args.common);
  lsi_cmd->add_option("--restarts", lsi_args.restarts, "Optimizer restarts");

  SobolevArgs mlsi_args;
  auto* mlsi_cmd = app.add_subcommand(
      "mlsi", "Modified log-Sobolev constant estimate (optimizer upper bound)");
  add_common(mlsi_cmd, mlsi_args.common);
  mlsi_cmd->add_option("--restarts", mlsi_args.restarts, "Optimizer restarts");

  HeatArgs heat_args;
  auto* heat_cmd = app.add_subcommand(
      "heat", "Heat semigroup evaluation and entropy decay");
  add_common(heat_cmd, heat_args.common);
  heat_cmd->add_option("--T", heat_args.t, "Evolution time")->required();
  heat_cmd->add_option("--f", heat_args.f_text,
                       "Observable (comma-separated; default distance-based)");
  heat_cmd->add_option("--T-grid", heat_args.grid_text,
                       "Also check entropy decay on this time grid");
  heat_cmd->add_option("--restarts", heat_args.restarts,
                       "Optimizer restarts for the decay rate");

  InterpArgs interp_args;
  auto* interp_cmd = app.add_subcommand(
      "interp-scan",
      "Entropic interpolation: path divergence vs information rate");
  add_common(interp_cmd, interp_args.common);
  interp_cmd->add_option("--f", interp_args.f_text,
                         "Terminal density (positive, comma-separated)");
  interp_cmd->add_option("--x0", interp_args.x0, "Start state index");
  interp_cmd->add_option("--T-grid", interp_args.grid_text, "Horizon grid");

  ReportAllArgs all_args;
  auto* all_cmd = app.add_subcommand(
      "report-all", "Every analysis on one chain in a single report");
  add_common(all_cmd, all_args.common);
  all_cmd->add_option("--f", all_args.f_text, "Terminal density for the scans");
  all_cmd->add_option("--nu", all_args.nu_text,
                      "Optional endpoint law: adds the coupling simulation");
  all_cmd->add_option("--x0", all_args.x0, "Start state index");
  all_cmd->add_option("--T", all_args.horizon, "Bridge horizon (steps)");
  all_cmd->add_option("--samples", all_args.samples, "Measure samples");
  all_cmd->add_option("--trials", all_args.trials, "Function trials");
  all_cmd->add_option("--restarts", all_args.restarts, "Optimizer restarts");
  all_cmd->add_option("--T-grid", all_args.grid_text, "Interpolation grid");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exit 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the diagnostic
    return 2;
  }

  try {
    if (curvature_cmd->parsed()) return run_curvature(curvature_args);
    if (w1_cmd->parsed()) return run_w1(w1_args);
    if (t1_cmd->parsed()) return run_t1_scan(t1_args);
    if (conc_cmd->parsed()) return run_concentration(conc_args);
    if (coupling_cmd->parsed()) return run_coupling_sim(coupling_args);
    if (drift_cmd->parsed()) return run_drift(drift_args);
    if (lsi_cmd->parsed()) return run_sobolev(lsi_args, false);
    if (mlsi_cmd->parsed()) return run_sobolev(mlsi_args, true);
    if (heat_cmd->parsed()) return run_heat(heat_args);
    if (interp_cmd->parsed()) return run_interp_scan(interp_args);
    if (all_cmd->parsed()) return run_report_all(all_args);
  } catch (const ChainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::logic_error& e) {
    // A violated internal certificate: the library caught itself producing
    // an uncertified answer. Loud failure, distinct from usage errors.
    std::cerr << "internal check failed: " << e.what() << "\n";
    return 1;
  }
  std::cerr << "error: no subcommand given\n";
  return 2;
}
