#include "mctk/chain.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <set>
#include <sstream>

namespace mctk {
namespace {

constexpr double kConstructionTol = 1e-12;
constexpr double kResidualTol = 1e-10;

std::string describe_index(const std::vector<std::string>& states, std::size_t i) {
  std::ostringstream os;
  os << "'" << states[i] << "' (index " << i << ")";
  return os.str();
}

}  // namespace

Distribution::Distribution(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw ChainError("distribution must have at least one state");
  double total = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    const double w = weights_[i];
    if (!(w >= 0.0)) {
      std::ostringstream os;
      os << "distribution weight at index " << i << " is negative or NaN (" << w << ")";
      throw ChainError(os.str());
    }
    total += w;
  }
  if (std::fabs(total - 1.0) > kConstructionTol) {
    std::ostringstream os;
    os << "distribution weights sum to " << total << " (expected 1 within 1e-12)";
    throw ChainError(os.str());
  }
  for (std::size_t i = 0; i < weights_.size(); ++i)
    if (weights_[i] > 0.0) support_.push_back(i);
}

Distribution Distribution::point_mass(std::size_t n, std::size_t at) {
  std::vector<double> w(n, 0.0);
  w.at(at) = 1.0;
  return Distribution(std::move(w));
}

Distribution Distribution::uniform(std::size_t n) {
  return Distribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

namespace {

// Undirected support graph: x ~ y iff x != y and (p(x,y) > 0 or p(y,x) > 0).
std::vector<std::vector<std::size_t>> support_adjacency(const Matrix& kernel) {
  const std::size_t n = kernel.rows();
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y)
      if (kernel(x, y) > 0.0 || kernel(y, x) > 0.0) {
        adj[x].push_back(y);
        adj[y].push_back(x);
      }
  return adj;
}

Matrix bfs_metric(const std::vector<std::vector<std::size_t>>& adj) {
  const std::size_t n = adj.size();
  Matrix d(n, n, std::numeric_limits<double>::infinity());
  for (std::size_t src = 0; src < n; ++src) {
    d(src, src) = 0.0;
    std::deque<std::size_t> queue{src};
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t v : adj[u])
        if (!std::isfinite(d(src, v))) {
          d(src, v) = d(src, u) + 1.0;
          queue.push_back(v);
        }
    }
  }
  return d;
}

// Attempts the direct stationary solve: least-squares of the stacked system
// [(p^T - I); 1^T] pi = [0; 1] via normal equations. Exactly solvable (and
// nondegenerate) iff the stationary distribution is unique.
bool stationary_direct(const Matrix& p, std::vector<double>& pi) {
  const std::size_t n = p.rows();
  Matrix b(n, n, 0.0);  // B = p^T - I
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) b(i, j) = p(j, i) - (i == j ? 1.0 : 0.0);
  // M = B^T B + J, rhs = 1.
  Matrix m(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 1.0;
      for (std::size_t k = 0; k < n; ++k) acc += b(k, i) * b(k, j);
      m(i, j) = acc;
    }
  std::vector<double> rhs(n, 1.0);
  return solve_linear(std::move(m), std::move(rhs), pi);
}

bool validate_stationary(const Matrix& p, std::vector<double>& pi) {
  double total = 0.0;
  for (double& v : pi) {
    if (!std::isfinite(v) || v < -kResidualTol) return false;
    if (v < 0.0) v = 0.0;
    total += v;
  }
  if (total <= 0.0) return false;
  for (double& v : pi) v /= total;
  const std::vector<double> next = vec_mat(pi, p);
  for (std::size_t i = 0; i < pi.size(); ++i)
    if (std::fabs(next[i] - pi[i]) > kResidualTol) return false;
  return true;
}

// Power iteration on the half-lazy kernel (same stationary measure, always
// aperiodic). Returns false when the iteration fails to settle.
bool stationary_power(const Matrix& p, std::vector<double>& pi) {
  const std::size_t n = p.rows();
  pi.assign(n, 1.0 / static_cast<double>(n));
  constexpr int kMaxIter = 200000;
  for (int it = 0; it < kMaxIter; ++it) {
    std::vector<double> next = vec_mat(pi, p);
    double delta = 0.0, total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = 0.5 * pi[i] + 0.5 * next[i];
      delta += std::fabs(next[i] - pi[i]);
      total += next[i];
    }
    for (double& v : next) v /= total;
    pi.swap(next);
    if (delta <= 1e-12) return true;
  }
  return false;
}

}  // namespace

FiniteChain build_chain(const ChainSpec& spec) {
  FiniteChain chain;
  const std::size_t n = spec.states.size();
  if (n == 0) throw ChainError("chain needs at least one state");
  {
    std::set<std::string> seen;
    for (const auto& name : spec.states)
      if (!seen.insert(name).second)
        throw ChainError("duplicate state name '" + name + "'");
  }
  chain.states_ = spec.states;

  if (spec.kernel.has_value() == spec.conductances.has_value())
    throw ChainError("exactly one of kernel / conductances must be given");

  if (spec.kernel) {
    const Matrix& k = *spec.kernel;
    if (k.rows() != n || k.cols() != n)
      throw ChainError("kernel must be square with one row per state");
    for (std::size_t i = 0; i < n; ++i) {
      double total = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double v = k(i, j);
        if (!(v >= 0.0) || v > 1.0 + kConstructionTol) {
          std::ostringstream os;
          os << "kernel entry (" << i << "," << j << ") = " << v
             << " outside [0, 1]";
          throw ChainError(os.str());
        }
        total += v;
      }
      if (std::fabs(total - 1.0) > kConstructionTol) {
        std::ostringstream os;
        os << "kernel row " << i << " sums to " << total
           << " (expected 1 within 1e-12)";
        throw ChainError(os.str());
      }
    }
    chain.kernel_ = k;
  } else {
    const Matrix& c = *spec.conductances;
    if (c.rows() != n || c.cols() != n)
      throw ChainError("conductance table must be square with one row per state");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (!(c(i, j) >= 0.0)) {
          std::ostringstream os;
          os << "conductance (" << i << "," << j << ") = " << c(i, j)
             << " is negative or NaN";
          throw ChainError(os.str());
        }
        if (std::fabs(c(i, j) - c(j, i)) > kConstructionTol * std::max(1.0, c(i, j))) {
          std::ostringstream os;
          os << "conductances not symmetric at (" << i << "," << j << ")";
          throw ChainError(os.str());
        }
      }
    Matrix k(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double total = 0.0;
      for (std::size_t j = 0; j < n; ++j) total += c(i, j);
      if (total <= 0.0)
        throw ChainError("state " + describe_index(spec.states, i) +
                         " has no incident conductance");
      for (std::size_t j = 0; j < n; ++j) k(i, j) = c(i, j) / total;
    }
    chain.kernel_ = std::move(k);
    chain.conductances_ = c;
  }

  if (spec.laziness) {
    const double lz = *spec.laziness;
    if (!(lz >= 0.0) || lz >= 1.0)
      throw ChainError("laziness must lie in [0, 1)");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        chain.kernel_(i, j) =
            (1.0 - lz) * chain.kernel_(i, j) + (i == j ? lz : 0.0);
  }

  const auto adj = support_adjacency(chain.kernel_);
  chain.graph_metric_ = bfs_metric(adj);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!std::isfinite(chain.graph_metric_(i, j)))
        throw ChainError("support graph is disconnected: no path between " +
                         describe_index(spec.states, i) + " and " +
                         describe_index(spec.states, j));

  if (spec.metric) {
    const Matrix& d = *spec.metric;
    if (d.rows() != n || d.cols() != n)
      throw ChainError("metric must be square with one row per state");
    for (std::size_t i = 0; i < n; ++i) {
      if (std::fabs(d(i, i)) > kConstructionTol)
        throw ChainError("metric diagonal must be zero at state " +
                         describe_index(spec.states, i));
      for (std::size_t j = 0; j < n; ++j) {
        if (!(d(i, j) >= 0.0))
          throw ChainError("metric entries must be nonnegative");
        if (i != j && d(i, j) <= 0.0) {
          std::ostringstream os;
          os << "metric must be positive off the diagonal; d(" << i << "," << j
             << ") = " << d(i, j);
          throw ChainError(os.str());
        }
        if (std::fabs(d(i, j) - d(j, i)) > kConstructionTol)
          throw ChainError("metric must be symmetric");
      }
    }
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        for (std::size_t z = 0; z < n; ++z)
          if (d(x, z) > d(x, y) + d(y, z) + kConstructionTol) {
            std::ostringstream os;
            os << "metric violates the triangle inequality on (" << x << ","
               << y << "," << z << ")";
            throw ChainError(os.str());
          }
    chain.metric_ = d;
    chain.metric_is_graph_ = true;
    for (std::size_t i = 0; i < n && chain.metric_is_graph_; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (std::fabs(d(i, j) - chain.graph_metric_(i, j)) > kConstructionTol) {
          chain.metric_is_graph_ = false;
          break;
        }
    if (!chain.metric_is_graph_) {
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
          if (x != y && chain.kernel_(x, y) > 0.0 &&
              d(x, y) > 1.0 + kConstructionTol) {
            std::ostringstream os;
            os << "metric assigns distance " << d(x, y) << " > 1 to kernel edge "
               << describe_index(spec.states, x) << " -> "
               << describe_index(spec.states, y)
               << "; graph-walk constants (C = 2) do not apply";
            chain.warnings_.push_back(os.str());
          }
    }
  } else {
    chain.metric_ = chain.graph_metric_;
    chain.metric_is_graph_ = true;
  }

  chain.diameter_ = 0.0;
  for (double v : chain.metric_.data()) chain.diameter_ = std::max(chain.diameter_, v);

  // Stationary measure: direct solve first, half-lazy power iteration as the
  // fallback; either result must pass the pi P = pi residual check.
  {
    std::vector<double> pi;
    bool ok = stationary_direct(chain.kernel_, pi) &&
              validate_stationary(chain.kernel_, pi);
    if (!ok) {
      ok = stationary_power(chain.kernel_, pi) &&
           validate_stationary(chain.kernel_, pi);
    }
    if (ok) {
      chain.stationary_ = Distribution(std::move(pi));
    } else {
      chain.stationary_error_ =
          "no unique stationary distribution: the direct solve is degenerate "
          "and power iteration did not converge";
    }
  }

  return chain;
}

const Distribution& FiniteChain::stationary() const {
  if (!stationary_) throw ErgodicityError(stationary_error_);
  return *stationary_;
}

Distribution stationary_measure(const FiniteChain& chain) { return chain.stationary(); }

Matrix graph_distance(const FiniteChain& chain) { return chain.graph_metric(); }

bool is_lazy(const FiniteChain& chain) {
  for (std::size_t i = 0; i < chain.size(); ++i)
    if (chain.kernel()(i, i) < 0.5 - kConstructionTol) return false;
  return true;
}

bool is_reversible(const FiniteChain& chain, const Distribution& pi) {
  const std::size_t n = chain.size();
  if (pi.size() != n) throw ChainError("measure size does not match the chain");
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y)
      if (std::fabs(pi[x] * chain.kernel()(x, y) - pi[y] * chain.kernel()(y, x)) >
          kResidualTol)
        return false;
  return true;
}

bool is_reversible(const FiniteChain& chain) {
  return is_reversible(chain, chain.stationary());
}

Distribution propagate(const FiniteChain& chain, const Distribution& mu, int t) {
  if (mu.size() != chain.size())
    throw ChainError("distribution size does not match the chain");
  if (t < 0) throw ChainError("step count must be nonnegative");
  std::vector<double> w = mu.weights();
  for (int s = 0; s < t; ++s) w = vec_mat(w, chain.kernel());
  return Distribution(std::move(w));
}

std::vector<double> apply_kernel_power(const FiniteChain& chain,
                                       std::span<const double> f, int t) {
  if (f.size() != chain.size())
    throw ChainError("function size does not match the chain");
  if (t < 0) throw ChainError("step count must be nonnegative");
  std::vector<double> g(f.begin(), f.end());
  for (int s = 0; s < t; ++s) g = mat_vec(chain.kernel(), g);
  return g;
}

namespace {

FiniteChain zoo_from_edges(std::vector<std::string> states,
                           const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                           double holding) {
  const std::size_t n = states.size();
  Matrix c(n, n, 0.0);
  std::vector<double> degree(n, 0.0);
  for (const auto& [u, v] : edges) {
    c(u, v) += 1.0;
    c(v, u) += 1.0;
    degree[u] += 1.0;
    degree[v] += 1.0;
  }
  if (holding > 0.0)
    for (std::size_t i = 0; i < n; ++i)
      c(i, i) = degree[i] * holding / (1.0 - holding);
  ChainSpec spec;
  spec.states = std::move(states);
  spec.conductances = std::move(c);
  return build_chain(spec);
}

std::vector<std::string> numbered_states(std::size_t n) {
  std::vector<std::string> states(n);
  for (std::size_t i = 0; i < n; ++i) states[i] = "s" + std::to_string(i);
  return states;
}

}  // namespace

FiniteChain chain_zoo(const std::string& family, std::size_t n, double param) {
  if (family == "two_state") {
    if (n != 2) throw ChainError("two_state requires n = 2");
    const double a = param;
    if (!(a > 0.0) || a > 1.0)
      throw ChainError("two_state flip probability must lie in (0, 1]");
    // Symmetric: conductance a across, 1-a held, unit row totals.
    Matrix c(2, 2, 0.0);
    c(0, 1) = c(1, 0) = a;
    c(0, 0) = c(1, 1) = 1.0 - a;
    ChainSpec spec;
    spec.states = numbered_states(2);
    spec.conductances = std::move(c);
    return build_chain(spec);
  }

  const double holding = param;
  if (!(holding >= 0.0) || holding >= 1.0)
    throw ChainError("holding probability must lie in [0, 1)");

  if (family == "complete") {
    if (n < 2) throw ChainError("complete requires n >= 2");
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = x + 1; y < n; ++y) edges.emplace_back(x, y);
    return zoo_from_edges(numbered_states(n), edges, holding);
  }
  if (family == "cycle") {
    if (n < 3) throw ChainError("cycle requires n >= 3");
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t x = 0; x < n; ++x) edges.emplace_back(x, (x + 1) % n);
    return zoo_from_edges(numbered_states(n), edges, holding);
  }
  if (family == "hypercube") {
    if (n < 1 || n > 12)
      throw ChainError("hypercube dimension must lie in [1, 12]");
    const std::size_t size = std::size_t{1} << n;
    std::vector<std::string> states(size);
    for (std::size_t x = 0; x < size; ++x) {
      std::string bits(n, '0');
      for (std::size_t b = 0; b < n; ++b)
        if (x & (std::size_t{1} << b)) bits[n - 1 - b] = '1';
      states[x] = bits;
    }
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t x = 0; x < size; ++x)
      for (std::size_t b = 0; b < n; ++b) {
        const std::size_t y = x ^ (std::size_t{1} << b);
        if (x < y) edges.emplace_back(x, y);
      }
    return zoo_from_edges(std::move(states), edges, holding);
  }
  throw ChainError("unknown zoo family '" + family +
                   "' (expected complete, cycle, hypercube, two_state)");
}

}  // namespace mctk
