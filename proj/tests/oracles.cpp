#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mctk::oracle {
namespace {

// Minimal union-find over 2n bipartite nodes (rows 0..n-1, cols n..2n-1).
struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }
  std::size_t find(std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

// Solve the unique flow on a spanning tree of the bipartite graph by leaf
// peeling. Returns false if any edge would carry negative mass.
bool tree_flow_cost(const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                    std::vector<double> row_mass, std::vector<double> col_mass,
                    const Matrix& cost, double* out_cost) {
  const std::size_t n = row_mass.size();
  const std::size_t nodes = 2 * n;
  std::vector<std::size_t> degree(nodes, 0);
  std::vector<char> used(edges.size(), 0);
  for (const auto& [r, c] : edges) {
    ++degree[r];
    ++degree[n + c];
  }
  double total = 0.0;
  for (std::size_t peeled = 0; peeled < edges.size(); ++peeled) {
    std::size_t leaf = nodes;
    for (std::size_t v = 0; v < nodes; ++v)
      if (degree[v] == 1) {
        leaf = v;
        break;
      }
    if (leaf == nodes) return false;  // should not happen on a tree
    std::size_t e = edges.size();
    for (std::size_t i = 0; i < edges.size(); ++i)
      if (!used[i] &&
          (edges[i].first == leaf || n + edges[i].second == leaf)) {
        e = i;
        break;
      }
    if (e == edges.size()) return false;
    used[e] = 1;
    const auto [r, c] = edges[e];
    double flow;
    if (leaf == r) {
      flow = row_mass[r];
      col_mass[c] -= flow;
    } else {
      flow = col_mass[c];
      row_mass[r] -= flow;
    }
    if (flow < -1e-12) return false;
    if (flow > 0.0) total += flow * cost(r, c);
    --degree[r];
    --degree[n + c];
  }
  *out_cost = total;
  return true;
}

}  // namespace

double w1_vertex_enumeration(const std::vector<double>& mu,
                             const std::vector<double>& nu,
                             const Matrix& cost) {
  const std::size_t n = mu.size();
  if (n == 0 || nu.size() != n || cost.rows() != n || cost.cols() != n)
    throw std::invalid_argument("vertex enumeration oracle: size mismatch");
  if (n > 4)
    throw std::invalid_argument(
        "vertex enumeration oracle supports at most 4 states");
  if (n == 1) return 0.0;

  const std::size_t cells = n * n;
  const std::size_t k = 2 * n - 1;
  std::vector<std::size_t> pick(k);
  std::iota(pick.begin(), pick.end(), std::size_t{0});
  double best = std::numeric_limits<double>::infinity();
  for (;;) {
    UnionFind uf(2 * n);
    bool acyclic = true;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    edges.reserve(k);
    for (std::size_t idx : pick) {
      const std::size_t r = idx / n, c = idx % n;
      edges.emplace_back(r, c);
      if (!uf.unite(r, n + c)) {
        acyclic = false;
        break;
      }
    }
    // k = 2n-1 acyclic edges over 2n nodes form a spanning tree.
    if (acyclic) {
      double value;
      if (tree_flow_cost(edges, mu, nu, cost, &value))
        best = std::min(best, value);
    }
    // Next k-combination of {0..cells-1}.
    std::size_t i = k;
    while (i > 0 && pick[i - 1] == cells - k + (i - 1)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  if (!std::isfinite(best))
    throw std::logic_error("vertex enumeration oracle found no feasible tree");
  return best;
}

double w1_dual_enumeration(const std::vector<double>& mu,
                           const std::vector<double>& nu, const Matrix& cost) {
  const std::size_t n = mu.size();
  if (n == 0 || nu.size() != n || cost.rows() != n || cost.cols() != n)
    throw std::invalid_argument("dual enumeration oracle: size mismatch");
  long long diameter = 0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const double v = cost(a, b);
      const double r = std::round(v);
      if (std::abs(v - r) > 1e-9)
        throw std::invalid_argument(
            "dual enumeration oracle requires an integer-valued metric");
      diameter = std::max(diameter, static_cast<long long>(r));
    }
  const std::size_t base = static_cast<std::size_t>(diameter) + 1;
  double budget = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    budget *= static_cast<double>(base);
    if (budget > 2e7)
      throw std::invalid_argument(
          "dual enumeration oracle: candidate count exceeds budget");
  }

  std::vector<long long> g(n, 0);
  std::vector<double> diff(n);
  for (std::size_t i = 0; i < n; ++i) diff[i] = mu[i] - nu[i];
  double best = 0.0;  // g = 0 is always feasible
  for (;;) {
    bool lipschitz = true;
    for (std::size_t a = 0; a < n && lipschitz; ++a)
      for (std::size_t b = a + 1; b < n; ++b) {
        const double gap = static_cast<double>(std::llabs(g[a] - g[b]));
        if (gap > cost(a, b) + 1e-9) {
          lipschitz = false;
          break;
        }
      }
    if (lipschitz) {
      double value = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        value += static_cast<double>(g[i]) * diff[i];
      best = std::max(best, value);
    }
    // Odometer increment over {0..D}^n.
    std::size_t pos = 0;
    while (pos < n && g[pos] == diameter) g[pos++] = 0;
    if (pos == n) break;
    ++g[pos];
  }
  return best;
}

double w1_cycle_prefix(const std::vector<double>& mu,
                       const std::vector<double>& nu) {
  const std::size_t n = mu.size();
  if (n == 0 || nu.size() != n)
    throw std::invalid_argument("cycle prefix oracle: size mismatch");
  std::vector<double> prefix(n, 0.0);
  double running = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    running += mu[i] - nu[i];
    prefix[i] = running;
  }
  std::vector<double> sorted = prefix;
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted[n / 2];
  double total = 0.0;
  for (double s : prefix) total += std::abs(s - median);
  return total;
}

std::vector<double> stationary_power_oracle(const Matrix& kernel,
                                            std::size_t max_iters) {
  const std::size_t n = kernel.rows();
  std::vector<double> pi(n, 1.0 / static_cast<double>(n)), next(n);
  for (std::size_t it = 0; it < max_iters; ++it) {
    for (std::size_t y = 0; y < n; ++y) {
      double acc = 0.5 * pi[y];
      for (std::size_t x = 0; x < n; ++x) acc += 0.5 * pi[x] * kernel(x, y);
      next[y] = acc;
    }
    double delta = 0.0, mass = 0.0;
    for (std::size_t y = 0; y < n; ++y) {
      delta += std::abs(next[y] - pi[y]);
      mass += next[y];
    }
    for (std::size_t y = 0; y < n; ++y) pi[y] = next[y] / mass;
    if (delta < 1e-15) break;
  }
  return pi;
}

namespace {

struct SobolevLandscape {
  std::vector<double> pi;
  Matrix weight;  // pi(x) p(x,y)

  // Ent written as sum_i pi_i m [(1+d_i) log1p(d_i) - d_i], d_i = f_i/m - 1.
  // Each bracket is nonnegative, so the sum never cancels; the textbook
  // flogf - m log m form is useless near constant f, where Ent = O(d^2) while
  // both sums are O(1).  Long double for extra headroom on the zoomed grid.
  double entropy(const std::vector<double>& f) const {
    long double mean = 0.0L;
    for (std::size_t i = 0; i < f.size(); ++i)
      mean += static_cast<long double>(pi[i]) * f[i];
    if (!(mean > 0.0L)) return 0.0;
    long double ent = 0.0L;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const long double d = (f[i] - mean) / mean;
      const long double bracket =
          d > -1.0L
              ? (1.0L + d) * log1pl(d) - d
              : (f[i] > 0.0
                     ? 1.0L - (f[i] / mean) * (1.0L + logl(mean / f[i]))
                     : 1.0L);
      if (bracket > 0.0L) ent += pi[i] * mean * bracket;
    }
    return static_cast<double>(ent);
  }
  double lsi_numerator(const std::vector<double>& f) const {
    long double acc = 0.0L;
    for (std::size_t x = 0; x < f.size(); ++x)
      for (std::size_t y = 0; y < f.size(); ++y) {
        const long double d = std::sqrt(f[x]) - std::sqrt(f[y]);
        acc += 0.5L * weight(x, y) * d * d;
      }
    return static_cast<double>(acc);
  }
  double mlsi_numerator(const std::vector<double>& f) const {
    long double acc = 0.0L;
    for (std::size_t x = 0; x < f.size(); ++x)
      for (std::size_t y = 0; y < f.size(); ++y)
        acc += 0.5L * weight(x, y) *
               static_cast<long double>(f[x] - f[y]) *
               (std::log(f[x]) - std::log(f[y]));
    return static_cast<double>(acc);
  }
};

// Iteratively refined grid search over log f (coordinate 0 pinned to 0).
double grid_zoom(const SobolevLandscape& land, bool modified) {
  const std::size_t n = land.pi.size();
  const std::size_t dims = n - 1;
  const std::size_t points = dims <= 2 ? 41 : 21;
  std::vector<double> center(dims, 0.0);
  double half_width = 10.0;
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> f(n, 1.0);
  std::vector<std::size_t> idx(dims, 0);
  for (int round = 0; round < 14; ++round) {
    std::vector<double> best_point = center;
    std::fill(idx.begin(), idx.end(), std::size_t{0});
    for (;;) {
      for (std::size_t d = 0; d < dims; ++d) {
        const double frac =
            points == 1 ? 0.5
                        : static_cast<double>(idx[d]) /
                              static_cast<double>(points - 1);
        f[d + 1] = std::exp(center[d] + (2.0 * frac - 1.0) * half_width);
      }
      const double ent = land.entropy(f);
      if (ent > 1e-13) {
        const double ratio =
            (modified ? land.mlsi_numerator(f) : land.lsi_numerator(f)) / ent;
        if (ratio < best) {
          best = ratio;
          for (std::size_t d = 0; d < dims; ++d)
            best_point[d] = std::log(f[d + 1]);
        }
      }
      std::size_t pos = 0;
      while (pos < dims && idx[pos] == points - 1) idx[pos++] = 0;
      if (pos == dims) break;
      ++idx[pos];
    }
    center = best_point;
    half_width *= 0.3;
  }
  return best;
}

SobolevLandscape landscape_of(const FiniteChain& chain) {
  SobolevLandscape land;
  land.pi = chain.stationary().weights();
  const std::size_t n = chain.size();
  land.weight = Matrix(n, n, 0.0);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      land.weight(x, y) = land.pi[x] * chain.kernel()(x, y);
  return land;
}

}  // namespace

double lsi_grid_oracle(const FiniteChain& chain) {
  if (chain.size() < 2 || chain.size() > 4)
    throw std::invalid_argument("grid oracle supports 2..4 states");
  return grid_zoom(landscape_of(chain), /*modified=*/false);
}

double mlsi_grid_oracle(const FiniteChain& chain) {
  if (chain.size() < 2 || chain.size() > 4)
    throw std::invalid_argument("grid oracle supports 2..4 states");
  return grid_zoom(landscape_of(chain), /*modified=*/true);
}

}  // namespace mctk::oracle
