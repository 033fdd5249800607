#include "mctk/min_cost_flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mctk {
namespace {

constexpr double kFlowEps = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

FlowSolution solve_transshipment(const std::vector<double>& imbalance,
                                 const Matrix& cost) {
  const std::size_t n = imbalance.size();
  FlowSolution out;
  out.potential.assign(n, 0.0);

  // Nodes with |imbalance| <= eps sit the solve out entirely; the leftover
  // mass is far below every marginal tolerance downstream.
  std::vector<int> role(n, 0);  // +1 supply, -1 demand, 0 bystander
  std::vector<double> surplus(n, 0.0), deficit(n, 0.0);
  bool any_surplus = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (imbalance[i] > kFlowEps) {
      role[i] = 1;
      surplus[i] = imbalance[i];
      any_surplus = true;
    } else if (imbalance[i] < -kFlowEps) {
      role[i] = -1;
      deficit[i] = -imbalance[i];
    }
  }
  if (!any_surplus) return out;

  // Successive shortest paths on the bipartite residual graph:
  //   forward arc  s -> d  (cost d(s,d))   for every supply/demand pair,
  //   backward arc d -> s  (cost -d(s,d))  whenever gamma(s,d) > 0.
  // Dijkstra runs on Johnson-reduced costs, so node potentials certify
  // optimality round by round. Every participating node stays reachable
  // while surplus remains: demand nodes directly, exhausted supply nodes via
  // the flow they already emitted.
  Matrix gamma(n, n, 0.0);
  std::vector<double> pot(n, 0.0), dist(n);
  std::vector<std::size_t> parent(n);
  std::vector<char> done(n);

  const std::size_t max_rounds = 4 * n * n + 16;
  std::size_t rounds = 0;
  for (;;) {
    bool have_surplus = false, have_deficit = false;
    for (std::size_t i = 0; i < n; ++i) {
      have_surplus = have_surplus || surplus[i] > kFlowEps;
      have_deficit = have_deficit || deficit[i] > kFlowEps;
    }
    if (!have_surplus || !have_deficit) break;
    if (++rounds > max_rounds)
      throw std::logic_error("transport solver failed to terminate");

    for (std::size_t i = 0; i < n; ++i) {
      dist[i] = surplus[i] > kFlowEps ? 0.0 : kInf;
      parent[i] = i;
      done[i] = 0;
    }
    for (;;) {
      std::size_t u = n;
      double best = kInf;
      for (std::size_t i = 0; i < n; ++i)
        if (!done[i] && dist[i] < best) {
          best = dist[i];
          u = i;
        }
      if (u == n) break;
      done[u] = 1;
      if (role[u] == 1) {
        for (std::size_t v = 0; v < n; ++v) {
          if (done[v] || role[v] != -1) continue;
          double w = cost(u, v) + pot[u] - pot[v];
          if (w < 0.0) w = 0.0;  // roundoff clamp
          if (dist[u] + w < dist[v]) {
            dist[v] = dist[u] + w;
            parent[v] = u;
          }
        }
      } else if (role[u] == -1) {
        for (std::size_t v = 0; v < n; ++v) {
          if (done[v] || role[v] != 1 || gamma(v, u) <= kFlowEps) continue;
          double w = -cost(v, u) + pot[u] - pot[v];
          if (w < 0.0) w = 0.0;
          if (dist[u] + w < dist[v]) {
            dist[v] = dist[u] + w;
            parent[v] = u;
          }
        }
      }
    }

    std::size_t target = n;
    double best = kInf;
    for (std::size_t i = 0; i < n; ++i)
      if (deficit[i] > kFlowEps && dist[i] < best) {
        best = dist[i];
        target = i;
      }
    if (target == n)
      throw std::logic_error("transport solver: deficit unreachable");

    // Bottleneck along the alternating path, then apply it.
    double delta = deficit[target];
    std::size_t source = target;
    for (std::size_t v = target; parent[v] != v; v = parent[v]) {
      const std::size_t u = parent[v];
      if (role[u] == -1) delta = std::min(delta, gamma(v, u));
      source = u;
    }
    delta = std::min(delta, surplus[source]);

    for (std::size_t v = target; parent[v] != v; v = parent[v]) {
      const std::size_t u = parent[v];
      if (role[u] == 1) {
        gamma(u, v) += delta;  // forward arc supply -> demand
      } else {
        gamma(v, u) -= delta;  // backward arc demand -> supply
        // A residue at or below the visibility threshold would be skipped by
        // later rounds yet still bind the dual certificate; hand the dust
        // back to both endpoints and clear the arc so every positive arc
        // stays visible to the search.
        const double residue = gamma(v, u);
        if (residue > 0.0 && residue <= kFlowEps) {
          surplus[v] += residue;
          deficit[u] += residue;
          gamma(v, u) = 0.0;
        }
      }
    }
    surplus[source] -= delta;
    deficit[target] -= delta;

    // Cap unreached nodes at the largest finite label: reduced costs stay
    // nonnegative on every residual arc and no potential ever goes stale,
    // even for nodes that sat a round out and rejoin later.
    double cap = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (std::isfinite(dist[i])) cap = std::max(cap, dist[i]);
    for (std::size_t i = 0; i < n; ++i) pot[i] += std::min(dist[i], cap);
  }

  out.cost = 0.0;
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t d = 0; d < n; ++d)
      if (gamma(s, d) > 0.0) {
        out.moves.emplace_back(s, d, gamma(s, d));
        out.cost += gamma(s, d) * cost(s, d);
      }

  // Dual certificate on every state by Bellman-Ford over the difference
  // constraints  g(b) - g(a) <= d(a,b)  (all pairs)  and
  // g(y) - g(x) <= -d(x,y)  on flow-carrying arcs. Optimality of gamma makes
  // the system free of negative cycles, so relaxation settles within n+1
  // passes; the result is 1-Lipschitz everywhere and tight on every move,
  // hence sums against the imbalance to exactly the primal cost.
  {
    std::vector<double>& g = out.potential;
    g.assign(n, 0.0);
    bool changed = true;
    std::size_t pass = 0;
    while (changed) {
      if (++pass > n + 2)
        throw std::logic_error("transport solver: dual certification failed");
      changed = false;
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
          if (a == b) continue;
          const double bound = g[a] + cost(a, b);
          if (g[b] > bound + 1e-15) {
            g[b] = bound;
            changed = true;
          }
        }
      for (const auto& [x, y, amt] : out.moves) {
        (void)amt;
        const double bound = g[x] - cost(x, y);
        if (g[y] > bound + 1e-15) {
          g[y] = bound;
          changed = true;
        }
      }
    }
  }
  return out;
}

}  // namespace mctk
