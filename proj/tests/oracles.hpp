#pragma once

// Independent reference computations used only by the test suites. None of
// these call into the code paths they are checking.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

/// Poisson sampler by table lookup: the CDF is tabulated from the closed-form
/// pmf exp(k ln m - m - lgamma(k+1)) and the count is the first index whose
/// CDF exceeds the uniform. Uses the same 53-bit uniform construction over
/// the raw engine output as the simulator so both see the same draws.
class TablePoisson {
 public:
  explicit TablePoisson(double mean) {
    double cdf = 0.0;
    for (int k = 0; k < 200; ++k) {
      const double pmf =
          mean == 0.0 ? (k == 0 ? 1.0 : 0.0)
                      : std::exp(k * std::log(mean) - mean - std::lgamma(k + 1.0));
      cdf += pmf;
      table_.push_back(cdf);
      if (cdf >= 1.0 - 1e-17) break;
    }
  }

  std::uint32_t operator()(std::mt19937_64& engine) const {
    const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    const auto it = std::upper_bound(table_.begin(), table_.end(), u);
    return static_cast<std::uint32_t>(it - table_.begin());
  }

 private:
  std::vector<double> table_;
};

/// Adjacency-list graph for the brute-force oracles.
struct Graph {
  int n = 0;
  std::vector<std::vector<int>> out;  // out-neighbors
};

/// Minimum over all simple paths i -> ... -> c of the sum of queue[j][c] over
/// every node j after i on the path. +inf when no path exists.
inline double min_route_queue_sum(const Graph& g,
                                  const std::vector<std::vector<double>>& queue, int from,
                                  int dest) {
  if (from == dest) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  std::vector<bool> on_path(static_cast<std::size_t>(g.n), false);
  std::function<void(int, double)> walk = [&](int node, double cost) {
    if (node == dest) {
      best = std::min(best, cost);
      return;
    }
    on_path[node] = true;
    for (int next : g.out[node]) {
      if (!on_path[next]) walk(next, cost + queue[next][dest]);
    }
    on_path[node] = false;
  };
  walk(from, 0.0);
  return best;
}

struct OracleLink {
  int from = 0;
  int to = 0;
  double capacity = 1.0;
};

/// Exhaustive maximization of sum over links of capacity * (biased
/// differential of the commodity the link serves), over every joint choice
/// of {idle} or one commodity from `commodities` per link. Commodities
/// outside the list must have zero queue and bias everywhere, which makes
/// serving them worth exactly as much as idling.
inline double brute_force_max_weight(const std::vector<OracleLink>& links,
                                     const std::vector<int>& commodities,
                                     const std::vector<std::vector<double>>& pressure) {
  const std::size_t L = links.size();
  const std::size_t m = commodities.size() + 1;
  std::vector<double> value(L * m, 0.0);
  for (std::size_t l = 0; l < L; ++l) {
    for (std::size_t k = 1; k < m; ++k) {
      const int c = commodities[k - 1];
      value[l * m + k] =
          links[l].capacity * (pressure[links[l].from][c] - pressure[links[l].to][c]);
    }
  }
  // Odometer over all m^L joint assignments with a running sum.
  std::vector<std::size_t> digit(L, 0);
  double sum = 0.0;
  double best = 0.0;  // all idle
  while (true) {
    std::size_t l = 0;
    while (l < L) {
      sum -= value[l * m + digit[l]];
      if (++digit[l] < m) {
        sum += value[l * m + digit[l]];
        break;
      }
      digit[l] = 0;
      sum += value[l * m];
      ++l;
    }
    if (l == L) break;
    best = std::max(best, sum);
  }
  return best;
}

/// Plain differential-backlog backpressure: per link, the commodity with the
/// largest U_i - U_j (first one on ties), sent only when the differential is
/// positive. Returns (link index, commodity) pairs in link order.
inline std::vector<std::pair<int, int>> textbook_backpressure(
    const std::vector<OracleLink>& links, const std::vector<std::vector<double>>& queue) {
  std::vector<std::pair<int, int>> out;
  for (std::size_t l = 0; l < links.size(); ++l) {
    int best_c = -1;
    double best = 0.0;
    for (std::size_t c = 0; c < queue[0].size(); ++c) {
      const double diff = queue[links[l].from][c] - queue[links[l].to][c];
      if (diff > best) {
        best = diff;
        best_c = static_cast<int>(c);
      }
    }
    if (best_c >= 0) out.emplace_back(static_cast<int>(l), best_c);
  }
  return out;
}

/// All connected simple undirected graphs on n labeled nodes, as edge lists.
inline std::vector<std::vector<std::pair<int, int>>> connected_graphs(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
  }
  std::vector<std::vector<std::pair<int, int>>> graphs;
  const std::uint64_t total = std::uint64_t{1} << pairs.size();
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    std::vector<std::pair<int, int>> edges;
    std::vector<int> parent(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) parent[v] = v;
    std::function<int(int)> root = [&](int v) {
      return parent[v] == v ? v : parent[v] = root(parent[v]);
    };
    int components = n;
    for (std::size_t e = 0; e < pairs.size(); ++e) {
      if (mask >> e & 1) {
        edges.push_back(pairs[e]);
        const int ra = root(pairs[e].first), rb = root(pairs[e].second);
        if (ra != rb) {
          parent[ra] = rb;
          --components;
        }
      }
    }
    if (components == 1) graphs.push_back(std::move(edges));
  }
  return graphs;
}

}  // namespace oracle
