#include "scheduler.hpp"

#include <stdexcept>

namespace bpsim {

namespace {

CommodityChoice best_of(std::span<const double> from_pressure,
                        std::span<const double> to_pressure) {
  std::size_t best = 0;
  double best_diff = from_pressure[0] - to_pressure[0];
  for (std::size_t c = 1; c < from_pressure.size(); ++c) {
    const double diff = from_pressure[c] - to_pressure[c];
    if (diff > best_diff) {
      best_diff = diff;
      best = c;
    }
  }
  return {NodeId(best), best_diff > 0.0 ? best_diff : 0.0};
}

}  // namespace

CommodityChoice optimal_commodity(NodeId from, NodeId to, const QueueMatrix& queues,
                                  const BiasMatrix& bias) {
  const std::size_t n = queues.size();
  if (bias.size() != n || from.value() >= n || to.value() >= n || n == 0) {
    throw std::invalid_argument("optimal_commodity: mismatched sizes or node ids");
  }
  std::vector<double> p_from(n), p_to(n);
  for (std::size_t c = 0; c < n; ++c) {
    p_from[c] = queues.at(from, NodeId(c)) + bias.at(from, NodeId(c));
    p_to[c] = queues.at(to, NodeId(c)) + bias.at(to, NodeId(c));
  }
  return best_of(p_from, p_to);
}

std::vector<TransmissionDecision> allocate_independent(const Topology& topo,
                                                       const QueueMatrix& queues,
                                                       const BiasMatrix& bias) {
  const std::size_t n = topo.node_count();
  if (queues.size() != n || bias.size() != n) {
    throw std::invalid_argument("allocate_independent: matrix size mismatch");
  }
  // Biased backlog U + B, one row per node.
  std::vector<double> pressure(n * n);
  const auto u = queues.raw();
  const auto b = bias.raw();
  for (std::size_t k = 0; k < n * n; ++k) pressure[k] = static_cast<double>(u[k]) + b[k];

  std::vector<TransmissionDecision> decisions;
  const auto links = topo.links();
  for (std::uint32_t id = 0; id < links.size(); ++id) {
    const Link& l = links[id];
    if (l.capacity == 0) continue;
    const CommodityChoice choice =
        best_of({pressure.data() + l.from.value() * n, n},
                {pressure.data() + l.to.value() * n, n});
    if (choice.weight > 0.0) {
      decisions.push_back({id, l.from, l.to, choice.commodity, choice.weight, l.capacity});
    }
  }
  return decisions;
}

double allocation_objective(const Topology& topo,
                            std::span<const TransmissionDecision> decisions) {
  double total = 0.0;
  for (const auto& d : decisions) total += topo.link(d.link).capacity * d.weight;
  return total;
}

}  // namespace bpsim
