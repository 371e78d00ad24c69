#pragma once

#include <span>
#include <vector>

#include "bias.hpp"
#include "decision.hpp"
#include "queueing.hpp"
#include "topology.hpp"

namespace bpsim {

struct CommodityChoice {
  NodeId commodity;
  double weight = 0.0;  // max{biased differential, 0}
};

/// Commodity with the largest biased backlog differential
/// (U_i + B_i) - (U_j + B_j) over all commodities; ties go to the smallest id.
CommodityChoice optimal_commodity(NodeId from, NodeId to, const QueueMatrix& queues,
                                  const BiasMatrix& bias);

/// Max-weight allocation for non-interfering links: every link with positive
/// weight is offered its full capacity for its optimal commodity. Decisions
/// come out in link order (ascending source, then neighbor).
std::vector<TransmissionDecision> allocate_independent(const Topology& topo,
                                                       const QueueMatrix& queues,
                                                       const BiasMatrix& bias);

/// Sum over decisions of capacity * weight.
double allocation_objective(const Topology& topo,
                            std::span<const TransmissionDecision> decisions);

}  // namespace bpsim
