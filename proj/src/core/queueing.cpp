#include "queueing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace bpsim {

RateBounds rate_bounds(const Topology& topo, std::span<const TrafficFlow> flows) {
  RateBounds bounds;
  for (std::size_t i = 0; i < topo.node_count(); ++i) {
    std::uint64_t out = 0, in = 0;
    for (auto id : topo.out_links(NodeId(i))) out += topo.link(id).capacity;
    for (auto id : topo.in_links(NodeId(i))) in += topo.link(id).capacity;
    bounds.mu_out_max = std::max(bounds.mu_out_max, out);
    bounds.mu_in_max = std::max(bounds.mu_in_max, in);
  }
  // E{A^2} = var + mean^2 for the summed Poisson sources of one node.
  std::vector<double> per_node(topo.node_count(), 0.0);
  for (const TrafficFlow& f : flows) {
    if (topo.contains(f.source)) per_node[f.source.value()] += f.rate;
  }
  for (double m : per_node) {
    bounds.a_max = std::max(bounds.a_max, std::sqrt(m + m * m));
  }
  return bounds;
}

std::uint32_t Rng::poisson(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw QueueingError("Poisson mean must be finite and non-negative");
  }
  const double u = uniform();
  double p = std::exp(-mean);
  if (p == 0.0) throw QueueingError("Poisson mean too large for inversion");
  double cdf = p;
  std::uint32_t k = 0;
  while (u >= cdf) {
    ++k;
    p *= mean / k;
    const double next = cdf + p;
    if (next == cdf) break;  // remaining tail below double resolution
    cdf = next;
  }
  return k;
}

std::uint64_t QueueMatrix::total() const {
  return std::accumulate(len_.begin(), len_.end(), std::uint64_t{0});
}

NetworkState::NetworkState(std::size_t n_nodes)
    : n_(n_nodes), queues_(n_nodes * n_nodes), lengths_(n_nodes) {}

Packet NetworkState::new_packet(NodeId commodity, std::uint32_t flow) {
  ++created_;
  return Packet{next_packet_id_++, commodity, slot_, flow};
}

std::optional<Delivery> NetworkState::enqueue(NodeId node, Packet packet) {
  if (node.value() >= n_ || packet.commodity.value() >= n_) {
    throw QueueingError("enqueue: node or commodity out of range");
  }
  if (node == packet.commodity) {
    ++delivered_;
    return Delivery{packet, slot_};
  }
  mutable_queue(node, packet.commodity).push_back(packet);
  ++lengths_.at(node, packet.commodity);
  return std::nullopt;
}

const std::deque<Packet>& NetworkState::queue(NodeId node, NodeId commodity) const {
  if (node.value() >= n_ || commodity.value() >= n_) {
    throw QueueingError("queue: node or commodity out of range");
  }
  return queues_[node.value() * n_ + commodity.value()];
}

std::vector<Delivery> NetworkState::apply_transmissions(
    std::span<const TransmissionDecision> decisions) {
  std::vector<std::size_t> order(decisions.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = decisions[a];
    const auto& y = decisions[b];
    return x.from != y.from ? x.from < y.from : x.to < y.to;
  });
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& d = decisions[order[k]];
    if (d.from.value() >= n_ || d.to.value() >= n_ || d.commodity.value() >= n_ ||
        d.from == d.to) {
      throw QueueingError("decision references an invalid link or commodity");
    }
    if (k > 0) {
      const auto& prev = decisions[order[k - 1]];
      if (prev.from == d.from && prev.to == d.to) {
        throw QueueingError("duplicate decision for link " +
                            std::to_string(d.from.index) + " -> " +
                            std::to_string(d.to.index));
      }
    }
  }

  // Pop everything first so packets relayed this slot cannot move again.
  in_flight_.clear();
  for (std::size_t k : order) {
    const auto& d = decisions[k];
    auto& q = mutable_queue(d.from, d.commodity);
    const std::size_t moved = std::min<std::size_t>(d.offered_rate, q.size());
    for (std::size_t m = 0; m < moved; ++m) {
      in_flight_.emplace_back(d.to, q.front());
      q.pop_front();
    }
    lengths_.at(d.from, d.commodity) -= static_cast<std::uint32_t>(moved);
  }

  std::vector<Delivery> delivered;
  for (auto& [to, packet] : in_flight_) {
    if (auto d = enqueue(to, packet)) delivered.push_back(*d);
  }
  return delivered;
}

std::vector<Arrival> sample_arrivals(std::span<const TrafficFlow> flows,
                                     NetworkState& state, Rng& rng) {
  std::vector<Arrival> out;
  for (std::size_t f = 0; f < flows.size(); ++f) {
    const std::uint32_t count = rng.poisson(flows[f].rate);
    for (std::uint32_t k = 0; k < count; ++k) {
      out.push_back({flows[f].source,
                     state.new_packet(flows[f].destination,
                                      static_cast<std::uint32_t>(f))});
    }
  }
  return out;
}

}  // namespace bpsim
