#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "decision.hpp"
#include "topology.hpp"

namespace bpsim {

using Slot = std::uint64_t;

struct Packet {
  std::uint64_t id = 0;
  NodeId commodity;
  Slot created_slot = 0;
  std::uint32_t flow = 0;
};

struct Delivery {
  Packet packet;
  Slot delivered_slot = 0;
};

struct TrafficFlow {
  NodeId source;
  NodeId destination;
  double rate = 0.0;  // mean packets/slot of the Poisson source
};

/// Informational bounds on per-node rates; not enforced on Poisson sources.
struct RateBounds {
  std::uint64_t mu_out_max = 0;
  std::uint64_t mu_in_max = 0;
  double a_max = 0.0;
};

RateBounds rate_bounds(const Topology& topo, std::span<const TrafficFlow> flows);

class QueueingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Per-run random stream. Uniform draws are built from the raw 64-bit
/// engine output so sequences are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Poisson(mean) by CDF inversion; consumes exactly one uniform draw.
  std::uint32_t poisson(double mean);

 private:
  std::mt19937_64 engine_;
};

/// N x N matrix of queue lengths U_i^(c), row = node, column = commodity.
class QueueMatrix {
 public:
  QueueMatrix() = default;
  explicit QueueMatrix(std::size_t n) : n_(n), len_(n * n, 0) {}

  std::size_t size() const { return n_; }
  std::uint32_t at(NodeId node, NodeId commodity) const {
    return len_[node.value() * n_ + commodity.value()];
  }
  std::uint32_t& at(NodeId node, NodeId commodity) {
    return len_[node.value() * n_ + commodity.value()];
  }
  std::span<const std::uint32_t> row(NodeId node) const {
    return {len_.data() + node.value() * n_, n_};
  }
  std::span<const std::uint32_t> raw() const { return len_; }
  std::uint64_t total() const;

  friend bool operator==(const QueueMatrix&, const QueueMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint32_t> len_;
};

/// Per-node, per-commodity FIFO queues plus the slot clock.
class NetworkState {
 public:
  explicit NetworkState(std::size_t n_nodes);

  std::size_t node_count() const { return n_; }
  Slot slot() const { return slot_; }
  void advance_slot() { ++slot_; }

  /// Mints a packet stamped with the current slot.
  Packet new_packet(NodeId commodity, std::uint32_t flow);

  /// Appends to queues[node][commodity], or delivers immediately when
  /// `node` is the packet's destination.
  std::optional<Delivery> enqueue(NodeId node, Packet packet);

  /// Executes one slot of transmissions. Each node serves its decisions in
  /// ascending neighbor order, moving min(offered, available) head packets.
  /// Only packets queued before the call can move; relayed packets join the
  /// receiving queue and become transmittable next slot.
  std::vector<Delivery> apply_transmissions(
      std::span<const TransmissionDecision> decisions);

  const QueueMatrix& queue_matrix() const { return lengths_; }
  const std::deque<Packet>& queue(NodeId node, NodeId commodity) const;

  std::uint64_t created() const { return created_; }
  std::uint64_t delivered() const { return delivered_; }
  std::uint64_t queued() const { return lengths_.total(); }
  bool conserved() const { return created_ == queued() + delivered_; }

 private:
  std::deque<Packet>& mutable_queue(NodeId node, NodeId commodity) {
    return queues_[node.value() * n_ + commodity.value()];
  }

  std::size_t n_;
  Slot slot_ = 0;
  std::uint64_t next_packet_id_ = 0;
  std::uint64_t created_ = 0;
  std::uint64_t delivered_ = 0;
  std::vector<std::deque<Packet>> queues_;
  QueueMatrix lengths_;
  std::vector<std::pair<NodeId, Packet>> in_flight_;
};

struct Arrival {
  NodeId node;
  Packet packet;
};

/// Draws one Poisson count per flow, in flow order, from `rng` and mints the
/// packets at the state's current slot.
std::vector<Arrival> sample_arrivals(std::span<const TrafficFlow> flows,
                                     NetworkState& state, Rng& rng);

}  // namespace bpsim
