#pragma once

#include <cstdint>

#include "topology.hpp"

namespace bpsim {

/// One link's schedule for a slot: commodity, pressure-gradient weight and
/// offered rate. A decision exists only for links whose weight is positive.
struct TransmissionDecision {
  std::uint32_t link = 0;
  NodeId from;
  NodeId to;
  NodeId commodity;
  double weight = 0.0;
  std::uint32_t offered_rate = 0;

  friend bool operator==(const TransmissionDecision&,
                         const TransmissionDecision&) = default;
};

}  // namespace bpsim
