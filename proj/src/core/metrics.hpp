#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "queueing.hpp"

namespace bpsim {

struct DelayRecord {
  std::uint32_t flow = 0;
  Slot created_slot = 0;
  Slot delivered_slot = 0;
  Slot delay = 0;
};

struct StabilityVerdict {
  double slope = 0.0;  // packets/slot
  bool stable = true;
};

inline constexpr double kDefaultStabilityWindow = 0.5;
inline constexpr double kDefaultStabilitySlope = 0.01;

struct RunMetrics {
  std::uint64_t slots = 0;
  std::uint64_t arrival_count = 0;
  std::uint64_t delivered_count = 0;
  std::optional<double> avg_delay;
  std::optional<double> p95_delay;
  std::vector<std::optional<double>> flow_avg_delay;
  std::vector<std::uint64_t> total_queue_series;  // sum of U after each slot
  double mean_total_queue = 0.0;
  std::optional<StabilityVerdict> stability;  // absent for runs under 100 slots

  // Per-slot self-checks performed while the run executed.
  std::uint64_t bias_bound_violations = 0;
  std::uint64_t conservation_violations = 0;
  std::uint64_t delay_bound_violations = 0;
};

/// Least-squares slope of the last `window_fraction` of the series.
/// Requires at least 100 points.
StabilityVerdict stability_verdict(std::span<const std::uint64_t> series,
                                   double window_fraction = kDefaultStabilityWindow,
                                   double max_slope = kDefaultStabilitySlope);

/// delivered / arrivals. Throws when nothing arrived.
double throughput_ratio(const RunMetrics& metrics);

/// Accumulates deliveries and queue totals over one run.
class MetricsRecorder {
 public:
  /// Packets created before `warmup` are left out of delay statistics and
  /// slots before it out of the queue mean.
  MetricsRecorder(std::size_t n_flows, Slot warmup = 0);

  void record_arrivals(std::uint64_t count) { arrivals_ += count; }
  void record_delivery(const Packet& packet, Slot slot);
  void record_total_queue(Slot slot, std::uint64_t total);

  const std::vector<DelayRecord>& delays() const { return delays_; }
  std::uint64_t delivered() const { return delivered_; }

  /// Mean of the recorded delays; absent when there are none.
  std::optional<double> average_delay() const;

  RunMetrics finish(double window_fraction = kDefaultStabilityWindow,
                    double max_slope = kDefaultStabilitySlope) const;

 private:
  std::size_t n_flows_;
  Slot warmup_;
  std::uint64_t arrivals_ = 0;
  std::uint64_t delivered_ = 0;
  std::vector<DelayRecord> delays_;
  std::vector<std::uint64_t> series_;
  std::vector<Slot> series_slot_;
};

}  // namespace bpsim
