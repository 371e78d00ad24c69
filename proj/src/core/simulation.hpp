#pragma once

#include <memory>
#include <optional>
#include <ostream>
#include <vector>

#include "bias.hpp"
#include "config.hpp"
#include "metrics.hpp"
#include "queueing.hpp"
#include "scheduler.hpp"
#include "trace.hpp"

namespace bpsim {

struct SimulationOptions {
  Algorithm algorithm = Algorithm::kBp;
  QLearningParams learning;
  std::uint64_t seed = 1;
  Slot warmup = 0;
  double stability_window = kDefaultStabilityWindow;
  double stability_slope = kDefaultStabilitySlope;
  bool record_trace = false;
  std::ostream* qtable_dump = nullptr;  // written every qtable_dump_every slots
  std::uint64_t qtable_dump_every = 0;
};

/// One single-threaded run of biased backpressure on a fixed scenario.
///
/// Each step() executes one slot in this order: snapshot U(t), extract
/// B(t), schedule, transmit, generate and enqueue arrivals, record metrics.
class Simulation {
 public:
  Simulation(Scenario scenario, SimulationOptions options);

  void step();
  void run(std::uint64_t slots);
  RunMetrics finish() const;

  const Topology& topology() const { return scenario_.topology; }
  const HopMatrix& hops() const { return hops_; }
  const NetworkState& state() const { return state_; }
  const BiasEngine& engine() const { return *engine_; }
  const BiasMatrix* last_bias() const { return last_bias_; }
  const std::vector<TransmissionDecision>& last_decisions() const { return decisions_; }
  const MetricsRecorder& metrics() const { return metrics_; }
  /// Null unless record_trace was requested.
  const TraceRecorder* trace() const { return trace_ ? &*trace_ : nullptr; }
  /// Rows including the final queue boundary; call after the last step.
  std::vector<TraceRow> trace_rows() const;

 private:
  void dump_qtables() const;

  Scenario scenario_;
  SimulationOptions options_;
  HopMatrix hops_;
  std::unique_ptr<BiasEngine> engine_;
  NetworkState state_;
  Rng rng_;
  MetricsRecorder metrics_;
  std::optional<TraceRecorder> trace_;
  const BiasMatrix* last_bias_ = nullptr;
  std::vector<TransmissionDecision> decisions_;
  std::uint64_t bias_violations_ = 0;
  std::uint64_t conservation_violations_ = 0;
  std::uint64_t delay_violations_ = 0;
};

SimulationOptions options_from(const SimConfig& config);

/// Resolves, runs cfg.slots slots and writes the trace / Q-table dump files
/// the config asks for.
RunMetrics run_single(const SimConfig& config);

}  // namespace bpsim
