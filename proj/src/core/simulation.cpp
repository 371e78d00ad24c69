#include "simulation.hpp"

#include <fstream>

namespace bpsim {

Simulation::Simulation(Scenario scenario, SimulationOptions options)
    : scenario_(std::move(scenario)),
      options_(options),
      hops_(all_pairs_hops(scenario_.topology)),
      engine_(make_bias_engine(options.algorithm, scenario_.topology, hops_,
                               options.learning)),
      state_(scenario_.topology.node_count()),
      rng_(options.seed),
      metrics_(scenario_.flows.size(), options.warmup) {
  if (options_.record_trace) trace_.emplace(scenario_.topology.node_count());
}

void Simulation::step() {
  const Slot t = state_.slot();
  const QueueMatrix& queues = state_.queue_matrix();

  const BiasMatrix& bias = engine_->update(queues);
  last_bias_ = &bias;
  if (!within_bounds(bias, options_.learning.b_max)) ++bias_violations_;
  if (options_.qtable_dump && options_.qtable_dump_every > 0 &&
      t % options_.qtable_dump_every == 0) {
    dump_qtables();
  }

  decisions_ = allocate_independent(scenario_.topology, queues, bias);

  std::optional<QueueMatrix> before;
  if (trace_) before = queues;

  for (const Delivery& d : state_.apply_transmissions(decisions_)) {
    metrics_.record_delivery(d.packet, d.delivered_slot);
    const auto& flow = scenario_.flows[d.packet.flow];
    if (d.delivered_slot - d.packet.created_slot < hops_.at(flow.source, flow.destination)) {
      ++delay_violations_;
    }
  }

  const std::vector<Arrival> arrivals = sample_arrivals(scenario_.flows, state_, rng_);
  metrics_.record_arrivals(arrivals.size());
  for (const Arrival& a : arrivals) {
    if (auto d = state_.enqueue(a.node, a.packet)) metrics_.record_delivery(d->packet, t);
  }

  if (trace_) trace_->record_slot(t, *before, decisions_, arrivals);
  metrics_.record_total_queue(t, state_.queued());
  if (!state_.conserved()) ++conservation_violations_;
  state_.advance_slot();
}

void Simulation::run(std::uint64_t slots) {
  for (std::uint64_t k = 0; k < slots; ++k) step();
}

RunMetrics Simulation::finish() const {
  RunMetrics m = metrics_.finish(options_.stability_window, options_.stability_slope);
  m.bias_bound_violations = bias_violations_;
  m.conservation_violations = conservation_violations_;
  m.delay_bound_violations = delay_violations_;
  return m;
}

std::vector<TraceRow> Simulation::trace_rows() const {
  if (!trace_) return {};
  TraceRecorder copy = *trace_;
  copy.record_final(state_.slot(), state_.queue_matrix());
  return copy.take_rows();
}

void Simulation::dump_qtables() const {
  const QTables* tables = engine_->qtables();
  if (!tables) return;
  std::ostream& out = *options_.qtable_dump;
  const Topology& topo = scenario_.topology;
  const std::size_t n = topo.node_count();
  for (std::size_t id = 0; id < topo.link_count(); ++id) {
    const Link& l = topo.link(id);
    const auto row = tables->link_row(id);
    for (std::size_t c = 0; c < n; ++c) {
      out << state_.slot() << ',' << l.from.index << ',' << l.to.index << ',' << c << ','
          << row[c] << '\n';
    }
  }
}

SimulationOptions options_from(const SimConfig& config) {
  SimulationOptions o;
  o.algorithm = config.algorithm;
  o.learning = config.learning;
  o.seed = config.seed;
  o.warmup = config.warmup;
  o.stability_window = config.stability_window;
  o.stability_slope = config.stability_slope;
  o.record_trace = config.trace_path.has_value();
  o.qtable_dump_every = config.qtable_dump_every;
  return o;
}

RunMetrics run_single(const SimConfig& config) {
  SimulationOptions options = options_from(config);
  std::ofstream qdump;
  if (config.qtable_dump_path) {
    qdump.open(*config.qtable_dump_path);
    if (!qdump) throw std::runtime_error("cannot write " + *config.qtable_dump_path);
    qdump << "slot,node,neighbor,commodity,q\n";
    options.qtable_dump = &qdump;
  }
  Simulation sim(resolve_scenario(config), options);
  sim.run(config.slots);
  if (config.trace_path) {
    std::ofstream out(*config.trace_path);
    if (!out) throw std::runtime_error("cannot write " + *config.trace_path);
    write_trace_csv(out, sim.trace_rows());
  }
  return sim.finish();
}

}  // namespace bpsim
