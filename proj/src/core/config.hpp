#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bias.hpp"
#include "metrics.hpp"
#include "queueing.hpp"
#include "topology.hpp"

namespace bpsim {

/// Configuration problem tied to one field of the config text.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct GridSpec {
  std::size_t rows = 8;
  std::size_t cols = 8;
};

struct EdgeFileSpec {
  std::string path;
};

using TopologySpec = std::variant<GridSpec, EdgeFileSpec>;

/// A flow endpoint: 1-based grid coordinate or a raw node id.
using Endpoint = std::variant<GridCoord, NodeId>;

struct FlowSpec {
  Endpoint source;
  Endpoint destination;
  std::optional<double> rate;  // overrides the shared lambda
};

struct SimConfig {
  TopologySpec topology = GridSpec{};
  std::uint32_t capacity = 1;  // grid link capacity
  std::vector<FlowSpec> flows;
  std::optional<double> lambda;
  Algorithm algorithm = Algorithm::kBp;
  QLearningParams learning;
  std::uint64_t slots = 100000;
  std::uint64_t seed = 1;
  std::uint64_t warmup = 0;
  double stability_window = kDefaultStabilityWindow;
  double stability_slope = kDefaultStabilitySlope;
  std::optional<std::string> trace_path;
  std::optional<std::string> qtable_dump_path;
  std::uint64_t qtable_dump_every = 0;
};

/// A config resolved against its topology: concrete node ids and rates.
struct Scenario {
  Topology topology;
  std::vector<TrafficFlow> flows;
};

/// Parses `key = value` lines (`#` comments). Applies defaults, then runs
/// validate_config. Throws ConfigError naming the offending field.
SimConfig parse_config(std::string_view text);
SimConfig load_config(const std::string& path);

/// Builds the topology and resolves flows; throws ConfigError.
Scenario resolve_scenario(const SimConfig& config);
void validate_config(const SimConfig& config);

/// Renders a config back to the text format parse_config accepts.
std::string to_text(const SimConfig& config);

/// The fixed 8x8 grid, unit capacity, eight-flow scenario at shared rate
/// `lambda`.
SimConfig eight_flow_scenario(double lambda = 0.1, Algorithm algorithm = Algorithm::kQlspBp);

}  // namespace bpsim
