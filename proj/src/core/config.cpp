#include "config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace bpsim {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_real(std::string_view field, std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || end != text.data() + text.size() || !std::isfinite(v)) {
    throw ConfigError(std::string(field), "expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

std::uint64_t parse_count(std::string_view field, std::string_view text) {
  text = trim(text);
  std::uint64_t v = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw ConfigError(std::string(field),
                      "expected a non-negative integer, got '" + std::string(text) + "'");
  }
  return v;
}

// "(r,c)", "r,c" or a bare node id.
Endpoint parse_endpoint(std::string_view field, std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '(') {
    if (text.back() != ')') throw ConfigError(std::string(field), "unbalanced '('");
    text = trim(text.substr(1, text.size() - 2));
  }
  if (const auto comma = text.find(','); comma != std::string_view::npos) {
    const auto row = parse_count(field, text.substr(0, comma));
    const auto col = parse_count(field, text.substr(comma + 1));
    if (row > 1u << 20 || col > 1u << 20) {
      throw ConfigError(std::string(field), "coordinate out of range");
    }
    return GridCoord{static_cast<int>(row), static_cast<int>(col)};
  }
  const auto id = parse_count(field, text);
  if (id > std::numeric_limits<std::uint32_t>::max()) {
    throw ConfigError(std::string(field), "node id out of range");
  }
  return NodeId(static_cast<std::size_t>(id));
}

// "<endpoint> -> <endpoint> [@ rate]"
FlowSpec parse_flow(std::string_view text) {
  FlowSpec flow;
  const auto arrow = text.find("->");
  if (arrow == std::string_view::npos) {
    throw ConfigError("flow", "expected '<source> -> <destination> [@ rate]'");
  }
  std::string_view rhs = text.substr(arrow + 2);
  if (const auto at = rhs.find('@'); at != std::string_view::npos) {
    flow.rate = parse_real("flow", rhs.substr(at + 1));
    rhs = rhs.substr(0, at);
  }
  flow.source = parse_endpoint("flow", text.substr(0, arrow));
  flow.destination = parse_endpoint("flow", rhs);
  return flow;
}

std::string endpoint_text(const Endpoint& e) {
  if (const auto* g = std::get_if<GridCoord>(&e)) {
    return "(" + std::to_string(g->row) + "," + std::to_string(g->col) + ")";
  }
  return std::to_string(std::get<NodeId>(e).index);
}

std::string real_text(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc{} ? std::string(buf, end) : std::to_string(v);
}

NodeId resolve_endpoint(const Topology& topo, const Endpoint& e, const char* which) {
  if (const auto* g = std::get_if<GridCoord>(&e)) {
    try {
      return topo.node_at(*g);
    } catch (const TopologyError& err) {
      throw ConfigError("flow", std::string(which) + " " + err.what());
    }
  }
  const NodeId id = std::get<NodeId>(e);
  if (!topo.contains(id)) {
    throw ConfigError("flow", std::string(which) + " node " + std::to_string(id.index) +
                                  " does not exist");
  }
  return id;
}

}  // namespace

SimConfig parse_config(std::string_view text) {
  SimConfig cfg;
  bool have_topology = false, have_algorithm = false;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));

    if (key == "topology") {
      std::istringstream words{std::string(value)};
      std::string kind;
      words >> kind;
      if (kind == "grid") {
        std::string rows, cols, extra;
        if (!(words >> rows >> cols) || (words >> extra)) {
          throw ConfigError(key, "expected 'grid <rows> <cols>'");
        }
        cfg.topology = GridSpec{parse_count(key, rows), parse_count(key, cols)};
      } else if (kind == "file") {
        std::string path;
        std::getline(words >> std::ws, path);
        if (path.empty()) throw ConfigError(key, "expected 'file <path>'");
        cfg.topology = EdgeFileSpec{path};
      } else {
        throw ConfigError(key, "unknown topology kind '" + kind + "'");
      }
      have_topology = true;
    } else if (key == "capacity") {
      const auto c = parse_count(key, value);
      if (c > std::numeric_limits<std::uint32_t>::max()) throw ConfigError(key, "too large");
      cfg.capacity = static_cast<std::uint32_t>(c);
    } else if (key == "flow") {
      cfg.flows.push_back(parse_flow(value));
    } else if (key == "lambda") {
      cfg.lambda = parse_real(key, value);
    } else if (key == "algorithm") {
      const auto a = parse_algorithm(value);
      if (!a) throw ConfigError(key, "unknown algorithm '" + std::string(value) + "'");
      cfg.algorithm = *a;
      have_algorithm = true;
    } else if (key == "alpha") {
      cfg.learning.alpha = parse_real(key, value);
    } else if (key == "gamma") {
      cfg.learning.gamma = parse_real(key, value);
    } else if (key == "b_max") {
      cfg.learning.b_max = parse_real(key, value);
    } else if (key == "slots") {
      cfg.slots = parse_count(key, value);
    } else if (key == "seed") {
      cfg.seed = parse_count(key, value);
    } else if (key == "warmup") {
      cfg.warmup = parse_count(key, value);
    } else if (key == "stability_window") {
      cfg.stability_window = parse_real(key, value);
    } else if (key == "stability_slope") {
      cfg.stability_slope = parse_real(key, value);
    } else if (key == "trace") {
      cfg.trace_path = std::string(value);
    } else if (key == "qtable_dump") {
      cfg.qtable_dump_path = std::string(value);
    } else if (key == "qtable_dump_every") {
      cfg.qtable_dump_every = parse_count(key, value);
    } else {
      throw ConfigError(key, "unknown field");
    }
  }
  if (!have_topology) throw ConfigError("topology", "missing required field");
  if (!have_algorithm) throw ConfigError("algorithm", "missing required field");
  if (cfg.flows.empty()) throw ConfigError("flow", "missing required field");
  validate_config(cfg);
  return cfg;
}

SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

Scenario resolve_scenario(const SimConfig& cfg) {
  if (cfg.slots < 1) throw ConfigError("slots", "must be at least 1");
  if (cfg.lambda && *cfg.lambda < 0.0) throw ConfigError("lambda", "must be >= 0");
  if (!(cfg.learning.alpha > 0.0 && cfg.learning.alpha <= 1.0)) {
    throw ConfigError("alpha", "must be in (0, 1]");
  }
  if (!(cfg.learning.gamma > 0.0 && cfg.learning.gamma <= 1.0)) {
    throw ConfigError("gamma", "must be in (0, 1]");
  }
  if (!(cfg.learning.b_max > 0.0)) throw ConfigError("b_max", "must be positive");
  if (!(cfg.stability_window > 0.0 && cfg.stability_window <= 1.0)) {
    throw ConfigError("stability_window", "must be in (0, 1]");
  }
  if (cfg.qtable_dump_path && cfg.qtable_dump_every == 0) {
    throw ConfigError("qtable_dump_every", "must be positive when qtable_dump is set");
  }

  std::optional<Topology> topo;
  try {
    if (const auto* g = std::get_if<GridSpec>(&cfg.topology)) {
      topo = Topology::grid(g->rows, g->cols, cfg.capacity);
    } else {
      topo = Topology::load(std::get<EdgeFileSpec>(cfg.topology).path);
    }
  } catch (const TopologyError& e) {
    throw ConfigError("topology", e.what());
  }

  Scenario scenario{std::move(*topo), {}};
  for (const FlowSpec& f : cfg.flows) {
    TrafficFlow flow;
    flow.source = resolve_endpoint(scenario.topology, f.source, "source");
    flow.destination = resolve_endpoint(scenario.topology, f.destination, "destination");
    if (flow.source == flow.destination) {
      throw ConfigError("flow", "source and destination coincide at " +
                                    endpoint_text(f.source));
    }
    if (f.rate) {
      flow.rate = *f.rate;
    } else if (cfg.lambda) {
      flow.rate = *cfg.lambda;
    } else {
      throw ConfigError("lambda", "missing required field");
    }
    if (flow.rate < 0.0) throw ConfigError("flow", "rate must be >= 0");
    if (flow.rate > 700.0) throw ConfigError("flow", "rate too large");
    scenario.flows.push_back(flow);
  }

  if (uses_shortest_paths(cfg.algorithm)) {
    const HopMatrix hops = all_pairs_hops(scenario.topology);
    for (const auto& f : scenario.flows) {
      if (f.rate > 0.0 && !hops.reachable(f.source, f.destination)) {
        throw ConfigError("flow", "destination " + std::to_string(f.destination.index) +
                                      " unreachable from source " +
                                      std::to_string(f.source.index));
      }
    }
  }
  return scenario;
}

void validate_config(const SimConfig& config) { (void)resolve_scenario(config); }

std::string to_text(const SimConfig& cfg) {
  std::ostringstream out;
  if (const auto* g = std::get_if<GridSpec>(&cfg.topology)) {
    out << "topology = grid " << g->rows << ' ' << g->cols << '\n';
  } else {
    out << "topology = file " << std::get<EdgeFileSpec>(cfg.topology).path << '\n';
  }
  out << "capacity = " << cfg.capacity << '\n';
  for (const auto& f : cfg.flows) {
    out << "flow = " << endpoint_text(f.source) << " -> " << endpoint_text(f.destination);
    if (f.rate) out << " @ " << real_text(*f.rate);
    out << '\n';
  }
  if (cfg.lambda) out << "lambda = " << real_text(*cfg.lambda) << '\n';
  out << "algorithm = " << algorithm_name(cfg.algorithm) << '\n';
  out << "alpha = " << real_text(cfg.learning.alpha) << '\n';
  out << "gamma = " << real_text(cfg.learning.gamma) << '\n';
  out << "b_max = " << real_text(cfg.learning.b_max) << '\n';
  out << "slots = " << cfg.slots << '\n';
  out << "seed = " << cfg.seed << '\n';
  out << "warmup = " << cfg.warmup << '\n';
  out << "stability_window = " << real_text(cfg.stability_window) << '\n';
  out << "stability_slope = " << real_text(cfg.stability_slope) << '\n';
  if (cfg.trace_path) out << "trace = " << *cfg.trace_path << '\n';
  if (cfg.qtable_dump_path) {
    out << "qtable_dump = " << *cfg.qtable_dump_path << '\n';
    out << "qtable_dump_every = " << cfg.qtable_dump_every << '\n';
  }
  return out.str();
}

SimConfig eight_flow_scenario(double lambda, Algorithm algorithm) {
  SimConfig cfg;
  cfg.topology = GridSpec{8, 8};
  cfg.capacity = 1;
  const std::pair<GridCoord, GridCoord> pairs[] = {
      {{1, 3}, {2, 5}}, {{2, 3}, {2, 7}}, {{2, 2}, {1, 6}}, {{3, 4}, {2, 7}},
      {{1, 1}, {1, 7}}, {{4, 3}, {5, 4}}, {{4, 6}, {6, 6}}, {{5, 3}, {5, 6}},
  };
  for (const auto& [src, dst] : pairs) cfg.flows.push_back({src, dst, std::nullopt});
  cfg.lambda = lambda;
  cfg.algorithm = algorithm;
  cfg.slots = 100000;
  return cfg;
}

}  // namespace bpsim
