#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "config.hpp"

using namespace bpsim;

namespace {

constexpr const char* kMinimal =
    "topology = grid 8 8\n"
    "algorithm = ql-bp\n"
    "lambda = 0.1\n"
    "flow = (1,1) -> (1,7)\n";

std::string field_of(const std::string& text) {
  try {
    (void)parse_config(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST_CASE("minimal config gets defaults") {
  const SimConfig cfg = parse_config(kMinimal);
  CHECK(cfg.algorithm == Algorithm::kQlBp);
  CHECK(cfg.learning.alpha == 1.0);
  CHECK(cfg.learning.gamma == 1.0);
  CHECK(cfg.learning.b_max == 1e5);
  CHECK(cfg.warmup == 0);
  CHECK(cfg.slots == 100000);
  CHECK(cfg.seed == 1);
  CHECK(cfg.capacity == 1);
  CHECK(cfg.stability_window == 0.5);
  CHECK(cfg.stability_slope == 0.01);
  CHECK_FALSE(cfg.trace_path);
  REQUIRE(cfg.flows.size() == 1);
  CHECK(std::get<GridCoord>(cfg.flows[0].source) == GridCoord{1, 1});

  const Scenario s = resolve_scenario(cfg);
  CHECK(s.topology.node_count() == 64);
  CHECK(s.flows[0].source == NodeId(0u));
  CHECK(s.flows[0].destination == NodeId(6u));
  CHECK(s.flows[0].rate == 0.1);
}

TEST_CASE("full config with every key") {
  const SimConfig cfg = parse_config(
      "# comment line\n"
      "topology = grid 3 4   # trailing comment\n"
      "capacity = 2\n"
      "flow = 0 -> 11 @ 0.25\n"
      "flow = (2,1) -> (3,4)\n"
      "lambda = 0.2\n"
      "algorithm = qlsp-bp\n"
      "alpha = 0.5\n"
      "gamma = 0.9\n"
      "b_max = 500\n"
      "slots = 1234\n"
      "seed = 77\n"
      "warmup = 10\n"
      "stability_window = 0.25\n"
      "stability_slope = 0.02\n"
      "trace = out.csv\n"
      "qtable_dump = q.csv\n"
      "qtable_dump_every = 100\n");
  CHECK(cfg.capacity == 2);
  CHECK(cfg.learning.alpha == 0.5);
  CHECK(cfg.learning.gamma == 0.9);
  CHECK(cfg.learning.b_max == 500.0);
  CHECK(cfg.slots == 1234);
  CHECK(cfg.seed == 77);
  CHECK(cfg.warmup == 10);
  CHECK(cfg.stability_window == 0.25);
  CHECK(cfg.trace_path == "out.csv");
  CHECK(cfg.qtable_dump_every == 100);
  const Scenario s = resolve_scenario(cfg);
  CHECK(s.flows[0].rate == 0.25);
  CHECK(s.flows[1].rate == 0.2);
  CHECK(s.flows[1].source == NodeId(4u));
  CHECK(s.topology.link(0).capacity == 2);
}

TEST_CASE("errors name the offending field") {
  CHECK(field_of("topology = grid 8 8\nalgorithm = qp-bl\nlambda = 0.1\nflow = 0 -> 1\n") ==
        "algorithm");
  try {
    (void)parse_config("topology = grid 8 8\nalgorithm = qp-bl\nlambda = 0.1\nflow = 0 -> 1\n");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("unknown algorithm") != std::string::npos);
  }
  CHECK(field_of("topology = grid 8 8\nalgorithm = bp\nlambda = 0.1\nflow = (9,9) -> (1,1)\n") ==
        "flow");
  CHECK(field_of("topology = grid 8 8\nalgorithm = bp\nlambda = -0.1\nflow = 0 -> 1\n") ==
        "lambda");
  CHECK(field_of("algorithm = bp\nlambda = 0.1\nflow = 0 -> 1\n") == "topology");
  CHECK(field_of("topology = grid 8 8\nlambda = 0.1\nflow = 0 -> 1\n") == "algorithm");
  CHECK(field_of("topology = grid 8 8\nalgorithm = bp\nlambda = 0.1\n") == "flow");
  CHECK(field_of("topology = grid 8 8\nalgorithm = bp\nflow = 0 -> 1\n") == "lambda");
  CHECK(field_of(std::string(kMinimal) + "alpha = 0\n") == "alpha");
  CHECK(field_of(std::string(kMinimal) + "gamma = 2\n") == "gamma");
  CHECK(field_of(std::string(kMinimal) + "slots = 0\n") == "slots");
  CHECK(field_of(std::string(kMinimal) + "slots = many\n") == "slots");
  CHECK(field_of(std::string(kMinimal) + "colour = blue\n") == "colour");
  CHECK(field_of(std::string(kMinimal) + "flow = 3 -> 3\n") == "flow");
  CHECK(field_of(std::string(kMinimal) + "just text\n") == "line 5");
  CHECK(field_of(std::string(kMinimal) + "topology = torus 3\n") == "topology");
}

TEST_CASE("unreachable shortest-path flows are rejected") {
  const char* path = "bpsim_test_oneway.edges";
  {
    std::ofstream f(path);
    f << "3\n0 1 1\n1 2 1\n";
  }
  const std::string base = std::string("topology = file ") + path + "\nlambda = 0.1\n";
  CHECK_NOTHROW(parse_config(base + "algorithm = sp-bp\nflow = 0 -> 2\n"));
  CHECK(field_of(base + "algorithm = sp-bp\nflow = 2 -> 0\n") == "flow");
  CHECK(field_of(base + "algorithm = qlsp-bp\nflow = 2 -> 0\n") == "flow");
  CHECK_NOTHROW(parse_config(base + "algorithm = bp\nflow = 2 -> 0\n"));
  std::remove(path);
  CHECK(field_of(base + "algorithm = bp\nflow = 0 -> 2\n") == "topology");
}

TEST_CASE("text rendering round-trips") {
  for (const SimConfig& cfg : {parse_config(kMinimal), eight_flow_scenario(0.4, Algorithm::kBpMin),
                               parse_config("topology = grid 2 3\nalgorithm = sp-bp\n"
                                            "flow = 0 -> 5 @ 0.125\nalpha = 0.3\n"
                                            "trace = t.csv\nseed = 9\n")}) {
    const std::string text = to_text(cfg);
    CHECK(to_text(parse_config(text)) == text);
  }
}

TEST_CASE("built-in eight-flow scenario") {
  const SimConfig cfg = eight_flow_scenario(0.1);
  CHECK(cfg.algorithm == Algorithm::kQlspBp);
  CHECK(cfg.slots == 100000);
  CHECK(cfg.lambda == 0.1);
  const Scenario s = resolve_scenario(cfg);
  CHECK(s.topology.node_count() == 64);
  CHECK(s.topology.link_count() == 224);
  REQUIRE(s.flows.size() == 8);
  const std::pair<GridCoord, GridCoord> expected[] = {
      {{1, 3}, {2, 5}}, {{2, 3}, {2, 7}}, {{2, 2}, {1, 6}}, {{3, 4}, {2, 7}},
      {{1, 1}, {1, 7}}, {{4, 3}, {5, 4}}, {{4, 6}, {6, 6}}, {{5, 3}, {5, 6}}};
  for (std::size_t f = 0; f < 8; ++f) {
    CHECK(s.flows[f].source == s.topology.node_at(expected[f].first));
    CHECK(s.flows[f].destination == s.topology.node_at(expected[f].second));
    CHECK(s.flows[f].rate == 0.1);
  }
}
