#include "doctest.h"

#include <random>

#include "../oracles.hpp"
#include "scheduler.hpp"

using namespace bpsim;

namespace {

NodeId node(std::size_t i) { return NodeId(i); }

Topology undirected(std::size_t n, const std::vector<std::pair<int, int>>& edges,
                    std::uint32_t cap = 1) {
  std::vector<Link> links;
  for (auto [a, b] : edges) {
    links.push_back({node(a), node(b), cap});
    links.push_back({node(b), node(a), cap});
  }
  return Topology::from_links(n, std::move(links));
}

std::vector<oracle::OracleLink> oracle_links(const Topology& t) {
  std::vector<oracle::OracleLink> out;
  for (const Link& l : t.links()) {
    out.push_back({int(l.from.value()), int(l.to.value()), double(l.capacity)});
  }
  return out;
}

std::vector<std::vector<double>> pressure(const QueueMatrix& u, const BiasMatrix& b) {
  const std::size_t n = u.size();
  std::vector<std::vector<double>> p(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < n; ++c) p[i][c] = u.at(node(i), node(c)) + b.at(node(i), node(c));
  }
  return p;
}

}  // namespace

TEST_CASE("optimal commodity") {
  QueueMatrix u(3);
  BiasMatrix b(3);
  SUBCASE("largest differential wins") {
    u.at(node(0), node(1)) = 4;
    u.at(node(0), node(2)) = 3;
    const auto choice = optimal_commodity(node(0), node(1), u, b);
    // commodity 1 at node 1 is delivered (U = 0 there), diff 4 vs 3
    CHECK(choice.commodity == node(1));
    CHECK(choice.weight == 4.0);
  }
  SUBCASE("negative differentials give weight 0") {
    u.at(node(1), node(2)) = 2;
    b.at(node(1), node(0)) = 1.0;
    const auto choice = optimal_commodity(node(0), node(1), u, b);
    CHECK(choice.weight == 0.0);
    CHECK(choice.commodity == node(1));  // argmax: diffs are -1, 0, -2
  }
  SUBCASE("bias adds to the backlog") {
    u.at(node(0), node(2)) = 5;
    b.at(node(0), node(2)) = 2.0;
    u.at(node(1), node(2)) = 1;
    const auto choice = optimal_commodity(node(0), node(1), u, b);
    CHECK(choice.commodity == node(2));
    CHECK(choice.weight == 6.0);
  }
  SUBCASE("ties go to the smallest id") {
    u.at(node(2), node(0)) = 3;
    u.at(node(2), node(1)) = 3;
    CHECK(optimal_commodity(node(2), node(0), u, b).commodity == node(0));
  }
}

TEST_CASE("independent allocation examples") {
  const Topology l = undirected(3, {{0, 1}, {1, 2}});
  CHECK(allocate_independent(l, QueueMatrix(3), BiasMatrix(3)).empty());

  QueueMatrix u(3);
  u.at(node(0), node(2)) = 1;
  const auto ds = allocate_independent(l, u, BiasMatrix(3));
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].from == node(0));
  CHECK(ds[0].to == node(1));
  CHECK(ds[0].commodity == node(2));
  CHECK(ds[0].weight == 1.0);
  CHECK(ds[0].offered_rate == 1);
}

TEST_CASE("decisions carry the full capacity and only positive weights") {
  const Topology g = Topology::grid(3, 3, 2);
  std::mt19937_64 gen(6);
  for (int round = 0; round < 200; ++round) {
    QueueMatrix u(9);
    BiasMatrix b(9);
    for (std::size_t i = 0; i < 9; ++i) {
      for (std::size_t c = 0; c < 9; ++c) {
        if (i == c) continue;
        u.at(node(i), node(c)) = gen() % 4;
        b.at(node(i), node(c)) = double(gen() % 3);
      }
    }
    const auto ds = allocate_independent(g, u, b);
    for (std::size_t k = 0; k < ds.size(); ++k) {
      const auto& d = ds[k];
      REQUIRE(d.weight > 0.0);
      REQUIRE(d.offered_rate == g.link(d.link).capacity);
      REQUIRE(d.from == g.link(d.link).from);
      REQUIRE(d.to == g.link(d.link).to);
      const auto choice = optimal_commodity(d.from, d.to, u, b);
      REQUIRE(choice.commodity == d.commodity);
      REQUIRE(choice.weight == d.weight);
      if (k > 0) REQUIRE(ds[k - 1].link < d.link);
    }
    // same inputs, same output
    REQUIRE(allocate_independent(g, u, b) == ds);
  }
}

TEST_CASE("random four-node states match exhaustive max-weight search") {
  std::mt19937_64 gen(2024);
  const auto graphs = oracle::connected_graphs(4);
  for (int trial = 0; trial < 300; ++trial) {
    const auto& edges = graphs[gen() % graphs.size()];
    const Topology t = undirected(4, edges, static_cast<std::uint32_t>(1 + gen() % 2));
    QueueMatrix u(4);
    BiasMatrix b(4);
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t c = 0; c < 4; ++c) {
        if (i == c) continue;
        u.at(node(i), node(c)) = gen() % 4;
        b.at(node(i), node(c)) = double(gen() % 3);
      }
    }
    const auto ds = allocate_independent(t, u, b);
    const double best =
        oracle::brute_force_max_weight(oracle_links(t), {0, 1, 2, 3}, pressure(u, b));
    REQUIRE(allocation_objective(t, ds) == best);
  }
}

TEST_CASE("zero bias reduces to textbook backpressure") {
  std::mt19937_64 gen(99);
  const auto graphs = oracle::connected_graphs(4);
  for (int trial = 0; trial < 300; ++trial) {
    const Topology t = undirected(4, graphs[gen() % graphs.size()]);
    QueueMatrix u(4);
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t c = 0; c < 4; ++c) {
        if (i != c) u.at(node(i), node(c)) = gen() % 4;
      }
    }
    std::vector<std::vector<double>> q(4, std::vector<double>(4));
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t c = 0; c < 4; ++c) q[i][c] = u.at(node(i), node(c));
    }
    const auto expected = oracle::textbook_backpressure(oracle_links(t), q);
    const auto ds = allocate_independent(t, u, zero_bias(4));
    REQUIRE(ds.size() == expected.size());
    for (std::size_t k = 0; k < ds.size(); ++k) {
      REQUIRE(int(ds[k].link) == expected[k].first);
      REQUIRE(int(ds[k].commodity.value()) == expected[k].second);
    }
  }
}

TEST_CASE("zero-capacity links are never scheduled") {
  const Topology t = Topology::from_links(2, {{node(0), node(1), 0}, {node(1), node(0), 1}});
  QueueMatrix u(2);
  u.at(node(0), node(1)) = 3;
  CHECK(allocate_independent(t, u, BiasMatrix(2)).empty());
}

TEST_CASE("mismatched sizes are rejected") {
  const Topology t = Topology::grid(2, 2, 1);
  CHECK_THROWS_AS(allocate_independent(t, QueueMatrix(3), BiasMatrix(4)), std::invalid_argument);
  CHECK_THROWS_AS(optimal_commodity(node(0), node(5), QueueMatrix(4), BiasMatrix(4)),
                  std::invalid_argument);
}
