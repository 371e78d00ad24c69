#include "bias.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>

namespace bpsim {

bool within_bounds(const BiasMatrix& bias, double b_max) {
  const std::size_t n = bias.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < n; ++c) {
      const double b = bias.at(NodeId(i), NodeId(c));
      if (!(b >= 0.0 && b <= b_max)) return false;
      if (i == c && b != 0.0) return false;
    }
  }
  return true;
}

BiasMatrix zero_bias(std::size_t n) { return BiasMatrix(n); }

BiasMatrix sp_bias(const HopMatrix& hops, double b_max) {
  const std::size_t n = hops.size();
  BiasMatrix b(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < n; ++c) {
      if (i == c) continue;
      const auto h = hops.at(NodeId(i), NodeId(c));
      b.at(NodeId(i), NodeId(c)) =
          h == HopMatrix::kUnreachable ? b_max
                                       : detail::clamp_bias(static_cast<double>(h), b_max);
    }
  }
  return b;
}

namespace {

// Fills column c of `out` with least downstream queue sums toward c.
void bpmin_column(const QueueMatrix& queues, const Topology& topo, double b_max,
                  NodeId c, std::vector<double>& dist, BiasMatrix& out) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const std::size_t n = topo.node_count();
  dist.assign(n, kInf);
  using Item = std::pair<double, std::uint32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[c.value()] = 0.0;
  heap.emplace(0.0, c.index);
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    const NodeId via(static_cast<std::size_t>(u));
    // Entering `via` costs its own queue length for commodity c.
    const double through = d + static_cast<double>(queues.at(via, c));
    for (auto id : topo.in_links(via)) {
      const std::uint32_t v = topo.link(id).from.index;
      if (through < dist[v]) {
        dist[v] = through;
        heap.emplace(through, v);
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    out.at(NodeId(i), c) =
        i == c.value() ? 0.0 : detail::clamp_bias(dist[i], b_max);
  }
}

}  // namespace

BiasMatrix bpmin_bias(const QueueMatrix& queues, const Topology& topo, double b_max) {
  const std::size_t n = topo.node_count();
  BiasMatrix b(n);
  std::vector<double> dist;
  for (std::size_t c = 0; c < n; ++c) bpmin_column(queues, topo, b_max, NodeId(c), dist, b);
  return b;
}

QTables::QTables(const Topology& topo, QLearningParams params)
    : topo_(&topo),
      params_(params),
      n_(topo.node_count()),
      q_(topo.link_count() * topo.node_count(), 0.0) {
  if (!(params.alpha > 0.0 && params.alpha <= 1.0)) {
    throw std::invalid_argument("alpha must be in (0, 1]");
  }
  if (!(params.gamma > 0.0 && params.gamma <= 1.0)) {
    throw std::invalid_argument("gamma must be in (0, 1]");
  }
  if (!(params.b_max > 0.0) || params.b_max == std::numeric_limits<double>::infinity()) {
    throw std::invalid_argument("b_max must be positive and finite");
  }
}

double QTables::at(NodeId node, NodeId neighbor, NodeId commodity) const {
  const auto link = topo_->find_link(node, neighbor);
  if (!link || commodity.value() >= n_) {
    throw std::out_of_range("no Q entry for this (node, neighbor, commodity)");
  }
  return q_[*link * n_ + commodity.value()];
}

void QTables::set(NodeId node, NodeId neighbor, NodeId commodity, double value) {
  const auto link = topo_->find_link(node, neighbor);
  if (!link || commodity.value() >= n_) {
    throw std::out_of_range("no Q entry for this (node, neighbor, commodity)");
  }
  q_[*link * n_ + commodity.value()] = detail::clamp_bias(value, params_.b_max);
}

double QTables::node_min(NodeId node, NodeId commodity) const {
  const auto links = topo_->out_links(node);
  if (links.empty()) return params_.b_max;
  double m = std::numeric_limits<double>::infinity();
  for (auto id : links) m = std::min(m, q_[id * n_ + commodity.value()]);
  return m;
}

BiasMatrix ql_bias(const QTables& tables) {
  const std::size_t n = tables.node_count();
  const double b_max = tables.params().b_max;
  BiasMatrix b(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < n; ++c) {
      if (i == c) continue;
      b.at(NodeId(i), NodeId(c)) =
          detail::clamp_bias(tables.node_min(NodeId(i), NodeId(c)), b_max);
    }
  }
  return b;
}

BiasMatrix qlsp_bias(const QTables& tables, const HopMatrix& hops) {
  const std::size_t n = tables.node_count();
  const double b_max = tables.params().b_max;
  BiasMatrix b(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < n; ++c) {
      if (i == c) continue;
      const auto h = hops.at(NodeId(i), NodeId(c));
      b.at(NodeId(i), NodeId(c)) =
          h == HopMatrix::kUnreachable
              ? b_max
              : detail::clamp_bias(tables.node_min(NodeId(i), NodeId(c)) + h, b_max);
    }
  }
  return b;
}

std::string_view algorithm_name(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kBp: return "bp";
    case Algorithm::kSpBp: return "sp-bp";
    case Algorithm::kBpMin: return "bpmin";
    case Algorithm::kQlBp: return "ql-bp";
    case Algorithm::kQlspBp: return "qlsp-bp";
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (Algorithm a : kAllAlgorithms) {
    if (algorithm_name(a) == name) return a;
  }
  return std::nullopt;
}

bool uses_shortest_paths(Algorithm algorithm) {
  return algorithm == Algorithm::kSpBp || algorithm == Algorithm::kQlspBp;
}

namespace {

class StaticBiasEngine final : public BiasEngine {
 public:
  StaticBiasEngine(Algorithm a, BiasMatrix b) : algorithm_(a), bias_(std::move(b)) {}
  Algorithm algorithm() const override { return algorithm_; }
  const BiasMatrix& update(const QueueMatrix&) override { return bias_; }

 private:
  Algorithm algorithm_;
  BiasMatrix bias_;
};

class BpMinEngine final : public BiasEngine {
 public:
  BpMinEngine(const Topology& topo, const HopMatrix& hops, double b_max)
      : topo_(topo), hops_(hops), b_max_(b_max), bias_(topo.node_count()) {}

  Algorithm algorithm() const override { return Algorithm::kBpMin; }

  const BiasMatrix& update(const QueueMatrix& queues) override {
    const std::size_t n = topo_.node_count();
    for (std::size_t c = 0; c < n; ++c) {
      const NodeId dest(c);
      bool empty = true;
      for (std::size_t i = 0; i < n && empty; ++i) empty = queues.at(NodeId(i), dest) == 0;
      if (!empty) {
        bpmin_column(queues, topo_, b_max_, dest, dist_, bias_);
        continue;
      }
      // Every route is free: 0 wherever the destination is reachable.
      for (std::size_t i = 0; i < n; ++i) {
        bias_.at(NodeId(i), dest) =
            i == c ? 0.0 : (hops_.reachable(NodeId(i), dest) ? 0.0 : b_max_);
      }
    }
    return bias_;
  }

 private:
  const Topology& topo_;
  const HopMatrix& hops_;
  double b_max_;
  BiasMatrix bias_;
  std::vector<double> dist_;
};

class QLearningEngine final : public BiasEngine {
 public:
  QLearningEngine(const Topology& topo, const HopMatrix& hops,
                  QLearningParams params, bool add_hops)
      : hops_(hops), tables_(topo, params), add_hops_(add_hops) {}

  Algorithm algorithm() const override {
    return add_hops_ ? Algorithm::kQlspBp : Algorithm::kQlBp;
  }

  const BiasMatrix& update(const QueueMatrix& queues) override {
    ql_update(tables_, ObservableInfo{queues, &hops_});
    bias_ = add_hops_ ? qlsp_bias(tables_, hops_) : ql_bias(tables_);
    return bias_;
  }

  const QTables* qtables() const override { return &tables_; }

 private:
  const HopMatrix& hops_;
  QTables tables_;
  bool add_hops_;
  BiasMatrix bias_;
};

}  // namespace

std::unique_ptr<BiasEngine> make_bias_engine(Algorithm algorithm, const Topology& topo,
                                             const HopMatrix& hops,
                                             QLearningParams params) {
  switch (algorithm) {
    case Algorithm::kBp:
      return std::make_unique<StaticBiasEngine>(algorithm, zero_bias(topo.node_count()));
    case Algorithm::kSpBp:
      return std::make_unique<StaticBiasEngine>(algorithm, sp_bias(hops, params.b_max));
    case Algorithm::kBpMin:
      return std::make_unique<BpMinEngine>(topo, hops, params.b_max);
    case Algorithm::kQlBp:
      return std::make_unique<QLearningEngine>(topo, hops, params, false);
    case Algorithm::kQlspBp:
      return std::make_unique<QLearningEngine>(topo, hops, params, true);
  }
  throw std::invalid_argument("unknown algorithm");
}

}  // namespace bpsim
