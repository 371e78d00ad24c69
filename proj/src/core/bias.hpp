#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "queueing.hpp"
#include "topology.hpp"

namespace bpsim {

inline constexpr double kDefaultBiasCap = 1e5;

/// N x N matrix of per-queue biases B_i^(c), row = node, column = commodity.
class BiasMatrix {
 public:
  BiasMatrix() = default;
  explicit BiasMatrix(std::size_t n) : n_(n), b_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double at(NodeId node, NodeId commodity) const {
    return b_[node.value() * n_ + commodity.value()];
  }
  double& at(NodeId node, NodeId commodity) {
    return b_[node.value() * n_ + commodity.value()];
  }
  std::span<const double> row(NodeId node) const {
    return {b_.data() + node.value() * n_, n_};
  }
  std::span<const double> raw() const { return b_; }

  friend bool operator==(const BiasMatrix&, const BiasMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> b_;
};

/// 0 <= B <= b_max everywhere and a zero diagonal.
bool within_bounds(const BiasMatrix& bias, double b_max);

BiasMatrix zero_bias(std::size_t n);

/// Shortest hop distance to the destination, capped at b_max. Unreachable
/// pairs get b_max.
BiasMatrix sp_bias(const HopMatrix& hops, double b_max);

/// Least total downstream queue length over routes to each destination:
/// B_c^(c) = 0 and B_i^(c) = min over out-neighbors j of U_j^(c) + B_j^(c).
/// Uses global queue state. Unreachable pairs get b_max.
BiasMatrix bpmin_bias(const QueueMatrix& queues, const Topology& topo, double b_max);

struct QLearningParams {
  double alpha = 1.0;
  double gamma = 1.0;
  double b_max = kDefaultBiasCap;
};

/// Route-congestion estimates Q_ij^(c) for every directed link (i, j) and
/// every commodity c, stored per link so node i's table is the contiguous
/// block of its out-links.
class QTables {
 public:
  QTables(const Topology& topo, QLearningParams params);

  const Topology& topology() const { return *topo_; }
  const QLearningParams& params() const { return params_; }
  std::size_t node_count() const { return n_; }

  double at(NodeId node, NodeId neighbor, NodeId commodity) const;
  void set(NodeId node, NodeId neighbor, NodeId commodity, double value);

  double by_link(std::size_t link, NodeId commodity) const {
    return q_[link * n_ + commodity.value()];
  }
  std::span<double> link_row(std::size_t link) { return {q_.data() + link * n_, n_}; }
  std::span<const double> link_row(std::size_t link) const {
    return {q_.data() + link * n_, n_};
  }

  /// min_j Q_ij^(c) over out-neighbors; b_max when the node has none.
  double node_min(NodeId node, NodeId commodity) const;

 private:
  const Topology* topo_;
  QLearningParams params_;
  std::size_t n_;
  std::vector<double> q_;
};

/// Everything a bias extractor may observe for slot t.
struct ObservableInfo {
  const QueueMatrix& queues;
  const HopMatrix* hops = nullptr;
};

/// Receives (reader, owner) pairs for every queue-length and Q-table read a
/// learning agent performs. The default does nothing.
struct NullAccessRecorder {
  void read_queue(NodeId, NodeId) {}
  void read_qtable(NodeId, NodeId) {}
};

namespace detail {

inline double clamp_bias(double v, double b_max) {
  return v < 0.0 ? 0.0 : (v > b_max ? b_max : v);
}

}  // namespace detail

/// One synchronous Q-learning step for all agents:
///   Q_ij^(c) <- (1-a) Q_ij^(c) + a [U_j^(c)(t) + g min_k Q_jk^(c)]
/// clamped to [0, b_max]. All reads see the tables as they were before the
/// call. For j = c the bootstrap term is 0.
template <class Recorder>
void ql_update(QTables& tables, const ObservableInfo& info, Recorder& recorder) {
  const Topology& topo = tables.topology();
  const std::size_t n = tables.node_count();
  const auto [alpha, gamma, b_max] = tables.params();

  // Each node's own summary min_k Q_jk^(c), computed from the stale tables
  // and handed to its neighbors.
  std::vector<double> onward(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    const NodeId node(j);
    recorder.read_qtable(node, node);
    for (std::size_t c = 0; c < n; ++c) {
      onward[j * n + c] = c == j ? 0.0 : tables.node_min(node, NodeId(c));
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    const NodeId node(i);
    const auto nbrs = topo.neighbors(node);
    const auto links = topo.out_links(node);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      const NodeId j = nbrs[k];
      recorder.read_queue(node, j);
      recorder.read_qtable(node, j);
      const auto u_j = info.queues.row(j);
      const double* next = onward.data() + j.value() * n;
      auto q = tables.link_row(links[k]);
      for (std::size_t c = 0; c < n; ++c) {
        const double target = static_cast<double>(u_j[c]) + gamma * next[c];
        q[c] = detail::clamp_bias((1.0 - alpha) * q[c] + alpha * target, b_max);
      }
    }
  }
}

inline void ql_update(QTables& tables, const ObservableInfo& info) {
  NullAccessRecorder none;
  ql_update(tables, info, none);
}

/// B_i^(c) = min_j Q_ij^(c), clamped, zero diagonal.
BiasMatrix ql_bias(const QTables& tables);
/// B_i^(c) = min_j Q_ij^(c) + hops(i, c), clamped after the sum.
BiasMatrix qlsp_bias(const QTables& tables, const HopMatrix& hops);

enum class Algorithm { kBp, kSpBp, kBpMin, kQlBp, kQlspBp };

inline constexpr Algorithm kAllAlgorithms[] = {
    Algorithm::kBp, Algorithm::kSpBp, Algorithm::kBpMin, Algorithm::kQlBp,
    Algorithm::kQlspBp};

std::string_view algorithm_name(Algorithm algorithm);
std::optional<Algorithm> parse_algorithm(std::string_view name);
bool uses_shortest_paths(Algorithm algorithm);

/// Per-slot bias extraction for one algorithm.
class BiasEngine {
 public:
  virtual ~BiasEngine() = default;
  virtual Algorithm algorithm() const = 0;
  /// Computes B(t) from the slot-t snapshot. The reference stays valid until
  /// the next call.
  virtual const BiasMatrix& update(const QueueMatrix& queues) = 0;
  virtual const QTables* qtables() const { return nullptr; }
};

std::unique_ptr<BiasEngine> make_bias_engine(Algorithm algorithm,
                                             const Topology& topo,
                                             const HopMatrix& hops,
                                             QLearningParams params);

}  // namespace bpsim
