#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bpsim {

/// Dense node index in [0, N). Also names a commodity (the destination).
struct NodeId {
  std::uint32_t index = 0;

  constexpr NodeId() = default;
  constexpr explicit NodeId(std::uint32_t i) : index(i) {}
  constexpr explicit NodeId(std::size_t i) : index(static_cast<std::uint32_t>(i)) {}

  constexpr std::size_t value() const { return index; }
  friend constexpr auto operator<=>(NodeId, NodeId) = default;
};

/// 1-based (row, col) label of a lattice node.
struct GridCoord {
  int row = 0;
  int col = 0;
  friend constexpr bool operator==(GridCoord, GridCoord) = default;
};

/// Directed link (from -> to). Capacity is an integral packets/slot rate.
struct Link {
  NodeId from;
  NodeId to;
  std::uint32_t capacity = 0;
};

class TopologyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// All-pairs hop counts; `kUnreachable` marks pairs with no directed path.
class HopMatrix {
 public:
  static constexpr std::uint32_t kUnreachable =
      std::numeric_limits<std::uint32_t>::max();

  HopMatrix() = default;
  explicit HopMatrix(std::size_t n) : n_(n), dist_(n * n, kUnreachable) {}

  std::size_t size() const { return n_; }
  std::uint32_t at(NodeId from, NodeId to) const {
    return dist_[from.value() * n_ + to.value()];
  }
  std::uint32_t& at(NodeId from, NodeId to) {
    return dist_[from.value() * n_ + to.value()];
  }
  bool reachable(NodeId from, NodeId to) const {
    return at(from, to) != kUnreachable;
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint32_t> dist_;
};

/// Directed multi-hop network graph. Immutable once built.
///
/// Links are stored sorted by (from, to), so link ids double as the
/// deterministic per-node serve order. Out-neighbor lists are ascending.
class Topology {
 public:
  /// Builds a topology from an explicit edge list. Rejects self-loops,
  /// duplicate directed links and out-of-range endpoints.
  static Topology from_links(std::size_t n_nodes, std::vector<Link> links);

  /// rows x cols lattice; every lattice adjacency becomes two directed links.
  static Topology grid(std::size_t rows, std::size_t cols,
                       std::uint32_t capacity);

  /// Reads the edge-file format: a node-count line followed by
  /// `from to capacity` lines. `#` starts a comment.
  static Topology parse(std::istream& in);
  static Topology load(const std::string& path);

  std::size_t node_count() const { return n_; }
  std::size_t link_count() const { return links_.size(); }
  std::span<const Link> links() const { return links_; }
  const Link& link(std::size_t id) const { return links_.at(id); }

  /// Out-neighbors of `node` in ascending id order.
  std::span<const NodeId> neighbors(NodeId node) const;
  /// Ids of links leaving `node`, same order as neighbors().
  std::span<const std::uint32_t> out_links(NodeId node) const;
  /// Ids of links entering `node`, ascending by source.
  std::span<const std::uint32_t> in_links(NodeId node) const;

  std::optional<std::size_t> find_link(NodeId from, NodeId to) const;

  bool is_grid() const { return grid_rows_ > 0; }
  std::size_t grid_rows() const { return grid_rows_; }
  std::size_t grid_cols() const { return grid_cols_; }
  /// (r, c) -> (r-1)*cols + (c-1). Throws for off-grid labels.
  NodeId node_at(GridCoord coord) const;
  std::optional<GridCoord> coord_of(NodeId node) const;

  bool contains(NodeId node) const { return node.value() < n_; }

 private:
  Topology() = default;
  void check_node(NodeId node) const;

  std::size_t n_ = 0;
  std::vector<Link> links_;
  // CSR adjacency
  std::vector<std::uint32_t> out_offset_;
  std::vector<NodeId> out_nbr_;
  std::vector<std::uint32_t> out_link_;
  std::vector<std::uint32_t> in_offset_;
  std::vector<std::uint32_t> in_link_;
  std::size_t grid_rows_ = 0;
  std::size_t grid_cols_ = 0;
};

/// Breadth-first hop distances over directed links (unit weight per hop).
HopMatrix all_pairs_hops(const Topology& topo);

}  // namespace bpsim
