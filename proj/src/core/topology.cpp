#include "topology.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace bpsim {

Topology Topology::from_links(std::size_t n_nodes, std::vector<Link> links) {
  if (n_nodes > std::numeric_limits<std::uint32_t>::max() / 2) {
    throw TopologyError("too many nodes");
  }
  for (const Link& l : links) {
    if (l.from.value() >= n_nodes || l.to.value() >= n_nodes) {
      throw TopologyError("link endpoint out of range: " +
                          std::to_string(l.from.index) + " -> " +
                          std::to_string(l.to.index));
    }
    if (l.from == l.to) {
      throw TopologyError("self-loop at node " + std::to_string(l.from.index));
    }
  }
  std::sort(links.begin(), links.end(), [](const Link& a, const Link& b) {
    return a.from != b.from ? a.from < b.from : a.to < b.to;
  });
  auto dup = std::adjacent_find(links.begin(), links.end(),
                                [](const Link& a, const Link& b) {
                                  return a.from == b.from && a.to == b.to;
                                });
  if (dup != links.end()) {
    throw TopologyError("duplicate link " + std::to_string(dup->from.index) +
                        " -> " + std::to_string(dup->to.index));
  }

  Topology t;
  t.n_ = n_nodes;
  t.links_ = std::move(links);

  t.out_offset_.assign(n_nodes + 1, 0);
  t.in_offset_.assign(n_nodes + 1, 0);
  for (const Link& l : t.links_) {
    ++t.out_offset_[l.from.value() + 1];
    ++t.in_offset_[l.to.value() + 1];
  }
  for (std::size_t i = 0; i < n_nodes; ++i) {
    t.out_offset_[i + 1] += t.out_offset_[i];
    t.in_offset_[i + 1] += t.in_offset_[i];
  }
  t.out_nbr_.resize(t.links_.size());
  t.out_link_.resize(t.links_.size());
  t.in_link_.resize(t.links_.size());
  // links_ is sorted by (from, to): out lists come out ascending and
  // in lists come out ascending by source.
  std::vector<std::uint32_t> out_fill(t.out_offset_.begin(), t.out_offset_.end() - 1);
  std::vector<std::uint32_t> in_fill(t.in_offset_.begin(), t.in_offset_.end() - 1);
  for (std::uint32_t id = 0; id < t.links_.size(); ++id) {
    const Link& l = t.links_[id];
    const auto o = out_fill[l.from.value()]++;
    t.out_nbr_[o] = l.to;
    t.out_link_[o] = id;
    t.in_link_[in_fill[l.to.value()]++] = id;
  }
  return t;
}

Topology Topology::grid(std::size_t rows, std::size_t cols,
                        std::uint32_t capacity) {
  if (rows == 0 || cols == 0) {
    throw TopologyError("grid dimensions must be at least 1x1");
  }
  std::vector<Link> links;
  auto id = [cols](std::size_t r, std::size_t c) { return NodeId(r * cols + c); };
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (c + 1 < cols) {
        links.push_back({id(r, c), id(r, c + 1), capacity});
        links.push_back({id(r, c + 1), id(r, c), capacity});
      }
      if (r + 1 < rows) {
        links.push_back({id(r, c), id(r + 1, c), capacity});
        links.push_back({id(r + 1, c), id(r, c), capacity});
      }
    }
  }
  Topology t = from_links(rows * cols, std::move(links));
  t.grid_rows_ = rows;
  t.grid_cols_ = cols;
  return t;
}

Topology Topology::parse(std::istream& in) {
  std::string line;
  std::optional<std::size_t> n_nodes;
  std::vector<Link> links;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first)) continue;
    fields.clear();
    fields.seekg(0);
    auto fail = [&](const std::string& what) {
      return TopologyError("topology line " + std::to_string(line_no) + ": " + what);
    };
    if (!n_nodes) {
      long long n = 0;
      std::string rest;
      if (!(fields >> n) || (fields >> rest) || n < 0) throw fail("expected node count");
      n_nodes = static_cast<std::size_t>(n);
      continue;
    }
    long long from = 0, to = 0;
    double capacity = 0;
    std::string rest;
    if (!(fields >> from >> to >> capacity) || (fields >> rest)) {
      throw fail("expected `from to capacity`");
    }
    if (from < 0 || to < 0) throw fail("negative node id");
    if (!(capacity >= 0) || capacity != static_cast<double>(static_cast<std::uint32_t>(capacity))) {
      throw fail("capacity must be a finite non-negative integer");
    }
    links.push_back({NodeId(static_cast<std::size_t>(from)),
                     NodeId(static_cast<std::size_t>(to)),
                     static_cast<std::uint32_t>(capacity)});
  }
  if (!n_nodes) throw TopologyError("topology file has no node count");
  return from_links(*n_nodes, std::move(links));
}

Topology Topology::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TopologyError("cannot open topology file: " + path);
  return parse(in);
}

void Topology::check_node(NodeId node) const {
  if (!contains(node)) {
    throw TopologyError("invalid node id " + std::to_string(node.index));
  }
}

std::span<const NodeId> Topology::neighbors(NodeId node) const {
  check_node(node);
  const auto b = out_offset_[node.value()], e = out_offset_[node.value() + 1];
  return {out_nbr_.data() + b, e - b};
}

std::span<const std::uint32_t> Topology::out_links(NodeId node) const {
  check_node(node);
  const auto b = out_offset_[node.value()], e = out_offset_[node.value() + 1];
  return {out_link_.data() + b, e - b};
}

std::span<const std::uint32_t> Topology::in_links(NodeId node) const {
  check_node(node);
  const auto b = in_offset_[node.value()], e = in_offset_[node.value() + 1];
  return {in_link_.data() + b, e - b};
}

std::optional<std::size_t> Topology::find_link(NodeId from, NodeId to) const {
  if (!contains(from) || !contains(to)) return std::nullopt;
  const auto nbrs = neighbors(from);
  const auto it = std::lower_bound(nbrs.begin(), nbrs.end(), to);
  if (it == nbrs.end() || *it != to) return std::nullopt;
  return out_links(from)[static_cast<std::size_t>(it - nbrs.begin())];
}

NodeId Topology::node_at(GridCoord coord) const {
  if (!is_grid()) throw TopologyError("grid coordinates used on a non-grid topology");
  if (coord.row < 1 || coord.col < 1 ||
      static_cast<std::size_t>(coord.row) > grid_rows_ ||
      static_cast<std::size_t>(coord.col) > grid_cols_) {
    throw TopologyError("coordinate (" + std::to_string(coord.row) + "," +
                        std::to_string(coord.col) + ") is off the " +
                        std::to_string(grid_rows_) + "x" +
                        std::to_string(grid_cols_) + " grid");
  }
  return NodeId(static_cast<std::size_t>(coord.row - 1) * grid_cols_ +
                static_cast<std::size_t>(coord.col - 1));
}

std::optional<GridCoord> Topology::coord_of(NodeId node) const {
  if (!is_grid() || !contains(node)) return std::nullopt;
  return GridCoord{static_cast<int>(node.value() / grid_cols_) + 1,
                   static_cast<int>(node.value() % grid_cols_) + 1};
}

HopMatrix all_pairs_hops(const Topology& topo) {
  const std::size_t n = topo.node_count();
  HopMatrix hops(n);
  std::vector<std::uint32_t> frontier;
  frontier.reserve(n);
  for (std::size_t s = 0; s < n; ++s) {
    const NodeId src(s);
    hops.at(src, src) = 0;
    frontier.assign(1, static_cast<std::uint32_t>(s));
    for (std::size_t head = 0; head < frontier.size(); ++head) {
      const NodeId u(static_cast<std::size_t>(frontier[head]));
      const std::uint32_t du = hops.at(src, u);
      for (NodeId v : topo.neighbors(u)) {
        if (hops.at(src, v) == HopMatrix::kUnreachable) {
          hops.at(src, v) = du + 1;
          frontier.push_back(v.index);
        }
      }
    }
  }
  return hops;
}

}  // namespace bpsim
