#include "trace.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace bpsim {

TraceRecorder::TraceRecorder(std::size_t n_nodes)
    : n_(n_nodes),
      out_(n_nodes * n_nodes, 0),
      in_(n_nodes * n_nodes, 0),
      arr_(n_nodes * n_nodes, 0) {}

void TraceRecorder::record_slot(Slot slot, const QueueMatrix& queues,
                                std::span<const TransmissionDecision> decisions,
                                std::span<const Arrival> arrivals) {
  std::vector<std::size_t> touched;
  for (const auto& d : decisions) {
    const auto o = d.from.value() * n_ + d.commodity.value();
    const auto i = d.to.value() * n_ + d.commodity.value();
    out_[o] += d.offered_rate;
    in_[i] += d.offered_rate;
    touched.push_back(o);
    touched.push_back(i);
  }
  for (const auto& a : arrivals) {
    const auto k = a.node.value() * n_ + a.packet.commodity.value();
    ++arr_[k];
    touched.push_back(k);
  }
  const auto raw = queues.raw();
  for (std::size_t k = 0; k < raw.size(); ++k) {
    if (raw[k] != 0) touched.push_back(k);
  }
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
  for (std::size_t k : touched) {
    rows_.push_back({slot, static_cast<std::uint32_t>(k / n_),
                     static_cast<std::uint32_t>(k % n_), raw[k], out_[k], in_[k],
                     arr_[k]});
    out_[k] = in_[k] = arr_[k] = 0;
  }
}

void TraceRecorder::record_final(Slot slot, const QueueMatrix& queues) {
  const auto raw = queues.raw();
  for (std::size_t k = 0; k < raw.size(); ++k) {
    if (raw[k] != 0) {
      rows_.push_back({slot, static_cast<std::uint32_t>(k / n_),
                       static_cast<std::uint32_t>(k % n_), raw[k], 0, 0, 0});
    }
  }
}

void write_trace_csv(std::ostream& out, std::span<const TraceRow> rows) {
  out << kTraceHeader << '\n';
  for (const auto& r : rows) {
    out << r.slot << ',' << r.node << ',' << r.commodity << ',' << r.queue_len
        << ',' << r.offered_out << ',' << r.offered_in << ',' << r.arrivals << '\n';
  }
}

std::vector<TraceRow> read_trace_csv(std::istream& in) {
  std::vector<TraceRow> rows;
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) {
    throw std::runtime_error("trace: missing or unexpected header");
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    TraceRow r;
    if (!(fields >> r.slot >> r.node >> r.commodity >> r.queue_len >>
          r.offered_out >> r.offered_in >> r.arrivals)) {
      throw std::runtime_error("trace: malformed line " + std::to_string(line_no));
    }
    rows.push_back(r);
  }
  return rows;
}

namespace {

struct CellSeries {
  std::vector<std::uint64_t> queue, out, in, arrivals;
};

// Dense per-cell series over [first slot, last slot] of the trace.
struct DenseTrace {
  Slot first = 0;
  std::size_t length = 0;
  std::map<std::pair<std::uint32_t, std::uint32_t>, CellSeries> cells;
};

DenseTrace densify(std::span<const TraceRow> rows) {
  DenseTrace dense;
  if (rows.empty()) return dense;
  Slot lo = rows.front().slot, hi = rows.front().slot;
  for (const auto& r : rows) {
    lo = std::min(lo, r.slot);
    hi = std::max(hi, r.slot);
  }
  dense.first = lo;
  dense.length = static_cast<std::size_t>(hi - lo + 1);
  for (const auto& r : rows) {
    auto [it, fresh] = dense.cells.try_emplace({r.node, r.commodity});
    CellSeries& s = it->second;
    if (fresh) {
      s.queue.assign(dense.length, 0);
      s.out.assign(dense.length, 0);
      s.in.assign(dense.length, 0);
      s.arrivals.assign(dense.length, 0);
    }
    const auto t = static_cast<std::size_t>(r.slot - lo);
    s.queue[t] = r.queue_len;
    s.out[t] = r.offered_out;
    s.in[t] = r.offered_in;
    s.arrivals[t] = r.arrivals;
  }
  return dense;
}

bool bound_holds(std::uint64_t start, std::uint64_t out, std::uint64_t in,
                 std::uint64_t arrivals, std::uint64_t end) {
  const std::uint64_t drained = start > out ? start - out : 0;
  return end <= drained + in + arrivals;
}

std::string describe(const char* what, Slot t0, std::size_t k,
                     std::pair<std::uint32_t, std::uint32_t> cell) {
  std::ostringstream os;
  os << what << " violated at slot " << t0 << " (K=" << k << ") node "
     << cell.first << " commodity " << cell.second;
  return os.str();
}

}  // namespace

InvariantReport check_one_step(std::span<const TraceRow> rows) {
  InvariantReport report;
  const DenseTrace dense = densify(rows);
  for (const auto& [cell, s] : dense.cells) {
    for (std::size_t t = 0; t + 1 < dense.length; ++t) {
      ++report.checked;
      if (!bound_holds(s.queue[t], s.out[t], s.in[t], s.arrivals[t], s.queue[t + 1])) {
        if (report.violations++ == 0) {
          report.first_violation = describe("one-step bound", dense.first + t, 1, cell);
        }
      }
    }
  }
  return report;
}

InvariantReport check_k_step(std::span<const TraceRow> rows, std::size_t samples,
                             std::size_t max_k, std::uint64_t seed) {
  InvariantReport report;
  const DenseTrace dense = densify(rows);
  if (dense.length < 2 || max_k == 0) return report;
  Rng rng(seed);
  for (std::size_t n = 0; n < samples; ++n) {
    const std::size_t k_cap = std::min(max_k, dense.length - 1);
    const std::size_t k = 1 + static_cast<std::size_t>(rng.next_u64() % k_cap);
    const std::size_t t0 =
        static_cast<std::size_t>(rng.next_u64() % (dense.length - k));
    for (const auto& [cell, s] : dense.cells) {
      std::uint64_t out = 0, in = 0, arrivals = 0;
      for (std::size_t t = t0; t < t0 + k; ++t) {
        out += s.out[t];
        in += s.in[t];
        arrivals += s.arrivals[t];
      }
      ++report.checked;
      if (!bound_holds(s.queue[t0], out, in, arrivals, s.queue[t0 + k])) {
        if (report.violations++ == 0) {
          report.first_violation = describe("K-step bound", dense.first + t0, k, cell);
        }
      }
    }
  }
  return report;
}

}  // namespace bpsim
