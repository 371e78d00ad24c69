#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "decision.hpp"
#include "queueing.hpp"

namespace bpsim {

/// One (slot, node, commodity) cell of a queue trace. queue_len is U(t) at
/// the slot boundary; offered_out/offered_in sum the offered rates of
/// decisions for that commodity leaving/entering the node during slot t;
/// arrivals counts exogenous packets generated at the node during slot t.
struct TraceRow {
  Slot slot = 0;
  std::uint32_t node = 0;
  std::uint32_t commodity = 0;
  std::uint64_t queue_len = 0;
  std::uint64_t offered_out = 0;
  std::uint64_t offered_in = 0;
  std::uint64_t arrivals = 0;

  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

inline constexpr const char* kTraceHeader =
    "slot,node,commodity,queue_len,offered_out,offered_in,arrivals";

/// Collects sparse trace rows: a cell is emitted only when one of its
/// fields is nonzero. Absent cells are all-zero.
class TraceRecorder {
 public:
  explicit TraceRecorder(std::size_t n_nodes);

  /// Records slot `slot` given U(t), that slot's decisions and its arrivals.
  void record_slot(Slot slot, const QueueMatrix& queues,
                   std::span<const TransmissionDecision> decisions,
                   std::span<const Arrival> arrivals);
  /// Records the final boundary U(T) after the last slot.
  void record_final(Slot slot, const QueueMatrix& queues);

  const std::vector<TraceRow>& rows() const { return rows_; }
  std::vector<TraceRow> take_rows() { return std::move(rows_); }

 private:
  std::size_t n_;
  std::vector<std::uint64_t> out_, in_, arr_;
  std::vector<TraceRow> rows_;
};

void write_trace_csv(std::ostream& out, std::span<const TraceRow> rows);
std::vector<TraceRow> read_trace_csv(std::istream& in);

struct InvariantReport {
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;
  std::string first_violation;

  bool ok() const { return violations == 0; }
};

/// Checks the one-slot queue bound
///   U(t+1) <= max{U(t) - out(t), 0} + in(t) + A(t)
/// for every (node, commodity, t) covered by the trace.
InvariantReport check_one_step(std::span<const TraceRow> rows);

/// Checks the K-slot accumulated bound
///   U(t0+K) <= max{U(t0) - sum out, 0} + sum in + sum A
/// at `samples` random (t0, K) pairs with 1 <= K <= max_k; every
/// (node, commodity) cell present in the trace is tested at each pair.
InvariantReport check_k_step(std::span<const TraceRow> rows,
                             std::size_t samples, std::size_t max_k,
                             std::uint64_t seed);

}  // namespace bpsim
