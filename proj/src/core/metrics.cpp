#include "metrics.hpp"

#include <algorithm>
#include <cmath>

namespace bpsim {

StabilityVerdict stability_verdict(std::span<const std::uint64_t> series,
                                   double window_fraction, double max_slope) {
  if (series.size() < 100) {
    throw std::invalid_argument("stability_verdict needs at least 100 slots");
  }
  if (!(window_fraction > 0.0 && window_fraction <= 1.0)) {
    throw std::invalid_argument("window_fraction must be in (0, 1]");
  }
  auto count = static_cast<std::size_t>(std::ceil(window_fraction * series.size()));
  count = std::clamp<std::size_t>(count, 2, series.size());
  const auto window = series.last(count);

  // Centered x keeps the sums small.
  const double n = static_cast<double>(count);
  const double x_mean = (n - 1.0) / 2.0;
  double y_mean = 0.0;
  for (auto y : window) y_mean += static_cast<double>(y);
  y_mean /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    const double dx = static_cast<double>(k) - x_mean;
    sxy += dx * (static_cast<double>(window[k]) - y_mean);
    sxx += dx * dx;
  }
  const double slope = sxy / sxx;
  return {slope, slope <= max_slope};
}

double throughput_ratio(const RunMetrics& metrics) {
  if (metrics.arrival_count == 0) {
    throw std::invalid_argument("throughput_ratio: no arrivals");
  }
  return static_cast<double>(metrics.delivered_count) /
         static_cast<double>(metrics.arrival_count);
}

MetricsRecorder::MetricsRecorder(std::size_t n_flows, Slot warmup)
    : n_flows_(n_flows), warmup_(warmup) {}

void MetricsRecorder::record_delivery(const Packet& packet, Slot slot) {
  ++delivered_;
  if (packet.created_slot < warmup_) return;
  delays_.push_back({packet.flow, packet.created_slot, slot, slot - packet.created_slot});
}

void MetricsRecorder::record_total_queue(Slot slot, std::uint64_t total) {
  series_.push_back(total);
  series_slot_.push_back(slot);
}

std::optional<double> MetricsRecorder::average_delay() const {
  if (delays_.empty()) return std::nullopt;
  double sum = 0.0;
  for (const auto& d : delays_) sum += static_cast<double>(d.delay);
  return sum / static_cast<double>(delays_.size());
}

RunMetrics MetricsRecorder::finish(double window_fraction, double max_slope) const {
  RunMetrics m;
  m.slots = series_.size();
  m.arrival_count = arrivals_;
  m.delivered_count = delivered_;
  m.avg_delay = average_delay();
  if (!delays_.empty()) {
    std::vector<Slot> sorted;
    sorted.reserve(delays_.size());
    for (const auto& d : delays_) sorted.push_back(d.delay);
    std::sort(sorted.begin(), sorted.end());
    // nearest-rank percentile
    const auto rank = static_cast<std::size_t>(
        std::ceil(0.95 * static_cast<double>(sorted.size())));
    m.p95_delay = static_cast<double>(sorted[std::max<std::size_t>(rank, 1) - 1]);
  }
  std::vector<double> flow_sum(n_flows_, 0.0);
  std::vector<std::uint64_t> flow_n(n_flows_, 0);
  for (const auto& d : delays_) {
    if (d.flow < n_flows_) {
      flow_sum[d.flow] += static_cast<double>(d.delay);
      ++flow_n[d.flow];
    }
  }
  m.flow_avg_delay.resize(n_flows_);
  for (std::size_t f = 0; f < n_flows_; ++f) {
    if (flow_n[f] > 0) m.flow_avg_delay[f] = flow_sum[f] / static_cast<double>(flow_n[f]);
  }
  m.total_queue_series = series_;
  double q_sum = 0.0;
  std::size_t q_n = 0;
  for (std::size_t k = 0; k < series_.size(); ++k) {
    if (series_slot_[k] < warmup_) continue;
    q_sum += static_cast<double>(series_[k]);
    ++q_n;
  }
  m.mean_total_queue = q_n > 0 ? q_sum / static_cast<double>(q_n) : 0.0;
  if (series_.size() >= 100) {
    m.stability = stability_verdict(series_, window_fraction, max_slope);
  }
  return m;
}

}  // namespace bpsim
