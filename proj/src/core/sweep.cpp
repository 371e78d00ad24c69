#include "sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <thread>

#include "simulation.hpp"

namespace bpsim {

namespace {

std::string shortest(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc{} ? std::string(buf, end) : std::to_string(v);
}

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string fixed(const std::optional<double>& v) { return v ? fixed(*v) : std::string(); }

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double to_real(std::string_view field, std::string_view s) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size() || !std::isfinite(v)) {
    throw ConfigError(std::string(field), "bad number '" + std::string(s) + "'");
  }
  return v;
}

std::uint64_t to_count(std::string_view field, std::string_view s) {
  std::uint64_t v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size()) {
    throw ConfigError(std::string(field), "bad integer '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::string csv_row(const SweepRow& row) {
  std::string out;
  out += algorithm_name(row.algorithm);
  out += ',' + shortest(row.lambda) + ',' + std::to_string(row.seed) + ',' +
         std::to_string(row.slots) + ',';
  if (!row.metrics) return out + ",,,,,,error";
  const RunMetrics& m = *row.metrics;
  out += std::to_string(m.arrival_count) + ',' + std::to_string(m.delivered_count) + ',' +
         fixed(m.avg_delay) + ',' + fixed(m.p95_delay) + ',' + fixed(m.mean_total_queue) +
         ',';
  if (m.stability) {
    out += fixed(m.stability->slope) + ',' + (m.stability->stable ? "true" : "false");
  } else {
    out += ',';
  }
  return out;
}

std::string csv_row(const SimConfig& config, const RunMetrics& metrics) {
  return csv_row(SweepRow{config.algorithm, config.lambda.value_or(0.0), config.seed,
                          config.slots, metrics, {}});
}

std::vector<double> parse_lambda_list(std::string_view text) {
  std::vector<double> values;
  const auto parts = split(text, ':');
  if (parts.size() == 3) {
    const double start = to_real("lambdas", parts[0]);
    const double stop = to_real("lambdas", parts[1]);
    const double step = to_real("lambdas", parts[2]);
    if (!(step > 0.0) || stop < start) {
      throw ConfigError("lambdas", "range needs step > 0 and stop >= start");
    }
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (std::size_t k = 0; k < count; ++k) {
      // snap to 1e-9 so 0.1 + 2*0.1 prints as 0.3
      values.push_back(std::round((start + static_cast<double>(k) * step) * 1e9) / 1e9);
    }
  } else if (parts.size() == 1) {
    for (auto p : split(text, ',')) values.push_back(to_real("lambdas", p));
  } else {
    throw ConfigError("lambdas", "expected 'start:stop:step' or a comma list");
  }
  for (double v : values) {
    if (v < 0.0) throw ConfigError("lambdas", "rates must be >= 0");
  }
  return values;
}

std::vector<Algorithm> parse_algorithm_list(std::string_view text) {
  std::vector<Algorithm> out;
  for (auto name : split(text, ',')) {
    const auto a = parse_algorithm(name);
    if (!a) throw ConfigError("algorithms", "unknown algorithm '" + std::string(name) + "'");
    out.push_back(*a);
  }
  return out;
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  std::vector<std::uint64_t> out;
  const auto range = split(text, ':');
  if (range.size() == 2) {
    const auto lo = to_count("seeds", range[0]), hi = to_count("seeds", range[1]);
    if (hi < lo) throw ConfigError("seeds", "range end before start");
    for (auto s = lo; s <= hi; ++s) out.push_back(s);
    return out;
  }
  if (range.size() != 1) throw ConfigError("seeds", "expected 'a:b' or a comma list");
  for (auto s : split(text, ',')) out.push_back(to_count("seeds", s));
  return out;
}

std::vector<SweepRow> run_sweep(const SimConfig& base, std::vector<double> lambdas,
                                std::vector<Algorithm> algorithms,
                                std::vector<std::uint64_t> seeds, unsigned jobs) {
  if (lambdas.empty() || algorithms.empty() || seeds.empty()) {
    throw ConfigError("sweep", "lambdas, algorithms and seeds must be non-empty");
  }
  std::vector<SweepRow> rows;
  for (Algorithm a : algorithms) {
    for (double l : lambdas) {
      for (auto s : seeds) rows.push_back({a, l, s, base.slots, std::nullopt, {}});
    }
  }
  std::sort(rows.begin(), rows.end(), [](const SweepRow& x, const SweepRow& y) {
    const auto nx = algorithm_name(x.algorithm), ny = algorithm_name(y.algorithm);
    if (nx != ny) return nx < ny;
    if (x.lambda != y.lambda) return x.lambda < y.lambda;
    return x.seed < y.seed;
  });
  rows.erase(std::unique(rows.begin(), rows.end(),
                         [](const SweepRow& x, const SweepRow& y) {
                           return x.algorithm == y.algorithm && x.lambda == y.lambda &&
                                  x.seed == y.seed;
                         }),
             rows.end());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < rows.size(); k = next++) {
      SweepRow& row = rows[k];
      SimConfig cfg = base;
      cfg.algorithm = row.algorithm;
      cfg.lambda = row.lambda;
      cfg.seed = row.seed;
      cfg.trace_path.reset();
      cfg.qtable_dump_path.reset();
      try {
        row.metrics = run_single(cfg);
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    }
  };
  const unsigned n_threads =
      std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(rows.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return rows;
}

std::string to_csv(const std::vector<SweepRow>& rows) {
  std::string out = std::string(kCsvHeader) + '\n';
  for (const auto& r : rows) out += csv_row(r) + '\n';
  return out;
}

}  // namespace bpsim
