#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bias.hpp"
#include "config.hpp"
#include "metrics.hpp"

namespace bpsim {

inline constexpr const char* kCsvHeader =
    "algorithm,lambda,seed,slots,arrivals,delivered,avg_delay,p95_delay,"
    "mean_total_queue,stability_slope,stable";

/// One results row. `metrics` is empty when the cell failed.
struct SweepRow {
  Algorithm algorithm = Algorithm::kBp;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t slots = 0;
  std::optional<RunMetrics> metrics;
  std::string error;
};

std::string csv_row(const SweepRow& row);
std::string csv_row(const SimConfig& config, const RunMetrics& metrics);

/// "a:b:s" (inclusive range) or a comma list.
std::vector<double> parse_lambda_list(std::string_view text);
/// Comma list of algorithm names.
std::vector<Algorithm> parse_algorithm_list(std::string_view text);
/// Comma list of seeds or an inclusive "a:b" range.
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

/// Runs every (algorithm, lambda, seed) cell of `base` on up to `jobs`
/// threads. Rows come back sorted by (algorithm name, lambda, seed), so the
/// result does not depend on `jobs`. Failed cells keep their row with the
/// error text instead of metrics.
std::vector<SweepRow> run_sweep(const SimConfig& base, std::vector<double> lambdas,
                                std::vector<Algorithm> algorithms,
                                std::vector<std::uint64_t> seeds, unsigned jobs);

/// Header plus one line per row.
std::string to_csv(const std::vector<SweepRow>& rows);

}  // namespace bpsim
