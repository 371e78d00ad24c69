#include "bpsim/bpsim.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "config.hpp"
#include "simulation.hpp"
#include "sweep.hpp"

struct bpsim_config {
  bpsim::SimConfig config;
};

struct bpsim_result {
  bpsim::SimConfig config;
  bpsim::RunMetrics metrics;
};

namespace {

thread_local std::string g_last_error;

bpsim_status fail(bpsim_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Maps exceptions escaping the core onto status codes.
template <class F>
bpsim_status guarded(F&& body) {
  try {
    return body();
  } catch (const bpsim::ConfigError& e) {
    return fail(BPSIM_ERR_CONFIG, e.what());
  } catch (const bpsim::TopologyError& e) {
    return fail(BPSIM_ERR_CONFIG, e.what());
  } catch (const std::exception& e) {
    return fail(BPSIM_ERR_RUNTIME, e.what());
  } catch (...) {
    return fail(BPSIM_ERR_RUNTIME, "unknown error");
  }
}

}  // namespace

extern "C" {

const char* bpsim_version(void) { return "0.1.0"; }

const char* bpsim_last_error(void) { return g_last_error.c_str(); }

void bpsim_string_free(char* s) { std::free(s); }

bpsim_status bpsim_config_parse(const char* text, bpsim_config** out) {
  if (!text || !out) return fail(BPSIM_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new bpsim_config{bpsim::parse_config(text)};
    return BPSIM_OK;
  });
}

bpsim_status bpsim_config_load(const char* path, bpsim_config** out) {
  if (!path || !out) return fail(BPSIM_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new bpsim_config{bpsim::load_config(path)};
    return BPSIM_OK;
  });
}

bpsim_status bpsim_config_eight_flow_scenario(double lambda, const char* algorithm,
                                         bpsim_config** out) {
  if (!out) return fail(BPSIM_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    auto a = bpsim::Algorithm::kQlspBp;
    if (algorithm) {
      const auto parsed = bpsim::parse_algorithm(algorithm);
      if (!parsed) {
        return fail(BPSIM_ERR_CONFIG,
                    std::string("algorithm: unknown algorithm '") + algorithm + "'");
      }
      a = *parsed;
    }
    auto cfg = bpsim::eight_flow_scenario(lambda, a);
    bpsim::validate_config(cfg);
    *out = new bpsim_config{std::move(cfg)};
    return BPSIM_OK;
  });
}

void bpsim_config_free(bpsim_config* config) { delete config; }

bpsim_status bpsim_config_set_seed(bpsim_config* config, uint64_t seed) {
  if (!config) return fail(BPSIM_ERR_ARGUMENT, "null config");
  config->config.seed = seed;
  return BPSIM_OK;
}

bpsim_status bpsim_config_set_slots(bpsim_config* config, uint64_t slots) {
  if (!config) return fail(BPSIM_ERR_ARGUMENT, "null config");
  if (slots < 1) return fail(BPSIM_ERR_CONFIG, "slots: must be at least 1");
  config->config.slots = slots;
  return BPSIM_OK;
}

bpsim_status bpsim_config_set_lambda(bpsim_config* config, double lambda) {
  if (!config) return fail(BPSIM_ERR_ARGUMENT, "null config");
  if (!(lambda >= 0.0)) return fail(BPSIM_ERR_CONFIG, "lambda: must be >= 0");
  config->config.lambda = lambda;
  return BPSIM_OK;
}

bpsim_status bpsim_config_set_algorithm(bpsim_config* config, const char* name) {
  if (!config || !name) return fail(BPSIM_ERR_ARGUMENT, "null argument");
  const auto a = bpsim::parse_algorithm(name);
  if (!a) return fail(BPSIM_ERR_CONFIG, std::string("algorithm: unknown algorithm '") + name + "'");
  config->config.algorithm = *a;
  return BPSIM_OK;
}

bpsim_status bpsim_config_set_trace_path(bpsim_config* config, const char* path) {
  if (!config) return fail(BPSIM_ERR_ARGUMENT, "null config");
  if (path) {
    config->config.trace_path = path;
  } else {
    config->config.trace_path.reset();
  }
  return BPSIM_OK;
}

bpsim_status bpsim_config_to_text(const bpsim_config* config, char** out) {
  if (!config || !out) return fail(BPSIM_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    *out = copy_string(bpsim::to_text(config->config));
    return *out ? BPSIM_OK : fail(BPSIM_ERR_RUNTIME, "out of memory");
  });
}

bpsim_status bpsim_run(const bpsim_config* config, bpsim_result** out) {
  if (!config || !out) return fail(BPSIM_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    auto metrics = bpsim::run_single(config->config);
    *out = new bpsim_result{config->config, std::move(metrics)};
    return BPSIM_OK;
  });
}

void bpsim_result_free(bpsim_result* result) { delete result; }

uint64_t bpsim_result_slots(const bpsim_result* result) {
  return result ? result->metrics.slots : 0;
}

uint64_t bpsim_result_arrivals(const bpsim_result* result) {
  return result ? result->metrics.arrival_count : 0;
}

uint64_t bpsim_result_delivered(const bpsim_result* result) {
  return result ? result->metrics.delivered_count : 0;
}

bpsim_status bpsim_result_avg_delay(const bpsim_result* result, double* out) {
  if (!result || !out) return fail(BPSIM_ERR_ARGUMENT, "null argument");
  if (!result->metrics.avg_delay) return fail(BPSIM_ERR_UNDEFINED, "no packets delivered");
  *out = *result->metrics.avg_delay;
  return BPSIM_OK;
}

bpsim_status bpsim_result_p95_delay(const bpsim_result* result, double* out) {
  if (!result || !out) return fail(BPSIM_ERR_ARGUMENT, "null argument");
  if (!result->metrics.p95_delay) return fail(BPSIM_ERR_UNDEFINED, "no packets delivered");
  *out = *result->metrics.p95_delay;
  return BPSIM_OK;
}

double bpsim_result_mean_total_queue(const bpsim_result* result) {
  return result ? result->metrics.mean_total_queue : 0.0;
}

bpsim_status bpsim_result_stability(const bpsim_result* result, double* slope, int* stable) {
  if (!result || !slope || !stable) return fail(BPSIM_ERR_ARGUMENT, "null argument");
  if (!result->metrics.stability) {
    return fail(BPSIM_ERR_UNDEFINED, "stability needs at least 100 slots");
  }
  *slope = result->metrics.stability->slope;
  *stable = result->metrics.stability->stable ? 1 : 0;
  return BPSIM_OK;
}

uint64_t bpsim_result_check_failures(const bpsim_result* result) {
  if (!result) return 0;
  const auto& m = result->metrics;
  return m.bias_bound_violations + m.conservation_violations + m.delay_bound_violations;
}

bpsim_status bpsim_result_csv_row(const bpsim_result* result, char** out) {
  if (!result || !out) return fail(BPSIM_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    *out = copy_string(bpsim::csv_row(result->config, result->metrics));
    return *out ? BPSIM_OK : fail(BPSIM_ERR_RUNTIME, "out of memory");
  });
}

const char* bpsim_csv_header(void) { return bpsim::kCsvHeader; }

bpsim_status bpsim_sweep(const bpsim_config* base, const char* lambdas,
                         const char* algorithms, const char* seeds, unsigned jobs,
                         char** csv_out, size_t* failed_cells) {
  if (!base || !lambdas || !algorithms || !seeds || !csv_out) {
    return fail(BPSIM_ERR_ARGUMENT, "null argument");
  }
  return guarded([&] {
    const auto rows = bpsim::run_sweep(base->config, bpsim::parse_lambda_list(lambdas),
                                       bpsim::parse_algorithm_list(algorithms),
                                       bpsim::parse_seed_list(seeds), jobs);
    std::size_t failed = 0;
    std::string errors;
    for (const auto& r : rows) {
      if (!r.metrics) {
        ++failed;
        errors += std::string(bpsim::algorithm_name(r.algorithm)) + " seed " +
                  std::to_string(r.seed) + ": " + r.error + "\n";
      }
    }
    if (failed_cells) *failed_cells = failed;
    *csv_out = copy_string(bpsim::to_csv(rows));
    if (!*csv_out) return fail(BPSIM_ERR_RUNTIME, "out of memory");
    if (failed > 0) g_last_error = errors;
    return BPSIM_OK;
  });
}

}  // extern "C"
