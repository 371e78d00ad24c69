// Command-line front end over the bpsim C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "bpsim/bpsim.h"

namespace {

using ConfigPtr = std::unique_ptr<bpsim_config, decltype(&bpsim_config_free)>;
using ResultPtr = std::unique_ptr<bpsim_result, decltype(&bpsim_result_free)>;

struct OwnedString {
  char* s = nullptr;
  ~OwnedString() { bpsim_string_free(s); }
};

int report(bpsim_status status) {
  std::cerr << "bpsim: " << bpsim_last_error() << '\n';
  return status == BPSIM_ERR_CONFIG || status == BPSIM_ERR_ARGUMENT ? 2 : 3;
}

ConfigPtr load(const std::string& path, bpsim_status& status) {
  bpsim_config* raw = nullptr;
  status = bpsim_config_load(path.c_str(), &raw);
  return ConfigPtr(raw, &bpsim_config_free);
}

int cmd_run(const std::string& path, std::optional<std::uint64_t> seed,
            std::optional<std::string> trace) {
  bpsim_status st;
  auto cfg = load(path, st);
  if (st != BPSIM_OK) return report(st);
  if (seed) bpsim_config_set_seed(cfg.get(), *seed);
  if (trace) bpsim_config_set_trace_path(cfg.get(), trace->c_str());

  bpsim_result* raw = nullptr;
  if ((st = bpsim_run(cfg.get(), &raw)) != BPSIM_OK) return report(st);
  ResultPtr result(raw, &bpsim_result_free);
  OwnedString row;
  if ((st = bpsim_result_csv_row(result.get(), &row.s)) != BPSIM_OK) return report(st);
  std::cout << bpsim_csv_header() << '\n' << row.s << '\n';
  if (const auto failures = bpsim_result_check_failures(result.get()); failures > 0) {
    std::cerr << "bpsim: " << failures << " per-slot self-check failures\n";
    return 3;
  }
  return 0;
}

int cmd_sweep(const std::string& path, const std::string& lambdas,
              const std::string& algorithms, const std::string& seeds, unsigned jobs,
              const std::string& out_path) {
  bpsim_status st;
  auto cfg = load(path, st);
  if (st != BPSIM_OK) return report(st);
  OwnedString csv;
  std::size_t failed = 0;
  st = bpsim_sweep(cfg.get(), lambdas.c_str(), algorithms.c_str(), seeds.c_str(), jobs,
                   &csv.s, &failed);
  if (st != BPSIM_OK) return report(st);
  if (out_path == "-") {
    std::cout << csv.s;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out || !(out << csv.s)) {
      std::cerr << "bpsim: cannot write " << out_path << '\n';
      return 3;
    }
  }
  if (failed > 0) {
    std::cerr << "bpsim: " << failed << " sweep cells failed:\n" << bpsim_last_error();
    return 3;
  }
  return 0;
}

int cmd_validate(const std::string& path) {
  bpsim_status st;
  auto cfg = load(path, st);
  if (st != BPSIM_OK) return report(st);
  std::cout << path << ": ok\n";
  return 0;
}

int cmd_eight_flow_scenario(double lambda, const std::string& algorithm) {
  bpsim_config* raw = nullptr;
  const bpsim_status st = bpsim_config_eight_flow_scenario(lambda, algorithm.c_str(), &raw);
  if (st != BPSIM_OK) return report(st);
  ConfigPtr cfg(raw, &bpsim_config_free);
  OwnedString text;
  if (bpsim_config_to_text(cfg.get(), &text.s) != BPSIM_OK) return report(BPSIM_ERR_RUNTIME);
  std::cout << text.s;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Slotted simulator for biased backpressure routing"};
  app.set_version_flag("--version", std::string(bpsim_version()));
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> trace;
  auto* run = app.add_subcommand("run", "Run one simulation and print its CSV row");
  run->add_option("--config", config_path, "Config file")->required();
  run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--trace", trace, "Write the per-slot queue trace CSV here");

  std::string lambdas, algorithms, seeds, out_path;
  unsigned jobs = 1;
  auto* sweep = app.add_subcommand("sweep", "Run a lambda x algorithm x seed grid");
  sweep->add_option("--config", config_path, "Base config file")->required();
  sweep->add_option("--lambdas", lambdas, "start:stop:step or comma list")->required();
  sweep->add_option("--algorithms", algorithms, "Comma list, e.g. bp,ql-bp")->required();
  sweep->add_option("--seeds", seeds, "Comma list or a:b")->required();
  sweep->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  sweep->add_option("--out", out_path, "Output CSV path ('-' for stdout)")->required();

  auto* validate = app.add_subcommand("validate", "Check a config file");
  validate->add_option("--config", config_path, "Config file")->required();

  double lambda = 0.1;
  std::string algorithm = "qlsp-bp";
  auto* preset = app.add_subcommand("paper-scenario",
                                    "Print the built-in 8x8 grid, eight-flow config");
  preset->add_option("--lambda", lambda, "Shared Poisson rate per flow");
  preset->add_option("--algorithm", algorithm, "Routing algorithm");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (run->parsed()) return cmd_run(config_path, seed, trace);
  if (sweep->parsed()) return cmd_sweep(config_path, lambdas, algorithms, seeds, jobs, out_path);
  if (validate->parsed()) return cmd_validate(config_path);
  if (preset->parsed()) return cmd_eight_flow_scenario(lambda, algorithm);
  return 2;
}
