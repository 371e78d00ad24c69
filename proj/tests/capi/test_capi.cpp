#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <string>

#include "bpsim/bpsim.h"

namespace {

constexpr const char* kLine =
    "topology = grid 1 3\n"
    "algorithm = bp\n"
    "lambda = 0.2\n"
    "flow = 0 -> 2\n"
    "slots = 2000\n";

std::string take(char* s) {
  std::string out = s ? s : "";
  bpsim_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("version and header") {
  CHECK(std::string(bpsim_version()) == "0.1.0");
  CHECK(std::string(bpsim_csv_header()).rfind("algorithm,lambda,seed,", 0) == 0);
}

TEST_CASE("parse, run and query a result") {
  bpsim_config* cfg = nullptr;
  REQUIRE(bpsim_config_parse(kLine, &cfg) == BPSIM_OK);
  bpsim_result* res = nullptr;
  REQUIRE(bpsim_run(cfg, &res) == BPSIM_OK);
  CHECK(bpsim_result_slots(res) == 2000);
  CHECK(bpsim_result_arrivals(res) > 0);
  CHECK(bpsim_result_delivered(res) <= bpsim_result_arrivals(res));
  double delay = 0.0, p95 = 0.0, slope = 0.0;
  int stable = 0;
  REQUIRE(bpsim_result_avg_delay(res, &delay) == BPSIM_OK);
  CHECK(delay >= 2.0);
  REQUIRE(bpsim_result_p95_delay(res, &p95) == BPSIM_OK);
  CHECK(p95 >= delay - 1e-9);
  REQUIRE(bpsim_result_stability(res, &slope, &stable) == BPSIM_OK);
  CHECK(stable == 1);
  CHECK(bpsim_result_check_failures(res) == 0);
  CHECK(bpsim_result_mean_total_queue(res) >= 0.0);
  char* row = nullptr;
  REQUIRE(bpsim_result_csv_row(res, &row) == BPSIM_OK);
  CHECK(take(row).rfind("bp,0.2,1,2000,", 0) == 0);
  bpsim_result_free(res);
  bpsim_config_free(cfg);
}

TEST_CASE("undefined statistics") {
  bpsim_config* cfg = nullptr;
  REQUIRE(bpsim_config_parse(kLine, &cfg) == BPSIM_OK);
  REQUIRE(bpsim_config_set_lambda(cfg, 0.0) == BPSIM_OK);
  REQUIRE(bpsim_config_set_slots(cfg, 50) == BPSIM_OK);
  bpsim_result* res = nullptr;
  REQUIRE(bpsim_run(cfg, &res) == BPSIM_OK);
  double v = 0.0;
  int stable = 0;
  CHECK(bpsim_result_avg_delay(res, &v) == BPSIM_ERR_UNDEFINED);
  CHECK(bpsim_result_p95_delay(res, &v) == BPSIM_ERR_UNDEFINED);
  CHECK(bpsim_result_stability(res, &v, &stable) == BPSIM_ERR_UNDEFINED);
  CHECK(std::strlen(bpsim_last_error()) > 0);
  bpsim_result_free(res);
  bpsim_config_free(cfg);
}

TEST_CASE("configuration errors") {
  bpsim_config* cfg = nullptr;
  CHECK(bpsim_config_parse("topology = grid 8 8\nalgorithm = qp-bl\n", &cfg) ==
        BPSIM_ERR_CONFIG);
  CHECK(std::string(bpsim_last_error()).find("unknown algorithm") != std::string::npos);
  CHECK(cfg == nullptr);
  CHECK(bpsim_config_load("/nonexistent/bpsim.conf", &cfg) == BPSIM_ERR_CONFIG);
  CHECK(bpsim_config_parse(nullptr, &cfg) == BPSIM_ERR_ARGUMENT);
  CHECK(bpsim_config_eight_flow_scenario(0.1, "nope", &cfg) == BPSIM_ERR_CONFIG);
  CHECK(bpsim_config_eight_flow_scenario(-0.1, nullptr, &cfg) == BPSIM_ERR_CONFIG);

  REQUIRE(bpsim_config_parse(kLine, &cfg) == BPSIM_OK);
  CHECK(bpsim_config_set_algorithm(cfg, "qp-bl") == BPSIM_ERR_CONFIG);
  CHECK(bpsim_config_set_slots(cfg, 0) == BPSIM_ERR_CONFIG);
  CHECK(bpsim_config_set_lambda(cfg, -1.0) == BPSIM_ERR_CONFIG);
  CHECK(bpsim_config_set_seed(nullptr, 1) == BPSIM_ERR_ARGUMENT);
  bpsim_config_free(cfg);
  bpsim_config_free(nullptr);
  bpsim_result_free(nullptr);
}

TEST_CASE("runtime failures writing output") {
  bpsim_config* cfg = nullptr;
  REQUIRE(bpsim_config_parse(kLine, &cfg) == BPSIM_OK);
  REQUIRE(bpsim_config_set_trace_path(cfg, "/nonexistent/dir/trace.csv") == BPSIM_OK);
  bpsim_result* res = nullptr;
  CHECK(bpsim_run(cfg, &res) == BPSIM_ERR_RUNTIME);
  CHECK(res == nullptr);
  REQUIRE(bpsim_config_set_trace_path(cfg, nullptr) == BPSIM_OK);
  CHECK(bpsim_run(cfg, &res) == BPSIM_OK);
  bpsim_result_free(res);
  bpsim_config_free(cfg);
}

TEST_CASE("preset renders as parseable text") {
  bpsim_config* cfg = nullptr;
  REQUIRE(bpsim_config_eight_flow_scenario(0.4, "bpmin", &cfg) == BPSIM_OK);
  char* text = nullptr;
  REQUIRE(bpsim_config_to_text(cfg, &text) == BPSIM_OK);
  const std::string rendered = take(text);
  CHECK(rendered.find("algorithm = bpmin") != std::string::npos);
  CHECK(rendered.find("flow = (5,3) -> (5,6)") != std::string::npos);
  bpsim_config* again = nullptr;
  CHECK(bpsim_config_parse(rendered.c_str(), &again) == BPSIM_OK);
  bpsim_config_free(again);
  bpsim_config_free(cfg);
}

TEST_CASE("sweep through the C interface") {
  bpsim_config* cfg = nullptr;
  REQUIRE(bpsim_config_parse(kLine, &cfg) == BPSIM_OK);
  REQUIRE(bpsim_config_set_slots(cfg, 300) == BPSIM_OK);
  char* one = nullptr;
  char* four = nullptr;
  std::size_t failed = 99;
  REQUIRE(bpsim_sweep(cfg, "0.1:0.3:0.1", "bp,sp-bp", "1,2", 1, &one, &failed) == BPSIM_OK);
  CHECK(failed == 0);
  REQUIRE(bpsim_sweep(cfg, "0.1:0.3:0.1", "bp,sp-bp", "1,2", 4, &four, nullptr) == BPSIM_OK);
  const std::string a = take(one), b = take(four);
  CHECK(a == b);
  CHECK(std::count(a.begin(), a.end(), '\n') == 1 + 3 * 2 * 2);

  char* bad = nullptr;
  CHECK(bpsim_sweep(cfg, "0.1", "bp,nope", "1", 1, &bad, nullptr) == BPSIM_ERR_CONFIG);
  char* with_fail = nullptr;
  REQUIRE(bpsim_sweep(cfg, "800,0.1", "bp", "1", 1, &with_fail, &failed) == BPSIM_OK);
  CHECK(failed == 1);
  CHECK(take(with_fail).find(",error\n") != std::string::npos);
  bpsim_config_free(cfg);
}
