#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hdqp/acceptance.hpp"
#include "hdqp/csv.hpp"
#include "hdqp/experiment.hpp"
#include "hdqp/figures.hpp"
#include "hdqp/svg.hpp"

using namespace hdqp;

namespace {

experiment::ExperimentConfig tiny_config() {
  experiment::ExperimentConfig config;
  config.name = "tiny";
  config.n = 120;
  config.p = 40;
  config.idx_v1 = 36;
  config.idx_beta2 = 6;
  config.replicates = 8;
  config.mu_p_grid = Eigen::VectorXd::LinSpaced(3, 1.0, 5.0);
  config.base_seed = 4242;
  return config;
}

std::string temp_dir(const char* leaf) {
  const auto dir = std::filesystem::temp_directory_path() / leaf;
  std::filesystem::create_directories(dir);
  return dir.string();
}

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("full config with section header and comments") {
    const std::string text = R"([experiment]
# simulation scale
name = demo
model = t6
n = 300
p = 120
replicates = 25
alpha = 0.35
idx_v1 = 100
idx_beta2 = 20
mu_weight = 0.3
u1 = 1.0
mu_p_grid = 1, 2.5, 4
base_seed = 99
threads = 2
output_dir = /tmp/demo_out
)";
    const experiment::ExperimentConfig config =
        experiment::parse_config_text(text);
    CHECK(config.name == "demo");
    CHECK(config.model == experiment::Model::t6);
    CHECK(config.n == 300);
    CHECK(config.p == 120);
    CHECK(config.replicates == 25);
    CHECK(config.alpha == doctest::Approx(0.35));
    CHECK(config.mu_p_grid.size() == 3);
    CHECK(config.mu_p_grid(1) == doctest::Approx(2.5));
    CHECK(config.base_seed == 99);
    CHECK(config.parallelism == 2);
    CHECK(config.output_dir == "/tmp/demo_out");
  }
  SUBCASE("defaults include the 50-point grid") {
    const experiment::ExperimentConfig config =
        experiment::parse_config_text("n = 250\np = 100\n");
    CHECK(config.mu_p_grid.size() == 50);
    CHECK(config.mu_p_grid(0) == doctest::Approx(0.1));
    CHECK(config.mu_p_grid(49) == doctest::Approx(5.0));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(experiment::parse_config_text("unknown_key = 3\n"),
                    ConfigError);
    CHECK_THROWS_AS(experiment::parse_config_text("[weird]\nn = 10\n"),
                    ConfigError);
    CHECK_THROWS_AS(experiment::parse_config_text("n = 100\np = 100\n"),
                    ConfigError);
    CHECK_THROWS_AS(experiment::parse_config_text("model = cauchy\n"),
                    ConfigError);
  }
}

TEST_CASE("single-replicate experiment is reproducible") {
  experiment::ExperimentConfig config = tiny_config();
  config.replicates = 1;
  config.mu_p_grid = Eigen::VectorXd::Constant(1, 2.0);
  const auto a = experiment::run_experiment_in_memory(config);
  const auto b = experiment::run_experiment_in_memory(config);
  REQUIRE(a.records.size() == 1);
  CHECK(csv::to_string(experiment::records_table(a.records)) ==
        csv::to_string(experiment::records_table(b.records)));
  CHECK(a.records[0].f_theo > 0.0);
  CHECK(a.records[0].seed_used == b.records[0].seed_used);
}

TEST_CASE("parallelism does not change the output") {
  experiment::ExperimentConfig config = tiny_config();
  std::string reference;
  for (int threads : {1, 4, 16}) {
    config.parallelism = threads;
    const auto result = experiment::run_experiment_in_memory(config);
    const std::string text =
        csv::to_string(experiment::records_table(result.records)) +
        csv::to_string(experiment::summary_table(result.summary));
    if (reference.empty())
      reference = text;
    else
      CHECK(text == reference);
  }
}

TEST_CASE("replicate CSV round trip is lossless") {
  const auto result = experiment::run_experiment_in_memory(tiny_config());
  const csv::Table table = experiment::records_table(result.records);
  const csv::Table back = csv::parse(csv::to_string(table));
  const auto records = experiment::records_from_table(back);
  REQUIRE(records.size() == result.records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(records[i].f_naive == result.records[i].f_naive);
    CHECK(records[i].returns_corrected == result.records[i].returns_corrected);
    CHECK(records[i].seed_used == result.records[i].seed_used);
  }
}

TEST_CASE("summary bands bracket the means") {
  const auto result = experiment::run_experiment_in_memory(tiny_config());
  for (const auto& row : result.summary) {
    CHECK(row.f_naive_lo <= row.f_naive_mean);
    CHECK(row.f_naive_mean <= row.f_naive_hi);
    CHECK(row.returns_corrected_lo <= row.returns_corrected_hi);
    CHECK(row.replicates == 8);
  }
}

TEST_CASE("experiment writes its CSV outputs") {
  experiment::ExperimentConfig config = tiny_config();
  config.output_dir = temp_dir("hdqp_harness_run");
  const auto result = experiment::run_experiment(config);
  CHECK(std::filesystem::exists(result.replicates_path));
  CHECK(std::filesystem::exists(result.summary_path));
  const csv::Table table = csv::read_file(result.replicates_path);
  CHECK(table.rows.size() == result.records.size());
  std::filesystem::remove_all(config.output_dir);
}

TEST_CASE("csv escaping round trip") {
  csv::Table table;
  table.header = {"a", "b"};
  table.rows.push_back({"plain", "with,comma"});
  table.rows.push_back({"quote\"inside", "line\nbreak"});
  const csv::Table back = csv::parse(csv::to_string(table));
  CHECK(back.rows[0][1] == "with,comma");
  CHECK(back.rows[1][0] == "quote\"inside");
  CHECK(back.rows[1][1] == "line\nbreak");
}

TEST_CASE("figure smoke runs complete quickly and write files") {
  const std::string out = temp_dir("hdqp_fig_smoke");
  const auto start = std::chrono::steady_clock::now();
  const auto result = figures::reproduce_figure("returns_small", out, 4, 1, 7);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  CHECK(seconds < 10.0);
  REQUIRE(result.scenarios.size() == 2);
  for (const auto& path : result.svg_paths) {
    CHECK(std::filesystem::exists(path));
    std::ifstream is(path);
    std::stringstream buf;
    buf << is.rdbuf();
    CHECK(buf.str().find("<svg") != std::string::npos);
    CHECK(buf.str().find("polyline") != std::string::npos);
  }
  std::filesystem::remove_all(out);
}

TEST_CASE("unknown figure id") {
  CHECK_THROWS_AS(figures::reproduce_figure("returns_medium", "/tmp", 2, 1, 1),
                  UnknownFigureError);
}

TEST_CASE("returns preset shows the naive bias and its correction") {
  const std::string out = temp_dir("hdqp_fig_returns");
  const auto result = figures::reproduce_figure("returns_small", out, 120, 1, 0);
  for (const auto& scenario : result.scenarios) {
    const auto& last = scenario.summary.back();  // mu_P = 5
    CHECK(last.mu_p == doctest::Approx(5.0));
    // Naive curve falls below the identity line at large targets.
    CHECK(last.returns_naive_mean < 5.0 - 0.25);
    // Corrected curve stays near the identity line.
    CHECK(std::fabs(last.returns_corrected_mean - 5.0) < 0.15);
  }
  std::filesystem::remove_all(out);
}

TEST_CASE("frontier preset shows the heavy-tail ordering") {
  const std::string out = temp_dir("hdqp_fig_frontiers");
  const auto result = figures::reproduce_figure("frontiers", out, 60, 1, 0);
  REQUIRE(result.scenarios.size() == 4);
  // Scenario order: small t6, small gaussian, large t6, large gaussian.
  for (int pair = 0; pair < 2; ++pair) {
    const auto& t6 = result.scenarios[static_cast<std::size_t>(2 * pair)];
    const auto& gauss =
        result.scenarios[static_cast<std::size_t>(2 * pair + 1)];
    REQUIRE(t6.config.model == experiment::Model::t6);
    REQUIRE(gauss.config.model == experiment::Model::gaussian);
    const auto& t6_last = t6.summary.back();
    const auto& g_last = gauss.summary.back();
    CHECK(t6_last.f_naive_mean < g_last.f_naive_mean);
    CHECK(g_last.f_naive_mean < g_last.f_theo);
  }
  std::filesystem::remove_all(out);
}

TEST_CASE("corrected returns slope near one on the large preset") {
  const std::string out = temp_dir("hdqp_fig_slope");
  experiment::ExperimentConfig config;
  config.name = "slope";
  config.n = 2500;
  config.p = 1000;
  config.idx_v1 = 900;
  config.idx_beta2 = 150;
  config.replicates = 60;
  config.mu_p_grid = Eigen::VectorXd::LinSpaced(9, 1.0, 5.0);
  config.base_seed = 777;
  const auto result = experiment::run_experiment_in_memory(config);

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n_pts = static_cast<int>(result.summary.size());
  for (const auto& row : result.summary) {
    sx += row.mu_p;
    sy += row.returns_corrected_mean;
    sxx += row.mu_p * row.mu_p;
    sxy += row.mu_p * row.returns_corrected_mean;
  }
  const double slope = (n_pts * sxy - sx * sy) / (n_pts * sxx - sx * sx);
  CHECK(slope > 0.99);
  CHECK(slope < 1.01);
  std::filesystem::remove_all(out);
}

TEST_CASE("acceptance report schema is stable") {
  std::ostringstream sink;
  const auto report =
      acceptance::run(acceptance::Tier::fast, 8, sink, 1, 20100801);
  const csv::Table table = acceptance::report_table(report);
  const std::vector<std::string> golden = {"criterion", "name",      "status",
                                           "value",     "target",    "tolerance",
                                           "margin",    "seconds"};
  CHECK(table.header == golden);
  REQUIRE(table.rows.size() == 1);
  CHECK(table.rows[0][0] == "8");
  CHECK(table.rows[0][2] == "PASS");
  CHECK(sink.str().find("[PASS]") != std::string::npos);
}

TEST_CASE("svg renderer emits well-formed output") {
  svg::Plot plot;
  plot.title = "demo";
  plot.x_label = "x";
  plot.y_label = "y";
  svg::Series s;
  s.label = "series";
  s.color = "#1f4fd0";
  s.x = {0.0, 1.0, 2.0};
  s.y = {1.0, 0.5, 2.0};
  plot.series.push_back(s);
  const std::string text = svg::render(plot);
  CHECK(text.find("<svg") == 0);
  CHECK(text.find("</svg>") != std::string::npos);
  CHECK(text.find("polyline") != std::string::npos);
  CHECK(text.find("demo") != std::string::npos);
}
