#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "hdqp/csv.hpp"
#include "hdqp/datagen.hpp"
#include "hdqp/errors.hpp"

namespace hdqp::experiment {

enum class Model { gaussian, t6 };

std::string to_string(Model model);
Model model_from_string(const std::string& s);

/// One Monte Carlo scenario. Defaults are the small simulation setup
/// (n = 250, p = 100, Toeplitz alpha = 0.4, eigen ranks 90/15, u1 = 1,
/// mu_P from 0.1 to 5).
struct ExperimentConfig {
  ExperimentConfig();

  std::string name = "experiment";
  Model model = Model::gaussian;
  int n = 250;
  int p = 100;
  int k = 2;
  int replicates = 1000;
  double alpha = 0.4;
  int idx_v1 = 90;
  int idx_beta2 = 15;
  double mu_weight = 0.3;
  double u1 = 1.0;
  Eigen::VectorXd mu_p_grid;  // 50 even points on [0.1, 5] by default
  std::uint64_t base_seed = 20100801;
  int parallelism = 1;
  std::string output_dir = ".";

  void validate() const;
};

/// Flat `key = value` config with [section] headers; vectors are comma
/// lists. Recognized keys sit in the [experiment] section (see README for
/// the grammar).
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// One output row per (replicate, mu_P) pair.
struct ReplicateRecord {
  int replicate_index = 0;
  double mu_p = 0.0;
  double f_theo = 0.0;
  double f_naive = 0.0;
  double f_corrected = 0.0;
  double returns_naive = 0.0;      // mu' wEmp
  double returns_corrected = 0.0;  // mu' w_hat
  double s_hat = 0.0;
  double kappa_n = 0.0;
  bool psd_repair_applied = false;
  std::uint64_t seed_used = 0;
};

/// Per-grid-point summary: mean and empirical 2.5% / 97.5% quantiles of
/// each series over the replicates (the 95% confidence bands).
struct SummaryRow {
  double mu_p = 0.0;
  double f_theo = 0.0;
  double f_naive_mean = 0.0, f_naive_lo = 0.0, f_naive_hi = 0.0;
  double f_corrected_mean = 0.0, f_corrected_lo = 0.0, f_corrected_hi = 0.0;
  double returns_naive_mean = 0.0, returns_naive_lo = 0.0,
         returns_naive_hi = 0.0;
  double returns_corrected_mean = 0.0, returns_corrected_lo = 0.0,
         returns_corrected_hi = 0.0;
  int replicates = 0;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<ReplicateRecord> records;   // ordered by (replicate, grid index)
  std::vector<SummaryRow> summary;        // ordered by grid index
  std::string replicates_path;            // set when written to disk
  std::string summary_path;
};

/// Runs the scenario in memory. Replicate r uses the derived seed
/// derive(derive(base_seed, hash(name/model)), r); results are gathered in
/// replicate order, so output is identical for any parallelism.
ExperimentResult run_experiment_in_memory(const ExperimentConfig& config);

/// Runs and writes `<name>_<model>_replicates.csv` and
/// `<name>_<model>_summary.csv` under config.output_dir.
ExperimentResult run_experiment(const ExperimentConfig& config);

csv::Table records_table(const std::vector<ReplicateRecord>& records);
csv::Table summary_table(const std::vector<SummaryRow>& summary);
std::vector<ReplicateRecord> records_from_table(const csv::Table& table);

}  // namespace hdqp::experiment
