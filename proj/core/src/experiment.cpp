#include "hdqp/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hdqp/estimators.hpp"
#include "hdqp/linalg.hpp"
#include "hdqp/parallel.hpp"
#include "hdqp/qp_core.hpp"
#include "hdqp/rng.hpp"
#include "hdqp/spectral.hpp"

namespace hdqp::experiment {

std::string to_string(Model model) {
  return model == Model::gaussian ? "gaussian" : "t6";
}

Model model_from_string(const std::string& s) {
  if (s == "gaussian") return Model::gaussian;
  if (s == "t6") return Model::t6;
  throw ConfigError("unknown model: " + s + " (expected gaussian or t6)");
}

ExperimentConfig::ExperimentConfig() {
  mu_p_grid = Eigen::VectorXd(50);
  for (int i = 0; i < 50; ++i) mu_p_grid(i) = 0.1 + (5.0 - 0.1) * i / 49.0;
}

void ExperimentConfig::validate() const {
  if (replicates < 1) throw ConfigError("replicates must be >= 1");
  if (!(p < n)) throw ConfigError("need p < n");
  if (p < 2) throw ConfigError("need p >= 2");
  if (k != 2)
    throw ConfigError("the simulation pipeline uses k = 2 (v1 and the mean)");
  if (mu_p_grid.size() == 0) throw ConfigError("mu_p grid is empty");
  if (idx_v1 < 1 || idx_v1 > p || idx_beta2 < 1 || idx_beta2 > p)
    throw ConfigError("eigen ranks must lie in [1, p]");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw ConfigError("alpha not in [0, 1)");
  if (!(mu_weight >= 0.0 && mu_weight <= 1.0))
    throw ConfigError("mu_weight not in [0, 1]");
  if (parallelism < 1) throw ConfigError("parallelism must be >= 1");
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

Eigen::VectorXd parse_list(const std::string& value) {
  std::vector<double> vals;
  std::stringstream ss(value);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    cell = trim(cell);
    if (!cell.empty()) vals.push_back(std::stod(cell));
  }
  if (vals.empty()) throw ConfigError("empty list value");
  return Eigen::Map<Eigen::VectorXd>(vals.data(),
                                     static_cast<Eigen::Index>(vals.size()));
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig config;
  std::string section = "experiment";
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("bad section header at line " +
                          std::to_string(line_no));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected key = value at line " +
                        std::to_string(line_no));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section != "experiment")
      throw ConfigError("unknown section [" + section + "]");

    if (key == "name") config.name = value;
    else if (key == "model") config.model = model_from_string(value);
    else if (key == "n") config.n = std::stoi(value);
    else if (key == "p") config.p = std::stoi(value);
    else if (key == "k") config.k = std::stoi(value);
    else if (key == "replicates") config.replicates = std::stoi(value);
    else if (key == "alpha") config.alpha = std::stod(value);
    else if (key == "idx_v1") config.idx_v1 = std::stoi(value);
    else if (key == "idx_beta2") config.idx_beta2 = std::stoi(value);
    else if (key == "mu_weight") config.mu_weight = std::stod(value);
    else if (key == "u1") config.u1 = std::stod(value);
    else if (key == "mu_p_grid") config.mu_p_grid = parse_list(value);
    else if (key == "base_seed") config.base_seed = std::stoull(value);
    else if (key == "threads" || key == "parallelism")
      config.parallelism = std::stoi(value);
    else if (key == "output_dir") config.output_dir = value;
    else
      throw ConfigError("unknown key '" + key + "' at line " +
                        std::to_string(line_no));
  }
  config.validate();
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_config_text(buf.str());
}

namespace {

struct Population {
  datagen::SpectralModel spectral;
  Eigen::VectorXd v1;
  Eigen::VectorXd mu;
  Eigen::MatrixXd m_inv;  // population (V' Sigma^{-1} V)^{-1}

  explicit Population(const ExperimentConfig& config)
      : spectral(datagen::toeplitz_sigma(config.p, config.alpha)) {
    const datagen::Constraints c = datagen::build_constraints(
        spectral, config.idx_v1, config.idx_beta2, config.mu_weight);
    v1 = c.v1;
    mu = c.mu;
    Eigen::MatrixXd v(config.p, 2);
    v << v1, mu;
    Eigen::VectorXd u(2);
    u << config.u1, 1.0;
    const qp::ProblemSpec spec(spectral.sigma, v, u);
    m_inv = spec.gram_inverse();
  }

  double f_theo(double u1, double mu_p) const {
    Eigen::VectorXd u(2);
    u << u1, mu_p;
    return u.dot(m_inv * u);
  }
};

std::vector<ReplicateRecord> run_replicate(const ExperimentConfig& config,
                                           const Population& pop,
                                           std::uint64_t scenario_id, int r) {
  const std::uint64_t seed =
      rng::derive(rng::derive(config.base_seed, scenario_id),
                  static_cast<std::uint64_t>(r));
  datagen::SampleSet sample =
      config.model == Model::gaussian
          ? datagen::sample_gaussian(config.n, pop.mu, pop.spectral, seed)
          : datagen::sample_elliptical(config.n, pop.mu, pop.spectral,
                                       datagen::LambdaLaw::scaled_t(6), seed);

  const estimators::SampleAnalysis analysis(sample, pop.v1);
  std::vector<ReplicateRecord> out;
  out.reserve(static_cast<std::size_t>(config.mu_p_grid.size()));
  Eigen::VectorXd u(2);
  for (int g = 0; g < config.mu_p_grid.size(); ++g) {
    const double mu_p = config.mu_p_grid(g);
    u << config.u1, mu_p;
    ReplicateRecord rec;
    rec.replicate_index = r;
    rec.mu_p = mu_p;
    rec.f_theo = pop.f_theo(config.u1, mu_p);
    rec.f_naive = analysis.naive_frontier(u);
    rec.f_corrected = analysis.corrected_frontier(u);
    rec.returns_naive = pop.mu.dot(analysis.naive_weights(u));
    rec.returns_corrected = pop.mu.dot(analysis.corrected_weights(u));
    rec.s_hat = analysis.s_hat();
    rec.kappa_n = analysis.kappa_n();
    rec.psd_repair_applied = analysis.psd_repair_applied();
    rec.seed_used = seed;
    out.push_back(rec);
  }
  return out;
}

SummaryRow summarize_grid_point(const std::vector<ReplicateRecord>& records,
                                int grid_count, int g) {
  const int reps = static_cast<int>(records.size()) / grid_count;
  std::vector<double> fn, fc, rn, rc;
  fn.reserve(reps);
  fc.reserve(reps);
  rn.reserve(reps);
  rc.reserve(reps);
  SummaryRow row;
  for (int r = 0; r < reps; ++r) {
    const ReplicateRecord& rec =
        records[static_cast<std::size_t>(r) * grid_count + g];
    fn.push_back(rec.f_naive);
    fc.push_back(rec.f_corrected);
    rn.push_back(rec.returns_naive);
    rc.push_back(rec.returns_corrected);
    row.mu_p = rec.mu_p;
    row.f_theo = rec.f_theo;
  }
  auto mean = [](const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc / static_cast<double>(v.size());
  };
  auto band = [](std::vector<double>& v, double& lo, double& hi) {
    std::sort(v.begin(), v.end());
    lo = linalg::quantile_sorted(v, 0.025);
    hi = linalg::quantile_sorted(v, 0.975);
  };
  row.replicates = reps;
  row.f_naive_mean = mean(fn);
  row.f_corrected_mean = mean(fc);
  row.returns_naive_mean = mean(rn);
  row.returns_corrected_mean = mean(rc);
  band(fn, row.f_naive_lo, row.f_naive_hi);
  band(fc, row.f_corrected_lo, row.f_corrected_hi);
  band(rn, row.returns_naive_lo, row.returns_naive_hi);
  band(rc, row.returns_corrected_lo, row.returns_corrected_hi);
  return row;
}

}  // namespace

ExperimentResult run_experiment_in_memory(const ExperimentConfig& config) {
  config.validate();
  const Population pop(config);
  const std::string scenario_name = config.name + "/" + to_string(config.model);
  const std::uint64_t scenario_id = rng::hash_name(scenario_name.c_str());

  const int grid_count = static_cast<int>(config.mu_p_grid.size());
  std::vector<std::vector<ReplicateRecord>> slots(
      static_cast<std::size_t>(config.replicates));

  parallel::for_indexed(config.replicates, config.parallelism, [&](int r) {
    slots[static_cast<std::size_t>(r)] =
        run_replicate(config, pop, scenario_id, r);
  });

  ExperimentResult result;
  result.config = config;
  result.records.reserve(static_cast<std::size_t>(config.replicates) *
                         grid_count);
  for (auto& slot : slots)
    result.records.insert(result.records.end(), slot.begin(), slot.end());
  result.summary.reserve(static_cast<std::size_t>(grid_count));
  for (int g = 0; g < grid_count; ++g)
    result.summary.push_back(summarize_grid_point(result.records, grid_count, g));
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  ExperimentResult result = run_experiment_in_memory(config);
  std::filesystem::create_directories(config.output_dir);
  const std::string stem =
      config.output_dir + "/" + config.name + "_" + to_string(config.model);
  result.replicates_path = stem + "_replicates.csv";
  result.summary_path = stem + "_summary.csv";
  csv::write_file(records_table(result.records), result.replicates_path);
  csv::write_file(summary_table(result.summary), result.summary_path);
  return result;
}

csv::Table records_table(const std::vector<ReplicateRecord>& records) {
  csv::Table table;
  table.header = {"replicate_index", "mu_p", "f_theo", "f_naive",
                  "f_corrected", "returns_naive", "returns_corrected",
                  "s_hat", "kappa_n", "psd_repair_applied", "seed_used"};
  table.rows.reserve(records.size());
  for (const ReplicateRecord& r : records) {
    table.rows.push_back({std::to_string(r.replicate_index),
                          csv::format_double(r.mu_p),
                          csv::format_double(r.f_theo),
                          csv::format_double(r.f_naive),
                          csv::format_double(r.f_corrected),
                          csv::format_double(r.returns_naive),
                          csv::format_double(r.returns_corrected),
                          csv::format_double(r.s_hat),
                          csv::format_double(r.kappa_n),
                          r.psd_repair_applied ? "1" : "0",
                          std::to_string(r.seed_used)});
  }
  return table;
}

std::vector<ReplicateRecord> records_from_table(const csv::Table& table) {
  const std::vector<std::string> expected = {
      "replicate_index", "mu_p", "f_theo", "f_naive", "f_corrected",
      "returns_naive", "returns_corrected", "s_hat", "kappa_n",
      "psd_repair_applied", "seed_used"};
  if (table.header != expected)
    throw Error("unexpected replicate CSV header");
  std::vector<ReplicateRecord> out;
  out.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    if (row.size() != expected.size()) throw Error("short replicate CSV row");
    ReplicateRecord r;
    r.replicate_index = std::stoi(row[0]);
    r.mu_p = std::stod(row[1]);
    r.f_theo = std::stod(row[2]);
    r.f_naive = std::stod(row[3]);
    r.f_corrected = std::stod(row[4]);
    r.returns_naive = std::stod(row[5]);
    r.returns_corrected = std::stod(row[6]);
    r.s_hat = std::stod(row[7]);
    r.kappa_n = std::stod(row[8]);
    r.psd_repair_applied = row[9] == "1";
    r.seed_used = std::stoull(row[10]);
    out.push_back(r);
  }
  return out;
}

csv::Table summary_table(const std::vector<SummaryRow>& summary) {
  csv::Table table;
  table.header = {"mu_p",
                  "f_theo",
                  "f_naive_mean",
                  "f_naive_q025",
                  "f_naive_q975",
                  "f_corrected_mean",
                  "f_corrected_q025",
                  "f_corrected_q975",
                  "returns_naive_mean",
                  "returns_naive_q025",
                  "returns_naive_q975",
                  "returns_corrected_mean",
                  "returns_corrected_q025",
                  "returns_corrected_q975",
                  "replicates"};
  for (const SummaryRow& s : summary) {
    table.rows.push_back(
        {csv::format_double(s.mu_p), csv::format_double(s.f_theo),
         csv::format_double(s.f_naive_mean), csv::format_double(s.f_naive_lo),
         csv::format_double(s.f_naive_hi),
         csv::format_double(s.f_corrected_mean),
         csv::format_double(s.f_corrected_lo),
         csv::format_double(s.f_corrected_hi),
         csv::format_double(s.returns_naive_mean),
         csv::format_double(s.returns_naive_lo),
         csv::format_double(s.returns_naive_hi),
         csv::format_double(s.returns_corrected_mean),
         csv::format_double(s.returns_corrected_lo),
         csv::format_double(s.returns_corrected_hi),
         std::to_string(s.replicates)});
  }
  return table;
}

}  // namespace hdqp::experiment
