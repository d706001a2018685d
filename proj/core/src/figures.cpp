#include "hdqp/figures.hpp"

#include <filesystem>

#include "hdqp/svg.hpp"

namespace hdqp::figures {

namespace {

// Caption color semantics: population black, naive blue, corrected red,
// 95% bands dashed.
constexpr const char* kBlack = "#000000";
constexpr const char* kBlue = "#1f4fd0";
constexpr const char* kRed = "#d02020";

experiment::ExperimentConfig small_setup() {
  experiment::ExperimentConfig c;
  c.n = 250;
  c.p = 100;
  c.idx_v1 = 90;
  c.idx_beta2 = 15;
  return c;
}

experiment::ExperimentConfig large_setup() {
  experiment::ExperimentConfig c;
  c.n = 2500;
  c.p = 1000;
  c.idx_v1 = 900;
  c.idx_beta2 = 150;
  return c;
}

svg::Series line(std::string label, const char* color, bool dashed) {
  svg::Series s;
  s.label = std::move(label);
  s.color = color;
  s.dashed = dashed;
  return s;
}

std::string returns_svg(const experiment::ExperimentResult& result,
                        const std::string& out_dir) {
  svg::Plot plot;
  plot.title = "Realized vs target returns (" +
               experiment::to_string(result.config.model) +
               ", n=" + std::to_string(result.config.n) +
               ", p=" + std::to_string(result.config.p) + ")";
  plot.x_label = "target return mu_P";
  plot.y_label = "mean realized return mu' w";

  svg::Series identity = line("target (population)", kBlack, false);
  svg::Series naive = line("naive plug-in", kBlue, false);
  svg::Series naive_lo = line("", kBlue, true);
  svg::Series naive_hi = line("", kBlue, true);
  svg::Series corrected = line("corrected", kRed, false);
  svg::Series corr_lo = line("", kRed, true);
  svg::Series corr_hi = line("", kRed, true);
  for (const experiment::SummaryRow& row : result.summary) {
    identity.x.push_back(row.mu_p);
    identity.y.push_back(row.mu_p);
    naive.x.push_back(row.mu_p);
    naive.y.push_back(row.returns_naive_mean);
    naive_lo.x.push_back(row.mu_p);
    naive_lo.y.push_back(row.returns_naive_lo);
    naive_hi.x.push_back(row.mu_p);
    naive_hi.y.push_back(row.returns_naive_hi);
    corrected.x.push_back(row.mu_p);
    corrected.y.push_back(row.returns_corrected_mean);
    corr_lo.x.push_back(row.mu_p);
    corr_lo.y.push_back(row.returns_corrected_lo);
    corr_hi.x.push_back(row.mu_p);
    corr_hi.y.push_back(row.returns_corrected_hi);
  }
  plot.series = {identity, naive, naive_lo, naive_hi,
                 corrected, corr_lo, corr_hi};
  const std::string path = out_dir + "/" + result.config.name + "_" +
                           experiment::to_string(result.config.model) +
                           "_returns.svg";
  svg::write_file(plot, path);
  return path;
}

std::string frontier_svg(const experiment::ExperimentResult& result,
                         const std::string& out_dir) {
  svg::Plot plot;
  plot.title = "Efficient frontier (" +
               experiment::to_string(result.config.model) +
               ", n=" + std::to_string(result.config.n) +
               ", p=" + std::to_string(result.config.p) + ")";
  plot.x_label = "estimated minimal variance";
  plot.y_label = "target return mu_P";

  svg::Series population = line("population", kBlack, false);
  svg::Series naive = line("naive plug-in", kBlue, false);
  svg::Series naive_lo = line("", kBlue, true);
  svg::Series naive_hi = line("", kBlue, true);
  svg::Series corrected = line("corrected", kRed, false);
  svg::Series corr_lo = line("", kRed, true);
  svg::Series corr_hi = line("", kRed, true);
  for (const experiment::SummaryRow& row : result.summary) {
    population.x.push_back(row.f_theo);
    population.y.push_back(row.mu_p);
    naive.x.push_back(row.f_naive_mean);
    naive.y.push_back(row.mu_p);
    naive_lo.x.push_back(row.f_naive_lo);
    naive_lo.y.push_back(row.mu_p);
    naive_hi.x.push_back(row.f_naive_hi);
    naive_hi.y.push_back(row.mu_p);
    corrected.x.push_back(row.f_corrected_mean);
    corrected.y.push_back(row.mu_p);
    corr_lo.x.push_back(row.f_corrected_lo);
    corr_lo.y.push_back(row.mu_p);
    corr_hi.x.push_back(row.f_corrected_hi);
    corr_hi.y.push_back(row.mu_p);
  }
  plot.series = {population, naive, naive_lo, naive_hi,
                 corrected, corr_lo, corr_hi};
  const std::string path = out_dir + "/" + result.config.name + "_" +
                           experiment::to_string(result.config.model) +
                           "_frontier.svg";
  svg::write_file(plot, path);
  return path;
}

}  // namespace

std::vector<std::string> figure_ids() {
  return {"returns_small", "returns_large", "frontiers"};
}

FigureResult reproduce_figure(const std::string& fig_id,
                              const std::string& out_dir,
                              int replicates_override, int threads,
                              std::uint64_t base_seed_override) {
  std::vector<experiment::ExperimentConfig> configs;
  bool frontier_plot = false;
  if (fig_id == "returns_small") {
    configs = {small_setup(), small_setup()};
  } else if (fig_id == "returns_large") {
    configs = {large_setup(), large_setup()};
  } else if (fig_id == "frontiers") {
    configs = {small_setup(), small_setup(), large_setup(), large_setup()};
    frontier_plot = true;
  } else {
    throw UnknownFigureError("unknown figure id: " + fig_id);
  }
  for (std::size_t i = 0; i < configs.size(); ++i) {
    configs[i].name = fig_id;
    configs[i].model =
        (i % 2 == 0) ? experiment::Model::t6 : experiment::Model::gaussian;
    if (replicates_override > 0) configs[i].replicates = replicates_override;
    if (base_seed_override != 0) configs[i].base_seed = base_seed_override;
    configs[i].parallelism = threads;
    configs[i].output_dir = out_dir;
  }
  // The two sizes of the frontiers preset share a name; disambiguate.
  if (frontier_plot) {
    configs[0].name = configs[1].name = fig_id + "_small";
    configs[2].name = configs[3].name = fig_id + "_large";
  }

  std::filesystem::create_directories(out_dir);
  FigureResult out;
  for (const auto& config : configs) {
    out.scenarios.push_back(experiment::run_experiment(config));
    const auto& result = out.scenarios.back();
    out.svg_paths.push_back(frontier_plot ? frontier_svg(result, out_dir)
                                          : returns_svg(result, out_dir));
  }
  return out;
}

}  // namespace hdqp::figures
