#include "hdqp/bootstrap.hpp"

#include <cmath>
#include <sstream>

#include "hdqp/linalg.hpp"
#include "hdqp/rng.hpp"
#include "hdqp/spectral.hpp"

namespace hdqp::bootstrap {

Eigen::VectorXi multinomial_weights(int n, std::uint64_t seed) {
  if (n < 1) throw DomainError("n must be at least 1");
  rng::Stream stream(seed);
  Eigen::VectorXi weights = Eigen::VectorXi::Zero(n);
  for (int draw = 0; draw < n; ++draw)
    weights(static_cast<int>(stream.next_below(static_cast<std::uint64_t>(n))))++;
  return weights;
}

std::vector<double> weight_empirical_distribution(
    const Eigen::VectorXi& weights) {
  const int n = static_cast<int>(weights.size());
  if (n == 0) return {};
  const int max_w = weights.maxCoeff();
  std::vector<double> hist(static_cast<std::size_t>(max_w) + 1, 0.0);
  for (int i = 0; i < n; ++i) hist[static_cast<std::size_t>(weights(i))] += 1.0;
  for (double& h : hist) h /= static_cast<double>(n);
  return hist;
}

BootstrapMoments bootstrap_moments(const datagen::SampleSet& sample,
                                   const Eigen::VectorXi& weights) {
  const int n = sample.n();
  const int p = sample.p();
  if (static_cast<int>(weights.size()) != n)
    throw DomainError("weights must have one entry per observation");
  if (weights.minCoeff() < 0) throw DomainError("weights must be nonnegative");
  if (weights.sum() != n) throw DomainError("weights must sum to n");

  BootstrapMoments out;
  const Eigen::VectorXd w = weights.cast<double>();
  out.support = static_cast<int>((weights.array() > 0).count());
  out.mu_star = sample.data.transpose() * w / static_cast<double>(n);

  // X' D X accumulated as (D^{1/2} X)'(D^{1/2} X).
  Eigen::MatrixXd scaled = sample.data;
  scaled.array().colwise() *= w.array().sqrt();
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(p, p);
  acc.selfadjointView<Eigen::Lower>().rankUpdate(scaled.transpose());
  out.sigma_star = acc.selfadjointView<Eigen::Lower>();
  out.sigma_star /= static_cast<double>(n - 1);
  out.sigma_star -=
      (static_cast<double>(n) / (n - 1.0)) * out.mu_star * out.mu_star.transpose();
  return out;
}

BootstrapDraw make_draw(const datagen::SampleSet& sample, std::uint64_t seed) {
  BootstrapDraw draw;
  draw.seed = seed;
  draw.weights = multinomial_weights(sample.n(), seed);
  BootstrapMoments moments = bootstrap_moments(sample, draw.weights);
  draw.mu_star = std::move(moments.mu_star);
  draw.sigma_star = std::move(moments.sigma_star);
  draw.support = moments.support;
  return draw;
}

DrawStatistics draw_statistics(const BootstrapDraw& draw,
                               const Eigen::VectorXd& v,
                               double v_sigma_inv_v) {
  const int p = static_cast<int>(draw.sigma_star.rows());
  if (draw.support <= p)
    throw DegenerateSampleError(
        "resample support does not exceed p; Sigma* is singular");
  const Eigen::LLT<Eigen::MatrixXd> llt =
      linalg::spd_factor(draw.sigma_star, "Sigma*");
  DrawStatistics out;
  out.support = draw.support;
  out.v_ratio = v.dot(llt.solve(v)) / v_sigma_inv_v;
  out.mu_quad = draw.mu_star.dot(llt.solve(draw.mu_star));
  return out;
}

std::string draw_statistics_csv_header() {
  return "draw_index,seed,support,v_ratio,mu_quad";
}

std::string draw_statistics_csv_row(int draw_index, std::uint64_t seed,
                                    const DrawStatistics& stats) {
  std::ostringstream os;
  os.precision(17);
  os << draw_index << ',' << seed << ',' << stats.support << ','
     << stats.v_ratio << ',' << stats.mu_quad;
  return os.str();
}

double bootstrap_limit_scaling(double rho) {
  if (!(rho > 0.0 && rho < 1.0 - std::exp(-1.0)))
    throw DomainError("bootstrap scaling needs rho in (0, 1 - 1/e)");
  return spectral::solve_limit_scaling(
             spectral::WeightDistribution::poisson_one(), rho)
      .value;
}

BootstrapPredictions bootstrap_predictions(double rho, double mu_sq) {
  if (mu_sq < 0.0) throw DomainError("mu'Sigma^{-1}mu must be nonnegative");
  BootstrapPredictions out;
  out.s_star = bootstrap_limit_scaling(rho);
  out.quad_v = out.s_star;
  out.cross = 0.0;
  out.quad_mu = out.s_star * mu_sq + (out.s_star - 1.0);
  return out;
}

}  // namespace hdqp::bootstrap
