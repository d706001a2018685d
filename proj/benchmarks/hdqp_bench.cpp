#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "hdqp/bootstrap.hpp"
#include "hdqp/datagen.hpp"
#include "hdqp/estimators.hpp"
#include "hdqp/ineq_qp.hpp"
#include "hdqp/qp_core.hpp"
#include "hdqp/rng.hpp"
#include "hdqp/spectral.hpp"

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd random_spd(int dim, std::uint64_t seed) {
  hdqp::rng::Stream g(seed);
  MatrixXd a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = g.next_normal();
  return a * a.transpose() / dim + 0.5 * MatrixXd::Identity(dim, dim);
}

void bm_solve_eqc(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  const MatrixXd sigma = random_spd(p, 1);
  hdqp::rng::Stream g(2);
  MatrixXd v(p, 2);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < 2; ++j) v(i, j) = g.next_normal();
  VectorXd u(2);
  u << 1.0, 3.0;
  for (auto _ : state) {
    const hdqp::qp::ProblemSpec spec(sigma, v, u);
    benchmark::DoNotOptimize(hdqp::qp::solve_eqc(spec).risk);
  }
}
BENCHMARK(bm_solve_eqc)->Arg(100)->Arg(400);

void bm_sample_gaussian(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  const hdqp::datagen::SpectralModel model(hdqp::datagen::toeplitz_sigma(p, 0.4));
  const VectorXd mu = VectorXd::Zero(p);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        hdqp::datagen::sample_gaussian(5 * p / 2, mu, model, ++seed).data);
  }
}
BENCHMARK(bm_sample_gaussian)->Arg(100)->Arg(400);

void bm_sample_analysis(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  const hdqp::datagen::SpectralModel model(hdqp::datagen::toeplitz_sigma(p, 0.4));
  const auto cons =
      hdqp::datagen::build_constraints(model, 9 * p / 10, 3 * p / 20, 0.3);
  const auto sample =
      hdqp::datagen::sample_elliptical(5 * p / 2, cons.mu, model,
                                       hdqp::datagen::LambdaLaw::scaled_t(6), 3);
  VectorXd u(2);
  u << 1.0, 3.0;
  for (auto _ : state) {
    const hdqp::estimators::SampleAnalysis analysis(sample, cons.v1);
    benchmark::DoNotOptimize(analysis.corrected_frontier(u));
  }
}
BENCHMARK(bm_sample_analysis)->Arg(100)->Arg(400);

void bm_limit_scaling_t6(benchmark::State& state) {
  const auto law = hdqp::spectral::WeightDistribution::scaled_t_sq(6);
  for (auto _ : state)
    benchmark::DoNotOptimize(hdqp::spectral::solve_limit_scaling(law, 0.4).value);
}
BENCHMARK(bm_limit_scaling_t6);

void bm_solve_empirical(benchmark::State& state) {
  hdqp::rng::Stream g(4);
  VectorXd tau(state.range(0));
  for (int i = 0; i < tau.size(); ++i) {
    const double z = g.next_normal();
    tau(i) = z * z;
  }
  for (auto _ : state)
    benchmark::DoNotOptimize(hdqp::spectral::solve_empirical(tau, 0.4).value);
}
BENCHMARK(bm_solve_empirical)->Arg(2500)->Arg(100000);

void bm_bootstrap_draw(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  const hdqp::datagen::SpectralModel model(hdqp::datagen::toeplitz_sigma(p, 0.4));
  const auto sample =
      hdqp::datagen::sample_gaussian(10 * p / 3, VectorXd::Zero(p), model, 5);
  std::uint64_t seed = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(hdqp::bootstrap::make_draw(sample, ++seed).support);
}
BENCHMARK(bm_bootstrap_draw)->Arg(150)->Arg(600);

void bm_box_minimize(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const MatrixXd a = random_spd(k, 6);
  const auto q = hdqp::ineq::ConstraintSet::box(VectorXd::Constant(k, 0.5),
                                                VectorXd::Constant(k, 3.0));
  for (auto _ : state)
    benchmark::DoNotOptimize(hdqp::ineq::minimize_over_q(a, q).value);
}
BENCHMARK(bm_box_minimize)->Arg(2)->Arg(6)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
