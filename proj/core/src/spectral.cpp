#include "hdqp/spectral.hpp"

#include <cmath>
#include <utility>

#include "hdqp/linalg.hpp"
#include "hdqp/rng.hpp"

namespace hdqp::spectral {

namespace {
constexpr double kResidualTol = 1e-10;
constexpr double kPi = 3.14159265358979323846;
}  // namespace

WeightDistribution WeightDistribution::point_mass(double c) {
  if (!(c > 0.0)) throw DomainError("point mass must be positive");
  WeightDistribution g;
  g.kind_ = Kind::point_mass;
  g.c_ = c;
  g.mean_tau_ = c;
  return g;
}

WeightDistribution WeightDistribution::empirical(Eigen::VectorXd tau) {
  if (tau.size() == 0) throw DomainError("empirical tau vector is empty");
  if (tau.minCoeff() <= 0.0)
    throw DomainError("empirical tau entries must be positive; zeros rejected");
  WeightDistribution g;
  g.kind_ = Kind::empirical;
  g.mean_tau_ = tau.mean();
  g.tau_ = std::move(tau);
  return g;
}

WeightDistribution WeightDistribution::poisson_one() {
  WeightDistribution g;
  g.kind_ = Kind::poisson_one;
  g.mean_tau_ = 1.0;
  g.mass_at_zero_ = std::exp(-1.0);
  return g;
}

WeightDistribution WeightDistribution::scaled_t_sq(int df) {
  if (df <= 2)
    throw DomainError("degrees of freedom too small: scaled_t_sq needs df > 2");
  WeightDistribution g;
  g.kind_ = Kind::scaled_t_sq;
  g.df_ = df;
  g.mean_tau_ = 1.0;  // scale (df-2)/df cancels E(T^2) = df/(df-2)
  return g;
}

double WeightDistribution::integral_inv_one_plus(double a) const {
  if (!(a >= 0.0)) throw DomainError("integral argument must be nonnegative");
  switch (kind_) {
    case Kind::point_mass:
      return 1.0 / (1.0 + a * c_);
    case Kind::empirical: {
      double acc = 0.0;
      for (int i = 0; i < tau_.size(); ++i) acc += 1.0 / (1.0 + a * tau_(i));
      return acc / static_cast<double>(tau_.size());
    }
    case Kind::poisson_one: {
      // sum_j e^{-1}/j! / (1 + a j), truncated once the pmf is negligible.
      double pmf = std::exp(-1.0);
      double acc = 0.0;
      for (int j = 0; j <= 64; ++j) {
        acc += pmf / (1.0 + a * j);
        pmf /= (j + 1.0);
        if (pmf < 1e-18) break;
      }
      return acc;
    }
    case Kind::scaled_t_sq: {
      // tau = c T^2, T ~ t_df. Integrate the even t-density over t = tan(u).
      const int df = df_;
      const double c = (df - 2.0) / df;
      const double log_norm = std::lgamma(0.5 * (df + 1.0)) -
                              std::lgamma(0.5 * df) -
                              0.5 * std::log(df * kPi);
      const double norm = std::exp(log_norm);
      auto integrand = [&](double u) {
        if (u >= 0.5 * kPi - 1e-12) return 0.0;
        const double t = std::tan(u);
        const double sec2 = 1.0 + t * t;
        const double density =
            norm * std::pow(1.0 + t * t / df, -0.5 * (df + 1.0));
        return 2.0 * density * sec2 / (1.0 + a * c * t * t);
      };
      return linalg::integrate(integrand, 0.0, 0.5 * kPi, 1e-13);
    }
  }
  throw Error("unreachable");
}

namespace {

/// Shared bracketing + bisection for a continuous decreasing map f with
/// f(0+) = 1, solving f(x) = level.
LimitScaling bisect_root(const std::function<double(double)>& f, double level,
                         double rho) {
  double lo = 1e-12;
  double hi = 1.0;
  int guard = 0;
  while (f(hi) > level) {
    hi *= 2.0;
    if (++guard > 200) throw NoRootError("equation level never crossed");
  }
  if (f(lo) < level) throw NoRootError("equation already below level at 0");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > level)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-15 * hi) break;
  }
  LimitScaling out;
  out.value = 0.5 * (lo + hi);
  out.rho = rho;
  out.residual = std::fabs(f(out.value) - level);
  if (out.residual > kResidualTol)
    throw NoRootError("bisection stalled above residual tolerance");
  return out;
}

}  // namespace

LimitScaling solve_limit_scaling(const WeightDistribution& g, double rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw DomainError("rho must lie in (0, 1)");
  if (g.kind() == WeightDistribution::Kind::poisson_one &&
      rho >= 1.0 - std::exp(-1.0))
    throw DomainError("Poisson(1) scaling is only defined for rho < 1 - 1/e");
  if (g.mass_at_zero() >= 1.0 - rho)
    throw NoRootError("G puts too much mass at zero for the given rho");
  return bisect_root(
      [&](double x) { return g.integral_inv_one_plus(rho * x); }, 1.0 - rho,
      rho);
}

double empirical_g_value(const Eigen::VectorXd& lambda_sq, double rho_n,
                         double x) {
  if (lambda_sq.size() == 0) throw DomainError("empty lambda_sq vector");
  if (lambda_sq.minCoeff() < 0.0)
    throw DomainError("lambda_sq entries must be nonnegative");
  double acc = 0.0;
  for (int i = 0; i < lambda_sq.size(); ++i)
    acc += 1.0 / (1.0 + x * lambda_sq(i) * rho_n);
  return acc / static_cast<double>(lambda_sq.size());
}

LimitScaling solve_empirical(const Eigen::VectorXd& lambda_sq, double rho_n) {
  if (!(rho_n > 0.0 && rho_n < 1.0))
    throw DomainError("rho_n must lie in (0, 1)");
  const auto n = lambda_sq.size();
  if (n == 0) throw DomainError("empty lambda_sq vector");
  int positive = 0;
  for (int i = 0; i < n; ++i) {
    if (lambda_sq(i) < 0.0)
      throw DomainError("lambda_sq entries must be nonnegative");
    if (lambda_sq(i) > 0.0) ++positive;
  }
  if (static_cast<double>(positive) / static_cast<double>(n) <= rho_n)
    throw NoRootError("too few nonzero lambda_sq entries for the given rho_n");
  return bisect_root(
      [&](double x) { return empirical_g_value(lambda_sq, rho_n, x); },
      1.0 - rho_n, rho_n);
}

double kappa(double rho_n) {
  if (!(rho_n > 0.0 && rho_n < 1.0))
    throw DomainError("rho_n must lie in (0, 1)");
  return rho_n / (1.0 - rho_n);
}

KappaCorrelated kappa_correlated_mc(const Eigen::MatrixXd& lambda, int p,
                                    int replicates, std::uint64_t seed) {
  const int n = static_cast<int>(lambda.rows());
  if (lambda.cols() != n) throw DomainError("Lambda must be square");
  if (p <= 0 || p >= n) throw DomainError("need 0 < p < n");
  if (replicates < 2) throw DomainError("need at least two replicates");

  Eigen::BDCSVD<Eigen::MatrixXd> svd(lambda,
                                     Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& d = svd.singularValues();
  if (d(n - 1) <= 1e-10 * d(0))
    throw RankDeficientError("Lambda is rank deficient");
  const Eigen::VectorXd omega =
      svd.matrixU().transpose() * Eigen::VectorXd::Ones(n);
  const Eigen::VectorXd omega_sq = omega.array().square();

  double sum = 0.0, sum_sq = 0.0;
  for (int r = 0; r < replicates; ++r) {
    rng::Stream stream(rng::derive(seed, static_cast<std::uint64_t>(r)));
    Eigen::MatrixXd z(n, p);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < p; ++j) z(i, j) = stream.next_normal();
    z.array().colwise() *= d.array();  // rows scaled: Z = D Ytilde

    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(p, p);
    f.selfadjointView<Eigen::Lower>().rankUpdate(z.transpose());
    f /= static_cast<double>(n);
    Eigen::LLT<Eigen::MatrixXd> llt(
        Eigen::MatrixXd(f.selfadjointView<Eigen::Lower>()));
    if (llt.info() != Eigen::Success)
      throw NotPositiveDefiniteError("Y' D^2 Y failed to factor");

    // P(i,i) = z_i' F^{-1} z_i / n, one solve per index.
    const Eigen::MatrixXd solved = llt.solve(z.transpose());
    double kappa_r = 0.0;
    for (int i = 0; i < n; ++i) {
      const double pii = z.row(i).dot(solved.col(i)) / static_cast<double>(n);
      kappa_r += omega_sq(i) * pii;
    }
    kappa_r /= static_cast<double>(n);
    sum += kappa_r;
    sum_sq += kappa_r * kappa_r;
  }

  KappaCorrelated out;
  out.replicates = replicates;
  out.kappa_np = sum / replicates;
  const double var =
      (sum_sq - sum * sum / replicates) / (replicates - 1.0);
  out.std_error = std::sqrt(std::max(var, 0.0) / replicates);
  out.sigma_hat_form = out.kappa_np / (1.0 - out.kappa_np);
  return out;
}

std::pair<double, double> mp_edges(double rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw DomainError("rho must lie in (0, 1)");
  const double s = std::sqrt(rho);
  return {(1.0 - s) * (1.0 - s), (1.0 + s) * (1.0 + s)};
}

double mp_density(double x, double rho) {
  const auto [lo, hi] = mp_edges(rho);
  if (x <= lo || x >= hi) return 0.0;
  return std::sqrt((hi - x) * (x - lo)) / (2.0 * kPi * rho * x);
}

}  // namespace hdqp::spectral
