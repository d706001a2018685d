#include "hdqp/crosscheck.hpp"

#include <cmath>

#include "hdqp/errors.hpp"
#include "hdqp/rng.hpp"

namespace hdqp::crosscheck {

IterativeQp projected_gradient_qp(const Eigen::MatrixXd& sigma,
                                  const Eigen::MatrixXd& v,
                                  const Eigen::VectorXd& u, double tol,
                                  int max_iter) {
  const Eigen::MatrixXd vtv = v.transpose() * v;
  const Eigen::LLT<Eigen::MatrixXd> vtv_llt(vtv);
  if (vtv_llt.info() != Eigen::Success)
    throw SingularMatrixError("V'V is singular");

  auto project_null = [&](const Eigen::VectorXd& g) {
    return (g - v * vtv_llt.solve(v.transpose() * g)).eval();
  };

  IterativeQp out;
  out.weights = v * vtv_llt.solve(u);  // least-squares feasible point
  for (int it = 0; it < max_iter; ++it) {
    out.iterations = it + 1;
    const Eigen::VectorXd grad = sigma * out.weights;
    const Eigen::VectorXd dir = project_null(grad);
    const double dir_norm = dir.norm();
    if (dir_norm <= tol * std::max(1.0, grad.norm())) break;
    const double curvature = dir.dot(sigma * dir);
    if (curvature <= 0.0) break;
    const double step = dir.dot(grad) / curvature;
    out.weights -= step * dir;
  }
  out.risk = out.weights.dot(sigma * out.weights);
  return out;
}

double grid_search_box(const Eigen::MatrixXd& a, const Eigen::VectorXd& lower,
                       const Eigen::VectorXd& upper, double h) {
  const int k = static_cast<int>(lower.size());
  if (k < 1 || k > 3) throw DomainError("grid search supports k in {1,2,3}");
  for (int i = 0; i < k; ++i)
    if (!std::isfinite(lower(i)) || !std::isfinite(upper(i)))
      throw DomainError("grid search needs finite bounds");

  std::vector<int> counts(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i)
    counts[static_cast<std::size_t>(i)] =
        static_cast<int>(std::floor((upper(i) - lower(i)) / h)) + 1;

  Eigen::VectorXd u(k);
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> idx(static_cast<std::size_t>(k), 0);
  while (true) {
    for (int i = 0; i < k; ++i)
      u(i) = std::min(lower(i) + idx[static_cast<std::size_t>(i)] * h, upper(i));
    best = std::min(best, u.dot(a * u));
    int pos = 0;
    while (pos < k) {
      if (++idx[static_cast<std::size_t>(pos)] <
          counts[static_cast<std::size_t>(pos)])
        break;
      idx[static_cast<std::size_t>(pos)] = 0;
      ++pos;
    }
    if (pos == k) break;
  }
  return best;
}

double poisson_series_root(double rho) {
  auto series = [&](double x) {
    double pmf = std::exp(-1.0);
    double acc = 0.0;
    for (int j = 0; j <= 60; ++j) {
      acc += pmf / (1.0 + rho * j * x);
      pmf /= (j + 1.0);
    }
    return acc;
  };
  double lo = 1e-9, hi = 1e9;
  for (int it = 0; it < 500; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (series(mid) > 1.0 - rho)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double direct_kappa_quadform_mc(const Eigen::MatrixXd& lambda, int p,
                                int replicates, std::uint64_t seed) {
  const int n = static_cast<int>(lambda.rows());
  double acc = 0.0;
  for (int r = 0; r < replicates; ++r) {
    rng::Stream stream(rng::derive(seed, 1000003ull + r));
    Eigen::MatrixXd y(n, p);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < p; ++j) y(i, j) = stream.next_normal();
    const Eigen::MatrixXd x = lambda * y;
    const Eigen::VectorXd m_hat = x.colwise().mean();
    const Eigen::MatrixXd s = x.transpose() * x / static_cast<double>(n);
    acc += m_hat.dot(s.llt().solve(m_hat));
  }
  return acc / replicates;
}

}  // namespace hdqp::crosscheck
