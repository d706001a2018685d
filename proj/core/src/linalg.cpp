#include "hdqp/linalg.hpp"

#include <cmath>
#include <vector>

namespace hdqp::linalg {

double asymmetry(const Eigen::MatrixXd& a) {
  const double scale = a.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (a - a.transpose()).cwiseAbs().maxCoeff() / scale;
}

void require_symmetric(const Eigen::MatrixXd& a, double tol,
                       const std::string& name) {
  if (a.rows() != a.cols())
    throw DomainError(name + " is not square");
  if (asymmetry(a) > tol)
    throw DomainError(name + " is not symmetric within tolerance");
}

Eigen::MatrixXd invert_symmetric(const Eigen::MatrixXd& a, double rel_tol,
                                 const std::string& name) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  if (es.info() != Eigen::Success)
    throw SingularMatrixError(name + ": eigendecomposition failed");
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double largest = ev.cwiseAbs().maxCoeff();
  const double smallest = ev.cwiseAbs().minCoeff();
  if (largest == 0.0 || smallest < rel_tol * largest)
    throw SingularMatrixError(name + " is singular to working precision");
  return es.eigenvectors() * ev.cwiseInverse().asDiagonal() *
         es.eigenvectors().transpose();
}

Eigen::LLT<Eigen::MatrixXd> spd_factor(const Eigen::MatrixXd& a,
                                       const std::string& name) {
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefiniteError(name + " is not positive definite");
  return llt;
}

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double fa,
                double b, double fb, double m, double fm, double whole,
                double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(a, fa, m, fm, flm);
  const double right = simpson(m, fm, b, fb, frm);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  return adaptive(f, a, fa, b, fb, m, fm, simpson(a, fa, b, fb, fm), tol, 48);
}

double quantile_sorted(const std::vector<double>& sorted, double prob) {
  if (sorted.empty()) throw DomainError("quantile of empty sample");
  if (prob <= 0.0) return sorted.front();
  if (prob >= 1.0) return sorted.back();
  const double h = (static_cast<double>(sorted.size()) - 1.0) * prob;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double w = h - static_cast<double>(lo);
  return sorted[lo] + w * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace hdqp::linalg
