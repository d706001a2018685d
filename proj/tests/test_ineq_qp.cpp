#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "hdqp/crosscheck.hpp"
#include "hdqp/datagen.hpp"
#include "hdqp/estimators.hpp"
#include "hdqp/ineq_qp.hpp"
#include "hdqp/rng.hpp"
#include "hdqp/spectral.hpp"
#include "test_support.hpp"

using namespace hdqp;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

VectorXd vec2(double a, double b) {
  VectorXd v(2);
  v << a, b;
  return v;
}
}  // namespace

TEST_CASE("minimize over closed-form constraint sets") {
  SUBCASE("singleton reduces to the quadratic form") {
    testsup::Gen gen(41);
    const MatrixXd a = gen.spd(3, 0.4);
    const VectorXd u = gen.vector(3);
    const auto min = ineq::minimize_over_q(a, ineq::ConstraintSet::singleton(u));
    CHECK(min.value == doctest::Approx(u.dot(a * u)).epsilon(1e-14));
  }
  SUBCASE("monotone quadratic on a positive box") {
    const auto min = ineq::minimize_over_q(
        MatrixXd::Identity(2, 2),
        ineq::ConstraintSet::box(vec2(1.0, 1.0), vec2(2.0, 2.0)));
    CHECK(min.value == doctest::Approx(2.0));
    CHECK(min.argmin(0) == doctest::Approx(1.0));
    CHECK(min.argmin(1) == doctest::Approx(1.0));
  }
  SUBCASE("half-open box with an active face") {
    MatrixXd a(2, 2);
    a << 2.0, -1.0, -1.0, 2.0;
    const auto min = ineq::minimize_over_q(
        a, ineq::ConstraintSet::box(vec2(1.0, -kInf), vec2(kInf, kInf)));
    // At u1 = 1 the free coordinate solves 2 u2 = u1.
    CHECK(min.argmin(0) == doctest::Approx(1.0));
    CHECK(min.argmin(1) == doctest::Approx(0.5));
    CHECK(min.value == doctest::Approx(1.5));
    const double grid =
        crosscheck::grid_search_box(a, vec2(1.0, -3.0), vec2(3.0, 3.0), 1e-3);
    CHECK(std::fabs(min.value - grid) < 1e-4);
  }
  SUBCASE("origin inside gives zero") {
    testsup::Gen gen(43);
    const MatrixXd a = gen.spd(2, 0.4);
    const auto min = ineq::minimize_over_q(
        a, ineq::ConstraintSet::box(vec2(-1.0, -1.0), vec2(1.0, 1.0)));
    CHECK(min.value == doctest::Approx(0.0));
  }
  SUBCASE("union takes the best box") {
    const MatrixXd a = MatrixXd::Identity(2, 2);
    std::vector<ineq::Box> boxes;
    boxes.push_back({vec2(3.0, 3.0), vec2(4.0, 4.0)});
    boxes.push_back({vec2(1.0, 1.0), vec2(2.0, 2.0)});
    const auto min =
        ineq::minimize_over_q(a, ineq::ConstraintSet::finite_union(boxes));
    CHECK(min.value == doctest::Approx(2.0));
  }
}

TEST_CASE("face enumeration agrees with grid search for k <= 3") {
  testsup::Gen gen(47);
  for (int k = 1; k <= 3; ++k) {
    const double h = (k == 1) ? 1e-4 : (k == 2 ? 1e-3 : 1e-2);
    for (int inst = 0; inst < 4; ++inst) {
      const MatrixXd a = gen.spd(k, 0.3);
      VectorXd lower(k), upper(k);
      for (int i = 0; i < k; ++i) {
        lower(i) = -2.0 + gen.unit();
        upper(i) = lower(i) + 1.0 + 2.0 * gen.unit();
      }
      const auto min =
          ineq::minimize_over_q(a, ineq::ConstraintSet::box(lower, upper));
      const double grid = crosscheck::grid_search_box(a, lower, upper, h);
      CHECK(min.value <= grid + 1e-12);
      const double radius =
          std::max(lower.cwiseAbs().maxCoeff(), upper.cwiseAbs().maxCoeff()) *
          std::sqrt(double(k));
      CHECK(grid - min.value <= 2.0 * a.cwiseAbs().sum() * radius * h *
                                    std::sqrt(double(k)));
    }
  }
}

TEST_CASE("projected-gradient fallback above the enumeration cutoff") {
  testsup::Gen gen(53);
  const int k = 10;
  const MatrixXd a = gen.spd(k, 0.4);
  VectorXd lower = VectorXd::Constant(k, 0.5);
  VectorXd upper = VectorXd::Constant(k, 2.0);
  const auto min =
      ineq::minimize_over_q(a, ineq::ConstraintSet::box(lower, upper));
  // KKT stationarity of the projected gradient at the returned point.
  const VectorXd grad = 2.0 * (a * min.argmin);
  VectorXd projected = min.argmin - grad;
  for (int i = 0; i < k; ++i)
    projected(i) = std::min(std::max(projected(i), lower(i)), upper(i));
  CHECK((min.argmin - projected).norm() < 1e-8);
}

TEST_CASE("constraint set validation and parsing") {
  SUBCASE("empty boxes rejected") {
    CHECK_THROWS_AS(ineq::ConstraintSet::box(vec2(2.0, 0.0), vec2(1.0, 1.0)),
                    InfeasibleError);
    CHECK_THROWS_AS(ineq::ConstraintSet::finite_union({}), InfeasibleError);
  }
  SUBCASE("config syntax round trip") {
    const ineq::ConstraintSet q =
        ineq::parse_constraint_set("Q = box; lower = [1, -inf]; upper = [2, inf]");
    CHECK(q.kind() == ineq::ConstraintSet::Kind::box);
    REQUIRE(q.boxes().size() == 1);
    CHECK(q.boxes()[0].lower(0) == 1.0);
    CHECK(q.boxes()[0].lower(1) == -kInf);
    CHECK(q.boxes()[0].upper(0) == 2.0);
    CHECK(q.boxes()[0].upper(1) == kInf);
    CHECK_FALSE(q.contains_origin());
  }
  SUBCASE("singleton and union parsing") {
    const ineq::ConstraintSet s =
        ineq::parse_constraint_set("Q = singleton; u = [1.5, -2]");
    CHECK(s.kind() == ineq::ConstraintSet::Kind::singleton);
    CHECK(s.point()(1) == -2.0);
    const ineq::ConstraintSet un = ineq::parse_constraint_set(
        "Q = union; lower1 = [0, 0]; upper1 = [1, 1]; lower2 = [2, 2]; "
        "upper2 = [3, 3]");
    CHECK(un.boxes().size() == 2);
    CHECK(un.contains_origin());
  }
  SUBCASE("unknown kinds and bad fields") {
    CHECK_THROWS_AS(ineq::parse_constraint_set("Q = ball; r = [1]"),
                    ConfigError);
    CHECK_THROWS_AS(ineq::parse_constraint_set("lower = [1]"), ConfigError);
  }
}

TEST_CASE("quadratic form must be positive definite") {
  MatrixXd indefinite(2, 2);
  indefinite << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(
      ineq::minimize_over_q(indefinite,
                            ineq::ConstraintSet::box(vec2(1, 1), vec2(2, 2))),
      NotPositiveDefiniteError);
}

TEST_CASE("deterministic equivalents and corrected frontiers") {
  const datagen::SpectralModel model(datagen::toeplitz_sigma(100, 0.4));
  const auto cons = datagen::build_constraints(model, 90, 15, 0.3);
  const Eigen::LLT<MatrixXd> sigma_llt(model.sigma);
  MatrixXd v(100, 2);
  v << cons.v1, cons.mu;
  MatrixXd m = v.transpose() * sigma_llt.solve(v);
  m = 0.5 * (m + m.transpose()).eval();
  const ineq::ConstraintSet q =
      ineq::ConstraintSet::box(vec2(1.0, 2.0), vec2(1.0, 5.0));
  const double f_theo_q = ineq::minimize_over_q(m.inverse(), q).value;

  SUBCASE("classical regime recovers the population value") {
    CHECK(ineq::deterministic_equivalent(m, 1.0, 0.0, q) ==
          doctest::Approx(f_theo_q).epsilon(1e-10));
  }
  SUBCASE("pure scaling divides the population value") {
    for (double s : {1.4, 2.0}) {
      CHECK(ineq::deterministic_equivalent(m, s, 0.0, q) ==
            doctest::Approx(f_theo_q / s).epsilon(1e-10));
    }
  }
  SUBCASE("simulation parameters sit strictly below the population value") {
    const double det = ineq::deterministic_equivalent(m, 1.0 / 0.6,
                                                      spectral::kappa(0.4), q);
    CHECK(det < f_theo_q);
  }
  SUBCASE("corrected singleton equals the equality-constrained corrector") {
    testsup::Gen gen(59);
    const MatrixXd m_hat = gen.spd(2, 0.5);
    const VectorXd u = vec2(1.0, 3.0);
    const double kappa_n = 0.55, s_hat = 1.8;
    const double via_ineq = ineq::corrected_ineq_frontier(
        m_hat, kappa_n, s_hat, ineq::ConstraintSet::singleton(u));
    const double f_naive = u.dot(m_hat.inverse() * u);
    const auto mt = estimators::m_tilde(m_hat, kappa_n);
    const double via_eq =
        estimators::corrected_frontier(f_naive, mt.m_tilde, u, kappa_n, s_hat);
    CHECK(via_ineq == doctest::Approx(via_eq).epsilon(1e-10));
  }

  SUBCASE("plug-in frontier over the box underestimates") {
    // 500 small-scale Gaussian replicates: the inequality-constrained
    // plug-in value stays at or below (1/S) fTheo(Q) within tolerance.
    const double s_gauss = 1.0 / 0.6;
    int below = 0;
    const int reps = 500;
    double acc = 0.0;
    for (int r = 0; r < reps; ++r) {
      const datagen::SampleSet sample =
          datagen::sample_gaussian(250, cons.mu, model, rng::derive(61, r));
      MatrixXd v_hat(100, 2);
      v_hat << cons.v1, sample.mu_hat;
      const Eigen::LLT<MatrixXd> llt(sample.sigma_hat);
      MatrixXd m_hat = v_hat.transpose() * llt.solve(v_hat);
      m_hat = 0.5 * (m_hat + m_hat.transpose()).eval();
      const double f_emp = ineq::empirical_ineq_frontier(m_hat, q);
      acc += f_emp;
      if (f_emp <= f_theo_q / s_gauss + 0.10 * f_theo_q) ++below;
    }
    CHECK(static_cast<double>(below) / reps > 0.9);
    // Underestimation persists in the mean, below even the covariance-only
    // bound (1/S) fTheo(Q).
    CHECK(acc / reps < f_theo_q / s_gauss);
  }
}

TEST_CASE("large-sample behavior of the inequality-constrained frontier") {
  const datagen::SpectralModel model(datagen::toeplitz_sigma(1000, 0.4));
  const auto cons = datagen::build_constraints(model, 900, 150, 0.3);
  const Eigen::LLT<MatrixXd> sigma_llt(model.sigma);
  MatrixXd v(1000, 2);
  v << cons.v1, cons.mu;
  MatrixXd m = v.transpose() * sigma_llt.solve(v);
  m = 0.5 * (m + m.transpose()).eval();
  const ineq::ConstraintSet q =
      ineq::ConstraintSet::box(vec2(1.0, 2.0), vec2(1.0, 5.0));
  const double f_theo_q = ineq::minimize_over_q(m.inverse(), q).value;
  const double det_equiv = ineq::deterministic_equivalent(
      m, 1.0 / 0.6, spectral::kappa(0.4), q);

  const int reps = 40;
  double acc_emp = 0.0, acc_corr_g = 0.0, acc_corr_t = 0.0;
  for (int r = 0; r < reps; ++r) {
    const datagen::SampleSet sample = datagen::sample_gaussian(
        2500, cons.mu, model, rng::derive(67, r));
    const estimators::SampleAnalysis analysis(sample, cons.v1);
    acc_emp += ineq::empirical_ineq_frontier(analysis.m_hat(), q);
    acc_corr_g += ineq::corrected_ineq_frontier(
        analysis.m_hat(), analysis.kappa_n(), analysis.s_hat(), q);

    const datagen::SampleSet t6 = datagen::sample_elliptical(
        2500, cons.mu, model, datagen::LambdaLaw::scaled_t(6),
        rng::derive(68, r));
    const estimators::SampleAnalysis analysis_t(t6, cons.v1);
    acc_corr_t += ineq::corrected_ineq_frontier(
        analysis_t.m_hat(), analysis_t.kappa_n(), analysis_t.s_hat(), q);
  }
  // Deterministic-equivalent convergence of the plug-in value.
  CHECK(std::fabs(acc_emp / reps - det_equiv) < 0.05 * det_equiv);
  // Corrected values recover the population frontier for both models.
  CHECK(std::fabs(acc_corr_g / reps - f_theo_q) < 0.05 * f_theo_q);
  CHECK(std::fabs(acc_corr_t / reps - f_theo_q) < 0.05 * f_theo_q);
}

TEST_CASE("stability of the minimum under form perturbations") {
  testsup::Gen gen(71);
  for (int inst = 0; inst < 100; ++inst) {
    const int k = 2 + gen.below(2);
    // Eigenvalues within [0.2, 2] so the stated bound applies.
    MatrixXd basis = gen.matrix(k, k);
    const Eigen::HouseholderQR<MatrixXd> qr(basis);
    const MatrixXd orth = qr.householderQ();
    VectorXd eigs(k);
    for (int i = 0; i < k; ++i) eigs(i) = 0.2 + 1.8 * gen.unit();
    const MatrixXd a = orth * eigs.asDiagonal() * orth.transpose();
    const double c0 = eigs.minCoeff();

    VectorXd lower(k), upper(k);
    for (int i = 0; i < k; ++i) {
      lower(i) = 0.5 + gen.unit();
      upper(i) = lower(i) + 1.0 + gen.unit();
    }
    const ineq::ConstraintSet q = ineq::ConstraintSet::box(lower, upper);

    const double delta = 0.02 + 0.3 * gen.unit();
    MatrixXd noise = gen.matrix(k, k);
    noise = 0.5 * (noise + noise.transpose()).eval();
    noise *= (delta * c0 / 2.0) / std::max(noise.cwiseAbs().sum(), 1e-12);
    const MatrixXd a_hat = a + noise;

    const double g0_u0 = lower.dot(a * lower);  // U0 = the lower corner
    const double r0_sq = 2.0 * g0_u0 / c0;
    const double lhs = std::fabs(ineq::minimize_over_q(a_hat, q).value -
                                 ineq::minimize_over_q(a, q).value);
    CHECK(lhs <= delta * r0_sq + 1e-12);
  }
}

TEST_CASE("enlarging the constraint set never raises the minimum") {
  testsup::Gen gen(73);
  for (int inst = 0; inst < 50; ++inst) {
    const int k = 1 + gen.below(3);
    const MatrixXd a = gen.spd(k, 0.3);
    VectorXd lower(k), upper(k);
    for (int i = 0; i < k; ++i) {
      lower(i) = -1.0 + 2.0 * gen.unit();
      upper(i) = lower(i) + 0.5 + gen.unit();
    }
    const double inner =
        ineq::minimize_over_q(a, ineq::ConstraintSet::box(lower, upper)).value;
    const VectorXd wider_lo = lower.array() - 0.7;
    const VectorXd wider_hi = upper.array() + 0.7;
    const double outer =
        ineq::minimize_over_q(a, ineq::ConstraintSet::box(wider_lo, wider_hi))
            .value;
    CHECK(outer <= inner + 1e-12);
  }
}
