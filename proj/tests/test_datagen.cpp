#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "hdqp/datagen.hpp"
#include "test_support.hpp"

using namespace hdqp;
using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST_CASE("toeplitz covariance") {
  SUBCASE("alpha 0 is the identity") {
    CHECK(datagen::toeplitz_sigma(2, 0.0).isApprox(MatrixXd::Identity(2, 2)));
  }
  SUBCASE("p=3 alpha=0.4 entries") {
    const MatrixXd s = datagen::toeplitz_sigma(3, 0.4);
    MatrixXd expected(3, 3);
    expected << 1.0, 0.4, 0.16, 0.4, 1.0, 0.4, 0.16, 0.4, 1.0;
    CHECK((s - expected).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("smallest eigenvalue near (1-a)/(1+a)") {
    const MatrixXd s = datagen::toeplitz_sigma(100, 0.4);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(s);
    const double smallest = es.eigenvalues()(0);
    CHECK(smallest > 0.0);
    CHECK(std::fabs(smallest - 3.0 / 7.0) < 0.05 * 3.0 / 7.0);
  }
  SUBCASE("invalid alpha") {
    CHECK_THROWS_AS(datagen::toeplitz_sigma(4, 1.0), DomainError);
    CHECK_THROWS_AS(datagen::toeplitz_sigma(4, -0.1), DomainError);
    CHECK_THROWS_AS(datagen::toeplitz_sigma(0, 0.4), DomainError);
  }
}

TEST_CASE("constraint construction from eigenvectors") {
  const datagen::SpectralModel model(datagen::toeplitz_sigma(100, 0.4));

  SUBCASE("weight 1 returns v1") {
    const datagen::Constraints c = datagen::build_constraints(model, 90, 15, 1.0);
    CHECK((c.mu - c.v1).norm() < 1e-14);
  }
  SUBCASE("small simulation setup") {
    const datagen::Constraints c = datagen::build_constraints(model, 90, 15, 0.3);
    CHECK(c.mu.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.mu.dot(c.v1) == doctest::Approx(std::sqrt(0.3)).epsilon(1e-12));
    // Sign convention: first nonzero component positive.
    CHECK(c.v1(0) > 0.0);
  }
  SUBCASE("large simulation setup") {
    const datagen::SpectralModel big(datagen::toeplitz_sigma(1000, 0.4));
    const datagen::Constraints c = datagen::build_constraints(big, 900, 150, 0.3);
    CHECK(std::fabs(c.mu.dot(c.v1) - std::sqrt(0.3)) < 1e-10);
    CHECK(std::fabs(c.mu.norm() - 1.0) < 1e-10);
  }
  SUBCASE("rank out of bounds") {
    CHECK_THROWS_AS(datagen::build_constraints(model, 0, 15, 0.3), DomainError);
    CHECK_THROWS_AS(datagen::build_constraints(model, 101, 15, 0.3), DomainError);
    CHECK_THROWS_AS(datagen::build_constraints(model, 90, 15, 1.5), DomainError);
  }
}

TEST_CASE("gaussian sampling sanity and determinism") {
  SUBCASE("law of large numbers at n=10000, p=2") {
    const datagen::SampleSet s = datagen::sample_gaussian(
        10000, VectorXd::Zero(2), MatrixXd::Identity(2, 2), 11);
    CHECK(s.mu_hat.norm() < 0.05);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(s.sigma_hat -
                                               MatrixXd::Identity(2, 2));
    CHECK(es.eigenvalues().cwiseAbs().maxCoeff() < 0.1);
  }
  SUBCASE("same seed twice is bit-identical") {
    const datagen::SpectralModel model(datagen::toeplitz_sigma(20, 0.4));
    const VectorXd mu = VectorXd::Ones(20);
    const datagen::SampleSet a = datagen::sample_gaussian(50, mu, model, 7);
    const datagen::SampleSet b = datagen::sample_gaussian(50, mu, model, 7);
    CHECK(a.data == b.data);
    const datagen::SampleSet c = datagen::sample_gaussian(50, mu, model, 8);
    CHECK(a.data != c.data);
  }
  SUBCASE("n=250 p=100 sample covariance has full rank") {
    const datagen::SpectralModel model(datagen::toeplitz_sigma(100, 0.4));
    const datagen::SampleSet s =
        datagen::sample_gaussian(250, VectorXd::Zero(100), model, 12);
    Eigen::LLT<MatrixXd> llt(s.sigma_hat);
    CHECK(llt.info() == Eigen::Success);
  }
}

TEST_CASE("elliptical sampling") {
  const datagen::SpectralModel model(datagen::toeplitz_sigma(10, 0.4));
  const VectorXd mu = VectorXd::Zero(10);

  SUBCASE("point mass 1 equals the gaussian pipeline exactly") {
    const datagen::SampleSet g = datagen::sample_gaussian(40, mu, model, 99);
    const datagen::SampleSet e = datagen::sample_elliptical(
        40, mu, model, datagen::LambdaLaw::point_mass(1.0), 99);
    CHECK(g.data == e.data);
    CHECK(e.lambda_sq_true.size() == 40);
    CHECK(e.lambda_sq_true.maxCoeff() == 1.0);
  }
  SUBCASE("scaled t6 has unit mean lambda^2") {
    const datagen::SpectralModel tiny(MatrixXd::Identity(2, 2));
    const datagen::SampleSet s = datagen::sample_elliptical(
        100000, VectorXd::Zero(2), tiny, datagen::LambdaLaw::scaled_t(6), 13);
    CHECK(std::fabs(s.lambda_sq_true.mean() - 1.0) < 0.02);
  }
  SUBCASE("constant empirical law gives equal lambdas") {
    const datagen::LambdaLaw law =
        datagen::LambdaLaw::empirical(4.0 * VectorXd::Ones(30));
    const datagen::SampleSet s = datagen::sample_elliptical(30, mu, model, law, 5);
    CHECK((s.lambda_sq_true.array() - 1.0).abs().maxCoeff() < 1e-14);
  }
  SUBCASE("df too small rejected") {
    CHECK_THROWS_WITH_AS(datagen::LambdaLaw::scaled_t(2),
                         doctest::Contains("degrees of freedom"), DomainError);
  }
  SUBCASE("empirical law entries must be positive") {
    VectorXd tau = VectorXd::Ones(5);
    tau(2) = 0.0;
    CHECK_THROWS_AS(datagen::LambdaLaw::empirical(tau), DomainError);
  }
}

TEST_CASE("correlated sampling") {
  const int n = 40;
  const datagen::SpectralModel model(datagen::toeplitz_sigma(8, 0.4));
  const VectorXd mu = VectorXd::Ones(8);

  SUBCASE("identity mixing equals the gaussian pipeline") {
    const datagen::SampleSet g = datagen::sample_gaussian(n, mu, model, 17);
    const datagen::SampleSet c =
        datagen::sample_correlated(n, mu, model, MatrixXd::Identity(n, n), 17);
    CHECK(g.data == c.data);
  }
  SUBCASE("diagonal mixing equals the elliptical sampler") {
    // tau with mean exactly 1 so the empirical-law normalization is a no-op.
    VectorXd tau(n);
    for (int i = 0; i < n; ++i) tau(i) = (i % 2 == 0) ? 0.5 : 1.5;
    const datagen::SampleSet e = datagen::sample_elliptical(
        n, mu, model, datagen::LambdaLaw::empirical(tau), 23);
    const datagen::SampleSet c = datagen::sample_correlated(
        n, mu, model, MatrixXd(tau.cwiseSqrt().asDiagonal()), 23);
    CHECK((e.data - c.data).cwiseAbs().maxCoeff() <=
          1e-14 * c.data.cwiseAbs().maxCoeff());
  }
  SUBCASE("banded mixing widens the sample eigenvalue spread") {
    const datagen::SpectralModel big(datagen::toeplitz_sigma(100, 0.4));
    const MatrixXd banded = testsup::banded_mixing(500, 0.3, 8);
    double top_iid = 0.0, top_banded = 0.0;
    for (int r = 0; r < 50; ++r) {
      const datagen::SampleSet iid =
          datagen::sample_gaussian(500, VectorXd::Zero(100), big, 1000 + r);
      const datagen::SampleSet mixed = datagen::sample_correlated(
          500, VectorXd::Zero(100), big, banded, 2000 + r);
      Eigen::SelfAdjointEigenSolver<MatrixXd> es_iid(iid.sigma_hat);
      Eigen::SelfAdjointEigenSolver<MatrixXd> es_mix(mixed.sigma_hat);
      top_iid += es_iid.eigenvalues()(99);
      top_banded += es_mix.eigenvalues()(99);
    }
    CHECK(top_banded / 50.0 > top_iid / 50.0);
  }
  SUBCASE("rank-deficient mixing rejected") {
    MatrixXd bad = MatrixXd::Identity(n, n);
    bad(3, 3) = 0.0;
    CHECK_THROWS_AS(datagen::sample_correlated(n, mu, model, bad, 3),
                    RankDeficientError);
    MatrixXd dense_bad = MatrixXd::Ones(n, n);  // rank 1
    CHECK_THROWS_AS(datagen::sample_correlated(n, mu, model, dense_bad, 3),
                    RankDeficientError);
  }
}

TEST_CASE("sample moment invariants") {
  const datagen::SpectralModel model(datagen::toeplitz_sigma(12, 0.4));
  testsup::Gen gen(31);
  const VectorXd mu = gen.vector(12);

  SUBCASE("stored moments recompute bit-exactly") {
    const datagen::SampleSet s = datagen::sample_elliptical(
        60, mu, model, datagen::LambdaLaw::scaled_t(6), 77);
    VectorXd mu_hat;
    MatrixXd sigma_hat;
    datagen::compute_moments(s.data, mu_hat, sigma_hat);
    CHECK(mu_hat == s.mu_hat);
    CHECK(sigma_hat == s.sigma_hat);
  }
  SUBCASE("sample covariance is PSD in all models") {
    for (int seed = 0; seed < 3; ++seed) {
      const datagen::SampleSet s = datagen::sample_elliptical(
          30, mu, model, datagen::LambdaLaw::scaled_t(6), 100 + seed);
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(s.sigma_hat);
      CHECK(es.eigenvalues()(0) >= -1e-10 * s.sigma_hat.trace());
    }
  }
  SUBCASE("shift equivariance") {
    const datagen::SampleSet base =
        datagen::sample_gaussian(25, VectorXd::Zero(12), model, 55);
    const datagen::SampleSet shifted = datagen::sample_gaussian(25, mu, model, 55);
    const MatrixXd manual = base.data.rowwise() + mu.transpose();
    CHECK(manual == shifted.data);
  }
}

TEST_CASE("sample CSV round trip") {
  const datagen::SpectralModel model(datagen::toeplitz_sigma(6, 0.4));
  const datagen::SampleSet s = datagen::sample_elliptical(
      15, VectorXd::Ones(6), model, datagen::LambdaLaw::scaled_t(6), 44);
  const std::string dir =
      (std::filesystem::temp_directory_path() / "hdqp_datagen_test").string();
  std::filesystem::create_directories(dir);
  datagen::write_sample(s, dir + "/data.csv", dir + "/meta.txt");
  const datagen::SampleSet back =
      datagen::read_sample(dir + "/data.csv", dir + "/meta.txt");
  CHECK(back.n() == s.n());
  CHECK(back.p() == s.p());
  CHECK(back.seed == s.seed);
  CHECK(back.model == s.model);
  CHECK((back.data - s.data).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.mu_hat == s.mu_hat);
  std::filesystem::remove_all(dir);
}
