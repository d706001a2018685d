#include "hdqp/datagen.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

#include "hdqp/linalg.hpp"
#include "hdqp/rng.hpp"

namespace hdqp::datagen {

namespace {
// Sub-stream tags for splitting one sample seed into independent streams.
constexpr std::uint64_t kLambdaStream = 1;
constexpr std::uint64_t kNoiseStream = 2;
}  // namespace

std::string to_string(ModelTag tag) {
  switch (tag) {
    case ModelTag::gaussian: return "gaussian";
    case ModelTag::elliptical: return "elliptical";
    case ModelTag::correlated: return "correlated";
  }
  return "unknown";
}

ModelTag model_tag_from_string(const std::string& s) {
  if (s == "gaussian") return ModelTag::gaussian;
  if (s == "elliptical") return ModelTag::elliptical;
  if (s == "correlated") return ModelTag::correlated;
  throw DomainError("unknown model tag: " + s);
}

LambdaLaw LambdaLaw::point_mass(double c) {
  if (!(c > 0.0)) throw DomainError("point mass must be positive");
  LambdaLaw law;
  law.kind_ = Kind::point_mass;
  law.c_ = c;
  return law;
}

LambdaLaw LambdaLaw::scaled_t(int df) {
  if (df <= 2)
    throw DomainError("degrees of freedom too small: scaled_t needs df > 2");
  LambdaLaw law;
  law.kind_ = Kind::scaled_t;
  law.df_ = df;
  return law;
}

LambdaLaw LambdaLaw::empirical(Eigen::VectorXd tau) {
  if (tau.size() == 0) throw DomainError("empirical tau vector is empty");
  if (tau.minCoeff() <= 0.0)
    throw DomainError("empirical tau entries must be positive");
  tau /= tau.mean();  // E(lambda^2) = 1
  LambdaLaw law;
  law.kind_ = Kind::empirical;
  law.tau_ = std::move(tau);
  return law;
}

std::string LambdaLaw::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::point_mass: os << "point_mass(" << c_ << ")"; break;
    case Kind::scaled_t: os << "scaled_t(" << df_ << ")"; break;
    case Kind::empirical: os << "empirical(" << tau_.size() << ")"; break;
  }
  return os.str();
}

void compute_moments(const Eigen::MatrixXd& data, Eigen::VectorXd& mu_hat,
                     Eigen::MatrixXd& sigma_hat) {
  const int n = static_cast<int>(data.rows());
  const int p = static_cast<int>(data.cols());
  if (n < 2) throw DomainError("need at least two observations");
  mu_hat = data.colwise().mean();
  Eigen::MatrixXd centered = data.rowwise() - mu_hat.transpose();
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(p, p);
  acc.selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose());
  sigma_hat = acc.selfadjointView<Eigen::Lower>();
  sigma_hat /= static_cast<double>(n - 1);
}

Eigen::MatrixXd toeplitz_sigma(int p, double alpha) {
  if (p < 1) throw DomainError("dimension must be at least 1");
  if (!(alpha >= 0.0 && alpha < 1.0))
    throw DomainError("alpha must lie in [0, 1)");
  Eigen::VectorXd powers(p);
  powers(0) = 1.0;
  for (int d = 1; d < p; ++d) powers(d) = powers(d - 1) * alpha;
  Eigen::MatrixXd sigma(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) sigma(i, j) = powers(std::abs(i - j));
  return sigma;
}

SpectralModel::SpectralModel(const Eigen::MatrixXd& s) : sigma(s) {
  linalg::require_symmetric(s, 1e-12, "sigma");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  if (es.info() != Eigen::Success)
    throw Error("eigendecomposition of sigma failed");
  eigenvalues = es.eigenvalues();
  eigenvectors = es.eigenvectors();
  if (eigenvalues.minCoeff() <= 0.0)
    throw NotPositiveDefiniteError("sigma is not positive definite");
  // Fix signs: first nonzero component of every eigenvector positive.
  for (int j = 0; j < eigenvectors.cols(); ++j) {
    for (int i = 0; i < eigenvectors.rows(); ++i) {
      const double x = eigenvectors(i, j);
      if (x != 0.0) {
        if (x < 0.0) eigenvectors.col(j) = -eigenvectors.col(j);
        break;
      }
    }
  }
  sqrt = eigenvectors * eigenvalues.cwiseSqrt().asDiagonal() *
         eigenvectors.transpose();
}

Constraints build_constraints(const SpectralModel& model, int idx_v1,
                              int idx_beta2, double weight) {
  const int p = static_cast<int>(model.eigenvalues.size());
  if (idx_v1 < 1 || idx_v1 > p || idx_beta2 < 1 || idx_beta2 > p)
    throw DomainError("eigen rank out of bounds");
  if (!(weight >= 0.0 && weight <= 1.0))
    throw DomainError("weight must lie in [0, 1]");
  Constraints c;
  c.v1 = model.eigenvectors.col(idx_v1 - 1);
  const Eigen::VectorXd beta2 = model.eigenvectors.col(idx_beta2 - 1);
  c.mu = std::sqrt(weight) * c.v1 + std::sqrt(1.0 - weight) * beta2;
  return c;
}

Constraints build_constraints(const Eigen::MatrixXd& sigma, int idx_v1,
                              int idx_beta2, double weight) {
  return build_constraints(SpectralModel(sigma), idx_v1, idx_beta2, weight);
}

namespace {

Eigen::VectorXd draw_lambda(const LambdaLaw& law, int n, rng::Stream& stream) {
  Eigen::VectorXd lambda(n);
  switch (law.kind()) {
    case LambdaLaw::Kind::point_mass:
      lambda.setConstant(std::sqrt(law.point()));
      break;
    case LambdaLaw::Kind::scaled_t: {
      const int df = law.df();
      const double scale = std::sqrt((df - 2.0) / df);
      for (int i = 0; i < n; ++i) {
        const double z = stream.next_normal();
        double chi2 = 0.0;
        for (int j = 0; j < df; ++j) {
          const double g = stream.next_normal();
          chi2 += g * g;
        }
        lambda(i) = scale * z * std::sqrt(df / chi2);
      }
      break;
    }
    case LambdaLaw::Kind::empirical: {
      if (law.tau().size() != n)
        throw DomainError(
            "empirical lambda law must have one tau per observation");
      lambda = law.tau().cwiseSqrt();
      break;
    }
  }
  return lambda;
}

/// Shared generation path: rows of Y scaled by lambda, multiplied by the
/// symmetric square root, then shifted by mu. All samplers funnel through
/// here so the reduction identities between models hold bit for bit.
SampleSet generate(int n, const Eigen::VectorXd& mu, const SpectralModel& model,
                   const Eigen::VectorXd& lambda, std::uint64_t seed,
                   ModelTag tag, std::string detail) {
  const int p = static_cast<int>(model.sigma.rows());
  if (mu.size() != p) throw DomainError("mu has wrong length");
  if (n < 2) throw DomainError("need at least two observations");

  rng::Stream noise(rng::derive(seed, kNoiseStream));
  Eigen::MatrixXd y(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) y(i, j) = noise.next_normal();
  y.array().colwise() *= lambda.array();

  SampleSet out;
  out.data.noalias() = y * model.sqrt;
  out.data.rowwise() += mu.transpose();
  out.model = tag;
  out.model_detail = std::move(detail);
  out.seed = seed;
  if (tag == ModelTag::elliptical) out.lambda_sq_true = lambda.array().square();
  compute_moments(out.data, out.mu_hat, out.sigma_hat);
  return out;
}

}  // namespace

SampleSet sample_gaussian(int n, const Eigen::VectorXd& mu,
                          const SpectralModel& model, std::uint64_t seed) {
  return generate(n, mu, model, Eigen::VectorXd::Ones(n), seed,
                  ModelTag::gaussian, "iid");
}

SampleSet sample_gaussian(int n, const Eigen::VectorXd& mu,
                          const Eigen::MatrixXd& sigma, std::uint64_t seed) {
  return sample_gaussian(n, mu, SpectralModel(sigma), seed);
}

SampleSet sample_elliptical(int n, const Eigen::VectorXd& mu,
                            const SpectralModel& model, const LambdaLaw& law,
                            std::uint64_t seed) {
  rng::Stream lam_stream(rng::derive(seed, kLambdaStream));
  const Eigen::VectorXd lambda = draw_lambda(law, n, lam_stream);
  return generate(n, mu, model, lambda, seed, ModelTag::elliptical,
                  law.describe());
}

SampleSet sample_elliptical(int n, const Eigen::VectorXd& mu,
                            const Eigen::MatrixXd& sigma, const LambdaLaw& law,
                            std::uint64_t seed) {
  return sample_elliptical(n, mu, SpectralModel(sigma), law, seed);
}

SampleSet sample_correlated(int n, const Eigen::VectorXd& mu,
                            const SpectralModel& model,
                            const Eigen::MatrixXd& lambda, std::uint64_t seed) {
  if (lambda.rows() != n || lambda.cols() != n)
    throw DomainError("Lambda must be n x n");

  const bool diagonal = lambda.isDiagonal(0.0);
  if (diagonal) {
    const Eigen::VectorXd d = lambda.diagonal();
    if (d.cwiseAbs().minCoeff() <= 1e-10 * d.cwiseAbs().maxCoeff())
      throw RankDeficientError("Lambda is rank deficient");
    SampleSet out =
        generate(n, mu, model, d, seed, ModelTag::correlated, "diagonal");
    out.lambda_sq_true = d.array().square();
    return out;
  }

  Eigen::BDCSVD<Eigen::MatrixXd> svd(lambda);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= 1e-10 * sv(0))
    throw RankDeficientError("Lambda is rank deficient");

  rng::Stream noise(rng::derive(seed, kNoiseStream));
  const int p = static_cast<int>(model.sigma.rows());
  Eigen::MatrixXd y(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) y(i, j) = noise.next_normal();

  SampleSet out;
  out.data.noalias() = (lambda * y) * model.sqrt;
  out.data.rowwise() += mu.transpose();
  out.model = ModelTag::correlated;
  out.model_detail = "general";
  out.seed = seed;
  compute_moments(out.data, out.mu_hat, out.sigma_hat);
  return out;
}

SampleSet sample_correlated(int n, const Eigen::VectorXd& mu,
                            const Eigen::MatrixXd& sigma,
                            const Eigen::MatrixXd& lambda, std::uint64_t seed) {
  return sample_correlated(n, mu, SpectralModel(sigma), lambda, seed);
}

void write_sample(const SampleSet& sample, const std::string& data_path,
                  const std::string& meta_path) {
  std::ofstream data(data_path);
  if (!data) throw Error("cannot open " + data_path);
  data.precision(17);
  for (int i = 0; i < sample.n(); ++i) {
    for (int j = 0; j < sample.p(); ++j) {
      if (j) data << ',';
      data << sample.data(i, j);
    }
    data << '\n';
  }
  std::ofstream meta(meta_path);
  if (!meta) throw Error("cannot open " + meta_path);
  meta << "model=" << to_string(sample.model) << '\n'
       << "detail=" << sample.model_detail << '\n'
       << "seed=" << sample.seed << '\n'
       << "n=" << sample.n() << '\n'
       << "p=" << sample.p() << '\n';
}

SampleSet read_sample(const std::string& data_path,
                      const std::string& meta_path) {
  std::ifstream meta(meta_path);
  if (!meta) throw Error("cannot open " + meta_path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(meta, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  const int n = std::stoi(kv.at("n"));
  const int p = std::stoi(kv.at("p"));

  SampleSet out;
  out.model = model_tag_from_string(kv.at("model"));
  out.model_detail = kv.count("detail") ? kv.at("detail") : "";
  out.seed = std::stoull(kv.at("seed"));
  out.data.resize(n, p);

  std::ifstream data(data_path);
  if (!data) throw Error("cannot open " + data_path);
  for (int i = 0; i < n; ++i) {
    if (!std::getline(data, line)) throw Error("truncated sample file");
    std::stringstream ss(line);
    std::string cell;
    for (int j = 0; j < p; ++j) {
      if (!std::getline(ss, cell, ',')) throw Error("short row in sample file");
      out.data(i, j) = std::stod(cell);
    }
  }
  compute_moments(out.data, out.mu_hat, out.sigma_hat);
  return out;
}

}  // namespace hdqp::datagen
