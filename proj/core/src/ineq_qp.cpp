#include "hdqp/ineq_qp.hpp"

#include <atomic>
#include <cmath>
#include <map>
#include <iostream>
#include <limits>
#include <sstream>

#include "hdqp/estimators.hpp"
#include "hdqp/linalg.hpp"

namespace hdqp::ineq {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_box(const Box& b) {
  if (b.lower.size() != b.upper.size() || b.lower.size() == 0)
    throw DomainError("box bounds must have equal, nonzero length");
  for (int i = 0; i < b.lower.size(); ++i) {
    if (std::isnan(b.lower(i)) || std::isnan(b.upper(i)))
      throw DomainError("box bounds must not be NaN");
    if (b.lower(i) > b.upper(i))
      throw InfeasibleError("box has lower > upper; constraint set is empty");
  }
}
}  // namespace

ConstraintSet ConstraintSet::singleton(Eigen::VectorXd u) {
  if (u.size() == 0) throw DomainError("singleton point is empty");
  ConstraintSet q;
  q.kind_ = Kind::singleton;
  q.point_ = std::move(u);
  return q;
}

ConstraintSet ConstraintSet::box(Eigen::VectorXd lower, Eigen::VectorXd upper) {
  Box b{std::move(lower), std::move(upper)};
  validate_box(b);
  ConstraintSet q;
  q.kind_ = Kind::box;
  q.boxes_.push_back(std::move(b));
  return q;
}

ConstraintSet ConstraintSet::finite_union(std::vector<Box> boxes) {
  if (boxes.empty()) throw InfeasibleError("empty union of boxes");
  for (const Box& b : boxes) validate_box(b);
  for (std::size_t i = 1; i < boxes.size(); ++i)
    if (boxes[i].lower.size() != boxes[0].lower.size())
      throw DomainError("union boxes must share one dimension");
  ConstraintSet q;
  q.kind_ = Kind::finite_union;
  q.boxes_ = std::move(boxes);
  return q;
}

int ConstraintSet::dim() const {
  return kind_ == Kind::singleton ? static_cast<int>(point_.size())
                                  : static_cast<int>(boxes_[0].lower.size());
}

bool ConstraintSet::contains_origin() const {
  if (kind_ == Kind::singleton) return point_.isZero(0.0);
  for (const Box& b : boxes_) {
    bool inside = true;
    for (int i = 0; i < b.lower.size(); ++i)
      if (b.lower(i) > 0.0 || b.upper(i) < 0.0) {
        inside = false;
        break;
      }
    if (inside) return true;
  }
  return false;
}

namespace {

Eigen::VectorXd parse_vector(std::string body) {
  for (char& c : body)
    if (c == '[' || c == ']') c = ' ';
  std::vector<double> vals;
  std::stringstream ss(body);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    std::string token;
    std::stringstream(cell) >> token;
    if (token.empty()) continue;
    if (token == "inf" || token == "+inf")
      vals.push_back(kInf);
    else if (token == "-inf")
      vals.push_back(-kInf);
    else
      vals.push_back(std::stod(token));
  }
  if (vals.empty()) throw ConfigError("empty vector literal");
  return Eigen::Map<Eigen::VectorXd>(vals.data(),
                                     static_cast<Eigen::Index>(vals.size()));
}

}  // namespace

ConstraintSet parse_constraint_set(const std::string& text) {
  // Split `key = value` fields on ';'.
  std::map<std::string, std::string> kv;
  std::stringstream ss(text);
  std::string field;
  while (std::getline(ss, field, ';')) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) continue;
    std::string key, value = field.substr(eq + 1);
    std::stringstream(field.substr(0, eq)) >> key;
    // trim value
    const auto first = value.find_first_not_of(" \t");
    const auto last = value.find_last_not_of(" \t");
    if (first == std::string::npos) throw ConfigError("empty value for " + key);
    kv[key] = value.substr(first, last - first + 1);
  }
  if (!kv.count("Q")) throw ConfigError("constraint set needs a Q = ... field");
  const std::string& kind = kv.at("Q");
  if (kind == "singleton") {
    if (!kv.count("u")) throw ConfigError("singleton needs u = [...]");
    return ConstraintSet::singleton(parse_vector(kv.at("u")));
  }
  if (kind == "box") {
    if (!kv.count("lower") || !kv.count("upper"))
      throw ConfigError("box needs lower = [...] and upper = [...]");
    return ConstraintSet::box(parse_vector(kv.at("lower")),
                              parse_vector(kv.at("upper")));
  }
  if (kind == "union") {
    std::vector<Box> boxes;
    for (int i = 1;; ++i) {
      const std::string lo = "lower" + std::to_string(i);
      const std::string hi = "upper" + std::to_string(i);
      if (!kv.count(lo) || !kv.count(hi)) break;
      boxes.push_back(Box{parse_vector(kv.at(lo)), parse_vector(kv.at(hi))});
    }
    return ConstraintSet::finite_union(std::move(boxes));
  }
  throw ConfigError("unknown constraint kind: " + kind);
}

namespace {

/// Exact minimum of U'AU over a box by enumerating face patterns: each
/// coordinate is free or pinned at a finite bound; the free block solves
/// A_FF x_F = -A_FB x_B. The pattern of the true minimizer is always
/// enumerated and its restricted minimizer is the global one, so the best
/// feasible candidate is exact.
Minimum box_minimum_enumerate(const Eigen::MatrixXd& a, const Box& box) {
  const int k = static_cast<int>(box.lower.size());
  std::vector<int> choice(static_cast<std::size_t>(k), 0);  // 0 free, 1 lo, 2 up
  Minimum best;
  best.value = kInf;

  while (true) {
    // Build the candidate for the current pattern, if representable.
    bool representable = true;
    std::vector<int> free_idx, bound_idx;
    for (int i = 0; i < k && representable; ++i) {
      if (choice[static_cast<std::size_t>(i)] == 1) {
        if (!std::isfinite(box.lower(i))) representable = false;
        bound_idx.push_back(i);
      } else if (choice[static_cast<std::size_t>(i)] == 2) {
        if (!std::isfinite(box.upper(i)) || box.upper(i) == box.lower(i))
          representable = false;  // degenerate interval covered by "lo"
        bound_idx.push_back(i);
      } else {
        free_idx.push_back(i);
      }
    }

    if (representable) {
      Eigen::VectorXd u(k);
      for (int i : bound_idx)
        u(i) = choice[static_cast<std::size_t>(i)] == 1 ? box.lower(i)
                                                        : box.upper(i);
      bool feasible = true;
      if (!free_idx.empty()) {
        const int f = static_cast<int>(free_idx.size());
        Eigen::MatrixXd aff(f, f);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(f);
        for (int r = 0; r < f; ++r) {
          for (int c = 0; c < f; ++c) aff(r, c) = a(free_idx[r], free_idx[c]);
          for (int b : bound_idx) rhs(r) -= a(free_idx[r], b) * u(b);
        }
        const Eigen::VectorXd xf = aff.llt().solve(rhs);
        for (int r = 0; r < f; ++r) {
          const int i = free_idx[r];
          u(i) = xf(r);
          if (u(i) < box.lower(i) - 1e-12 || u(i) > box.upper(i) + 1e-12) {
            feasible = false;
            break;
          }
        }
        if (feasible)
          for (int r = 0; r < f; ++r) {
            const int i = free_idx[r];
            u(i) = std::min(std::max(u(i), box.lower(i)), box.upper(i));
          }
      }
      if (feasible) {
        const double value = u.dot(a * u);
        if (value < best.value) {
          best.value = value;
          best.argmin = u;
        }
      }
    }

    // Next pattern in base 3.
    int pos = 0;
    while (pos < k) {
      if (++choice[static_cast<std::size_t>(pos)] < 3) break;
      choice[static_cast<std::size_t>(pos)] = 0;
      ++pos;
    }
    if (pos == k) break;
  }

  if (!std::isfinite(best.value))
    throw Error("no feasible face candidate found");
  return best;
}

/// Projected gradient descent onto the box, used above the enumeration
/// cutoff. Fixed step 1/(2 lambda_max), stationarity measured by the
/// projected-gradient residual.
Minimum box_minimum_projected(const Eigen::MatrixXd& a, const Box& box) {
  const int k = static_cast<int>(box.lower.size());
  auto clamp = [&](Eigen::VectorXd u) {
    for (int i = 0; i < k; ++i)
      u(i) = std::min(std::max(u(i), box.lower(i)), box.upper(i));
    return u;
  };
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  const double step = 0.5 / es.eigenvalues().maxCoeff();
  Eigen::VectorXd u = clamp(Eigen::VectorXd::Zero(k));
  for (int it = 0; it < 200000; ++it) {
    const Eigen::VectorXd grad = 2.0 * (a * u);
    const Eigen::VectorXd next = clamp(u - step * grad);
    const double residual = (u - clamp(u - grad)).norm();
    u = next;
    if (residual <= 1e-10) break;
  }
  return {u, u.dot(a * u)};
}

Minimum box_minimum(const Eigen::MatrixXd& a, const Box& box) {
  return box.lower.size() <= 8 ? box_minimum_enumerate(a, box)
                               : box_minimum_projected(a, box);
}

std::atomic<bool> g_origin_warned{false};

void warn_if_origin(const ConstraintSet& q) {
  if (q.contains_origin() && !g_origin_warned.exchange(true))
    std::cerr << "warning: constraint set contains the origin; the limit "
                 "value degenerates to 0 there\n";
}

}  // namespace

Minimum minimize_over_q(const Eigen::MatrixXd& a, const ConstraintSet& q) {
  linalg::require_symmetric(a, 1e-10, "quadratic form");
  linalg::spd_factor(a, "quadratic form");
  if (q.dim() != a.rows())
    throw DomainError("constraint set dimension does not match form");

  if (q.kind() == ConstraintSet::Kind::singleton) {
    const Eigen::VectorXd& u = q.point();
    return {u, u.dot(a * u)};
  }
  Minimum best;
  best.value = kInf;
  for (const Box& b : q.boxes()) {
    Minimum candidate = box_minimum(a, b);
    if (candidate.value < best.value) best = std::move(candidate);
  }
  return best;
}

double empirical_ineq_frontier(const Eigen::MatrixXd& m_hat,
                               const ConstraintSet& q) {
  const Eigen::MatrixXd a = linalg::invert_symmetric(m_hat, 1e-12, "M_hat");
  return minimize_over_q(a, q).value;
}

double deterministic_equivalent(const Eigen::MatrixXd& m, double s,
                                double kappa_n, const ConstraintSet& q) {
  if (!(s > 0.0)) throw DomainError("S must be positive");
  if (kappa_n < 0.0) throw DomainError("kappa_n must be nonnegative");
  warn_if_origin(q);
  const int k = static_cast<int>(m.rows());
  Eigen::MatrixXd m0 = s * m;
  m0(k - 1, k - 1) += kappa_n;
  const Eigen::MatrixXd a = linalg::invert_symmetric(m0, 1e-12, "M_0");
  return minimize_over_q(a, q).value;
}

double corrected_ineq_frontier(const Eigen::MatrixXd& m_hat, double kappa_n,
                               double s_hat, const ConstraintSet& q) {
  if (!(s_hat > 0.0)) throw DomainError("S_hat must be positive");
  warn_if_origin(q);
  const estimators::MTildeResult mt = estimators::m_tilde(m_hat, kappa_n);
  const Eigen::MatrixXd a =
      linalg::invert_symmetric(mt.m_tilde, 1e-12, "M_tilde");
  // U'[(1/S_hat) M_tilde]^{-1} U = S_hat U' M_tilde^{-1} U.
  return s_hat * minimize_over_q(a, q).value;
}

}  // namespace hdqp::ineq
