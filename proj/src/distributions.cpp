#include "yarowsky/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace yarowsky {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Entries closer than this to 1/L are treated as uniform. Averaging k copies
// of 1/3 does not reproduce 1/3 bit-for-bit.
constexpr double kUniformTolerance = 1e-12;

void require_same_size(const LabelDistribution& p, const LabelDistribution& q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("label distributions differ in size: " + std::to_string(p.size()) +
                                " vs " + std::to_string(q.size()));
  }
}

double xlogx(double t) { return t > 0.0 ? t * std::log(t) : 0.0; }

}  // namespace

LabelDistribution::LabelDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw std::invalid_argument("label distribution must be non-empty");
  double sum = 0.0;
  for (double v : probs_) {
    if (!(v >= 0.0)) throw std::invalid_argument("label distribution has a negative or NaN entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kSimplexTolerance) {
    throw std::invalid_argument("label distribution sums to " + std::to_string(sum));
  }
}

LabelDistribution LabelDistribution::normalized(std::vector<double> weights) {
  if (weights.empty()) throw std::invalid_argument("cannot normalize an empty weight vector");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("weights must be non-negative");
    total += w;
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw std::invalid_argument("weights must have a positive finite sum");
  }
  for (double& w : weights) w /= total;
  return LabelDistribution(std::move(weights));
}

Label LabelDistribution::argmax() const {
  return static_cast<Label>(std::max_element(probs_.begin(), probs_.end()) - probs_.begin());
}

double LabelDistribution::max() const { return *std::max_element(probs_.begin(), probs_.end()); }

bool LabelDistribution::is_uniform() const {
  const double u = 1.0 / static_cast<double>(probs_.size());
  return std::all_of(probs_.begin(), probs_.end(),
                     [u](double v) { return std::abs(v - u) <= kUniformTolerance; });
}

bool LabelDistribution::is_point_mass() const {
  return std::count(probs_.begin(), probs_.end(), 1.0) == 1 &&
         std::count(probs_.begin(), probs_.end(), 0.0) == static_cast<long>(probs_.size()) - 1;
}

LabelDistribution uniform(std::size_t num_labels) {
  if (num_labels < 2) throw std::invalid_argument("need at least two labels");
  return LabelDistribution(std::vector<double>(num_labels, 1.0 / static_cast<double>(num_labels)));
}

LabelDistribution point_mass(Label j, std::size_t num_labels) {
  if (num_labels < 2) throw std::invalid_argument("need at least two labels");
  if (j >= num_labels) throw std::invalid_argument("label index out of range");
  std::vector<double> v(num_labels, 0.0);
  v[j] = 1.0;
  return LabelDistribution(std::move(v));
}

double psi(PsiKind kind, double t) {
  return kind == PsiKind::Quadratic ? t * t : xlogx(t);
}

double psi_prime(PsiKind kind, double t) {
  if (kind == PsiKind::Quadratic) return 2.0 * t;
  return t > 0.0 ? std::log(t) + 1.0 : -kInf;
}

double psi_second(PsiKind kind, double t) {
  if (kind == PsiKind::Quadratic) return 2.0;
  return t > 0.0 ? 1.0 / t : kInf;
}

double shannon_entropy(const LabelDistribution& p) {
  double h = 0.0;
  for (double v : p.probs()) h -= xlogx(v);
  return h;
}

double kl_divergence(const LabelDistribution& p, const LabelDistribution& q) {
  require_same_size(p, q);
  double d = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p[j] == 0.0) continue;
    if (q[j] == 0.0) return kInf;
    d += p[j] * std::log(p[j] / q[j]);
  }
  return d;
}

double cross_entropy(const LabelDistribution& p, const LabelDistribution& q) {
  require_same_size(p, q);
  double h = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p[j] == 0.0) continue;
    if (q[j] == 0.0) return kInf;
    h -= p[j] * std::log(q[j]);
  }
  return h;
}

double psi_entropy(PsiKind kind, const LabelDistribution& p) {
  double h = 0.0;
  for (double v : p.probs()) h -= psi(kind, v);
  return h;
}

double bregman_distance(PsiKind kind, const LabelDistribution& p, const LabelDistribution& q) {
  require_same_size(p, q);
  double b = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pi = p[i];
    const double qi = q[i];
    if (kind == PsiKind::Quadratic) {
      b += (pi - qi) * (pi - qi);
      continue;
    }
    // p ln p - q ln q - (ln q + 1)(p - q), rearranged so each term is >= 0.
    if (pi == 0.0) {
      b += qi;
    } else if (qi == 0.0) {
      return kInf;
    } else {
      b += pi * std::log(pi / qi) - pi + qi;
    }
  }
  return b;
}

double psi_cross_entropy(PsiKind kind, const LabelDistribution& p, const LabelDistribution& q) {
  require_same_size(p, q);
  double h = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double step = p[i] - q[i];
    if (kind == PsiKind::NegEntropy && q[i] == 0.0) {
      if (step > 0.0) return kInf;
      continue;
    }
    h += -psi(kind, q[i]) - psi_prime(kind, q[i]) * step;
  }
  return h;
}

double max_abs_diff(const LabelDistribution& p, const LabelDistribution& q) {
  require_same_size(p, q);
  double m = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) m = std::max(m, std::abs(p[j] - q[j]));
  return m;
}

}  // namespace yarowsky
