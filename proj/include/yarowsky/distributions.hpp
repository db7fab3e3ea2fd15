#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace yarowsky {

using Label = std::size_t;

// Absolute tolerance used when validating that a vector lies on the simplex.
inline constexpr double kSimplexTolerance = 1e-9;

/// A point on the probability simplex over L labels.
///
/// Construction validates non-negativity and unit sum; arithmetic helpers
/// never renormalize behind the caller's back. Use normalized() when the
/// input is a vector of non-negative weights.
class LabelDistribution {
 public:
  LabelDistribution() = default;
  explicit LabelDistribution(std::vector<double> probs);

  static LabelDistribution normalized(std::vector<double> weights);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t j) const { return probs_[j]; }
  std::span<const double> probs() const { return probs_; }

  /// Lowest index among the maximal entries.
  Label argmax() const;
  double max() const;
  bool is_uniform() const;
  bool is_point_mass() const;

  friend bool operator==(const LabelDistribution&, const LabelDistribution&) = default;

 private:
  std::vector<double> probs_;
};

LabelDistribution uniform(std::size_t num_labels);
LabelDistribution point_mass(Label j, std::size_t num_labels);

enum class PsiKind { Quadratic, NegEntropy };

double psi(PsiKind kind, double t);
double psi_prime(PsiKind kind, double t);
double psi_second(PsiKind kind, double t);

// All logarithms are natural; 0 log 0 is taken as 0.
double shannon_entropy(const LabelDistribution& p);
double kl_divergence(const LabelDistribution& p, const LabelDistribution& q);
double cross_entropy(const LabelDistribution& p, const LabelDistribution& q);

double psi_entropy(PsiKind kind, const LabelDistribution& p);
double bregman_distance(PsiKind kind, const LabelDistribution& p, const LabelDistribution& q);

/// H_psi(p || q) computed as -Psi(q) - grad Psi(q) . (p - q).
///
/// This is algebraically psi_entropy(p) + bregman_distance(p, q) but shares no
/// code with either; tests rely on the two routes agreeing.
double psi_cross_entropy(PsiKind kind, const LabelDistribution& p, const LabelDistribution& q);

/// Maximum absolute entrywise difference.
double max_abs_diff(const LabelDistribution& p, const LabelDistribution& q);

}  // namespace yarowsky
