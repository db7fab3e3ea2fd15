#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "yarowsky/distributions.hpp"
#include "yarowsky/graph.hpp"
#include "yarowsky/labeling_state.hpp"
#include "yarowsky/learners.hpp"
#include "yarowsky/propagation.hpp"

namespace yarowsky {

// Objectives over a bootstrapping state. Every function comes in a form that
// takes raw labeling distributions so that the verification code can feed in
// arbitrary (not necessarily hard) phi.

/// sum_x H(phi_x || pi_x). +inf when a labeled instance gets zero probability.
double objective_H(std::span<const LabelDistribution> phi, std::span<const LabelDistribution> predictions);
double objective_H(const LabelingState& state, std::span<const LabelDistribution> predictions);

/// sum_x sum_j pi_x(j)^2 - 2 pi_x(j) phi_x(j).
double objective_l_t2(std::span<const LabelDistribution> phi, std::span<const LabelDistribution> predictions);
double objective_l_t2(const LabelingState& state, std::span<const LabelDistribution> predictions);

/// sum over edges (x, f) of H_{t^2}(phi_x || theta_f).
double objective_K_t2(std::span<const LabelDistribution> phi, const Theta& theta, const BipartiteGraph& graph);
double objective_K_t2(const LabelingState& state, const Theta& theta, const BipartiteGraph& graph);

/// sum over edges of H(phi_x || theta_f) + delta * H(u || theta_f).
double objective_K_delta(std::span<const LabelDistribution> phi, const Theta& theta,
                         const BipartiteGraph& graph, double delta);
double objective_K_delta(const LabelingState& state, const Theta& theta, const BipartiteGraph& graph,
                         double delta);

/// The conventional-cross-entropy bound sum over edges of H(phi_x || theta_f).
double objective_K_conventional(std::span<const LabelDistribution> phi, const Theta& theta,
                                const BipartiteGraph& graph);

/// sum_f sum_{x in X_f} B_psi(theta_f, phi_x), feature distribution first.
double objective_graph_bregman(const NodeAssignment& assignment, const BipartiteGraph& graph, PsiKind psi);

/// -2 sum_f sum_{x in X_f} sum_j phi_x(j) theta_fj.
double objective_eq11(const NodeAssignment& assignment, const BipartiteGraph& graph);

/// (1/m) K_t2 - l_t2 with pi taken as the mean of feature rows. Requires every
/// instance to have exactly m features; throws std::invalid_argument otherwise.
double lemma1_gap(std::span<const LabelDistribution> phi, const Theta& theta, const BipartiteGraph& graph,
                  std::size_t m);
double lemma1_gap(const LabelingState& state, const Theta& theta, const BipartiteGraph& graph, std::size_t m);

struct MismatchResult {
  Label argmax_sum = 0;
  Label argmin_logsum = 0;
  bool differ = false;
};

/// Compares the label picked by summing rows (mean prediction) with the label
/// that minimizes the conventional cross-entropy bound, sum_f log 1/theta_fj.
MismatchResult abney_k_mismatch(std::span<const LabelDistribution> rows);

struct OptimalityResidual {
  double feature_residual = 0.0;
  double instance_residual = 0.0;
};

/// Stationarity of the graph Bregman objective.
///   feature side : max_f || theta_f - normalize(grad Psi*(mean_{x in X_f} grad Psi(phi_x))) ||_inf
///   instance side: max over non-seed x of the spread (max_j - min_j) of
///                  sum_{f in F_x} (theta_fj - phi_x(j)) psi''(phi_x(j))
/// Distributions are clamped at 1e-12 before taking NegEntropy gradients.
OptimalityResidual optimality_residual(const NodeAssignment& assignment, const BipartiteGraph& graph,
                                       PsiKind psi);

/// Result of an executable check. `worst_violation` is the smallest slack
/// observed; the check passes when it is at least -tolerance.
struct VerificationReport {
  std::string check;
  std::size_t trials = 0;
  double worst_violation = std::numeric_limits<double>::infinity();
  double tolerance = 1e-9;
  bool pass = true;
  nlohmann::json witness;

  void observe(double slack);
  nlohmann::json to_json() const;
};

/// Recomputes the learner's parameter update for the fixed labeling, then for
/// each feature row tries `trials` random perturbations (clamped at zero and
/// renormalized) and records the increase of the matching objective: K_t2 for
/// DL1, K_delta for DL2S.
VerificationReport verify_parameter_optimality(const LabelingState& state, const BipartiteGraph& graph,
                                               LearnerKind learner, const SmoothingConfig& smoothing,
                                               std::size_t trials, std::uint64_t rng_seed);

/// For each labeled non-seed instance, checks that its hard label minimizes
/// the per-instance objective over all L point masses, and that the labeled
/// value is no worse than the uniform-phi value (strictly better when the
/// prediction is not uniform).
VerificationReport verify_label_choice(const LabelingState& state, const Theta& theta,
                                       const BipartiteGraph& graph, LearnerKind learner,
                                       const SmoothingConfig& smoothing = {});

/// Per-instance contribution to K_t2 (DL1) or K_delta (DL2S) for a given phi_x.
double instance_contribution(const LabelDistribution& phi_x, InstanceId x, const Theta& theta,
                             const BipartiteGraph& graph, LearnerKind learner, double delta);

}  // namespace yarowsky
