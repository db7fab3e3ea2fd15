#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "yarowsky/distributions.hpp"
#include "yarowsky/graph.hpp"
#include "yarowsky/labeling_state.hpp"

namespace yarowsky {

/// Decision-list base learners.
///   DL0  : max-score prediction, smoothed precision with a global epsilon
///   DL1  : mean-of-features prediction, per-feature smoothing |V_f|/L
///   DL1R : mean-of-features prediction, raw precision (no objective guarantee)
///   DL2S : normalized product prediction, smoothing (|V_f| + delta|X_f|)/L
enum class LearnerKind { DL0, DL1, DL1R, DL2S };

std::string_view to_string(LearnerKind kind);
std::optional<LearnerKind> parse_learner(std::string_view name);

/// One row per feature; row f is theta_f = p(. | f).
struct Theta {
  std::vector<LabelDistribution> rows;

  const LabelDistribution& operator[](FeatureId f) const { return rows[f]; }
  std::size_t size() const { return rows.size(); }
};

struct CountStats {
  std::vector<std::size_t> labeled_per_label;  // |Lambda_fj|
  std::size_t labeled = 0;                     // |Lambda_f|
  std::size_t unlabeled = 0;                   // |V_f|
  std::size_t total = 0;                       // |X_f|
};

struct SmoothingConfig {
  double epsilon = 0.1;  // DL0
  double delta = 1.0;    // DL2S
};

CountStats count_stats(const BipartiteGraph& graph, std::span<const MaybeLabel> labels, FeatureId f);
CountStats count_stats(const BipartiteGraph& graph, const LabelingState& state, FeatureId f);

/// |Lambda_fj| / |Lambda_f|; uniform when the feature has no labeled neighbours.
LabelDistribution raw_precision(const CountStats& stats);
LabelDistribution smoothed_precision(const CountStats& stats, double epsilon, std::size_t num_labels);
LabelDistribution dl1_update(const CountStats& stats, std::size_t num_labels);
LabelDistribution dl2s_update(const CountStats& stats, double delta, std::size_t num_labels);

/// Applies the learner's parameter update to every feature.
Theta train(const BipartiteGraph& graph, const LabelingState& state, LearnerKind kind,
            const SmoothingConfig& smoothing);

LabelDistribution predict_dl0(const Theta& theta, const BipartiteGraph& graph, InstanceId x);
LabelDistribution predict_dl1(const Theta& theta, const BipartiteGraph& graph, InstanceId x);

struct ProductPrediction {
  LabelDistribution dist;
  double normalizer = 0.0;  // Z_x = sum_k prod_f theta_fk, in linear space
};

/// Normalized product of feature rows, evaluated in log space. When every
/// label's product vanishes the result is uniform and the normalizer is 0.
ProductPrediction predict_dl2(const Theta& theta, const BipartiteGraph& graph, InstanceId x);

/// The learner's prediction rule applied to every instance.
std::vector<LabelDistribution> predict_all(const Theta& theta, const BipartiteGraph& graph,
                                           LearnerKind kind);

}  // namespace yarowsky
