#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "yarowsky/distributions.hpp"
#include "yarowsky/graph.hpp"
#include "yarowsky/labeling_state.hpp"

namespace yarowsky {

enum class OperatorKind { Majority, Average };

std::string_view to_string(OperatorKind kind);
std::optional<OperatorKind> parse_operator(std::string_view name);

/// Distributions on both columns of the bipartite graph. A node is labeled
/// once it has been assigned a non-uniform distribution and stays labeled
/// from then on; seeds are labeled from the start.
struct NodeAssignment {
  std::vector<LabelDistribution> feature_dists;
  std::vector<LabelDistribution> instance_dists;
  std::vector<bool> feature_labeled;
  std::vector<bool> instance_labeled;
  std::vector<bool> instance_is_seed;

  /// Seeds as point masses, everything else uniform and unlabeled.
  static NodeAssignment initial(const BipartiteGraph& graph, const SeedLabels& seeds);

  MaybeLabel feature_label(FeatureId f) const;
  MaybeLabel instance_label(InstanceId x) const;
  std::size_t labeled_features() const;
  std::size_t labeled_instances() const;
};

/// Majority vote over the argmax labels of the non-uniform voters. Returns
/// uniform when there are no voters or every label has the same support;
/// otherwise a point mass on the most supported label, lowest index first
/// among ties.
LabelDistribution majority(std::span<const LabelDistribution> dists, std::size_t num_labels);

/// Entrywise mean; uniform for an empty list.
LabelDistribution average(std::span<const LabelDistribution> dists, std::size_t num_labels);

/// Edges whose endpoints are both hard-labeled with different labels.
std::size_t cut_size(const BipartiteGraph& graph, const NodeAssignment& assignment);

/// sum_{i<=|F|} sum_{j<=|X|} i*j, the worst-case sweep count for
/// Majority/Majority.
std::size_t iteration_bound(std::size_t num_features, std::size_t num_instances);

struct CutReport {
  std::size_t iteration = 0;
  std::size_t cut_size = 0;
  std::size_t labeled_left = 0;   // labeled features
  std::size_t labeled_right = 0;  // labeled instances
  std::size_t flips = 0;          // labeled nodes whose hard label changed this sweep
  std::size_t newly_labeled = 0;  // nodes that became labeled this sweep
};

struct SweepRecord {
  std::size_t sweep = 0;
  std::size_t labeled = 0;
  std::optional<std::size_t> cut;  // set only for Majority/Majority
  double max_delta = 0.0;
};

struct PropagationOptions {
  OperatorKind feature_op = OperatorKind::Majority;
  OperatorKind instance_op = OperatorKind::Majority;
  std::optional<std::size_t> max_iter;
  double tol = 1e-8;
};

struct PropagationResult {
  NodeAssignment assignment;
  std::vector<CutReport> cuts;
  std::vector<SweepRecord> sweeps;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Default sweep budget: iteration_bound + 1 for Majority/Majority (the last
/// sweep only confirms the fixpoint), 10 (|F| + |X|)^2 otherwise.
std::size_t default_max_sweeps(const BipartiteGraph& graph, OperatorKind feature_op,
                               OperatorKind instance_op);

/// Majority/Average label propagation on the bipartite graph. Each sweep
/// recomputes all features from the previous instance distributions, then
/// all non-seed instances from the new feature distributions.
PropagationResult propagate(const BipartiteGraph& graph, const SeedLabels& seeds,
                            const PropagationOptions& options);

}  // namespace yarowsky
