#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "yarowsky/graph.hpp"
#include "yarowsky/labeling_state.hpp"
#include "yarowsky/learners.hpp"

namespace yarowsky {

enum class StopReason { Fixpoint, Budget };

std::string_view to_string(StopReason reason);

/// Which objectives the driver evaluates each iteration.
struct ObjectiveSet {
  bool H = true;
  bool l_t2 = true;
  bool K_t2 = true;
  bool K_delta = true;

  static ObjectiveSet none() { return {false, false, false, false}; }
};

/// One iteration of the modified Yarowsky loop. Values ending in `_train`
/// are taken after the parameter update but before relabeling; the others
/// after relabeling. H and l_t2 use the predictions of the freshly trained
/// model.
struct IterationRecord {
  std::size_t t = 0;
  std::size_t labeled = 0;
  std::size_t changed = 0;
  std::optional<double> H, l_t2, K_t2, K_delta;
  std::optional<double> K_t2_train, K_delta_train;
  std::optional<StopReason> stop;
};

struct IterationTrace {
  std::vector<IterationRecord> records;
};

struct RunResult {
  LabelingState state;
  Theta theta;
  IterationTrace trace;
};

/// One relabeling pass with the fixed 1/L threshold:
///   seed              -> seed label
///   already labeled   -> argmax prediction (may change, never unlabels)
///   unlabeled         -> argmax prediction if it strictly exceeds 1/L
LabelingState relabel_step(const LabelingState& state, std::span<const LabelDistribution> predictions,
                           std::size_t num_labels);

struct RunOptions {
  LearnerKind learner = LearnerKind::DL1;
  SmoothingConfig smoothing;
  ObjectiveSet objectives;
  std::optional<std::size_t> max_iter;  // defaults to num_instances + 1
};

/// Alternates training and relabeling until the hard labels stop changing or
/// the iteration budget runs out.
RunResult run(const BipartiteGraph& graph, const SeedLabels& seeds, const RunOptions& options);

}  // namespace yarowsky
