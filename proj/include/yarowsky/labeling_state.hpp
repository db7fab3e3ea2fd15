#pragma once

#include <optional>
#include <span>
#include <vector>

#include "yarowsky/distributions.hpp"
#include "yarowsky/graph.hpp"

namespace yarowsky {

using MaybeLabel = std::optional<Label>;

/// Hard labels Y (nullopt is the unlabeled mark) together with the matching
/// labeling distributions phi: a point mass for labeled instances and the
/// uniform distribution otherwise. assign() is the only mutator, so the two
/// views never disagree.
class LabelingState {
 public:
  LabelingState() = default;

  /// Seeds labeled, everything else unlabeled.
  LabelingState(std::size_t num_instances, std::size_t num_labels, SeedLabels seeds);

  std::size_t num_instances() const { return labels_.size(); }
  std::size_t num_labels() const { return num_labels_; }

  const MaybeLabel& label(InstanceId x) const { return labels_[x]; }
  std::span<const MaybeLabel> labels() const { return labels_; }
  const LabelDistribution& phi(InstanceId x) const { return phi_[x]; }
  std::span<const LabelDistribution> phis() const { return phi_; }
  const SeedLabels& seeds() const { return seeds_; }
  bool is_seed(InstanceId x) const { return seeds_.contains(x); }

  std::size_t labeled_count() const;

  /// Throws std::logic_error when asked to move a seed off its seed label.
  void assign(InstanceId x, MaybeLabel label);

 private:
  std::size_t num_labels_ = 0;
  std::vector<MaybeLabel> labels_;
  std::vector<LabelDistribution> phi_;
  SeedLabels seeds_;
};

}  // namespace yarowsky
