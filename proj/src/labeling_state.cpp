#include "yarowsky/labeling_state.hpp"

#include <algorithm>
#include <stdexcept>

namespace yarowsky {

LabelingState::LabelingState(std::size_t num_instances, std::size_t num_labels, SeedLabels seeds)
    : num_labels_(num_labels),
      labels_(num_instances),
      phi_(num_instances, uniform(num_labels)),
      seeds_(std::move(seeds)) {
  for (const auto& [x, j] : seeds_.entries) {
    if (x >= num_instances) throw std::invalid_argument("seed refers to an unknown instance");
    if (j >= num_labels) throw std::invalid_argument("seed label out of range");
    labels_[x] = j;
    phi_[x] = point_mass(j, num_labels);
  }
}

std::size_t LabelingState::labeled_count() const {
  return static_cast<std::size_t>(
      std::count_if(labels_.begin(), labels_.end(), [](const MaybeLabel& l) { return l.has_value(); }));
}

void LabelingState::assign(InstanceId x, MaybeLabel label) {
  if (const auto seed = seeds_.label(x); seed && label != seed) {
    throw std::logic_error("seed labels are frozen");
  }
  labels_[x] = label;
  phi_[x] = label ? point_mass(*label, num_labels_) : uniform(num_labels_);
}

}  // namespace yarowsky
