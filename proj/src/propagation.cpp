#include "yarowsky/propagation.hpp"

#include <algorithm>
#include <stdexcept>

namespace yarowsky {

namespace {

std::vector<std::size_t> vote_counts(std::span<const LabelDistribution> dists, std::size_t num_labels) {
  std::vector<std::size_t> counts(num_labels, 0);
  for (const auto& d : dists) {
    if (!d.is_uniform()) ++counts[d.argmax()];
  }
  return counts;
}

MaybeLabel hard_label(const LabelDistribution& dist, bool labeled) {
  if (!labeled) return std::nullopt;
  return dist.argmax();
}

struct NodeUpdate {
  LabelDistribution dist;
  bool assign = false;
};

// Majority keeps the incumbent label when it ties for the most votes, so a
// flip always moves the node to a strictly better-supported label.
NodeUpdate update_node(OperatorKind op, std::span<const LabelDistribution> neighbours,
                       std::size_t num_labels, const LabelDistribution& current, bool labeled) {
  if (op == OperatorKind::Average) {
    auto avg = average(neighbours, num_labels);
    const bool assign = !avg.is_uniform();
    return {std::move(avg), assign};
  }
  auto vote = majority(neighbours, num_labels);
  if (vote.is_uniform()) return {std::move(vote), false};
  if (labeled) {
    const auto counts = vote_counts(neighbours, num_labels);
    if (counts[current.argmax()] == counts[vote.argmax()]) return {current, false};
  }
  return {std::move(vote), true};
}

}  // namespace

std::string_view to_string(OperatorKind kind) {
  return kind == OperatorKind::Majority ? "majority" : "average";
}

std::optional<OperatorKind> parse_operator(std::string_view name) {
  if (name == "majority") return OperatorKind::Majority;
  if (name == "average") return OperatorKind::Average;
  return std::nullopt;
}

NodeAssignment NodeAssignment::initial(const BipartiteGraph& graph, const SeedLabels& seeds) {
  const std::size_t num_labels = graph.num_labels();
  NodeAssignment a;
  a.feature_dists.assign(graph.num_features(), uniform(num_labels));
  a.instance_dists.assign(graph.num_instances(), uniform(num_labels));
  a.feature_labeled.assign(graph.num_features(), false);
  a.instance_labeled.assign(graph.num_instances(), false);
  a.instance_is_seed.assign(graph.num_instances(), false);
  for (const auto& [x, j] : seeds.entries) {
    if (x >= graph.num_instances()) throw std::invalid_argument("seed refers to an unknown instance");
    a.instance_dists[x] = point_mass(j, num_labels);
    a.instance_labeled[x] = true;
    a.instance_is_seed[x] = true;
  }
  return a;
}

MaybeLabel NodeAssignment::feature_label(FeatureId f) const {
  return hard_label(feature_dists[f], feature_labeled[f]);
}

MaybeLabel NodeAssignment::instance_label(InstanceId x) const {
  return hard_label(instance_dists[x], instance_labeled[x]);
}

std::size_t NodeAssignment::labeled_features() const {
  return static_cast<std::size_t>(std::count(feature_labeled.begin(), feature_labeled.end(), true));
}

std::size_t NodeAssignment::labeled_instances() const {
  return static_cast<std::size_t>(std::count(instance_labeled.begin(), instance_labeled.end(), true));
}

LabelDistribution majority(std::span<const LabelDistribution> dists, std::size_t num_labels) {
  const auto counts = vote_counts(dists, num_labels);
  const auto top = std::max_element(counts.begin(), counts.end());
  if (std::all_of(counts.begin(), counts.end(), [&](std::size_t c) { return c == *top; })) {
    return uniform(num_labels);
  }
  return point_mass(static_cast<Label>(top - counts.begin()), num_labels);
}

LabelDistribution average(std::span<const LabelDistribution> dists, std::size_t num_labels) {
  if (dists.empty()) return uniform(num_labels);
  std::vector<double> sum(num_labels, 0.0);
  for (const auto& d : dists) {
    for (std::size_t j = 0; j < num_labels; ++j) sum[j] += d[j];
  }
  return LabelDistribution::normalized(std::move(sum));
}

std::size_t cut_size(const BipartiteGraph& graph, const NodeAssignment& assignment) {
  std::size_t cut = 0;
  for (FeatureId f = 0; f < graph.num_features(); ++f) {
    const auto lf = assignment.feature_label(f);
    if (!lf) continue;
    for (InstanceId x : graph.instances_of(f)) {
      const auto lx = assignment.instance_label(x);
      if (lx && *lx != *lf) ++cut;
    }
  }
  return cut;
}

std::size_t iteration_bound(std::size_t num_features, std::size_t num_instances) {
  return (num_features * (num_features + 1) / 2) * (num_instances * (num_instances + 1) / 2);
}

std::size_t default_max_sweeps(const BipartiteGraph& graph, OperatorKind feature_op,
                               OperatorKind instance_op) {
  if (feature_op == OperatorKind::Majority && instance_op == OperatorKind::Majority) {
    return iteration_bound(graph.num_features(), graph.num_instances()) + 1;
  }
  const std::size_t n = graph.num_features() + graph.num_instances();
  return 10 * n * n;
}

PropagationResult propagate(const BipartiteGraph& graph, const SeedLabels& seeds,
                            const PropagationOptions& options) {
  if (seeds.empty()) throw std::invalid_argument("propagation needs at least one seed");
  const std::size_t num_labels = graph.num_labels();
  const bool both_majority =
      options.feature_op == OperatorKind::Majority && options.instance_op == OperatorKind::Majority;
  const bool both_average =
      options.feature_op == OperatorKind::Average && options.instance_op == OperatorKind::Average;
  const std::size_t max_sweeps =
      options.max_iter.value_or(default_max_sweeps(graph, options.feature_op, options.instance_op));

  PropagationResult result;
  auto& a = result.assignment;
  a = NodeAssignment::initial(graph, seeds);

  std::vector<LabelDistribution> neighbours;
  for (std::size_t sweep = 1; sweep <= max_sweeps; ++sweep) {
    const NodeAssignment before = a;
    double max_delta = 0.0;

    // Features read `before` only, so the column update is order independent.
    for (FeatureId f = 0; f < graph.num_features(); ++f) {
      neighbours.clear();
      for (InstanceId x : graph.instances_of(f)) neighbours.push_back(before.instance_dists[x]);
      auto upd = update_node(options.feature_op, neighbours, num_labels, before.feature_dists[f],
                             before.feature_labeled[f]);
      if (!upd.assign) continue;
      max_delta = std::max(max_delta, max_abs_diff(upd.dist, a.feature_dists[f]));
      a.feature_dists[f] = std::move(upd.dist);
      a.feature_labeled[f] = true;
    }

    const NodeAssignment mid = a;
    for (InstanceId x = 0; x < graph.num_instances(); ++x) {
      if (a.instance_is_seed[x]) continue;
      neighbours.clear();
      for (FeatureId f : graph.features_of(x)) neighbours.push_back(mid.feature_dists[f]);
      auto upd = update_node(options.instance_op, neighbours, num_labels, mid.instance_dists[x],
                             mid.instance_labeled[x]);
      if (!upd.assign) continue;
      max_delta = std::max(max_delta, max_abs_diff(upd.dist, a.instance_dists[x]));
      a.instance_dists[x] = std::move(upd.dist);
      a.instance_labeled[x] = true;
    }

    std::size_t flips = 0;
    std::size_t newly_labeled = 0;
    auto tally = [&](const MaybeLabel& old_label, const MaybeLabel& new_label) {
      if (!old_label && new_label) ++newly_labeled;
      if (old_label && new_label && *old_label != *new_label) ++flips;
    };
    for (FeatureId f = 0; f < graph.num_features(); ++f) tally(before.feature_label(f), a.feature_label(f));
    for (InstanceId x = 0; x < graph.num_instances(); ++x) {
      tally(before.instance_label(x), a.instance_label(x));
    }
    const bool labels_changed = flips + newly_labeled > 0;

    SweepRecord rec;
    rec.sweep = sweep;
    rec.labeled = a.labeled_features() + a.labeled_instances();
    rec.max_delta = max_delta;
    if (both_majority) {
      CutReport cut;
      cut.iteration = sweep;
      cut.cut_size = cut_size(graph, a);
      cut.labeled_left = a.labeled_features();
      cut.labeled_right = a.labeled_instances();
      cut.flips = flips;
      cut.newly_labeled = newly_labeled;
      rec.cut = cut.cut_size;
      result.cuts.push_back(cut);
    }
    result.sweeps.push_back(rec);
    result.iterations = sweep;

    bool done = false;
    if (both_majority) {
      done = !labels_changed;
    } else if (both_average) {
      done = max_delta < options.tol;
    } else {
      done = !labels_changed && max_delta < options.tol;
    }
    if (done) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace yarowsky
