#include "yarowsky/bootstrap.hpp"

#include <stdexcept>

#include "yarowsky/objectives.hpp"

namespace yarowsky {

std::string_view to_string(StopReason reason) {
  return reason == StopReason::Fixpoint ? "fixpoint" : "budget";
}

LabelingState relabel_step(const LabelingState& state, std::span<const LabelDistribution> predictions,
                           std::size_t num_labels) {
  if (predictions.size() != state.num_instances()) {
    throw std::invalid_argument("need one prediction per instance");
  }
  const double threshold = 1.0 / static_cast<double>(num_labels);
  LabelingState next = state;
  for (InstanceId x = 0; x < state.num_instances(); ++x) {
    if (state.is_seed(x)) continue;
    const auto& pi = predictions[x];
    const Label best = pi.argmax();
    if (state.label(x) || pi[best] > threshold) {
      next.assign(x, best);
    } else {
      next.assign(x, std::nullopt);
    }
  }
  return next;
}

RunResult run(const BipartiteGraph& graph, const SeedLabels& seeds, const RunOptions& options) {
  if (seeds.empty()) throw std::invalid_argument("bootstrapping needs at least one seed");
  const std::size_t max_iter = options.max_iter.value_or(graph.num_instances() + 1);
  if (max_iter == 0) throw std::invalid_argument("max_iter must be at least 1");
  const auto& want = options.objectives;
  const double delta = options.smoothing.delta;

  RunResult result;
  result.state = LabelingState(graph.num_instances(), graph.num_labels(), seeds);

  for (std::size_t t = 0; t < max_iter; ++t) {
    IterationRecord rec;
    rec.t = t;
    result.theta = train(graph, result.state, options.learner, options.smoothing);
    if (want.K_t2) rec.K_t2_train = objective_K_t2(result.state, result.theta, graph);
    if (want.K_delta) rec.K_delta_train = objective_K_delta(result.state, result.theta, graph, delta);

    const auto predictions = predict_all(result.theta, graph, options.learner);
    LabelingState next = relabel_step(result.state, predictions, graph.num_labels());

    for (InstanceId x = 0; x < graph.num_instances(); ++x) {
      if (next.label(x) != result.state.label(x)) ++rec.changed;
    }
    rec.labeled = next.labeled_count();
    if (want.H) rec.H = objective_H(next, predictions);
    if (want.l_t2) rec.l_t2 = objective_l_t2(next, predictions);
    if (want.K_t2) rec.K_t2 = objective_K_t2(next, result.theta, graph);
    if (want.K_delta) rec.K_delta = objective_K_delta(next, result.theta, graph, delta);

    result.state = std::move(next);
    if (rec.changed == 0) {
      rec.stop = StopReason::Fixpoint;
    } else if (t + 1 == max_iter) {
      rec.stop = StopReason::Budget;
    }
    result.trace.records.push_back(rec);
    if (rec.stop) break;
  }
  return result;
}

}  // namespace yarowsky
