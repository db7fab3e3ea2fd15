#include "yarowsky/learners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace yarowsky {

namespace {

// (|Lambda_fj| + smoothing) / (|Lambda_f| + extra), with extra = L * smoothing.
LabelDistribution additive(const CountStats& stats, double smoothing, double denominator_extra) {
  const double denom = static_cast<double>(stats.labeled) + denominator_extra;
  std::vector<double> row(stats.labeled_per_label.size());
  for (std::size_t j = 0; j < row.size(); ++j) {
    row[j] = (static_cast<double>(stats.labeled_per_label[j]) + smoothing) / denom;
  }
  return LabelDistribution(std::move(row));
}

}  // namespace

std::string_view to_string(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::DL0: return "dl0";
    case LearnerKind::DL1: return "dl1";
    case LearnerKind::DL1R: return "dl1r";
    case LearnerKind::DL2S: return "dl2s";
  }
  return "?";
}

std::optional<LearnerKind> parse_learner(std::string_view name) {
  for (auto kind : {LearnerKind::DL0, LearnerKind::DL1, LearnerKind::DL1R, LearnerKind::DL2S}) {
    if (name == to_string(kind)) return kind;
  }
  return std::nullopt;
}

CountStats count_stats(const BipartiteGraph& graph, std::span<const MaybeLabel> labels, FeatureId f) {
  CountStats stats;
  stats.labeled_per_label.assign(graph.num_labels(), 0);
  for (InstanceId x : graph.instances_of(f)) {
    if (const auto& y = labels[x]) {
      ++stats.labeled_per_label[*y];
      ++stats.labeled;
    } else {
      ++stats.unlabeled;
    }
  }
  stats.total = stats.labeled + stats.unlabeled;
  return stats;
}

CountStats count_stats(const BipartiteGraph& graph, const LabelingState& state, FeatureId f) {
  return count_stats(graph, state.labels(), f);
}

LabelDistribution raw_precision(const CountStats& stats) {
  const std::size_t num_labels = stats.labeled_per_label.size();
  if (stats.labeled == 0) return uniform(num_labels);
  return additive(stats, 0.0, 0.0);
}

LabelDistribution smoothed_precision(const CountStats& stats, double epsilon, std::size_t num_labels) {
  if (epsilon < 0.0) throw std::invalid_argument("epsilon must be non-negative");
  if (epsilon == 0.0) return raw_precision(stats);
  return additive(stats, epsilon, static_cast<double>(num_labels) * epsilon);
}

LabelDistribution dl1_update(const CountStats& stats, std::size_t num_labels) {
  if (stats.total == 0) throw std::invalid_argument("feature has no instances");
  const double unlabeled = static_cast<double>(stats.unlabeled);
  return additive(stats, unlabeled / static_cast<double>(num_labels), unlabeled);
}

LabelDistribution dl2s_update(const CountStats& stats, double delta, std::size_t num_labels) {
  if (delta < 0.0) throw std::invalid_argument("delta must be non-negative");
  if (stats.total == 0) throw std::invalid_argument("feature has no instances");
  const double mass = static_cast<double>(stats.unlabeled) + delta * static_cast<double>(stats.total);
  return additive(stats, mass / static_cast<double>(num_labels), mass);
}

Theta train(const BipartiteGraph& graph, const LabelingState& state, LearnerKind kind,
            const SmoothingConfig& smoothing) {
  Theta theta;
  theta.rows.reserve(graph.num_features());
  const std::size_t num_labels = graph.num_labels();
  for (FeatureId f = 0; f < graph.num_features(); ++f) {
    const auto stats = count_stats(graph, state, f);
    switch (kind) {
      case LearnerKind::DL0:
        theta.rows.push_back(smoothed_precision(stats, smoothing.epsilon, num_labels));
        break;
      case LearnerKind::DL1:
        theta.rows.push_back(dl1_update(stats, num_labels));
        break;
      case LearnerKind::DL1R:
        theta.rows.push_back(raw_precision(stats));
        break;
      case LearnerKind::DL2S:
        theta.rows.push_back(dl2s_update(stats, smoothing.delta, num_labels));
        break;
    }
  }
  return theta;
}

LabelDistribution predict_dl0(const Theta& theta, const BipartiteGraph& graph, InstanceId x) {
  const std::size_t num_labels = graph.num_labels();
  std::vector<double> best(num_labels, 0.0);
  for (FeatureId f : graph.features_of(x)) {
    for (std::size_t j = 0; j < num_labels; ++j) best[j] = std::max(best[j], theta[f][j]);
  }
  double total = 0.0;
  for (double v : best) total += v;
  if (total == 0.0) return uniform(num_labels);
  return LabelDistribution::normalized(std::move(best));
}

LabelDistribution predict_dl1(const Theta& theta, const BipartiteGraph& graph, InstanceId x) {
  const std::size_t num_labels = graph.num_labels();
  const auto fs = graph.features_of(x);
  std::vector<double> mean(num_labels, 0.0);
  for (FeatureId f : fs) {
    for (std::size_t j = 0; j < num_labels; ++j) mean[j] += theta[f][j];
  }
  for (double& v : mean) v /= static_cast<double>(fs.size());
  return LabelDistribution(std::move(mean));
}

ProductPrediction predict_dl2(const Theta& theta, const BipartiteGraph& graph, InstanceId x) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  const std::size_t num_labels = graph.num_labels();
  std::vector<double> log_u(num_labels, 0.0);
  for (FeatureId f : graph.features_of(x)) {
    for (std::size_t j = 0; j < num_labels; ++j) {
      const double t = theta[f][j];
      log_u[j] = (t > 0.0 && log_u[j] != kNegInf) ? log_u[j] + std::log(t) : kNegInf;
    }
  }
  const double top = *std::max_element(log_u.begin(), log_u.end());
  if (top == kNegInf) return {uniform(num_labels), 0.0};

  std::vector<double> scaled(num_labels);
  double sum = 0.0;
  for (std::size_t j = 0; j < num_labels; ++j) {
    scaled[j] = std::exp(log_u[j] - top);
    sum += scaled[j];
  }
  const double z = std::exp(top) * sum;
  return {LabelDistribution::normalized(std::move(scaled)), z};
}

std::vector<LabelDistribution> predict_all(const Theta& theta, const BipartiteGraph& graph,
                                           LearnerKind kind) {
  std::vector<LabelDistribution> out;
  out.reserve(graph.num_instances());
  for (InstanceId x = 0; x < graph.num_instances(); ++x) {
    switch (kind) {
      case LearnerKind::DL0:
        out.push_back(predict_dl0(theta, graph, x));
        break;
      case LearnerKind::DL1:
      case LearnerKind::DL1R:
        out.push_back(predict_dl1(theta, graph, x));
        break;
      case LearnerKind::DL2S:
        out.push_back(predict_dl2(theta, graph, x).dist);
        break;
    }
  }
  return out;
}

}  // namespace yarowsky
