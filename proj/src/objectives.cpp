#include "yarowsky/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace yarowsky {

namespace {

constexpr double kGradientFloor = 1e-12;

void require_sizes(std::span<const LabelDistribution> phi, std::span<const LabelDistribution> predictions) {
  if (phi.size() != predictions.size()) {
    throw std::invalid_argument("phi and predictions differ in length");
  }
}

double edge_sum(const BipartiteGraph& graph, auto&& term) {
  double total = 0.0;
  for (InstanceId x = 0; x < graph.num_instances(); ++x) {
    for (FeatureId f : graph.features_of(x)) total += term(x, f);
  }
  return total;
}

double clamp_floor(double t) { return std::max(t, kGradientFloor); }

// Inverse of the gradient map t -> psi'(t).
double psi_prime_inverse(PsiKind kind, double y) {
  return kind == PsiKind::Quadratic ? y / 2.0 : std::exp(y - 1.0);
}

double nan_as_violation(double slack) {
  return std::isnan(slack) ? -std::numeric_limits<double>::infinity() : slack;
}

std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t n) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> g(n);
  double sum = 0.0;
  for (double& v : g) {
    v = expo(rng);
    sum += v;
  }
  for (double& v : g) v /= sum;
  return g;
}

}  // namespace

double objective_H(std::span<const LabelDistribution> phi, std::span<const LabelDistribution> predictions) {
  require_sizes(phi, predictions);
  double total = 0.0;
  for (std::size_t x = 0; x < phi.size(); ++x) total += cross_entropy(phi[x], predictions[x]);
  return total;
}

double objective_H(const LabelingState& state, std::span<const LabelDistribution> predictions) {
  return objective_H(state.phis(), predictions);
}

double objective_l_t2(std::span<const LabelDistribution> phi, std::span<const LabelDistribution> predictions) {
  require_sizes(phi, predictions);
  double total = 0.0;
  for (std::size_t x = 0; x < phi.size(); ++x) {
    for (std::size_t j = 0; j < phi[x].size(); ++j) {
      const double p = predictions[x][j];
      total += p * p - 2.0 * p * phi[x][j];
    }
  }
  return total;
}

double objective_l_t2(const LabelingState& state, std::span<const LabelDistribution> predictions) {
  return objective_l_t2(state.phis(), predictions);
}

double objective_K_t2(std::span<const LabelDistribution> phi, const Theta& theta, const BipartiteGraph& graph) {
  return edge_sum(graph, [&](InstanceId x, FeatureId f) {
    return psi_cross_entropy(PsiKind::Quadratic, phi[x], theta[f]);
  });
}

double objective_K_t2(const LabelingState& state, const Theta& theta, const BipartiteGraph& graph) {
  return objective_K_t2(state.phis(), theta, graph);
}

double objective_K_delta(std::span<const LabelDistribution> phi, const Theta& theta,
                         const BipartiteGraph& graph, double delta) {
  if (delta < 0.0) throw std::invalid_argument("delta must be non-negative");
  const auto u = uniform(graph.num_labels());
  return edge_sum(graph, [&](InstanceId x, FeatureId f) {
    const double fit = cross_entropy(phi[x], theta[f]);
    // 0 * inf is taken as 0: the smoothing term vanishes entirely at delta = 0.
    return delta == 0.0 ? fit : fit + delta * cross_entropy(u, theta[f]);
  });
}

double objective_K_delta(const LabelingState& state, const Theta& theta, const BipartiteGraph& graph,
                         double delta) {
  return objective_K_delta(state.phis(), theta, graph, delta);
}

double objective_K_conventional(std::span<const LabelDistribution> phi, const Theta& theta,
                                const BipartiteGraph& graph) {
  return edge_sum(graph, [&](InstanceId x, FeatureId f) { return cross_entropy(phi[x], theta[f]); });
}

double objective_graph_bregman(const NodeAssignment& assignment, const BipartiteGraph& graph, PsiKind psi) {
  return edge_sum(graph, [&](InstanceId x, FeatureId f) {
    return bregman_distance(psi, assignment.feature_dists[f], assignment.instance_dists[x]);
  });
}

double objective_eq11(const NodeAssignment& assignment, const BipartiteGraph& graph) {
  return edge_sum(graph, [&](InstanceId x, FeatureId f) {
    double dot = 0.0;
    for (std::size_t j = 0; j < graph.num_labels(); ++j) {
      dot += assignment.instance_dists[x][j] * assignment.feature_dists[f][j];
    }
    return -2.0 * dot;
  });
}

double lemma1_gap(std::span<const LabelDistribution> phi, const Theta& theta, const BipartiteGraph& graph,
                  std::size_t m) {
  const auto degree = graph.uniform_degree();
  if (!degree || *degree != m) {
    throw std::invalid_argument("lemma1_gap needs every instance to have exactly m features");
  }
  std::vector<LabelDistribution> predictions;
  predictions.reserve(graph.num_instances());
  for (InstanceId x = 0; x < graph.num_instances(); ++x) predictions.push_back(predict_dl1(theta, graph, x));
  return objective_K_t2(phi, theta, graph) / static_cast<double>(m) - objective_l_t2(phi, predictions);
}

double lemma1_gap(const LabelingState& state, const Theta& theta, const BipartiteGraph& graph, std::size_t m) {
  return lemma1_gap(state.phis(), theta, graph, m);
}

MismatchResult abney_k_mismatch(std::span<const LabelDistribution> rows) {
  if (rows.empty()) throw std::invalid_argument("abney_k_mismatch needs at least one row");
  const std::size_t num_labels = rows.front().size();
  std::vector<double> sums(num_labels, 0.0);
  std::vector<double> neg_log(num_labels, 0.0);
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < num_labels; ++j) {
      if (!(row[j] > 0.0)) throw std::invalid_argument("abney_k_mismatch needs strictly positive rows");
      sums[j] += row[j];
      neg_log[j] -= std::log(row[j]);
    }
  }
  MismatchResult r;
  r.argmax_sum = static_cast<Label>(std::max_element(sums.begin(), sums.end()) - sums.begin());
  r.argmin_logsum = static_cast<Label>(std::min_element(neg_log.begin(), neg_log.end()) - neg_log.begin());
  r.differ = r.argmax_sum != r.argmin_logsum;
  return r;
}

OptimalityResidual optimality_residual(const NodeAssignment& assignment, const BipartiteGraph& graph,
                                       PsiKind psi) {
  const std::size_t num_labels = graph.num_labels();
  auto grad_arg = [psi](double t) { return psi == PsiKind::NegEntropy ? clamp_floor(t) : t; };
  OptimalityResidual r;

  for (FeatureId f = 0; f < graph.num_features(); ++f) {
    const auto xs = graph.instances_of(f);
    std::vector<double> target(num_labels, 0.0);
    for (std::size_t j = 0; j < num_labels; ++j) {
      double mean_grad = 0.0;
      for (InstanceId x : xs) mean_grad += psi_prime(psi, grad_arg(assignment.instance_dists[x][j]));
      mean_grad /= static_cast<double>(xs.size());
      target[j] = psi_prime_inverse(psi, mean_grad);
    }
    const auto normalized = LabelDistribution::normalized(std::move(target));
    r.feature_residual = std::max(r.feature_residual, max_abs_diff(assignment.feature_dists[f], normalized));
  }

  for (InstanceId x = 0; x < graph.num_instances(); ++x) {
    if (assignment.instance_is_seed[x]) continue;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t j = 0; j < num_labels; ++j) {
      const double phi_j = assignment.instance_dists[x][j];
      double s = 0.0;
      for (FeatureId f : graph.features_of(x)) s += assignment.feature_dists[f][j] - phi_j;
      s *= psi_second(psi, grad_arg(phi_j));
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    r.instance_residual = std::max(r.instance_residual, hi - lo);
  }
  return r;
}

void VerificationReport::observe(double slack) {
  slack = nan_as_violation(slack);
  ++trials;
  worst_violation = std::min(worst_violation, slack);
  if (slack < -tolerance) pass = false;
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json j;
  j["check"] = check;
  j["trials"] = trials;
  j["worst_violation"] = std::isfinite(worst_violation) ? nlohmann::json(worst_violation) : nlohmann::json();
  j["pass"] = pass;
  j["witness"] = witness;
  return j;
}

double instance_contribution(const LabelDistribution& phi_x, InstanceId x, const Theta& theta,
                             const BipartiteGraph& graph, LearnerKind learner, double delta) {
  double total = 0.0;
  const auto u = uniform(graph.num_labels());
  for (FeatureId f : graph.features_of(x)) {
    switch (learner) {
      case LearnerKind::DL1:
        total += psi_cross_entropy(PsiKind::Quadratic, phi_x, theta[f]);
        break;
      case LearnerKind::DL2S:
        total += cross_entropy(phi_x, theta[f]);
        if (delta != 0.0) total += delta * cross_entropy(u, theta[f]);
        break;
      default:
        throw std::invalid_argument("no objective is associated with learner " + std::string(to_string(learner)));
    }
  }
  return total;
}

VerificationReport verify_parameter_optimality(const LabelingState& state, const BipartiteGraph& graph,
                                               LearnerKind learner, const SmoothingConfig& smoothing,
                                               std::size_t trials, std::uint64_t rng_seed) {
  if (learner != LearnerKind::DL1 && learner != LearnerKind::DL2S) {
    throw std::invalid_argument("parameter optimality is only defined for dl1 and dl2s");
  }
  if (trials == 0) throw std::invalid_argument("trials must be positive");

  VerificationReport report;
  report.check = learner == LearnerKind::DL1 ? "parameter_optimality_K_t2" : "parameter_optimality_K_delta";
  report.witness = {{"rng_seed", rng_seed}};

  Theta theta = train(graph, state, learner, smoothing);
  auto objective = [&](const Theta& t) {
    return learner == LearnerKind::DL1 ? objective_K_t2(state, t, graph)
                                       : objective_K_delta(state, t, graph, smoothing.delta);
  };
  const double base = objective(theta);
  const std::size_t num_labels = graph.num_labels();

  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> scale_dist(0.0, 1.0);
  for (FeatureId f = 0; f < graph.num_features(); ++f) {
    const LabelDistribution optimum = theta.rows[f];
    for (std::size_t k = 0; k < trials; ++k) {
      const auto direction = random_simplex(rng, num_labels);
      const double scale = scale_dist(rng);
      std::vector<double> row(num_labels);
      for (std::size_t j = 0; j < num_labels; ++j) {
        const double shift = scale * (direction[j] - 1.0 / static_cast<double>(num_labels));
        row[j] = std::max(0.0, optimum[j] + shift);
      }
      theta.rows[f] = LabelDistribution::normalized(std::move(row));
      const double increase = objective(theta) - base;
      const double before = report.worst_violation;
      report.observe(increase);
      if (report.worst_violation < before) {
        report.witness["feature"] = graph.feature_name(f);
        report.witness["row"] = std::vector<double>(theta.rows[f].probs().begin(), theta.rows[f].probs().end());
        report.witness["increase"] = increase;
      }
    }
    theta.rows[f] = optimum;
  }
  return report;
}

VerificationReport verify_label_choice(const LabelingState& state, const Theta& theta,
                                       const BipartiteGraph& graph, LearnerKind learner,
                                       const SmoothingConfig& smoothing) {
  VerificationReport report;
  report.check = "label_choice";
  const std::size_t num_labels = graph.num_labels();
  const auto u = uniform(num_labels);
  const auto predictions = predict_all(theta, graph, learner);

  for (InstanceId x = 0; x < graph.num_instances(); ++x) {
    const auto& y = state.label(x);
    if (!y || state.is_seed(x)) continue;
    auto contribution = [&](const LabelDistribution& phi_x) {
      return instance_contribution(phi_x, x, theta, graph, learner, smoothing.delta);
    };
    const double chosen = contribution(point_mass(*y, num_labels));
    double best = chosen;
    for (Label j = 0; j < num_labels; ++j) best = std::min(best, contribution(point_mass(j, num_labels)));
    const double unlabeled = contribution(u);

    const double before = report.worst_violation;
    report.observe(best - chosen);
    report.observe(unlabeled - chosen);
    if (!predictions[x].is_uniform() && !(unlabeled > chosen)) {
      report.pass = false;
      report.witness["not_strict"] = graph.instance_name(x);
    }
    if (report.worst_violation < before) {
      report.witness["instance"] = graph.instance_name(x);
      report.witness["chosen"] = chosen;
      report.witness["best"] = best;
      report.witness["uniform"] = unlabeled;
    }
  }
  return report;
}

}  // namespace yarowsky
