#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "yarowsky/bootstrap.hpp"
#include "yarowsky/generator.hpp"
#include "yarowsky/objectives.hpp"
#include "yarowsky/propagation.hpp"

using namespace yarowsky;
using yarowsky::testing::dataset;
using yarowsky::testing::near;

namespace {

LabelDistribution d(std::vector<double> p) { return LabelDistribution(std::move(p)); }
using Dists = std::vector<LabelDistribution>;

const BipartiteGraph& one_edge() {
  static const BipartiteGraph g(2, {{0}}, {"x"}, {"f"});
  return g;
}

// One feature shared by every instance.
BipartiteGraph star(std::size_t n) {
  std::vector<std::vector<FeatureId>> fs(n, {0});
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
  return BipartiteGraph(2, fs, names, {"f"});
}

NodeAssignment assignment(const BipartiteGraph& g, Dists features, Dists instances) {
  NodeAssignment a = NodeAssignment::initial(g, SeedLabels{});
  a.feature_dists = std::move(features);
  a.instance_dists = std::move(instances);
  return a;
}

}  // namespace

TEST_CASE("H objective") {
  CHECK(near(objective_H(Dists{point_mass(0, 2)}, Dists{d({0.6, 0.4})}), -std::log(0.6)));
  CHECK(near(objective_H(Dists{uniform(2)}, Dists{uniform(2)}), std::log(2.0)));
  CHECK(objective_H(Dists{point_mass(0, 2), point_mass(1, 2)}, Dists{point_mass(0, 2), point_mass(1, 2)}) == 0.0);
  CHECK(std::isinf(objective_H(Dists{point_mass(0, 2)}, Dists{point_mass(1, 2)})));
}

TEST_CASE("l_t2 objective") {
  CHECK(near(objective_l_t2(Dists{point_mass(0, 2)}, Dists{d({0.6, 0.4})}), -0.68));
  const Dists pi = {d({0.2, 0.8}), d({0.5, 0.5})};
  CHECK(near(objective_l_t2(pi, pi), -(0.04 + 0.64) - 0.5));
  CHECK(near(objective_l_t2(Dists{uniform(2)}, Dists{uniform(2)}), -0.5));
}

TEST_CASE("K_t2 objective") {
  CHECK(near(objective_K_t2(Dists{point_mass(0, 2)}, Theta{{d({0.6, 0.4})}}, one_edge()), -0.68));
  CHECK(near(objective_K_t2(Dists{uniform(2)}, Theta{{uniform(2)}}, one_edge()), -0.5));
  const BipartiteGraph two(2, {{0, 1}}, {"x"}, {"f", "g"});
  CHECK(near(objective_K_t2(Dists{point_mass(0, 2)}, Theta{{d({0.6, 0.4}), d({0.6, 0.4})}}, two), -1.36));
}

TEST_CASE("K_delta objective") {
  const double expected = -std::log(0.6) + 0.5 * (-std::log(0.6) - std::log(0.4));
  CHECK(near(objective_K_delta(Dists{point_mass(0, 2)}, Theta{{d({0.6, 0.4})}}, one_edge(), 1.0), expected));
  CHECK(near(expected, 1.224384, 1e-6));
  CHECK(near(objective_K_delta(Dists{point_mass(0, 2)}, Theta{{d({0.6, 0.4})}}, one_edge(), 0.0),
             -std::log(0.6)));
  CHECK(near(objective_K_delta(Dists{uniform(3)}, Theta{{uniform(3)}},
                               BipartiteGraph(3, {{0}}, {"x"}, {"f"}), 2.0),
             3 * std::log(3.0)));
  // Zero theta entries: infinite only when something puts mass there.
  CHECK(near(objective_K_delta(Dists{point_mass(0, 2)}, Theta{{point_mass(0, 2)}}, one_edge(), 0.0), 0.0));
  CHECK(std::isinf(objective_K_delta(Dists{point_mass(0, 2)}, Theta{{point_mass(0, 2)}}, one_edge(), 1.0)));
}

TEST_CASE("K_delta with delta 0 equals the conventional K") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = random_graph(rng, 8, 10, 1, 4, 3);
    const auto theta = random_theta(rng, g.num_features(), 3, 1e-3);
    Dists phi;
    for (InstanceId x = 0; x < g.num_instances(); ++x) phi.push_back(random_simplex_point(rng, 3));
    CHECK(objective_K_delta(phi, theta, g, 0.0) == objective_K_conventional(phi, theta, g));
  }
}

TEST_CASE("graph Bregman objective and the explicit quadratic sum") {
  const auto g = one_edge();
  CHECK(objective_graph_bregman(assignment(g, {d({0.3, 0.7})}, {d({0.3, 0.7})}), g, PsiKind::NegEntropy) == 0.0);
  CHECK(near(objective_graph_bregman(assignment(g, {point_mass(0, 2)}, {point_mass(1, 2)}), g, PsiKind::Quadratic),
             2.0));
  CHECK(near(objective_graph_bregman(assignment(g, {uniform(2)}, {point_mass(0, 2)}), g, PsiKind::Quadratic), 0.5));
  // Feature distribution comes first: B(theta, phi) is infinite when phi has a zero under theta's support.
  CHECK(std::isinf(objective_graph_bregman(assignment(g, {uniform(2)}, {point_mass(0, 2)}), g, PsiKind::NegEntropy)));
  CHECK(near(objective_graph_bregman(assignment(g, {point_mass(0, 2)}, {uniform(2)}), g, PsiKind::NegEntropy),
             std::log(2.0)));

  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t L = 2 + trial % 3;
    const auto rg = random_graph(rng, 7, 9, 1, 4, L);
    Dists fd, id;
    for (FeatureId f = 0; f < rg.num_features(); ++f) fd.push_back(random_simplex_point(rng, L));
    for (InstanceId x = 0; x < rg.num_instances(); ++x) id.push_back(random_simplex_point(rng, L));
    double explicit_sum = 0.0;
    for (FeatureId f = 0; f < rg.num_features(); ++f) {
      for (InstanceId x : rg.instances_of(f)) {
        for (std::size_t j = 0; j < L; ++j) explicit_sum += (fd[f][j] - id[x][j]) * (fd[f][j] - id[x][j]);
      }
    }
    const auto a = assignment(rg, fd, id);
    CHECK(near(objective_graph_bregman(a, rg, PsiKind::Quadratic), explicit_sum, 1e-12));
  }
}

TEST_CASE("eq11 objective") {
  const auto g = star(2);
  CHECK(near(objective_eq11(assignment(g, {uniform(2)}, {point_mass(0, 2), point_mass(1, 2)}), g), -2.0));
  CHECK(near(objective_eq11(assignment(one_edge(), {point_mass(1, 2)}, {point_mass(1, 2)}), one_edge()), -2.0));
  const auto g3 = star(3);
  CHECK(near(objective_eq11(assignment(g3, {uniform(2)}, {uniform(2), uniform(2), uniform(2)}), g3), -3.0));
}

TEST_CASE("lemma1 gap") {
  // Identical rows per instance: Cauchy-Schwarz equality.
  const BipartiteGraph g(2, {{0, 1}, {0, 1}}, {"x", "y"}, {"f", "g"});
  const Theta same{{d({0.3, 0.7}), d({0.3, 0.7})}};
  CHECK(near(lemma1_gap(Dists{point_mass(0, 2), uniform(2)}, same, g, 2), 0.0));
  // m = 1 is always tight.
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g1 = random_uniform_degree_graph(rng, 5, 8, 1, 3);
    const auto theta = random_theta(rng, g1.num_features(), 3);
    Dists phi;
    for (InstanceId x = 0; x < 5; ++x) phi.push_back(random_simplex_point(rng, 3));
    CHECK(near(lemma1_gap(phi, theta, g1, 1), 0.0, 1e-12));
  }
  // m = 2 with opposite point-mass rows gives 0.5 per instance, any phi.
  const BipartiteGraph one(2, {{0, 1}}, {"x"}, {"f", "g"});
  const Theta opposite{{point_mass(0, 2), point_mass(1, 2)}};
  for (const auto& phi : {point_mass(0, 2), uniform(2), d({0.9, 0.1})}) {
    CHECK(near(lemma1_gap(Dists{phi}, opposite, one, 2), 0.5));
  }
  CHECK_THROWS(lemma1_gap(Dists{uniform(2)}, opposite, one, 3));
  const BipartiteGraph ragged(2, {{0}, {0, 1}}, {"x", "y"}, {"f", "g"});
  CHECK_THROWS(lemma1_gap(Dists{uniform(2), uniform(2)}, opposite, ragged, 2));
}

TEST_CASE("lemma1 gap matches the closed-form identity") {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t m = std::array<std::size_t, 4>{1, 2, 3, 5}[trial % 4];
    const std::size_t L = std::array<std::size_t, 3>{2, 3, 5}[trial % 3];
    const auto g = random_uniform_degree_graph(rng, 6, m + 6, m, L);
    const auto theta = random_theta(rng, g.num_features(), L);
    Dists phi;
    for (InstanceId x = 0; x < g.num_instances(); ++x) phi.push_back(random_simplex_point(rng, L));
    double identity = 0.0;
    for (InstanceId x = 0; x < g.num_instances(); ++x) {
      for (std::size_t j = 0; j < L; ++j) {
        double sum = 0.0, sq = 0.0;
        for (FeatureId f : g.features_of(x)) {
          sum += theta[f][j];
          sq += theta[f][j] * theta[f][j];
        }
        identity += (static_cast<double>(m) * sq - sum * sum) / static_cast<double>(m * m);
      }
    }
    const double gap = lemma1_gap(phi, theta, g, m);
    CHECK(near(gap, identity, 1e-9));
    CHECK(gap >= -1e-9);
  }
}

TEST_CASE("conventional K mismatch") {
  const Dists rows = {d({0.8, 0.2}), d({0.8, 0.2}), d({0.01, 0.99})};
  const auto m = abney_k_mismatch(rows);
  CHECK(m.argmax_sum == 0);
  CHECK(m.argmin_logsum == 1);
  CHECK(m.differ);
  const auto single = abney_k_mismatch(Dists{d({0.3, 0.7})});
  CHECK(single.argmax_sum == 1);
  CHECK_FALSE(single.differ);
  const auto same = abney_k_mismatch(Dists{d({0.6, 0.4}), d({0.6, 0.4}), d({0.6, 0.4})});
  CHECK(same.argmax_sum == 0);
  CHECK_FALSE(same.differ);
  CHECK_THROWS(abney_k_mismatch(Dists{point_mass(0, 2)}));
}

TEST_CASE("optimality residual") {
  const auto chain = dataset({{"s", 0, {"f"}}, {"t", 1, {"f"}}});
  auto a = NodeAssignment::initial(chain.graph, chain.seeds);
  a.feature_dists[0] = uniform(2);
  CHECK(optimality_residual(a, chain.graph, PsiKind::Quadratic).feature_residual <= 1e-15);

  const auto g = star(2);
  auto b = assignment(g, {uniform(2)}, {d({0.8, 0.2}), d({0.2, 0.8})});
  CHECK(optimality_residual(b, g, PsiKind::NegEntropy).feature_residual <= 1e-12);
  b.feature_dists[0] = d({0.6, 0.4});
  CHECK(near(optimality_residual(b, g, PsiKind::NegEntropy).feature_residual, 0.1, 1e-12));

  // Every node equals the average of its neighbours.
  const auto c = assignment(g, {d({0.4, 0.6})}, {d({0.4, 0.6}), d({0.4, 0.6})});
  const auto r = optimality_residual(c, g, PsiKind::Quadratic);
  CHECK(r.feature_residual <= 1e-15);
  CHECK(r.instance_residual <= 1e-15);
}

TEST_CASE("verification report bookkeeping") {
  VerificationReport r;
  r.observe(0.5);
  r.observe(-1e-10);
  CHECK(r.pass);
  CHECK(r.worst_violation == -1e-10);
  r.observe(-1e-6);
  CHECK_FALSE(r.pass);
  r.observe(1.0);
  CHECK_FALSE(r.pass);
  r.observe(std::nan(""));
  CHECK(std::isinf(r.worst_violation));
  const auto j = r.to_json();
  CHECK(j["trials"] == 5);
  CHECK(j["worst_violation"].is_null());
  CHECK(j["pass"] == false);
}

TEST_CASE("parameter updates are optimal under perturbation") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    GenConfig c;
    c.num_instances = 40;
    c.num_features = 15;
    c.rng_seed = rng();
    const auto ds = generate(c);
    RunOptions opts;
    opts.max_iter = 2;
    const auto state = run(ds.graph, ds.seeds, opts).state;
    const auto dl1 = verify_parameter_optimality(state, ds.graph, LearnerKind::DL1, {}, 50, rng());
    CHECK(dl1.pass);
    CHECK(dl1.worst_violation >= -1e-9);
    const auto dl2 = verify_parameter_optimality(state, ds.graph, LearnerKind::DL2S, {0.1, 1.0}, 50, rng());
    CHECK(dl2.pass);
  }
  const auto ds = dataset({{"x", 0, {"f"}}});
  const LabelingState state(1, 2, ds.seeds);
  CHECK_THROWS(verify_parameter_optimality(state, ds.graph, LearnerKind::DL0, {}, 10, 1));
}

TEST_CASE("grid search matches the closed-form updates") {
  // Single feature, single labeled instance: theta_f0 = 1 minimises K_t2.
  const auto ds = dataset({{"x", 0, {"f"}}});
  const LabelingState state(1, 2, ds.seeds);
  double best_t = -1.0;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 100; ++i) {
    const double t = i / 100.0;
    const double v = objective_K_t2(state, Theta{{d({t, 1 - t})}}, ds.graph);
    if (v < best) {
      best = v;
      best_t = t;
    }
  }
  CHECK(near(best_t, 1.0));
  CHECK(near(train(ds.graph, state, LearnerKind::DL1, {})[0][0], best_t));

  // Mixed feature under DL2S with delta = 1: two label-0, one label-1, one unlabeled.
  const auto mixed = dataset({{"a", 0, {"f"}}, {"b", 0, {"f"}}, {"c", 1, {"f"}}, {"u", std::nullopt, {"f"}}});
  const LabelingState ms(4, 2, mixed.seeds);
  const double exact = train(mixed.graph, ms, LearnerKind::DL2S, {0.1, 1.0})[0][0];
  CHECK(near(exact, (2 + 0.5 * (1 + 4)) / (3 + 1 + 4)));
  best = std::numeric_limits<double>::infinity();
  for (int i = 1; i < 100; ++i) {
    const double t = i / 100.0;
    const double v = objective_K_delta(ms, Theta{{d({t, 1 - t})}}, mixed.graph, 1.0);
    if (v < best) {
      best = v;
      best_t = t;
    }
  }
  CHECK(std::abs(best_t - exact) <= 0.01);
}

TEST_CASE("label choice minimises the per-instance contribution") {
  const BipartiteGraph g(2, {{0, 1}}, {"x"}, {"f", "g"});
  const Theta theta{{d({0.7, 0.3}), d({0.5, 0.5})}};
  const double c0 = instance_contribution(point_mass(0, 2), 0, theta, g, LearnerKind::DL1, 0.0);
  const double c1 = instance_contribution(point_mass(1, 2), 0, theta, g, LearnerKind::DL1, 0.0);
  const double cu = instance_contribution(uniform(2), 0, theta, g, LearnerKind::DL1, 0.0);
  CHECK(c0 < c1);
  CHECK(c0 < cu);
  // Uniform prediction: uniform phi is no worse than any point mass.
  const Theta flat{{uniform(2), uniform(2)}};
  const double fu = instance_contribution(uniform(2), 0, flat, g, LearnerKind::DL1, 0.0);
  for (Label j = 0; j < 2; ++j) {
    CHECK(fu <= instance_contribution(point_mass(j, 2), 0, flat, g, LearnerKind::DL1, 0.0) + 1e-15);
  }
  // DL2S: minimiser is argmax of the summed logs.
  const Theta logs{{d({0.9, 0.1}), d({0.2, 0.8})}};
  const double k0 = instance_contribution(point_mass(0, 2), 0, logs, g, LearnerKind::DL2S, 1.0);
  const double k1 = instance_contribution(point_mass(1, 2), 0, logs, g, LearnerKind::DL2S, 1.0);
  CHECK(k0 < k1);
  CHECK_THROWS(instance_contribution(uniform(2), 0, logs, g, LearnerKind::DL0, 1.0));
}

TEST_CASE("label choice report over bootstrapping runs") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 5; ++trial) {
    GenConfig c;
    c.num_instances = 50;
    c.num_features = 20;
    c.num_labels = 3;
    c.planted_classes = 3;
    c.rng_seed = rng();
    const auto ds = generate(c);
    for (auto learner : {LearnerKind::DL1, LearnerKind::DL2S}) {
      RunOptions opts;
      opts.learner = learner;
      const auto r = run(ds.graph, ds.seeds, opts);
      const auto rep = verify_label_choice(r.state, r.theta, ds.graph, learner, opts.smoothing);
      CHECK(rep.pass);
    }
  }
}
