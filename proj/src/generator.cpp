#include "yarowsky/generator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace yarowsky {

namespace {

std::size_t seed_count(const GenConfig& c) {
  return static_cast<std::size_t>(std::floor(c.seed_fraction * static_cast<double>(c.num_instances) + 1e-9));
}

// Keeps only features that ended up with at least one instance.
BipartiteGraph compact(std::vector<std::vector<FeatureId>> features_of, std::size_t num_features,
                       std::size_t num_labels) {
  std::vector<FeatureId> remap(num_features, num_features);
  std::vector<std::string> feature_names;
  for (auto& fs : features_of) {
    std::sort(fs.begin(), fs.end());
  }
  // Dense renumbering in first-seen order.
  for (auto& fs : features_of) {
    for (FeatureId& f : fs) {
      if (remap[f] == num_features) {
        remap[f] = feature_names.size();
        feature_names.push_back("f" + std::to_string(f));
      }
      f = remap[f];
    }
  }
  std::vector<std::string> instance_names;
  for (std::size_t x = 0; x < features_of.size(); ++x) instance_names.push_back("x" + std::to_string(x));
  return BipartiteGraph(num_labels, std::move(features_of), std::move(instance_names), std::move(feature_names));
}

std::vector<FeatureId> sample_distinct(std::mt19937_64& rng, std::size_t population, std::size_t k) {
  std::vector<FeatureId> all(population);
  for (std::size_t i = 0; i < population; ++i) all[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, population - 1);
    std::swap(all[i], all[pick(rng)]);
  }
  all.resize(k);
  return all;
}

}  // namespace

void validate(const GenConfig& c) {
  auto fail = [](const std::string& what) { throw std::invalid_argument("infeasible generator config: " + what); };
  if (c.num_instances == 0) fail("need at least one instance");
  if (c.num_features == 0) fail("need at least one feature");
  if (c.num_labels < 2) fail("need at least two labels");
  if (c.planted_classes == 0 || c.planted_classes > c.num_labels) fail("planted classes must be in [1, L]");
  if (c.planted_classes > c.num_features) fail("more planted classes than features");
  if (c.edges_min == 0 || c.edges_min > c.edges_max) fail("edge range must satisfy 1 <= min <= max");
  if (c.edges_max > c.num_features) fail("more edges per instance than features");
  if (!(c.seed_fraction > 0.0 && c.seed_fraction <= 1.0)) fail("seed fraction must lie in (0, 1]");
  if (seed_count(c) == 0) fail("seed fraction yields no seeds");
  if (!(c.noise >= 0.0 && c.noise < 1.0)) fail("noise must lie in [0, 1)");
  if (c.noise == 0.0 && c.edges_max > c.num_features / c.planted_classes) {
    fail("noise-free instances need more features than a planted cluster holds");
  }
}

std::vector<InstanceRecord> generate_records(const GenConfig& c) {
  validate(c);
  std::mt19937_64 rng(c.rng_seed);
  const std::size_t classes = c.planted_classes;

  std::vector<std::vector<FeatureId>> cluster(classes);
  for (FeatureId f = 0; f < c.num_features; ++f) cluster[f % classes].push_back(f);

  std::uniform_int_distribution<std::size_t> class_dist(0, classes - 1);
  std::uniform_int_distribution<std::size_t> degree_dist(c.edges_min, c.edges_max);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  std::vector<std::size_t> planted(c.num_instances);
  std::vector<InstanceRecord> records(c.num_instances);
  for (std::size_t x = 0; x < c.num_instances; ++x) {
    const std::size_t own = class_dist(rng);
    planted[x] = own;
    const std::size_t degree = degree_dist(rng);
    std::vector<FeatureId> chosen;
    auto unchosen = [&](const std::vector<FeatureId>& pool) {
      std::vector<FeatureId> out;
      for (FeatureId f : pool) {
        if (std::find(chosen.begin(), chosen.end(), f) == chosen.end()) out.push_back(f);
      }
      return out;
    };
    while (chosen.size() < degree) {
      std::size_t source = own;
      if (classes > 1 && coin(rng) < c.noise) {
        std::uniform_int_distribution<std::size_t> other(0, classes - 2);
        source = other(rng);
        if (source >= own) ++source;
      }
      auto pool = unchosen(cluster[source]);
      if (pool.empty()) pool = unchosen(cluster[own]);
      if (pool.empty()) {
        for (const auto& cl : cluster) {
          auto rest = unchosen(cl);
          pool.insert(pool.end(), rest.begin(), rest.end());
        }
      }
      std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
      chosen.push_back(pool[pick(rng)]);
    }
    auto& rec = records[x];
    rec.id = "x" + std::to_string(x);
    rec.line = x + 1;
    for (FeatureId f : chosen) rec.features.push_back("f" + std::to_string(f));
  }

  std::vector<std::vector<std::size_t>> by_class(classes);
  for (std::size_t x = 0; x < c.num_instances; ++x) by_class[planted[x]].push_back(x);
  for (auto& members : by_class) std::shuffle(members.begin(), members.end(), rng);
  std::size_t remaining = seed_count(c);
  for (std::size_t round = 0; remaining > 0; ++round) {
    for (std::size_t k = 0; k < classes && remaining > 0; ++k) {
      if (round < by_class[k].size()) {
        records[by_class[k][round]].label = k;
        --remaining;
      }
    }
  }
  return records;
}

Dataset generate(const GenConfig& config) {
  auto dataset = build_graph(generate_records(config), config.num_labels);
  for (std::size_t j = 0; j < config.num_labels; ++j) dataset.label_names.push_back("c" + std::to_string(j));
  return dataset;
}

LabelDistribution random_simplex_point(std::mt19937_64& rng, std::size_t num_labels) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(num_labels);
  for (double& v : w) v = expo(rng);
  return LabelDistribution::normalized(std::move(w));
}

LabelDistribution random_positive_point(std::mt19937_64& rng, std::size_t num_labels, double floor) {
  if (floor * static_cast<double>(num_labels) >= 1.0) throw std::invalid_argument("floor too large");
  const auto base = random_simplex_point(rng, num_labels);
  const double scale = 1.0 - floor * static_cast<double>(num_labels);
  std::vector<double> w(num_labels);
  for (std::size_t j = 0; j < num_labels; ++j) w[j] = floor + scale * base[j];
  return LabelDistribution::normalized(std::move(w));
}

BipartiteGraph random_uniform_degree_graph(std::mt19937_64& rng, std::size_t num_instances,
                                           std::size_t num_features, std::size_t degree,
                                           std::size_t num_labels) {
  if (degree == 0 || degree > num_features) throw std::invalid_argument("degree must be in [1, |F|]");
  std::vector<std::vector<FeatureId>> features_of(num_instances);
  for (auto& fs : features_of) fs = sample_distinct(rng, num_features, degree);
  return compact(std::move(features_of), num_features, num_labels);
}

BipartiteGraph random_graph(std::mt19937_64& rng, std::size_t num_instances, std::size_t num_features,
                            std::size_t min_degree, std::size_t max_degree, std::size_t num_labels) {
  if (min_degree == 0 || min_degree > max_degree || max_degree > num_features) {
    throw std::invalid_argument("degree range must satisfy 1 <= min <= max <= |F|");
  }
  std::uniform_int_distribution<std::size_t> degree_dist(min_degree, max_degree);
  std::vector<std::vector<FeatureId>> features_of(num_instances);
  for (auto& fs : features_of) fs = sample_distinct(rng, num_features, degree_dist(rng));
  return compact(std::move(features_of), num_features, num_labels);
}

Theta random_theta(std::mt19937_64& rng, std::size_t num_features, std::size_t num_labels, double floor) {
  Theta theta;
  theta.rows.reserve(num_features);
  for (std::size_t f = 0; f < num_features; ++f) {
    theta.rows.push_back(floor > 0.0 ? random_positive_point(rng, num_labels, floor)
                                     : random_simplex_point(rng, num_labels));
  }
  return theta;
}

SeedLabels random_seeds(std::mt19937_64& rng, std::size_t num_instances, std::size_t num_labels,
                        double seed_probability) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<Label> label_dist(0, num_labels - 1);
  SeedLabels seeds;
  for (InstanceId x = 0; x < num_instances; ++x) {
    if (coin(rng) < seed_probability) seeds.entries[x] = label_dist(rng);
  }
  if (seeds.empty()) {
    std::uniform_int_distribution<InstanceId> pick(0, num_instances - 1);
    seeds.entries[pick(rng)] = label_dist(rng);
  }
  return seeds;
}

}  // namespace yarowsky
