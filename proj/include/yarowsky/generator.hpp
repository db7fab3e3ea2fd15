#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "yarowsky/distributions.hpp"
#include "yarowsky/graph.hpp"
#include "yarowsky/learners.hpp"

namespace yarowsky {

/// Synthetic planted-partition dataset.
///
/// Features are split round-robin into `planted_classes` clusters and each
/// instance is assigned a class uniformly at random. An instance draws its
/// features from its own cluster, except that each draw comes from another
/// cluster with probability `noise`. Seeds are spread round-robin across the
/// classes and carry the planted class as their label.
struct GenConfig {
  std::size_t num_instances = 50;
  std::size_t num_features = 20;
  std::size_t num_labels = 2;
  std::size_t edges_min = 2;
  std::size_t edges_max = 4;
  double seed_fraction = 0.1;
  std::size_t planted_classes = 2;
  double noise = 0.1;
  std::uint64_t rng_seed = 42;
};

/// Throws std::invalid_argument for infeasible configurations.
void validate(const GenConfig& config);

/// Records in instance order; instance ids are "x<i>", features "f<k>",
/// labels are class names "c<j>".
std::vector<InstanceRecord> generate_records(const GenConfig& config);

Dataset generate(const GenConfig& config);

// Random helpers shared by the verification suites.

/// Symmetric Dirichlet(1) sample.
LabelDistribution random_simplex_point(std::mt19937_64& rng, std::size_t num_labels);

/// Like random_simplex_point but every entry is at least `floor`.
LabelDistribution random_positive_point(std::mt19937_64& rng, std::size_t num_labels, double floor);

/// Every instance gets exactly `degree` distinct features; features left
/// without instances are dropped and the remainder renumbered.
BipartiteGraph random_uniform_degree_graph(std::mt19937_64& rng, std::size_t num_instances,
                                           std::size_t num_features, std::size_t degree,
                                           std::size_t num_labels);

/// Degree of each instance uniform in [min_degree, max_degree].
BipartiteGraph random_graph(std::mt19937_64& rng, std::size_t num_instances, std::size_t num_features,
                            std::size_t min_degree, std::size_t max_degree, std::size_t num_labels);

Theta random_theta(std::mt19937_64& rng, std::size_t num_features, std::size_t num_labels,
                   double floor = 0.0);

/// Each instance is a seed with probability `seed_probability`; at least one
/// seed is always produced.
SeedLabels random_seeds(std::mt19937_64& rng, std::size_t num_instances, std::size_t num_labels,
                        double seed_probability);

}  // namespace yarowsky
