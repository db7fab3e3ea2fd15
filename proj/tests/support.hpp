#pragma once

#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "yarowsky/graph.hpp"

namespace yarowsky::testing {

inline bool near(double a, double b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

inline bool near(const LabelDistribution& p, std::vector<double> q, double tol = 1e-12) {
  if (p.size() != q.size()) return false;
  for (std::size_t j = 0; j < q.size(); ++j) {
    if (!near(p[j], q[j], tol)) return false;
  }
  return true;
}

struct Row {
  std::string id;
  std::optional<Label> label;
  std::vector<std::string> features;
};

inline Dataset dataset(const std::vector<Row>& rows, std::size_t num_labels = 2) {
  std::vector<InstanceRecord> records;
  std::size_t line = 0;
  for (const auto& r : rows) records.push_back({r.id, r.label, r.features, ++line});
  return build_graph(records, num_labels);
}

inline FeatureId feature_id(const BipartiteGraph& g, const std::string& name) {
  for (FeatureId f = 0; f < g.num_features(); ++f) {
    if (g.feature_name(f) == name) return f;
  }
  throw std::out_of_range(name);
}

}  // namespace yarowsky::testing
