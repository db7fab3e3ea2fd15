#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "yarowsky/distributions.hpp"

namespace yarowsky {

using InstanceId = std::size_t;
using FeatureId = std::size_t;

// Padding features are named "<prefix><instance name>#<k>".
inline constexpr std::string_view kPaddingPrefix = "__pad:";

/// Raised for malformed input records. line() is 1-based, or 0 when the
/// error is not tied to a particular input line.
class InputError : public std::runtime_error {
 public:
  InputError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct InstanceRecord {
  std::string id;
  std::optional<Label> label;
  std::vector<std::string> features;
  std::size_t line = 0;
};

/// Instances on one side, features on the other, edges between an instance
/// and each of its features. Immutable once built.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;

  /// Validates symmetry-by-construction, dense ids and non-empty
  /// neighbourhoods on both sides.
  BipartiteGraph(std::size_t num_labels, std::vector<std::vector<FeatureId>> features_of,
                 std::vector<std::string> instance_names, std::vector<std::string> feature_names);

  std::size_t num_instances() const { return features_of_.size(); }
  std::size_t num_features() const { return instances_of_.size(); }
  std::size_t num_labels() const { return num_labels_; }
  std::size_t num_edges() const { return num_edges_; }

  std::span<const FeatureId> features_of(InstanceId x) const { return features_of_[x]; }
  std::span<const InstanceId> instances_of(FeatureId f) const { return instances_of_[f]; }

  const std::string& instance_name(InstanceId x) const { return instance_names_[x]; }
  const std::string& feature_name(FeatureId f) const { return feature_names_[f]; }
  bool is_padding(FeatureId f) const;

  /// Returns m if every instance has exactly m features.
  std::optional<std::size_t> uniform_degree() const;

  friend bool operator==(const BipartiteGraph&, const BipartiteGraph&) = default;

 private:
  std::size_t num_labels_ = 0;
  std::size_t num_edges_ = 0;
  std::vector<std::vector<FeatureId>> features_of_;
  std::vector<std::vector<InstanceId>> instances_of_;
  std::vector<std::string> instance_names_;
  std::vector<std::string> feature_names_;
};

/// Frozen initial labels, keyed by dense instance id.
struct SeedLabels {
  std::map<InstanceId, Label> entries;

  bool contains(InstanceId x) const { return entries.contains(x); }
  std::optional<Label> label(InstanceId x) const;
  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
};

struct Dataset {
  BipartiteGraph graph;
  SeedLabels seeds;
  std::vector<std::string> label_names;  // empty when labels are plain integers
};

/// Interns feature tokens in first-seen order and deduplicates them per record.
Dataset build_graph(const std::vector<InstanceRecord>& records, std::size_t num_labels);

struct PaddedGraph {
  BipartiteGraph graph;
  std::size_t degree = 0;
};

/// Gives every instance max_x |F_x| features by appending fresh features that
/// are adjacent to that instance only.
PaddedGraph pad_to_uniform_degree(const BipartiteGraph& graph);

/// Parsed form of the tab-separated dataset format:
///   [#labels: name0,name1,...]
///   instance_id<TAB>label_or_?<TAB>feature tokens separated by spaces
struct TsvDocument {
  std::vector<std::string> label_names;
  std::vector<InstanceRecord> records;

  /// Number of labels implied by the document: the header size if present,
  /// otherwise max(2, largest integer label + 1).
  std::size_t implied_num_labels() const;
};

TsvDocument parse_tsv(std::istream& in);
Dataset read_dataset(std::istream& in, std::optional<std::size_t> num_labels = std::nullopt);
void write_dataset(std::ostream& out, const Dataset& dataset);

/// Renders a label either by name (when label names are known) or as an integer.
std::string label_to_string(const std::optional<Label>& label, std::span<const std::string> names);

}  // namespace yarowsky
