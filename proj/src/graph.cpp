#include "yarowsky/graph.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <unordered_map>

namespace yarowsky {

namespace {

std::string with_line(std::size_t line, const std::string& what) {
  return line == 0 ? what : "line " + std::to_string(line) + ": " + what;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::optional<std::size_t> parse_index(std::string_view s) {
  std::size_t value = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end || s.empty()) return std::nullopt;
  return value;
}

}  // namespace

InputError::InputError(std::size_t line, const std::string& what)
    : std::runtime_error(with_line(line, what)), line_(line) {}

BipartiteGraph::BipartiteGraph(std::size_t num_labels, std::vector<std::vector<FeatureId>> features_of,
                               std::vector<std::string> instance_names,
                               std::vector<std::string> feature_names)
    : num_labels_(num_labels),
      features_of_(std::move(features_of)),
      instances_of_(feature_names.size()),
      instance_names_(std::move(instance_names)),
      feature_names_(std::move(feature_names)) {
  if (num_labels_ < 2) throw std::invalid_argument("graph needs at least two labels");
  if (instance_names_.size() != features_of_.size()) {
    throw std::invalid_argument("instance name count does not match instance count");
  }
  for (InstanceId x = 0; x < features_of_.size(); ++x) {
    auto& fs = features_of_[x];
    std::sort(fs.begin(), fs.end());
    fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
    if (fs.empty()) throw std::invalid_argument("instance " + instance_names_[x] + " has no features");
    for (FeatureId f : fs) {
      if (f >= instances_of_.size()) throw std::invalid_argument("feature id out of range");
      instances_of_[f].push_back(x);
    }
    num_edges_ += fs.size();
  }
  for (FeatureId f = 0; f < instances_of_.size(); ++f) {
    if (instances_of_[f].empty()) {
      throw std::invalid_argument("feature " + feature_names_[f] + " has no instances");
    }
  }
}

bool BipartiteGraph::is_padding(FeatureId f) const {
  return std::string_view(feature_names_[f]).starts_with(kPaddingPrefix);
}

std::optional<std::size_t> BipartiteGraph::uniform_degree() const {
  if (features_of_.empty()) return std::nullopt;
  const std::size_t m = features_of_.front().size();
  for (const auto& fs : features_of_) {
    if (fs.size() != m) return std::nullopt;
  }
  return m;
}

std::optional<Label> SeedLabels::label(InstanceId x) const {
  const auto it = entries.find(x);
  if (it == entries.end()) return std::nullopt;
  return it->second;
}

Dataset build_graph(const std::vector<InstanceRecord>& records, std::size_t num_labels) {
  if (num_labels < 2) throw std::invalid_argument("need at least two labels");
  std::unordered_map<std::string, InstanceId> instance_ids;
  std::unordered_map<std::string, FeatureId> feature_ids;
  std::vector<std::string> instance_names;
  std::vector<std::string> feature_names;
  std::vector<std::vector<FeatureId>> features_of;
  Dataset out;

  for (const auto& rec : records) {
    if (rec.features.empty()) {
      throw InputError(rec.line, "record '" + rec.id + "' has no features");
    }
    if (rec.label && *rec.label >= num_labels) {
      throw InputError(rec.line, "label " + std::to_string(*rec.label) + " of '" + rec.id +
                                     "' is out of range for " + std::to_string(num_labels) + " labels");
    }
    const InstanceId x = instance_names.size();
    if (!instance_ids.emplace(rec.id, x).second) {
      throw InputError(rec.line, "duplicate instance id '" + rec.id + "'");
    }
    instance_names.push_back(rec.id);
    std::vector<FeatureId> fs;
    for (const auto& token : rec.features) {
      auto [it, inserted] = feature_ids.emplace(token, feature_names.size());
      if (inserted) feature_names.push_back(token);
      if (std::find(fs.begin(), fs.end(), it->second) == fs.end()) fs.push_back(it->second);
    }
    features_of.push_back(std::move(fs));
    if (rec.label) out.seeds.entries.emplace(x, *rec.label);
  }

  out.graph = BipartiteGraph(num_labels, std::move(features_of), std::move(instance_names),
                             std::move(feature_names));
  return out;
}

PaddedGraph pad_to_uniform_degree(const BipartiteGraph& graph) {
  std::size_t m = 0;
  for (InstanceId x = 0; x < graph.num_instances(); ++x) m = std::max(m, graph.features_of(x).size());

  std::vector<std::vector<FeatureId>> features_of(graph.num_instances());
  std::vector<std::string> instance_names(graph.num_instances());
  std::vector<std::string> feature_names(graph.num_features());
  for (FeatureId f = 0; f < graph.num_features(); ++f) feature_names[f] = graph.feature_name(f);
  for (InstanceId x = 0; x < graph.num_instances(); ++x) {
    instance_names[x] = graph.instance_name(x);
    const auto fs = graph.features_of(x);
    features_of[x].assign(fs.begin(), fs.end());
    for (std::size_t k = fs.size(); k < m; ++k) {
      features_of[x].push_back(feature_names.size());
      feature_names.push_back(std::string(kPaddingPrefix) + instance_names[x] + "#" + std::to_string(k));
    }
  }
  return {BipartiteGraph(graph.num_labels(), std::move(features_of), std::move(instance_names),
                         std::move(feature_names)),
          m};
}

std::size_t TsvDocument::implied_num_labels() const {
  if (!label_names.empty()) return label_names.size();
  std::size_t n = 2;
  for (const auto& rec : records) {
    if (rec.label) n = std::max(n, *rec.label + 1);
  }
  return n;
}

TsvDocument parse_tsv(std::istream& in) {
  TsvDocument doc;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      constexpr std::string_view header = "#labels:";
      if (line.starts_with(header)) {
        if (!doc.records.empty()) throw InputError(line_no, "label header must precede records");
        for (const auto& name : split(line.substr(header.size()), ',')) {
          const auto t = trim(name);
          if (t.empty()) throw InputError(line_no, "empty label name in header");
          doc.label_names.emplace_back(t);
        }
        if (doc.label_names.size() < 2) throw InputError(line_no, "label header needs at least two names");
      }
      continue;
    }
    const auto cols = split(line, '\t');
    if (cols.size() != 3) {
      throw InputError(line_no, "expected 3 tab-separated columns, found " + std::to_string(cols.size()));
    }
    InstanceRecord rec;
    rec.line = line_no;
    rec.id = std::string(trim(cols[0]));
    if (rec.id.empty()) throw InputError(line_no, "empty instance id");

    const auto label = trim(cols[1]);
    if (label != "?") {
      const auto named = std::find(doc.label_names.begin(), doc.label_names.end(), label);
      if (named != doc.label_names.end()) {
        rec.label = static_cast<Label>(named - doc.label_names.begin());
      } else if (auto idx = parse_index(label)) {
        rec.label = *idx;
      } else {
        throw InputError(line_no, "unknown label '" + std::string(label) + "'");
      }
    }

    std::istringstream tokens{std::string(cols[2])};
    std::string token;
    while (tokens >> token) rec.features.push_back(token);
    if (rec.features.empty()) throw InputError(line_no, "record '" + rec.id + "' has no features");
    doc.records.push_back(std::move(rec));
  }
  return doc;
}

Dataset read_dataset(std::istream& in, std::optional<std::size_t> num_labels) {
  auto doc = parse_tsv(in);
  const std::size_t labels = num_labels.value_or(doc.implied_num_labels());
  if (!doc.label_names.empty() && labels != doc.label_names.size()) {
    throw InputError(0, "label header lists " + std::to_string(doc.label_names.size()) +
                            " names but " + std::to_string(labels) + " labels were requested");
  }
  auto dataset = build_graph(doc.records, labels);
  dataset.label_names = std::move(doc.label_names);
  return dataset;
}

std::string label_to_string(const std::optional<Label>& label, std::span<const std::string> names) {
  if (!label) return "?";
  if (*label < names.size()) return names[*label];
  return std::to_string(*label);
}

void write_dataset(std::ostream& out, const Dataset& dataset) {
  const auto& g = dataset.graph;
  if (!dataset.label_names.empty()) {
    out << "#labels: ";
    for (std::size_t j = 0; j < dataset.label_names.size(); ++j) {
      out << (j ? "," : "") << dataset.label_names[j];
    }
    out << '\n';
  }
  for (InstanceId x = 0; x < g.num_instances(); ++x) {
    out << g.instance_name(x) << '\t' << label_to_string(dataset.seeds.label(x), dataset.label_names)
        << '\t';
    bool first = true;
    for (FeatureId f : g.features_of(x)) {
      out << (first ? "" : " ") << g.feature_name(f);
      first = false;
    }
    out << '\n';
  }
}

}  // namespace yarowsky
