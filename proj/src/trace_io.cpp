#include "yarowsky/trace_io.hpp"

#include <cmath>

namespace yarowsky {

namespace {

void write_probs(std::ostream& out, const LabelDistribution& d) {
  for (std::size_t j = 0; j < d.size(); ++j) {
    out << (j ? "," : "") << nlohmann::json(d[j]).dump();
  }
}

}  // namespace

nlohmann::ordered_json objective_json(const std::optional<double>& value) {
  if (!value) return nullptr;
  if (std::isinf(*value)) return *value > 0 ? "inf" : "-inf";
  if (std::isnan(*value)) return "nan";
  return *value;
}

nlohmann::ordered_json to_json(const IterationRecord& r) {
  nlohmann::ordered_json j;
  j["t"] = r.t;
  j["labeled"] = r.labeled;
  j["changed"] = r.changed;
  j["H"] = objective_json(r.H);
  j["l_t2"] = objective_json(r.l_t2);
  j["K_t2"] = objective_json(r.K_t2);
  j["K_delta"] = objective_json(r.K_delta);
  j["K_t2_train"] = objective_json(r.K_t2_train);
  j["K_delta_train"] = objective_json(r.K_delta_train);
  j["stop"] = r.stop ? nlohmann::ordered_json(std::string(to_string(*r.stop))) : nlohmann::ordered_json();
  return j;
}

nlohmann::ordered_json to_json(const SweepRecord& r) {
  nlohmann::ordered_json j;
  j["sweep"] = r.sweep;
  j["labeled"] = r.labeled;
  j["cut"] = r.cut ? nlohmann::ordered_json(*r.cut) : nlohmann::ordered_json();
  j["max_delta"] = r.max_delta;
  return j;
}

void write_trace(std::ostream& out, const IterationTrace& trace) {
  for (const auto& r : trace.records) out << to_json(r).dump() << '\n';
}

void write_sweeps(std::ostream& out, std::span<const SweepRecord> sweeps) {
  for (const auto& r : sweeps) out << to_json(r).dump() << '\n';
}

void write_labeling(std::ostream& out, const BipartiteGraph& graph, const LabelingState& state,
                    std::span<const std::string> label_names) {
  for (InstanceId x = 0; x < graph.num_instances(); ++x) {
    out << graph.instance_name(x) << '\t' << label_to_string(state.label(x), label_names) << '\n';
  }
}

void write_assignment(std::ostream& out, const BipartiteGraph& graph, const NodeAssignment& assignment,
                      std::span<const std::string> label_names) {
  for (FeatureId f = 0; f < graph.num_features(); ++f) {
    out << "feature\t" << graph.feature_name(f) << '\t'
        << label_to_string(assignment.feature_label(f), label_names) << '\t';
    write_probs(out, assignment.feature_dists[f]);
    out << '\n';
  }
  for (InstanceId x = 0; x < graph.num_instances(); ++x) {
    out << "instance\t" << graph.instance_name(x) << '\t'
        << label_to_string(assignment.instance_label(x), label_names) << '\t';
    write_probs(out, assignment.instance_dists[x]);
    out << '\n';
  }
}

}  // namespace yarowsky
