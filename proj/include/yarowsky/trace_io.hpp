#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>

#include <json.hpp>

#include "yarowsky/bootstrap.hpp"
#include "yarowsky/propagation.hpp"

namespace yarowsky {

/// Finite values become numbers, infinities the strings "inf"/"-inf", and a
/// missing value null.
nlohmann::ordered_json objective_json(const std::optional<double>& value);

/// {"t","labeled","changed","H","l_t2","K_t2","K_delta","K_t2_train","K_delta_train","stop"}
nlohmann::ordered_json to_json(const IterationRecord& record);

/// {"sweep","labeled","cut","max_delta"}
nlohmann::ordered_json to_json(const SweepRecord& record);

void write_trace(std::ostream& out, const IterationTrace& trace);
void write_sweeps(std::ostream& out, std::span<const SweepRecord> sweeps);

/// instance_id<TAB>label_or_?
void write_labeling(std::ostream& out, const BipartiteGraph& graph, const LabelingState& state,
                    std::span<const std::string> label_names);

/// column<TAB>node_id<TAB>label_or_?<TAB>comma-separated probabilities, features first.
void write_assignment(std::ostream& out, const BipartiteGraph& graph, const NodeAssignment& assignment,
                      std::span<const std::string> label_names);

}  // namespace yarowsky
