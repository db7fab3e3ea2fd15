#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "yarowsky/objectives.hpp"

namespace yarowsky {

/// Named property suites run by `yarowsky verify`:
///   lemma1    K_t2 / m upper-bounds l_t2 on uniform-degree graphs
///   lemma4    H <= K_delta and Z_x <= 1 for product predictions
///   theorem2  K_t2 never increases over DL1 half-steps
///   theorem6  K_delta never increases over DL2S half-steps
///   lemma5    parameter updates minimize their objective (perturbation + grid)
///   lemma7    Majority/Majority flips strictly shrink the labeled cut
///   theorem3  Majority/Majority changes labels at most iteration_bound times
///   harmonic  Average/Average ends at a harmonic, stationary assignment
///   mismatch  argmax of feature sums differs from argmin of log-loss sums
std::span<const std::string_view> suite_names();

bool is_suite(std::string_view name);

/// Runs one suite, or every suite for "all". Deterministic in rng_seed.
/// Throws std::invalid_argument for an unknown suite name.
std::vector<VerificationReport> run_suite(std::string_view name, std::uint64_t rng_seed);

}  // namespace yarowsky
