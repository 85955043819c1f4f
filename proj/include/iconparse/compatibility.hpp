#pragma once

// Scoring layers: feature-level match, feature-structure match, and the
// distance-faded value of a role/filler allotment.

#include <cmath>
#include <cstddef>
#include <string>

#include "iconparse/error.hpp"
#include "iconparse/lexicon.hpp"

namespace iconparse {

struct FadingConfig {
  double gamma = 0.5;

  void validate() const {
    if (!(gamma > 0.0 && gamma < 1.0)) throw ContractViolation("fading gamma must lie in (0, 1)");
  }
};

// Flat-ontology feature match: 0 for different attributes, +1/-1 for equal /
// distinct integers, the product when either value is real.
inline double feature_compat(const Feature& a, const Feature& b) noexcept {
  if (a.attribute != b.attribute) return 0.0;
  if (a.value.is_integer() && b.value.is_integer())
    return a.value.magnitude == b.value.magnitude ? 1.0 : -1.0;
  return a.value.magnitude * b.value.magnitude;
}

// How well `intrinsic` (the filtered set) meets the expectations in
// `selectional` (the filtering set). The full double sum is evaluated, then
// divided by |selectional|.
inline double structure_compat(const FeatureSet& intrinsic, const FeatureSet& selectional) {
  if (selectional.empty()) throw ContractViolation("structure_compat: empty selectional set");
  double sum = 0.0;
  for (const auto& wanted : selectional)
    for (const auto& have : intrinsic) sum += feature_compat(have, wanted);
  return sum / static_cast<double>(selectional.size());
}

inline double fading(std::size_t distance, const FadingConfig& cfg = {}) {
  return std::pow(cfg.gamma, static_cast<double>(distance));
}

inline std::size_t distance(std::size_t a, std::size_t b) noexcept { return a > b ? a - b : b - a; }

// Positions are 1-based sequence positions; an icon never fills its own role.
inline double weighted_value(std::size_t predicate_pos, const std::string& /*case_type*/,
                             std::size_t candidate_pos, double raw, const FadingConfig& cfg = {}) {
  if (predicate_pos == candidate_pos)
    throw ContractViolation("weighted_value: predicate cannot fill its own case slot");
  return fading(distance(predicate_pos, candidate_pos), cfg) * raw;
}

}  // namespace iconparse
