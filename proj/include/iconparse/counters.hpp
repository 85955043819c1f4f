#pragma once

#include <cstdint>

namespace iconparse {

// Work counters shared by the chart and recursive engines. Reset at the start
// of every parse / incremental edit.
struct OpCounters {
  std::uint64_t structure_compat_evals = 0;
  std::uint64_t assignment_scorings = 0;
  std::uint64_t interpretations_scored = 0;
  // binary additions summing assignment scores into interpretation scores
  std::uint64_t elementary_sums = 0;

  void reset() noexcept { *this = {}; }

  friend bool operator==(const OpCounters&, const OpCounters&) = default;
};

}  // namespace iconparse
