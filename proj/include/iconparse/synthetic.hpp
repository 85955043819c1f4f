#pragma once

// Worst-case instances: every icon is predicative with valency V and every
// role/filler pair scores 1.0, so nothing is ever below a threshold in [0, 1].

#include <memory>
#include <string>
#include <vector>

#include "iconparse/lexicon.hpp"

namespace iconparse {

struct WorstCase {
  std::shared_ptr<const Lexicon> lexicon;
  std::vector<std::string> icons;
};

inline std::shared_ptr<const Lexicon> worst_case_lexicon(std::size_t valency) {
  auto lex = std::make_shared<Lexicon>();
  LexEntry e;
  e.id = "w";
  e.gloss = "worst-case predicate";
  e.intrinsic = FeatureSet{{"x", FeatureValue::integer(1)}};
  for (std::size_t k = 0; k < valency; ++k)
    e.case_structure.push_back({"case" + std::to_string(k + 1), FeatureSet{{"x", FeatureValue::integer(1)}}});
  lex->add(std::move(e));
  return lex;
}

inline WorstCase worst_case(std::size_t n, std::size_t valency) {
  return {worst_case_lexicon(valency), std::vector<std::string>(n, "w")};
}

}  // namespace iconparse
