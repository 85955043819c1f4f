#pragma once

// Test-only helpers: bundled lexicons, random instances, and a position-keyed
// view of a parser's tables so parses with different instance ids compare.

#include <cmath>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "iconparse/chart.hpp"
#include "iconparse/lexicon.hpp"

namespace iconparse::fixtures {

inline std::shared_ptr<const Lexicon> bundled(const std::string& name) {
  return std::make_shared<const Lexicon>(load_lexicon_file(std::string(ICONPARSE_DATA_DIR) + "/" + name + ".json"));
}

struct RandomInstance {
  std::shared_ptr<const Lexicon> lexicon;
  std::vector<std::string> icons;
};

inline FeatureSet random_features(std::mt19937_64& rng, std::size_t min_size, std::size_t max_size) {
  static const char* attrs[] = {"animate", "human", "liquid", "food", "place", "male"};
  std::uniform_int_distribution<std::size_t> size(min_size, max_size);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<int> quarter(-4, 4);
  FeatureSet out;
  const std::size_t k = size(rng);
  while (out.size() < k) {
    std::string a = attrs[std::uniform_int_distribution<std::size_t>(0, 5)(rng)];
    FeatureValue v = coin(rng) ? FeatureValue::integer(coin(rng) ? 1 : -1) : FeatureValue::real(quarter(rng) / 4.0);
    out.insert({a, v});
  }
  return out;
}

// Lexicon of `entries` random icons (about half predicative, valency
// 1..max_valency) and a random sequence of 0..max_n of them.
inline RandomInstance random_instance(std::mt19937_64& rng, std::size_t max_n, std::size_t max_valency,
                                      std::size_t min_n = 0, std::size_t entries = 6) {
  static const char* cases[] = {"agent", "object", "goal", "instrument"};
  auto lex = std::make_shared<Lexicon>();
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<std::size_t> valency(1, max_valency);
  for (std::size_t i = 0; i < entries; ++i) {
    LexEntry e;
    e.id = "i" + std::to_string(i);
    e.gloss = e.id;
    e.intrinsic = random_features(rng, 0, 3);
    if (coin(rng)) {
      const std::size_t v = valency(rng);
      for (std::size_t k = 0; k < v; ++k) e.case_structure.push_back({cases[k], random_features(rng, 1, 2)});
    }
    lex->add(std::move(e));
  }
  std::uniform_int_distribution<std::size_t> len(min_n, max_n);
  std::uniform_int_distribution<std::size_t> pick(0, entries - 1);
  RandomInstance out{lex, {}};
  const std::size_t n = len(rng);
  for (std::size_t i = 0; i < n; ++i) out.icons.push_back("i" + std::to_string(pick(rng)));
  return out;
}

struct TableView {
  std::map<std::tuple<std::size_t, std::string, std::size_t>, double> compat;
  // predicate position -> ranked (fills by position, score)
  std::map<std::size_t, std::vector<std::pair<std::map<std::string, std::size_t>, double>>> assignments;
  std::vector<std::pair<std::string, double>> interpretations;
};

inline TableView view(const ChartParser& p) {
  TableView v;
  for (const auto& [k, raw] : p.compatibility().entries())
    v.compat[{p.position_of(k.predicate), k.case_type, p.position_of(k.candidate)}] = raw;
  for (const auto& [pred, list] : p.assignments()) {
    auto& out = v.assignments[p.position_of(pred)];
    for (const auto& a : list.ranked) {
      std::map<std::string, std::size_t> fills;
      for (const auto& [c, who] : a.fills) fills[c] = p.position_of(who);
      out.emplace_back(std::move(fills), a.score);
    }
  }
  for (const auto& interp : p.interpretations().ranked) {
    std::ostringstream d;
    for (const auto* a : p.choices(interp)) {
      d << "[" << p.position_of(a->predicate);
      for (const auto& [c, who] : a->fills) d << " " << c << "=" << p.position_of(who);
      d << "]";
    }
    v.interpretations.emplace_back(d.str(), interp.score);
  }
  return v;
}

// Empty string when equal; otherwise the first difference.
inline std::string diff(const TableView& a, const TableView& b, double tol = 1e-9) {
  auto close = [tol](double x, double y) { return std::abs(x - y) <= tol; };
  if (a.compat.size() != b.compat.size()) return "compatibility table sizes differ";
  for (auto ia = a.compat.begin(), ib = b.compat.begin(); ia != a.compat.end(); ++ia, ++ib)
    if (ia->first != ib->first || !close(ia->second, ib->second)) return "compatibility entry differs";
  if (a.assignments.size() != b.assignments.size()) return "predicate sets differ";
  for (auto ia = a.assignments.begin(), ib = b.assignments.begin(); ia != a.assignments.end(); ++ia, ++ib) {
    if (ia->first != ib->first || ia->second.size() != ib->second.size())
      return "assignment list differs for predicate at " + std::to_string(ia->first);
    for (std::size_t i = 0; i < ia->second.size(); ++i)
      if (ia->second[i].first != ib->second[i].first || !close(ia->second[i].second, ib->second[i].second))
        return "assignment " + std::to_string(i) + " differs for predicate at " + std::to_string(ia->first);
  }
  if (a.interpretations.size() != b.interpretations.size()) return "interpretation counts differ";
  for (std::size_t i = 0; i < a.interpretations.size(); ++i)
    if (a.interpretations[i].first != b.interpretations[i].first ||
        !close(a.interpretations[i].second, b.interpretations[i].second))
      return "interpretation " + std::to_string(i + 1) + " differs: " + a.interpretations[i].first + " vs " +
             b.interpretations[i].first;
  return "";
}

}  // namespace iconparse::fixtures
