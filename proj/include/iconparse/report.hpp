#pragma once

// Parse reports: the ranked interpretations of one sequence with the
// per-slot arithmetic, rendered as dependency triples or as JSON.

#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "iconparse/baseline.hpp"
#include "iconparse/chart.hpp"
#include "iconparse/compatibility.hpp"
#include "iconparse/counters.hpp"
#include "iconparse/lexicon.hpp"

namespace iconparse {

struct SlotReport {
  std::string case_type;
  std::string filler;
  std::size_t filler_position = 0;
  double raw = 0.0;
  double fading = 0.0;
  double value = 0.0;

  friend bool operator==(const SlotReport&, const SlotReport&) = default;
};

struct AssignmentReport {
  std::string predicate;
  std::size_t position = 0;
  std::vector<SlotReport> slots;  // case-structure order, filled slots only
  double score = 0.0;

  friend bool operator==(const AssignmentReport&, const AssignmentReport&) = default;
};

struct InterpretationReport {
  std::size_t rank = 0;
  double score = 0.0;
  std::vector<AssignmentReport> assignments;

  friend bool operator==(const InterpretationReport&, const InterpretationReport&) = default;
};

struct SequenceItem {
  std::uint64_t instance = 0;
  std::string id;
  std::size_t position = 0;

  friend bool operator==(const SequenceItem&, const SequenceItem&) = default;
};

struct ParseReport {
  std::string engine = "chart";
  std::vector<SequenceItem> sequence;
  std::vector<InterpretationReport> interpretations;
  OpCounters counters;
  double elapsed_ms = 0.0;

  friend bool operator==(const ParseReport&, const ParseReport&) = default;
};

namespace detail {

template <typename RawOf>
AssignmentReport assignment_report(const Lexicon& lexicon, const IconSequence& seq, const Assignment& a,
                                   std::size_t pred_pos, const FadingConfig& fc, RawOf&& raw_of,
                                   const std::function<std::size_t(InstanceId)>& position_of) {
  const auto& pred = seq.at_position(pred_pos);
  const auto& entry = lexicon.lookup(pred.lexicon_id);
  AssignmentReport out{pred.lexicon_id, pred_pos, {}, a.score};
  for (const auto& slot : entry.case_structure) {
    auto it = a.fills.find(slot.case_type);
    if (it == a.fills.end()) continue;
    const std::size_t fp = position_of(it->second);
    const double raw = raw_of(slot, it->second);
    const double fade = fading(distance(pred_pos, fp), fc);
    out.slots.push_back({slot.case_type, seq.at_position(fp).lexicon_id, fp, raw, fade, fade * raw});
  }
  return out;
}

}  // namespace detail

inline ParseReport make_report(const ChartParser& parser, double elapsed_ms = 0.0) {
  ParseReport report;
  report.engine = "chart";
  for (const auto& it : parser.sequence().items) report.sequence.push_back({it.instance, it.lexicon_id, it.position});
  std::function<std::size_t(InstanceId)> pos = [&](InstanceId id) { return parser.position_of(id); };
  const auto& table = parser.interpretations();
  for (std::size_t r = 0; r < table.ranked.size(); ++r) {
    InterpretationReport ir{r + 1, table.ranked[r].score, {}};
    for (const auto* a : parser.choices(table.ranked[r])) {
      auto raw_of = [&](const CaseSlot& slot, InstanceId who) {
        return *parser.compatibility().find(a->predicate, slot.case_type, who);
      };
      ir.assignments.push_back(detail::assignment_report(parser.lexicon(), parser.sequence(), *a,
                                                         parser.position_of(a->predicate),
                                                         parser.config().fading, raw_of, pos));
    }
    report.interpretations.push_back(std::move(ir));
  }
  report.counters = parser.counters();
  report.elapsed_ms = elapsed_ms;
  return report;
}

inline ParseReport make_report(const Lexicon& lexicon, const RecursiveResult& result, const ParserConfig& config,
                               double elapsed_ms = 0.0) {
  ParseReport report;
  report.engine = "recursive";
  for (const auto& it : result.sequence.items) report.sequence.push_back({it.instance, it.lexicon_id, it.position});
  std::function<std::size_t(InstanceId)> pos = [](InstanceId id) { return static_cast<std::size_t>(id); };
  for (std::size_t r = 0; r < result.ranked.size(); ++r) {
    InterpretationReport ir{r + 1, result.ranked[r].score, {}};
    for (const auto* a : result.choices(result.ranked[r])) {
      auto raw_of = [&](const CaseSlot& slot, InstanceId who) {
        return structure_compat(lexicon.lookup(result.sequence.at_position(who).lexicon_id).intrinsic,
                                slot.selectional);
      };
      ir.assignments.push_back(
          detail::assignment_report(lexicon, result.sequence, *a, a->predicate, config.fading, raw_of, pos));
    }
    report.interpretations.push_back(std::move(ir));
  }
  report.counters = result.counters;
  report.elapsed_ms = elapsed_ms;
  return report;
}

// Shortest round-tripping decimal, always with a fractional part.
inline std::string format_score(double v) {
  std::string s;
  for (int digits = 1; digits <= std::numeric_limits<double>::max_digits10; ++digits) {
    std::ostringstream trial;
    trial << std::setprecision(digits) << v;
    s = trial.str();
    if (!std::isfinite(v) || std::stod(s) == v) break;
  }
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

// One line per interpretation, `pred(case=filler, ...) score=S`, each
// followed by its dependency triples.
inline void render_human(std::ostream& out, const ParseReport& report, bool triples = true) {
  for (const auto& ir : report.interpretations) {
    std::string line;
    for (const auto& a : ir.assignments) {
      if (!line.empty()) line += ' ';
      line += a.predicate + "(";
      for (std::size_t i = 0; i < a.slots.size(); ++i) {
        if (i) line += ", ";
        line += a.slots[i].case_type + "=" + a.slots[i].filler;
      }
      line += ")";
    }
    if (line.empty()) line = "(no dependencies)";
    out << line << " score=" << format_score(ir.score) << '\n';
    if (!triples) continue;
    for (const auto& a : ir.assignments)
      for (const auto& s : a.slots)
        out << "    " << a.predicate << "@" << a.position << " -" << s.case_type << "-> " << s.filler << "@"
            << s.filler_position << "  " << format_score(s.fading) << " x " << format_score(s.raw) << " = "
            << format_score(s.value) << '\n';
  }
}

// --- JSON --------------------------------------------------------------------

inline void to_json(nlohmann::json& j, const OpCounters& c) {
  j = {{"structure_compat_evals", c.structure_compat_evals},
       {"assignment_scorings", c.assignment_scorings},
       {"interpretations_scored", c.interpretations_scored},
       {"elementary_sums", c.elementary_sums}};
}
inline void from_json(const nlohmann::json& j, OpCounters& c) {
  j.at("structure_compat_evals").get_to(c.structure_compat_evals);
  j.at("assignment_scorings").get_to(c.assignment_scorings);
  j.at("interpretations_scored").get_to(c.interpretations_scored);
  j.at("elementary_sums").get_to(c.elementary_sums);
}

inline void to_json(nlohmann::json& j, const SlotReport& s) {
  j = {{"case", s.case_type}, {"filler", s.filler}, {"filler_position", s.filler_position},
       {"raw", s.raw},        {"fading", s.fading}, {"value", s.value}};
}
inline void from_json(const nlohmann::json& j, SlotReport& s) {
  j.at("case").get_to(s.case_type);
  j.at("filler").get_to(s.filler);
  j.at("filler_position").get_to(s.filler_position);
  j.at("raw").get_to(s.raw);
  j.at("fading").get_to(s.fading);
  j.at("value").get_to(s.value);
}

inline void to_json(nlohmann::json& j, const AssignmentReport& a) {
  j = {{"predicate", a.predicate}, {"position", a.position}, {"slots", a.slots}, {"score", a.score}};
}
inline void from_json(const nlohmann::json& j, AssignmentReport& a) {
  j.at("predicate").get_to(a.predicate);
  j.at("position").get_to(a.position);
  j.at("slots").get_to(a.slots);
  j.at("score").get_to(a.score);
}

inline void to_json(nlohmann::json& j, const InterpretationReport& r) {
  j = {{"rank", r.rank}, {"score", r.score}, {"assignments", r.assignments}};
}
inline void from_json(const nlohmann::json& j, InterpretationReport& r) {
  j.at("rank").get_to(r.rank);
  j.at("score").get_to(r.score);
  j.at("assignments").get_to(r.assignments);
}

inline void to_json(nlohmann::json& j, const SequenceItem& s) {
  j = {{"instance", s.instance}, {"id", s.id}, {"position", s.position}};
}
inline void from_json(const nlohmann::json& j, SequenceItem& s) {
  j.at("instance").get_to(s.instance);
  j.at("id").get_to(s.id);
  j.at("position").get_to(s.position);
}

inline void to_json(nlohmann::json& j, const ParseReport& r) {
  j = {{"engine", r.engine},
       {"sequence", r.sequence},
       {"interpretations", r.interpretations},
       {"counters", r.counters},
       {"elapsed_ms", r.elapsed_ms}};
}
inline void from_json(const nlohmann::json& j, ParseReport& r) {
  j.at("engine").get_to(r.engine);
  j.at("sequence").get_to(r.sequence);
  j.at("interpretations").get_to(r.interpretations);
  j.at("counters").get_to(r.counters);
  j.at("elapsed_ms").get_to(r.elapsed_ms);
}

// Parser configuration as carried by service requests. A null threshold
// disables the filter; omitted keys keep `base`'s values.
inline ParserConfig config_from_json(const nlohmann::json& j, ParserConfig base = {}) {
  if (j.is_null()) return base;
  if (!j.is_object()) throw ContractViolation("config must be an object");
  for (const auto& [key, val] : j.items()) {
    if (key == "gamma") base.fading.gamma = val.get<double>();
    else if (key == "threshold") base.pair_threshold = val.is_null() ? kNoThreshold : val.get<double>();
    else if (key == "top_k") base.top_k_assignments = val.get<std::size_t>();
    else if (key == "top_m") base.top_m_interpretations = val.get<std::size_t>();
    else if (key == "strict_fill") base.strict_fill = val.get<bool>();
    else if (key == "max_length") base.max_sequence_length = val.get<std::size_t>();
    else throw ContractViolation("unknown config key '" + key + "'");
  }
  base.validate();
  return base;
}

inline nlohmann::json config_to_json(const ParserConfig& c) {
  nlohmann::json j = {{"gamma", c.fading.gamma},
                      {"top_k", c.top_k_assignments},
                      {"top_m", c.top_m_interpretations},
                      {"strict_fill", c.strict_fill},
                      {"max_length", c.max_sequence_length}};
  j["threshold"] = c.pair_threshold == kNoThreshold ? nlohmann::json(nullptr) : nlohmann::json(c.pair_threshold);
  return j;
}

}  // namespace iconparse
