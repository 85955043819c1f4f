#pragma once

// Naive recursive parser used as an oracle for the chart engine, plus the
// closed-form operation-count predictors for both engines.
//
// The recursive engine memoizes nothing. Predicates are visited in sequence
// order (the first icon heads the backtracking chain); for every assignment
// chosen upstream, each downstream predicate's assignment set is re-derived,
// and inside one derivation every case slot's candidate scores are recomputed
// for every choice made on the preceding slots.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "iconparse/chart.hpp"
#include "iconparse/compatibility.hpp"
#include "iconparse/counters.hpp"
#include "iconparse/error.hpp"
#include "iconparse/lexicon.hpp"

namespace iconparse {

using Count = boost::multiprecision::cpp_int;

struct RecursiveOptions {
  // cap on predicted structure_compat evaluations plus interpretation leaves
  double budget = 2e8;
};

struct RecursiveResult {
  IconSequence sequence;                               // instance id == position
  std::vector<InstanceId> predicates;                  // sequence order
  std::vector<std::vector<Assignment>> assignments;    // per predicate, ranked
  std::vector<Interpretation> ranked;
  OpCounters counters;
  double predicted_work = 0.0;

  std::vector<const Assignment*> choices(const Interpretation& interp) const {
    std::vector<const Assignment*> out;
    for (std::size_t j = 0; j < interp.choice.size(); ++j) out.push_back(&assignments[j].at(interp.choice[j]));
    return out;
  }
};

namespace detail {

class RecursiveEngine {
public:
  RecursiveEngine(const Lexicon& lexicon, const ParserConfig& config) : lexicon_(lexicon), config_(config) {}

  RecursiveResult run(std::span<const std::string> ids, const RecursiveOptions& options) {
    config_.validate();
    for (const auto& id : ids) entries_.push_back(&lexicon_.lookup(id));
    if (ids.size() > config_.max_sequence_length)
      throw SequenceTooLongError(ids.size(), config_.max_sequence_length);

    for (std::size_t i = 0; i < ids.size(); ++i) {
      result_.sequence.items.push_back({i + 1, ids[i], i + 1});
      if (is_predicative(*entries_[i])) predicates_.push_back(i + 1);
    }
    result_.predicates.assign(predicates_.begin(), predicates_.end());

    plan(options);
    result_.assignments.resize(predicates_.size());
    captured_.assign(predicates_.size(), false);

    chosen_.assign(predicates_.size(), 0);
    order::Best<Interpretation, decltype(&order::interpretation_before)> best(
        config_.top_m_interpretations, &order::interpretation_before);
    best_ = &best;
    choose(0);
    result_.ranked = std::move(best).take();
    return std::move(result_);
  }

private:
  // Dry run: exact per-derivation eval counts and assignment counts give the
  // total work before committing to it.
  void plan(const RecursiveOptions& options) {
    double derivations = 1.0, evals = 0.0;
    for (auto pred : predicates_) {
      std::uint64_t local_evals = 0;
      auto list = derive(pred, &local_evals);
      evals += derivations * static_cast<double>(local_evals);
      derivations *= static_cast<double>(list.size());
    }
    result_.predicted_work = evals + derivations;
    if (result_.predicted_work > options.budget) {
      std::ostringstream msg;
      msg << "recursive engine: predicted work " << result_.predicted_work << " exceeds budget "
          << options.budget;
      throw BudgetExceededError(msg.str());
    }
  }

  void choose(std::size_t j) {
    if (j == predicates_.size()) {
      Interpretation interp{chosen_, 0.0};
      if (!chosen_.empty()) {
        interp.score = result_.assignments[0][chosen_[0]].score;
        for (std::size_t i = 1; i < chosen_.size(); ++i) {
          interp.score += result_.assignments[i][chosen_[i]].score;
          ++result_.counters.elementary_sums;
        }
      }
      ++result_.counters.interpretations_scored;
      best_->push(std::move(interp));
      return;
    }
    auto list = derive(predicates_[j], &result_.counters.structure_compat_evals);
    result_.counters.assignment_scorings += list.scored;
    if (!captured_[j]) {
      result_.assignments[j] = list.items;
      captured_[j] = true;
    }
    for (std::uint32_t i = 0; i < list.size(); ++i) {
      chosen_[j] = i;
      choose(j + 1);
    }
  }

  struct Derived {
    std::vector<Assignment> items;
    std::uint64_t scored = 0;
    std::uint32_t size() const { return static_cast<std::uint32_t>(items.size()); }
  };

  // Full assignment set of one predicate, recomputing every role/filler score.
  Derived derive(InstanceId pred, std::uint64_t* evals) {
    const auto& entry = *entries_[pred - 1];
    const auto& slots = entry.case_structure;
    const std::size_t n = entries_.size();

    Derived out;
    std::vector<std::size_t> filler(slots.size(), 0);  // 0 = unfilled

    auto walk = [&](auto&& self, std::size_t s, double partial) -> void {
      if (s == slots.size()) {
        for (std::size_t a = 0; a < slots.size(); ++a)
          for (std::size_t b = a + 1; b < slots.size(); ++b)
            if (filler[a] != 0 && filler[a] == filler[b]) return;
        Assignment asg{pred, {}, partial};
        for (std::size_t a = 0; a < slots.size(); ++a)
          if (filler[a] != 0) asg.fills.emplace(slots[a].case_type, filler[a]);
        out.items.push_back(std::move(asg));
        ++out.scored;
        return;
      }
      if (!config_.strict_fill) {
        filler[s] = 0;
        self(self, s + 1, partial);
      }
      for (std::size_t cand = 1; cand <= n; ++cand) {
        if (cand == pred) continue;
        const double raw = structure_compat(entries_[cand - 1]->intrinsic, slots[s].selectional);
        ++*evals;
        if (raw < config_.pair_threshold) continue;
        filler[s] = cand;
        self(self, s + 1, partial + fading(distance(pred, cand), config_.fading) * raw);
      }
      filler[s] = 0;
    };
    walk(walk, 0, 0.0);

    const auto cases = order::sorted_cases(entry);
    auto pos = [](InstanceId id) { return static_cast<std::size_t>(id); };
    std::sort(out.items.begin(), out.items.end(), [&](const Assignment& a, const Assignment& b) {
      return order::assignment_before(a, b, pred, pred, cases, pos);
    });
    if (config_.top_k_assignments != kUnlimited && out.items.size() > config_.top_k_assignments)
      out.items.resize(config_.top_k_assignments);
    if (out.items.empty()) out.items.push_back(Assignment{pred, {}, 0.0});
    return out;
  }

  const Lexicon& lexicon_;
  ParserConfig config_;
  std::vector<const LexEntry*> entries_;
  std::vector<InstanceId> predicates_;
  std::vector<std::uint32_t> chosen_;
  std::vector<bool> captured_;
  order::Best<Interpretation, decltype(&order::interpretation_before)>* best_ = nullptr;
  RecursiveResult result_;
};

}  // namespace detail

// Same ranking contract as ChartParser::parse_from_scratch(), computed by
// exhaustive backtracking.
inline RecursiveResult recursive_parse(const Lexicon& lexicon, std::span<const std::string> ids,
                                       const ParserConfig& config, const RecursiveOptions& options = {}) {
  return detail::RecursiveEngine(lexicon, config).run(ids, options);
}

// --- complexity predictors -------------------------------------------------

struct ComplexityParams {
  std::uint64_t n = 1;  // sequence length
  std::uint64_t v = 1;  // valency
  Count a = 1;          // role/filler scoring cost, in elementary sums
  Count b = 1;          // assignment scoring cost, in elementary sums

  void validate() const {
    if (n < 1 || v < 1) throw std::domain_error("complexity params: need N >= 1 and V >= 1");
    if (n - 1 <= v) throw std::domain_error("complexity params: need N - 1 > V");
    if (a <= 0 || b <= 0) throw std::domain_error("complexity params: need a > 0 and b > 0");
  }
};

// Ordered selections of v distinct items out of n.
inline Count permutations(std::uint64_t n, std::uint64_t v) {
  if (v > n) throw std::domain_error("permutations: v > n");
  Count out = 1;
  for (std::uint64_t i = 0; i < v; ++i) out *= n - i;
  return out;
}

namespace detail {

// x + x^2 + ... + x^k
inline Count geometric_sum(const Count& x, std::uint64_t k) {
  if (x == 1) return Count(k);
  return x * (boost::multiprecision::pow(x, static_cast<unsigned>(k)) - 1) / (x - 1);
}

}  // namespace detail

struct RecursiveOpsTerms {
  Count sums;           // (N-1) * P^N
  Count per_a;          // sum_{k<=V} (N-1)^k * sum_{k<=N} P^k
};

struct ChartOpsTerms {
  Count sums;           // (N-1) * P^N
  Count per_a;          // V * N * (N-1)
  Count per_b;          // N * P
};

inline RecursiveOpsTerms recursive_ops_terms(std::uint64_t n, std::uint64_t v) {
  const Count p = permutations(n - 1, v);
  return {Count(n - 1) * boost::multiprecision::pow(p, static_cast<unsigned>(n)),
          detail::geometric_sum(Count(n - 1), v) * detail::geometric_sum(p, n)};
}

inline ChartOpsTerms chart_ops_terms(std::uint64_t n, std::uint64_t v) {
  const Count p = permutations(n - 1, v);
  return {Count(n - 1) * boost::multiprecision::pow(p, static_cast<unsigned>(n)), Count(v) * n * (n - 1),
          Count(n) * p};
}

inline Count predict_recursive_ops(const ComplexityParams& p) {
  p.validate();
  auto t = recursive_ops_terms(p.n, p.v);
  return t.sums + p.a * t.per_a;
}

inline Count predict_chart_ops(const ComplexityParams& p) {
  p.validate();
  auto t = chart_ops_terms(p.n, p.v);
  return t.sums + p.a * t.per_a + p.b * t.per_b;
}

// --- engine comparison -------------------------------------------------------

struct EngineComparison {
  bool equal = false;
  std::string divergence;  // first difference, empty when equal
  OpCounters chart;
  OpCounters recursive;
  double chart_ms = 0.0;
  double recursive_ms = 0.0;
  std::optional<Count> predicted_chart_ops;
  std::optional<Count> predicted_recursive_ops;
};

inline EngineComparison compare_engines(std::shared_ptr<const Lexicon> lexicon, std::span<const std::string> ids,
                                        const ParserConfig& config, const RecursiveOptions& options = {},
                                        double tolerance = 1e-9, Count a = 1, Count b = 1) {
  using clock = std::chrono::steady_clock;
  EngineComparison report;

  ChartParser chart(lexicon, config);
  auto t0 = clock::now();
  const auto& table = chart.parse_from_scratch(ids);
  auto t1 = clock::now();
  auto rec = recursive_parse(*lexicon, ids, config, options);
  auto t2 = clock::now();

  report.chart = chart.counters();
  report.recursive = rec.counters;
  report.chart_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  report.recursive_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();

  // predictions only make sense for a uniform valency with N - 1 > V
  std::optional<std::uint64_t> valency;
  bool uniform = !rec.predicates.empty();
  for (auto pred : rec.predicates) {
    auto v = lexicon->lookup(rec.sequence.at_position(pred).lexicon_id).valency();
    if (valency && *valency != v) uniform = false;
    valency = v;
  }
  if (uniform && ids.size() - 1 > *valency) {
    ComplexityParams params{ids.size(), *valency, a, b};
    report.predicted_chart_ops = predict_chart_ops(params);
    report.predicted_recursive_ops = predict_recursive_ops(params);
  }

  auto describe = [&](const std::vector<const Assignment*>& asgs, auto&& position_of) {
    std::ostringstream out;
    for (const auto* a : asgs) {
      out << "[" << position_of(a->predicate) << ":";
      for (const auto& [c, who] : a->fills) out << " " << c << "=" << position_of(who);
      out << "]";
    }
    return out.str();
  };
  auto chart_pos = [&](InstanceId id) { return chart.position_of(id); };
  auto rec_pos = [](InstanceId id) { return static_cast<std::size_t>(id); };

  if (table.ranked.size() != rec.ranked.size()) {
    report.divergence = "ranking lengths differ: chart " + std::to_string(table.ranked.size()) + ", recursive " +
                        std::to_string(rec.ranked.size());
    return report;
  }
  for (std::size_t r = 0; r < table.ranked.size(); ++r) {
    const auto lhs = describe(chart.choices(table.ranked[r]), chart_pos);
    const auto rhs = describe(rec.choices(rec.ranked[r]), rec_pos);
    const double ds = std::abs(table.ranked[r].score - rec.ranked[r].score);
    if (lhs != rhs || !(ds <= tolerance)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "rank " << r + 1 << ": chart " << lhs << " score " << table.ranked[r].score << " vs recursive " << rhs
          << " score " << rec.ranked[r].score;
      report.divergence = msg.str();
      return report;
    }
  }
  report.equal = true;
  return report;
}

}  // namespace iconparse
