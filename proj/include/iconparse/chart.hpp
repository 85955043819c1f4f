#pragma once

// Chart parser over icon sequences.
//
// Three memo tables are kept for the current sequence:
//   compatibility  (predicate, case, candidate) -> raw structure score,
//                  entries below the pair threshold never enter;
//   assignments    per predicate, the top-K case-slot -> filler maps scored
//                  as the sum of fading(distance) * raw;
//   interpretations one assignment per predicate, ranked by total score.
//
// The tables are filled once by parse_from_scratch() and then patched by
// add_icons() (append at the end) and remove_icons().

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "iconparse/compatibility.hpp"
#include "iconparse/counters.hpp"
#include "iconparse/error.hpp"
#include "iconparse/lexicon.hpp"

namespace iconparse {

using InstanceId = std::uint64_t;

inline constexpr std::size_t kUnlimited = std::numeric_limits<std::size_t>::max();
inline constexpr double kNoThreshold = -std::numeric_limits<double>::infinity();

struct IconInstance {
  InstanceId instance = 0;
  std::string lexicon_id;
  std::size_t position = 0;  // 1-based

  friend bool operator==(const IconInstance&, const IconInstance&) = default;
};

struct IconSequence {
  std::vector<IconInstance> items;

  std::size_t size() const noexcept { return items.size(); }
  bool empty() const noexcept { return items.empty(); }

  const IconInstance* find(InstanceId id) const noexcept {
    for (const auto& it : items)
      if (it.instance == id) return &it;
    return nullptr;
  }
  const IconInstance& at_position(std::size_t position) const { return items.at(position - 1); }
};

struct ParserConfig {
  FadingConfig fading;
  // raw scores strictly below this never enter the compatibility table;
  // kNoThreshold disables the filter
  double pair_threshold = 0.1;
  std::size_t top_k_assignments = 3;
  std::size_t top_m_interpretations = 10;
  bool strict_fill = false;
  std::size_t max_sequence_length = 20;

  void validate() const {
    fading.validate();
    if (std::isnan(pair_threshold) || (pair_threshold < 0.0 && pair_threshold != kNoThreshold))
      throw ContractViolation("pair_threshold must be >= 0 or disabled");
    if (top_k_assignments < 1) throw ContractViolation("top_k_assignments must be >= 1");
    if (top_m_interpretations < 1) throw ContractViolation("top_m_interpretations must be >= 1");
  }

  // No threshold, no truncation.
  static ParserConfig exhaustive(bool strict_fill) {
    ParserConfig cfg;
    cfg.pair_threshold = kNoThreshold;
    cfg.top_k_assignments = kUnlimited;
    cfg.top_m_interpretations = kUnlimited;
    cfg.strict_fill = strict_fill;
    return cfg;
  }
};

struct CompatKey {
  InstanceId predicate = 0;
  std::string case_type;
  InstanceId candidate = 0;

  friend auto operator<=>(const CompatKey&, const CompatKey&) = default;
};

class CompatibilityTable {
public:
  using Map = std::map<CompatKey, double>;

  std::optional<double> find(InstanceId predicate, const std::string& case_type,
                             InstanceId candidate) const {
    auto it = entries_.find(CompatKey{predicate, case_type, candidate});
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  // Passing candidates for one (predicate, case) slot, ordered by instance id.
  std::vector<std::pair<InstanceId, double>> candidates(InstanceId predicate,
                                                        const std::string& case_type) const {
    std::vector<std::pair<InstanceId, double>> out;
    for (auto it = entries_.lower_bound(CompatKey{predicate, case_type, 0});
         it != entries_.end() && it->first.predicate == predicate && it->first.case_type == case_type;
         ++it)
      out.emplace_back(it->first.candidate, it->second);
    return out;
  }

  void insert(CompatKey key, double raw) { entries_.insert_or_assign(std::move(key), raw); }

  template <typename Pred>
  std::size_t erase_if(Pred pred) {
    return std::erase_if(entries_, [&](const auto& kv) { return pred(kv.first); });
  }

  void clear() noexcept { entries_.clear(); }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const Map& entries() const noexcept { return entries_; }

private:
  Map entries_;
};

struct Assignment {
  InstanceId predicate = 0;
  std::map<std::string, InstanceId> fills;  // case type -> filler
  double score = 0.0;

  bool empty() const noexcept { return fills.empty(); }
  bool involves(InstanceId id) const {
    return std::any_of(fills.begin(), fills.end(), [id](const auto& f) { return f.second == id; });
  }

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct AssignmentList {
  std::vector<Assignment> ranked;  // descending, at most top_k
  // assignments over the live sequence before truncation; a strict-mode
  // placeholder (empty assignment) is not counted
  std::uint64_t available = 0;

  bool truncated() const noexcept { return available > ranked.size(); }
};

using AssignmentsTable = std::map<InstanceId, AssignmentList>;

struct Interpretation {
  // choice[j] indexes the ranked assignment list of the j-th predicate
  // (predicates in sequence order)
  std::vector<std::uint32_t> choice;
  double score = 0.0;

  friend bool operator==(const Interpretation&, const Interpretation&) = default;
};

struct InterpretationsTable {
  std::vector<InstanceId> predicates;  // sequence order
  std::vector<Interpretation> ranked;

  bool empty() const noexcept { return ranked.empty(); }
  std::size_t size() const noexcept { return ranked.size(); }
};

// Deterministic orders shared by both engines.
namespace order {

// (score desc, predicate position asc, per-case candidate positions asc).
// `cases` lists the predicate's case types sorted; an unfilled slot is 0.
template <typename PositionOf>
bool assignment_before(const Assignment& a, const Assignment& b, std::size_t pos_a, std::size_t pos_b,
                       const std::vector<std::string>& cases, PositionOf&& position_of) {
  if (a.score != b.score) return a.score > b.score;
  if (pos_a != pos_b) return pos_a < pos_b;
  for (const auto& c : cases) {
    auto ia = a.fills.find(c), ib = b.fills.find(c);
    std::size_t pa = ia == a.fills.end() ? 0 : position_of(ia->second);
    std::size_t pb = ib == b.fills.end() ? 0 : position_of(ib->second);
    if (pa != pb) return pa < pb;
  }
  return false;
}

inline bool interpretation_before(const Interpretation& a, const Interpretation& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.choice < b.choice;
}

inline std::vector<std::string> sorted_cases(const LexEntry& entry) {
  std::vector<std::string> out;
  for (const auto& s : entry.case_structure) out.push_back(s.case_type);
  std::sort(out.begin(), out.end());
  return out;
}

// Keeps the best `limit` items under `before` while streaming.
template <typename T, typename Before>
class Best {
public:
  Best(std::size_t limit, Before before) : limit_(limit), before_(std::move(before)) {}

  void push(T item) {
    items_.push_back(std::move(item));
    if (limit_ != kUnlimited && items_.size() > limit_ && items_.size() - limit_ >= std::max<std::size_t>(limit_, 64))
      shrink();
  }

  std::vector<T> take() && {
    std::sort(items_.begin(), items_.end(), before_);
    if (limit_ != kUnlimited && items_.size() > limit_) items_.resize(limit_);
    return std::move(items_);
  }

private:
  void shrink() {
    std::nth_element(items_.begin(), items_.begin() + static_cast<std::ptrdiff_t>(limit_), items_.end(),
                     before_);
    items_.resize(limit_);
  }

  std::size_t limit_;
  Before before_;
  std::vector<T> items_;
};

}  // namespace order

// One parsing session: the current sequence plus its three tables.
// Mutating calls must be serialized by the caller.
class ChartParser {
public:
  explicit ChartParser(std::shared_ptr<const Lexicon> lexicon, ParserConfig config = {})
    : lexicon_(std::move(lexicon)), config_(config) {
    if (!lexicon_) throw ContractViolation("ChartParser: null lexicon");
    config_.validate();
  }

  const InterpretationsTable& parse_from_scratch(std::span<const std::string> ids) {
    check_ids(ids, 0);
    counters_.reset();
    sequence_.items.clear();
    compat_.clear();
    assignments_.clear();
    next_instance_ = 1;
    for (const auto& id : ids) append_instance(id);
    reindex();

    for (const auto& p : sequence_.items)
      if (is_predicative(entry_of(p)))
        for (const auto& c : sequence_.items) fill_compat(p, c);

    for (const auto& p : sequence_.items)
      if (is_predicative(entry_of(p))) assignments_[p.instance] = enumerate(p.instance, nullptr);

    parsed_ = true;
    rebuild_interpretations();
    return interpretations_;
  }

  const InterpretationsTable& parse_from_scratch(std::initializer_list<std::string> ids) {
    std::vector<std::string> v(ids);
    return parse_from_scratch(std::span<const std::string>(v));
  }

  // Appends icons at the end of the sequence.
  const InterpretationsTable& add_icons(std::span<const std::string> ids) {
    if (!parsed_) return parse_from_scratch(ids);
    if (ids.empty()) return interpretations_;
    check_ids(ids, sequence_.size());
    counters_.reset();

    std::set<InstanceId> fresh;
    for (const auto& id : ids) fresh.insert(append_instance(id));
    reindex();

    for (const auto& p : sequence_.items) {
      if (!is_predicative(entry_of(p))) continue;
      const bool new_predicate = fresh.count(p.instance) > 0;
      for (const auto& c : sequence_.items)
        if (new_predicate || fresh.count(c.instance)) fill_compat(p, c);
    }

    for (const auto& p : sequence_.items) {
      if (!is_predicative(entry_of(p))) continue;
      if (fresh.count(p.instance)) {
        assignments_[p.instance] = enumerate(p.instance, nullptr);
        continue;
      }
      auto& list = assignments_.at(p.instance);
      auto extra = enumerate(p.instance, &fresh);
      if (extra.available == 0) continue;
      std::vector<Assignment> merged;
      for (auto& a : list.ranked)
        if (!(config_.strict_fill && a.empty())) merged.push_back(std::move(a));
      for (auto& a : extra.ranked) merged.push_back(std::move(a));
      list.ranked = rank_assignments(p.instance, std::move(merged));
      list.available += extra.available;
    }

    rebuild_interpretations();
    return interpretations_;
  }

  const InterpretationsTable& add_icons(std::initializer_list<std::string> ids) {
    std::vector<std::string> v(ids);
    return add_icons(std::span<const std::string>(v));
  }

  const InterpretationsTable& remove_icons(std::span<const InstanceId> ids) {
    require_parsed();
    std::vector<InstanceId> unknown;
    std::set<InstanceId> gone;
    for (auto id : ids) {
      if (!sequence_.find(id)) unknown.push_back(id);
      else gone.insert(id);
    }
    if (!unknown.empty()) throw UnknownInstanceError(std::move(unknown));
    if (gone.empty()) return interpretations_;
    counters_.reset();

    const auto old_position = position_;
    std::erase_if(sequence_.items, [&](const IconInstance& it) { return gone.count(it.instance) > 0; });
    reindex();

    compat_.erase_if([&](const CompatKey& k) { return gone.count(k.predicate) || gone.count(k.candidate); });
    std::erase_if(assignments_, [&](const auto& kv) { return gone.count(kv.first) > 0; });

    for (auto& [pred, list] : assignments_) {
      if (list.truncated()) {
        // dropped entries may have hidden viable ones; rebuild from the stored raw values
        list = enumerate(pred, nullptr);
        continue;
      }
      std::vector<Assignment> kept;
      for (auto& a : list.ranked) {
        if (config_.strict_fill && a.empty()) continue;
        if (std::any_of(gone.begin(), gone.end(), [&](InstanceId g) { return a.involves(g); })) continue;
        if (distances_changed(a, old_position)) {
          a.score = score_fills(pred, a.fills);
          ++counters_.assignment_scorings;
        }
        kept.push_back(std::move(a));
      }
      list.available = kept.size();
      list.ranked = rank_assignments(pred, std::move(kept));
      if (list.ranked.empty()) list.ranked.push_back(Assignment{pred, {}, 0.0});
    }

    rebuild_interpretations();
    return interpretations_;
  }

  const InterpretationsTable& remove_icons(std::initializer_list<InstanceId> ids) {
    std::vector<InstanceId> v(ids);
    return remove_icons(std::span<const InstanceId>(v));
  }

  // Removal by 1-based sequence position.
  const InterpretationsTable& remove_positions(std::span<const std::size_t> positions) {
    require_parsed();
    std::vector<std::size_t> bad;
    std::vector<InstanceId> ids;
    for (auto p : positions) {
      if (p < 1 || p > sequence_.size()) bad.push_back(p);
      else ids.push_back(sequence_.at_position(p).instance);
    }
    if (!bad.empty()) throw UnknownPositionError(std::move(bad));
    return remove_icons(std::span<const InstanceId>(ids));
  }

  // Re-enumerates one predicate's assignments from the compatibility table.
  std::vector<Assignment> enumerate_assignments(InstanceId predicate) {
    const auto* inst = sequence_.find(predicate);
    if (!inst) throw UnknownInstanceError({predicate});
    if (!is_predicative(entry_of(*inst)))
      throw ContractViolation("enumerate_assignments: icon '" + inst->lexicon_id + "' is not predicative");
    return enumerate(predicate, nullptr).ranked;
  }

  // Recomputes the interpretations table from the assignments table.
  const InterpretationsTable& enumerate_interpretations() {
    require_parsed();
    rebuild_interpretations();
    return interpretations_;
  }

  const Interpretation& best_interpretation() const {
    require_parsed();
    return interpretations_.ranked.front();
  }

  // Assignments chosen by an interpretation, in predicate sequence order.
  std::vector<const Assignment*> choices(const Interpretation& interp) const {
    std::vector<const Assignment*> out;
    for (std::size_t j = 0; j < interp.choice.size(); ++j)
      out.push_back(&assignments_.at(interpretations_.predicates[j]).ranked.at(interp.choice[j]));
    return out;
  }

  std::size_t position_of(InstanceId id) const { return position_.at(id); }
  const LexEntry& entry_of(const IconInstance& inst) const { return lexicon_->lookup(inst.lexicon_id); }
  const IconInstance& instance(InstanceId id) const { return sequence_.at_position(position_of(id)); }

  bool parsed() const noexcept { return parsed_; }
  const IconSequence& sequence() const noexcept { return sequence_; }
  const CompatibilityTable& compatibility() const noexcept { return compat_; }
  const AssignmentsTable& assignments() const noexcept { return assignments_; }
  const InterpretationsTable& interpretations() const noexcept { return interpretations_; }
  const OpCounters& counters() const noexcept { return counters_; }
  const ParserConfig& config() const noexcept { return config_; }
  const Lexicon& lexicon() const noexcept { return *lexicon_; }
  std::shared_ptr<const Lexicon> lexicon_ptr() const noexcept { return lexicon_; }

  // Takes effect on the next parse_from_scratch().
  void set_config(const ParserConfig& config) {
    config.validate();
    config_ = config;
  }

private:
  void require_parsed() const {
    if (!parsed_) throw StateError("no sequence has been parsed yet");
  }

  void check_ids(std::span<const std::string> ids, std::size_t existing) const {
    for (const auto& id : ids) (void)lexicon_->lookup(id);
    if (existing + ids.size() > config_.max_sequence_length)
      throw SequenceTooLongError(existing + ids.size(), config_.max_sequence_length);
  }

  InstanceId append_instance(const std::string& id) {
    const InstanceId inst = next_instance_++;
    sequence_.items.push_back({inst, id, sequence_.size() + 1});
    return inst;
  }

  void reindex() {
    position_.clear();
    for (std::size_t i = 0; i < sequence_.items.size(); ++i) {
      sequence_.items[i].position = i + 1;
      position_[sequence_.items[i].instance] = i + 1;
    }
  }

  void fill_compat(const IconInstance& p, const IconInstance& c) {
    if (p.instance == c.instance) return;
    const auto& pe = entry_of(p);
    const auto& ce = entry_of(c);
    for (const auto& slot : pe.case_structure) {
      const double raw = structure_compat(ce.intrinsic, slot.selectional);
      ++counters_.structure_compat_evals;
      if (raw < config_.pair_threshold) continue;
      compat_.insert(CompatKey{p.instance, slot.case_type, c.instance}, raw);
    }
  }

  // Sum over filled slots, in case-structure order, of fading * raw.
  double score_fills(InstanceId pred, const std::map<std::string, InstanceId>& fills) const {
    const auto& entry = lexicon_->lookup(instance(pred).lexicon_id);
    const std::size_t pp = position_of(pred);
    double score = 0.0;
    for (const auto& slot : entry.case_structure) {
      auto it = fills.find(slot.case_type);
      if (it == fills.end()) continue;
      const double raw = *compat_.find(pred, slot.case_type, it->second);
      score += fading(distance(pp, position_of(it->second)), config_.fading) * raw;
    }
    return score;
  }

  bool distances_changed(const Assignment& a, const std::unordered_map<InstanceId, std::size_t>& old) const {
    const std::size_t pp = position_of(a.predicate), op = old.at(a.predicate);
    for (const auto& [c, cand] : a.fills)
      if (distance(pp, position_of(cand)) != distance(op, old.at(cand))) return true;
    return false;
  }

  std::vector<Assignment> rank_assignments(InstanceId pred, std::vector<Assignment> items) const {
    const auto cases = order::sorted_cases(lexicon_->lookup(instance(pred).lexicon_id));
    const std::size_t pp = position_of(pred);
    auto pos = [this](InstanceId id) { return position_of(id); };
    std::sort(items.begin(), items.end(), [&](const Assignment& a, const Assignment& b) {
      return order::assignment_before(a, b, pp, pp, cases, pos);
    });
    if (config_.top_k_assignments != kUnlimited && items.size() > config_.top_k_assignments)
      items.resize(config_.top_k_assignments);
    return items;
  }

  // Depth-first over case slots using only stored raw values. With `fresh`,
  // only assignments touching at least one fresh icon are produced.
  AssignmentList enumerate(InstanceId pred, const std::set<InstanceId>* fresh) {
    const auto& entry = lexicon_->lookup(instance(pred).lexicon_id);
    const std::size_t pp = position_of(pred);
    const auto& slots = entry.case_structure;

    struct Option {
      InstanceId candidate;
      double value;
    };
    std::vector<std::vector<Option>> options(slots.size());
    for (std::size_t s = 0; s < slots.size(); ++s)
      for (const auto& [cand, raw] : compat_.candidates(pred, slots[s].case_type))
        options[s].push_back({cand, fading(distance(pp, position_of(cand)), config_.fading) * raw});

    const auto cases = order::sorted_cases(entry);
    auto pos = [this](InstanceId id) { return position_of(id); };
    auto before = [&](const Assignment& a, const Assignment& b) {
      return order::assignment_before(a, b, pp, pp, cases, pos);
    };
    order::Best<Assignment, decltype(before)> best(config_.top_k_assignments, before);

    AssignmentList out;
    std::vector<const Option*> chosen(slots.size(), nullptr);
    std::set<InstanceId> used;

    auto leaf = [&] {
      if (fresh && std::none_of(chosen.begin(), chosen.end(),
                                [&](const Option* o) { return o && fresh->count(o->candidate); }))
        return;
      Assignment a{pred, {}, 0.0};
      for (std::size_t s = 0; s < slots.size(); ++s) {
        if (!chosen[s]) continue;
        a.fills.emplace(slots[s].case_type, chosen[s]->candidate);
        a.score += chosen[s]->value;
      }
      ++counters_.assignment_scorings;
      ++out.available;
      best.push(std::move(a));
    };

    auto descend = [&](auto&& self, std::size_t s) -> void {
      if (s == slots.size()) {
        leaf();
        return;
      }
      if (!config_.strict_fill) {
        chosen[s] = nullptr;
        self(self, s + 1);
      }
      for (const auto& opt : options[s]) {
        if (used.count(opt.candidate)) continue;
        used.insert(opt.candidate);
        chosen[s] = &opt;
        self(self, s + 1);
        used.erase(opt.candidate);
      }
      chosen[s] = nullptr;
    };
    descend(descend, 0);

    out.ranked = std::move(best).take();
    if (out.ranked.empty() && !fresh) out.ranked.push_back(Assignment{pred, {}, 0.0});
    return out;
  }

  void rebuild_interpretations() {
    interpretations_ = {};
    for (const auto& it : sequence_.items)
      if (assignments_.count(it.instance)) interpretations_.predicates.push_back(it.instance);

    std::vector<const std::vector<Assignment>*> lists;
    for (auto id : interpretations_.predicates) lists.push_back(&assignments_.at(id).ranked);

    order::Best<Interpretation, decltype(&order::interpretation_before)> best(
        config_.top_m_interpretations, &order::interpretation_before);

    const std::size_t n = lists.size();
    std::vector<std::uint32_t> idx(n, 0);
    bool done = false;
    while (!done) {
      Interpretation interp{idx, 0.0};
      if (n > 0) {
        interp.score = (*lists[0])[idx[0]].score;
        for (std::size_t j = 1; j < n; ++j) {
          interp.score += (*lists[j])[idx[j]].score;
          ++counters_.elementary_sums;
        }
      }
      ++counters_.interpretations_scored;
      best.push(std::move(interp));

      // odometer, last predicate fastest
      done = true;
      for (std::size_t j = n; j-- > 0;) {
        if (++idx[j] < lists[j]->size()) {
          done = false;
          break;
        }
        idx[j] = 0;
      }
    }
    interpretations_.ranked = std::move(best).take();
  }

  std::shared_ptr<const Lexicon> lexicon_;
  ParserConfig config_;
  IconSequence sequence_;
  std::unordered_map<InstanceId, std::size_t> position_;
  CompatibilityTable compat_;
  AssignmentsTable assignments_;
  InterpretationsTable interpretations_;
  OpCounters counters_;
  InstanceId next_instance_ = 1;
  bool parsed_ = false;
};

}  // namespace iconparse
