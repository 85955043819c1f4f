#pragma once

// Semantic lexicon: icon senses with intrinsic features and valency frames.
//
// File format (JSON):
//
//   {
//     "meta":  { ... },                         // optional, kept verbatim
//     "icons": {
//       "drink": {
//         "gloss": "to drink",
//         "intrinsic": { "action": 1 },
//         "cases": [ { "case": "agent",  "select": { "animate": 1 } },
//                    { "case": "object", "select": { "liquid": 1 } } ]
//       }
//     }
//   }
//
// A feature value is either a bare number (1 / -1 are integer-kind, any
// decimal literal is real-kind) or an object {"v": number, "kind": "int"|"real"}.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "iconparse/error.hpp"

namespace iconparse {

enum class ValueKind { integer, real };

struct FeatureValue {
  double magnitude = 1.0;
  ValueKind kind = ValueKind::integer;

  static FeatureValue integer(int v) {
    if (v != 1 && v != -1)
      throw ContractViolation("integer feature values must be +1 or -1");
    return {static_cast<double>(v), ValueKind::integer};
  }
  static FeatureValue real(double v) {
    if (!(v >= -1.0 && v <= 1.0))
      throw ContractViolation("real feature values must lie in [-1, 1]");
    return {v, ValueKind::real};
  }

  bool is_integer() const noexcept { return kind == ValueKind::integer; }

  friend bool operator==(const FeatureValue&, const FeatureValue&) = default;
};

struct Feature {
  std::string attribute;
  FeatureValue value;

  friend bool operator==(const Feature&, const Feature&) = default;
};

// Attribute-unique set of features, kept sorted by attribute.
class FeatureSet {
public:
  using const_iterator = std::vector<Feature>::const_iterator;

  FeatureSet() = default;
  FeatureSet(std::initializer_list<Feature> features) {
    for (const auto& f : features)
      if (!insert(f))
        throw ContractViolation("duplicate attribute '" + f.attribute + "' in feature set");
  }

  // Returns false (and leaves the set untouched) when the attribute is taken.
  bool insert(Feature f) {
    if (f.attribute.empty()) throw ContractViolation("feature attribute must be non-empty");
    auto it = std::lower_bound(features_.begin(), features_.end(), f.attribute,
                               [](const Feature& a, const std::string& b) { return a.attribute < b; });
    if (it != features_.end() && it->attribute == f.attribute) return false;
    features_.insert(it, std::move(f));
    return true;
  }

  const Feature* find(std::string_view attribute) const {
    auto it = std::lower_bound(features_.begin(), features_.end(), attribute,
                               [](const Feature& a, std::string_view b) { return a.attribute < b; });
    return it != features_.end() && it->attribute == attribute ? &*it : nullptr;
  }

  std::size_t size() const noexcept { return features_.size(); }
  bool empty() const noexcept { return features_.empty(); }
  const_iterator begin() const noexcept { return features_.begin(); }
  const_iterator end() const noexcept { return features_.end(); }

  friend bool operator==(const FeatureSet&, const FeatureSet&) = default;

private:
  std::vector<Feature> features_;
};

struct CaseSlot {
  std::string case_type;
  FeatureSet selectional;

  friend bool operator==(const CaseSlot&, const CaseSlot&) = default;
};

struct LexEntry {
  std::string id;
  std::string gloss;
  FeatureSet intrinsic;
  std::vector<CaseSlot> case_structure;

  std::size_t valency() const noexcept { return case_structure.size(); }

  friend bool operator==(const LexEntry&, const LexEntry&) = default;
};

inline bool is_predicative(const LexEntry& entry) noexcept { return !entry.case_structure.empty(); }

inline constexpr std::string_view kFlatOntologyNote =
    "flat ontology: features match only on identical attribute tokens; no inheritance";

class Lexicon {
public:
  Lexicon() = default;

  // Validates the entry against the lexicon invariants before inserting.
  void add(LexEntry entry) {
    const std::string base = "icons/" + entry.id;
    if (entry.id.empty()) throw LexiconError("", "icons", "empty icon id");
    if (entries_.count(entry.id)) throw LexiconError(entry.id, base, "duplicate entry id");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < entry.case_structure.size(); ++i) {
      const auto& slot = entry.case_structure[i];
      const std::string path = base + "/cases/" + std::to_string(i);
      if (slot.case_type.empty()) throw LexiconError(entry.id, path + "/case", "empty case type");
      if (!seen.insert(slot.case_type).second)
        throw LexiconError(entry.id, path + "/case", "duplicate case type '" + slot.case_type + "'");
      if (slot.selectional.empty())
        throw LexiconError(entry.id, path + "/select", "empty selectional feature set");
    }
    auto id = entry.id;
    entries_.emplace(std::move(id), std::move(entry));
  }

  // Throws UnknownIconError for ids not in the lexicon.
  const LexEntry& lookup(std::string_view id) const {
    auto it = entries_.find(std::string(id));
    if (it == entries_.end()) throw UnknownIconError(std::string(id));
    return it->second;
  }

  const LexEntry* find(std::string_view id) const {
    auto it = entries_.find(std::string(id));
    return it == entries_.end() ? nullptr : &it->second;
  }

  bool contains(std::string_view id) const { return find(id) != nullptr; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  const std::map<std::string, LexEntry, std::less<>>& entries() const noexcept { return entries_; }

  const std::string& ontology_note() const noexcept { return ontology_note_; }
  void set_ontology_note(std::string note) { ontology_note_ = std::move(note); }

  const nlohmann::json& meta() const noexcept { return meta_; }
  void set_meta(nlohmann::json meta) { meta_ = std::move(meta); }

  friend bool operator==(const Lexicon& a, const Lexicon& b) {
    return a.entries_ == b.entries_ && a.ontology_note_ == b.ontology_note_ && a.meta_ == b.meta_;
  }

private:
  std::map<std::string, LexEntry, std::less<>> entries_;
  std::string ontology_note_{kFlatOntologyNote};
  nlohmann::json meta_ = nullptr;
};

inline const LexEntry& lookup(const Lexicon& lexicon, std::string_view id) { return lexicon.lookup(id); }

namespace detail {

inline std::string entry_of(const std::vector<std::string>& path) {
  return path.size() >= 2 && path[0] == "icons" ? path[1] : std::string();
}

inline std::string join_path(const std::vector<std::string>& path) {
  std::string out;
  for (const auto& p : path) {
    if (!out.empty()) out += '/';
    out += p;
  }
  return out;
}

// Rejects duplicate object keys, which nlohmann::json would otherwise
// silently collapse (last one wins).
class DuplicateKeyGuard {
public:
  bool operator()(int /*depth*/, nlohmann::json::parse_event_t event, nlohmann::json& parsed) {
    using E = nlohmann::json::parse_event_t;
    switch (event) {
      case E::object_start:
      case E::array_start:
        label_element();
        frames_.push_back({event == E::object_start, {}, {}, 0});
        break;
      case E::object_end:
      case E::array_end:
        frames_.pop_back();
        break;
      case E::key: {
        auto& top = frames_.back();
        auto key = parsed.get<std::string>();
        top.label = key;
        if (!top.keys.insert(key).second) {
          auto path = current_path();
          bool entry_level = path.size() == 2 && path[0] == "icons";
          throw LexiconError(entry_of(path), join_path(path),
                             entry_level ? "duplicate entry id" :
                             (path.size() >= 2 && (path[path.size() - 2] == "intrinsic" ||
                                                   path[path.size() - 2] == "select"))
                                 ? "duplicate attribute '" + key + "'"
                                 : "duplicate key '" + key + "'");
        }
        break;
      }
      case E::value:
        label_element();
        break;
    }
    return true;
  }

private:
  struct Frame {
    bool object;
    std::set<std::string> keys;
    std::string label;
    std::size_t next_index;
  };

  void label_element() {
    if (!frames_.empty() && !frames_.back().object)
      frames_.back().label = std::to_string(frames_.back().next_index++);
  }

  std::vector<std::string> current_path() const {
    std::vector<std::string> out;
    for (const auto& f : frames_) out.push_back(f.label);
    return out;
  }

  std::vector<Frame> frames_;
};

inline FeatureValue parse_value(const nlohmann::json& j, const std::string& entry,
                                const std::string& path) {
  auto from_number = [&](const nlohmann::json& num, std::optional<ValueKind> kind) {
    if (!num.is_number()) throw LexiconError(entry, path, "feature value must be a number");
    const bool literal_integer = num.is_number_integer();
    const double v = num.get<double>();
    const ValueKind k = kind.value_or(literal_integer ? ValueKind::integer : ValueKind::real);
    if (k == ValueKind::integer) {
      if (v != 1.0 && v != -1.0)
        throw LexiconError(entry, path, "integer-kind value must be +1 or -1");
      return FeatureValue{v, ValueKind::integer};
    }
    if (!(v >= -1.0 && v <= 1.0))
      throw LexiconError(entry, path, "magnitude out of [-1, 1]");
    return FeatureValue{v, ValueKind::real};
  };

  if (j.is_number()) return from_number(j, std::nullopt);
  if (!j.is_object()) throw LexiconError(entry, path, "feature value must be a number or {v, kind}");
  if (!j.contains("v")) throw LexiconError(entry, path, "feature value object lacks 'v'");
  std::optional<ValueKind> kind;
  for (const auto& [key, val] : j.items()) {
    if (key == "v") continue;
    if (key != "kind") throw LexiconError(entry, path + "/" + key, "unexpected key");
    if (val == "int") kind = ValueKind::integer;
    else if (val == "real") kind = ValueKind::real;
    else throw LexiconError(entry, path + "/kind", "kind must be \"int\" or \"real\"");
  }
  return from_number(j.at("v"), kind);
}

inline FeatureSet parse_feature_set(const nlohmann::json& j, const std::string& entry,
                                    const std::string& path) {
  if (!j.is_object()) throw LexiconError(entry, path, "feature set must be an object");
  FeatureSet out;
  for (const auto& [attr, val] : j.items()) {
    if (attr.empty()) throw LexiconError(entry, path, "empty attribute");
    if (!out.insert({attr, parse_value(val, entry, path + "/" + attr)}))
      throw LexiconError(entry, path + "/" + attr, "duplicate attribute '" + attr + "'");
  }
  return out;
}

inline nlohmann::json feature_set_to_json(const FeatureSet& set) {
  auto out = nlohmann::json::object();
  for (const auto& f : set) {
    if (f.value.is_integer())
      out[f.attribute] = static_cast<int>(f.value.magnitude);
    else
      out[f.attribute] = {{"v", f.value.magnitude}, {"kind", "real"}};
  }
  return out;
}

}  // namespace detail

inline Lexicon lexicon_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw LexiconError("", "", "document must be an object");
  Lexicon lexicon;
  for (const auto& [key, val] : doc.items()) {
    if (key == "meta") {
      lexicon.set_meta(val);
      if (val.is_object() && val.contains("ontology") && val["ontology"].is_string())
        lexicon.set_ontology_note(val["ontology"].get<std::string>());
    } else if (key != "icons") {
      throw LexiconError("", key, "unexpected top-level key");
    }
  }
  if (!doc.contains("icons")) return lexicon;
  const auto& icons = doc.at("icons");
  if (!icons.is_object()) throw LexiconError("", "icons", "'icons' must be an object");

  for (const auto& [id, body] : icons.items()) {
    const std::string base = "icons/" + id;
    if (!body.is_object()) throw LexiconError(id, base, "entry must be an object");
    LexEntry entry;
    entry.id = id;
    entry.gloss = id;
    for (const auto& [key, val] : body.items()) {
      const std::string path = base + "/" + key;
      if (key == "gloss") {
        if (!val.is_string()) throw LexiconError(id, path, "gloss must be a string");
        entry.gloss = val.get<std::string>();
      } else if (key == "intrinsic") {
        entry.intrinsic = detail::parse_feature_set(val, id, path);
      } else if (key == "cases") {
        if (!val.is_array()) throw LexiconError(id, path, "cases must be an array");
        for (std::size_t i = 0; i < val.size(); ++i) {
          const auto& c = val[i];
          const std::string cpath = path + "/" + std::to_string(i);
          if (!c.is_object()) throw LexiconError(id, cpath, "case slot must be an object");
          CaseSlot slot;
          bool has_case = false, has_select = false;
          for (const auto& [ck, cv] : c.items()) {
            if (ck == "case") {
              if (!cv.is_string()) throw LexiconError(id, cpath + "/case", "case must be a string");
              slot.case_type = cv.get<std::string>();
              has_case = true;
            } else if (ck == "select") {
              slot.selectional = detail::parse_feature_set(cv, id, cpath + "/select");
              has_select = true;
            } else {
              throw LexiconError(id, cpath + "/" + ck, "unexpected key");
            }
          }
          if (!has_case) throw LexiconError(id, cpath, "case slot lacks 'case'");
          if (!has_select) throw LexiconError(id, cpath, "case slot lacks 'select'");
          entry.case_structure.push_back(std::move(slot));
        }
      } else {
        throw LexiconError(id, path, "unexpected key");
      }
    }
    lexicon.add(std::move(entry));
  }
  return lexicon;
}

// Parses and validates a lexicon document.
inline Lexicon load_lexicon(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end(), detail::DuplicateKeyGuard{});
  } catch (const nlohmann::json::parse_error& e) {
    throw LexiconError("", "", std::string("malformed document: ") + e.what());
  }
  return lexicon_from_json(doc);
}

inline Lexicon load_lexicon_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LexiconError("", "", "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_lexicon(buf.str());
}

// Canonical form: entries by id, attributes by token, integer values bare.
inline nlohmann::json to_json(const Lexicon& lexicon) {
  nlohmann::json doc = nlohmann::json::object();
  if (!lexicon.meta().is_null()) doc["meta"] = lexicon.meta();
  auto icons = nlohmann::json::object();
  for (const auto& [id, e] : lexicon.entries()) {
    nlohmann::json body = {{"gloss", e.gloss}, {"intrinsic", detail::feature_set_to_json(e.intrinsic)}};
    auto cases = nlohmann::json::array();
    for (const auto& slot : e.case_structure)
      cases.push_back({{"case", slot.case_type}, {"select", detail::feature_set_to_json(slot.selectional)}});
    body["cases"] = std::move(cases);
    icons[id] = std::move(body);
  }
  doc["icons"] = std::move(icons);
  return doc;
}

inline std::string serialize(const Lexicon& lexicon, int indent = 2) { return to_json(lexicon).dump(indent); }

}  // namespace iconparse
