#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace iconparse {

// Base of every error the library throws on bad input or state.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Lexicon document rejected; carries the offending entry id (may be empty)
// and the JSON path of the value at fault.
class LexiconError : public Error {
public:
  LexiconError(std::string entry, std::string path, const std::string& what)
    : Error(format(entry, path, what)), entry_(std::move(entry)), path_(std::move(path)) {}

  const std::string& entry() const noexcept { return entry_; }
  const std::string& path() const noexcept { return path_; }

private:
  static std::string format(const std::string& entry, const std::string& path,
                            const std::string& what) {
    std::string out = "lexicon: " + what;
    if (!entry.empty()) out += " (entry '" + entry + "')";
    if (!path.empty()) out += " at /" + path;
    return out;
  }

  std::string entry_;
  std::string path_;
};

class UnknownIconError : public Error {
public:
  explicit UnknownIconError(std::string id)
    : Error("unknown icon '" + id + "'"), id_(std::move(id)) {}
  const std::string& id() const noexcept { return id_; }

private:
  std::string id_;
};

class SequenceTooLongError : public Error {
public:
  SequenceTooLongError(std::size_t length, std::size_t cap)
    : Error("sequence too long: " + std::to_string(length) + " icons, cap is " +
            std::to_string(cap)),
      length_(length), cap_(cap) {}
  std::size_t length() const noexcept { return length_; }
  std::size_t cap() const noexcept { return cap_; }

private:
  std::size_t length_;
  std::size_t cap_;
};

class UnknownInstanceError : public Error {
public:
  explicit UnknownInstanceError(std::vector<std::uint64_t> ids)
    : Error(format(ids)), ids_(std::move(ids)) {}
  const std::vector<std::uint64_t>& ids() const noexcept { return ids_; }

private:
  static std::string format(const std::vector<std::uint64_t>& ids) {
    std::string out = "unknown icon instance(s):";
    for (auto id : ids) out += " " + std::to_string(id);
    return out;
  }

  std::vector<std::uint64_t> ids_;
};

class UnknownPositionError : public Error {
public:
  explicit UnknownPositionError(std::vector<std::size_t> positions)
    : Error(format(positions)), positions_(std::move(positions)) {}
  const std::vector<std::size_t>& positions() const noexcept { return positions_; }

private:
  static std::string format(const std::vector<std::size_t>& positions) {
    std::string out = "no icon at position(s):";
    for (auto p : positions) out += " " + std::to_string(p);
    return out;
  }

  std::vector<std::size_t> positions_;
};

// Operation called in a state that does not permit it (e.g. querying an
// unparsed session).
class StateError : public Error {
public:
  using Error::Error;
};

// Predicted work of the recursive engine exceeds its budget.
class BudgetExceededError : public Error {
public:
  using Error::Error;
};

// Caller broke an operation's precondition.
class ContractViolation : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

}  // namespace iconparse
