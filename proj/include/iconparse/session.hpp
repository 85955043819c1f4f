#pragma once

// In-memory parsing sessions with idle expiry. Each session owns one
// ChartParser; its mutex serializes mutations in arrival order.

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <string>

#include "iconparse/chart.hpp"
#include "iconparse/error.hpp"

namespace iconparse {

class SessionNotFound : public Error {
public:
  explicit SessionNotFound(const std::string& id) : Error("session not found: " + id), id_(id) {}
  const std::string& id() const noexcept { return id_; }

private:
  std::string id_;
};

struct Session {
  using clock = std::chrono::steady_clock;

  Session(std::string id_, std::shared_ptr<const Lexicon> lexicon, const ParserConfig& config, clock::time_point now)
    : id(std::move(id_)), parser(std::move(lexicon), config), created(now), modified(now) {
    parser.parse_from_scratch(std::span<const std::string>{});
  }

  const std::string id;
  std::mutex mutex;  // guards everything below
  ChartParser parser;
  clock::time_point created;
  clock::time_point modified;
};

class SessionStore {
public:
  using clock = Session::clock;

  explicit SessionStore(std::shared_ptr<const Lexicon> lexicon,
                        std::chrono::seconds idle_expiry = std::chrono::minutes(30),
                        std::function<clock::time_point()> now = [] { return clock::now(); })
    : lexicon_(std::move(lexicon)), idle_expiry_(idle_expiry), now_(std::move(now)),
      rng_(std::random_device{}()) {}

  std::shared_ptr<Session> create(const ParserConfig& config = {}) {
    std::lock_guard lock(mutex_);
    sweep_locked();
    std::string id;
    do id = random_id(); while (sessions_.count(id));
    auto session = std::make_shared<Session>(id, lexicon_, config, now_());
    sessions_.emplace(id, session);
    return session;
  }

  // Throws SessionNotFound for unknown or expired ids. Touches the session.
  std::shared_ptr<Session> get(const std::string& id) {
    std::lock_guard lock(mutex_);
    sweep_locked();
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw SessionNotFound(id);
    return it->second;
  }

  clock::time_point now() const { return now_(); }

  bool erase(const std::string& id) {
    std::lock_guard lock(mutex_);
    return sessions_.erase(id) > 0;
  }

  std::size_t size() {
    std::lock_guard lock(mutex_);
    sweep_locked();
    return sessions_.size();
  }

  const Lexicon& lexicon() const noexcept { return *lexicon_; }
  std::shared_ptr<const Lexicon> lexicon_ptr() const noexcept { return lexicon_; }

private:
  void sweep_locked() {
    const auto now = now_();
    std::erase_if(sessions_, [&](const auto& kv) {
      std::unique_lock busy(kv.second->mutex, std::try_to_lock);
      return busy.owns_lock() && now - kv.second->modified > idle_expiry_;
    });
  }

  std::string random_id() {
    static constexpr char hex[] = "0123456789abcdef";
    std::string out(16, '0');
    for (auto& c : out) c = hex[rng_() & 15];
    return out;
  }

  std::shared_ptr<const Lexicon> lexicon_;
  std::chrono::seconds idle_expiry_;
  std::function<clock::time_point()> now_;
  std::mt19937_64 rng_;
  std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
};

}  // namespace iconparse
