#pragma once

// HTTP session API over SessionStore.
//
//   POST   /sessions                 {"config": {...}}?   -> {"session_id"}
//   GET    /sessions/{id}                                 -> session view
//   POST   /sessions/{id}/icons      {"ids": [...]}       -> session view
//   DELETE /sessions/{id}/icons      {"positions": [...]} -> session view
//   GET    /lexicon                                       -> palette
//   GET    /health
//
// Errors carry {"error": {"code", "message", "field"}}.

#include <chrono>
#include <mutex>
#include <string>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "iconparse/chart.hpp"
#include "iconparse/report.hpp"
#include "iconparse/session.hpp"

namespace iconparse {

namespace detail {

inline void reply(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

inline void reply_error(httplib::Response& res, int status, const std::string& code, const std::string& message,
                        const std::string& field = "") {
  nlohmann::json err = {{"code", code}, {"message", message}};
  err["field"] = field.empty() ? nlohmann::json(nullptr) : nlohmann::json(field);
  reply(res, status, {{"error", err}});
}

inline nlohmann::json session_view(Session& s) {
  nlohmann::json j = make_report(s.parser);
  j["session_id"] = s.id;
  j["config"] = config_to_json(s.parser.config());
  return j;
}

inline nlohmann::json palette(const Lexicon& lexicon) {
  auto icons = nlohmann::json::array();
  for (const auto& [id, e] : lexicon.entries()) {
    auto cases = nlohmann::json::array();
    for (const auto& slot : e.case_structure) cases.push_back(slot.case_type);
    icons.push_back({{"id", id},
                     {"gloss", e.gloss},
                     {"predicative", is_predicative(e)},
                     {"valency", e.valency()},
                     {"cases", cases}});
  }
  return {{"icons", icons}, {"ontology", lexicon.ontology_note()}};
}

// Parses the request body; an empty body is an empty object.
inline bool parse_body(const httplib::Request& req, httplib::Response& res, nlohmann::json& out) {
  if (req.body.empty()) {
    out = nlohmann::json::object();
    return true;
  }
  try {
    out = nlohmann::json::parse(req.body);
  } catch (const nlohmann::json::parse_error& e) {
    reply_error(res, 400, "malformed_body", e.what());
    return false;
  }
  if (!out.is_object()) {
    reply_error(res, 400, "malformed_body", "request body must be an object");
    return false;
  }
  return true;
}

template <typename Fn>
void with_session(SessionStore& store, const httplib::Request& req, httplib::Response& res, Fn&& fn) {
  std::shared_ptr<Session> session;
  try {
    session = store.get(req.matches[1]);
  } catch (const SessionNotFound& e) {
    reply_error(res, 404, "session_not_found", e.what(), "session_id");
    return;
  }
  std::lock_guard lock(session->mutex);
  try {
    fn(*session);
    session->modified = store.now();
    reply(res, 200, session_view(*session));
  } catch (const UnknownIconError& e) {
    reply_error(res, 400, "unknown_icon", e.what(), "ids");
  } catch (const SequenceTooLongError& e) {
    reply_error(res, 400, "sequence_too_long", e.what(), "ids");
  } catch (const UnknownPositionError& e) {
    reply_error(res, 400, "unknown_position", e.what(), "positions");
  } catch (const nlohmann::json::exception& e) {
    reply_error(res, 400, "invalid_field", e.what());
  } catch (const ContractViolation& e) {
    reply_error(res, 400, "invalid_request", e.what());
  }
}

}  // namespace detail

inline void register_routes(httplib::Server& server, SessionStore& store) {
  using namespace detail;

  server.Get("/health", [](const httplib::Request&, httplib::Response& res) { reply(res, 200, {{"status", "ok"}}); });

  server.Get("/lexicon", [&store](const httplib::Request&, httplib::Response& res) {
    reply(res, 200, palette(store.lexicon()));
  });

  server.Post("/sessions", [&store](const httplib::Request& req, httplib::Response& res) {
    nlohmann::json body;
    if (!parse_body(req, res, body)) return;
    ParserConfig config;
    try {
      config = config_from_json(body.value("config", nlohmann::json(nullptr)));
    } catch (const std::exception& e) {
      reply_error(res, 400, "invalid_config", e.what(), "config");
      return;
    }
    auto session = store.create(config);
    reply(res, 201, {{"session_id", session->id}});
  });

  server.Get(R"(/sessions/([^/]+))", [&store](const httplib::Request& req, httplib::Response& res) {
    with_session(store, req, res, [](Session&) {});
  });

  server.Post(R"(/sessions/([^/]+)/icons)", [&store](const httplib::Request& req, httplib::Response& res) {
    nlohmann::json body;
    if (!parse_body(req, res, body)) return;
    if (!body.contains("ids") || !body["ids"].is_array()) {
      reply_error(res, 400, "invalid_field", "body needs an 'ids' array", "ids");
      return;
    }
    with_session(store, req, res, [&](Session& s) {
      auto ids = body["ids"].get<std::vector<std::string>>();
      s.parser.add_icons(std::span<const std::string>(ids));
    });
  });

  server.Delete(R"(/sessions/([^/]+)/icons)", [&store](const httplib::Request& req, httplib::Response& res) {
    nlohmann::json body;
    if (!parse_body(req, res, body)) return;
    if (!body.contains("positions") || !body["positions"].is_array()) {
      reply_error(res, 400, "invalid_field", "body needs a 'positions' array", "positions");
      return;
    }
    with_session(store, req, res, [&](Session& s) {
      auto positions = body["positions"].get<std::vector<std::size_t>>();
      s.parser.remove_positions(std::span<const std::size_t>(positions));
    });
  });
}

}  // namespace iconparse
