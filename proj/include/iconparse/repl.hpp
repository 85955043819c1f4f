#pragma once

#include <cctype>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "iconparse/chart.hpp"
#include "iconparse/report.hpp"

namespace iconparse {

namespace detail {

// Splits on whitespace and commas.
inline std::vector<std::string> split_words(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

inline void print_state(std::ostream& out, const ChartParser& parser) {
  out << "sequence:";
  for (const auto& it : parser.sequence().items) out << ' ' << it.position << ':' << it.lexicon_id;
  if (parser.sequence().empty()) out << " (empty)";
  out << '\n';
  render_human(out, make_report(parser), false);
}

inline void print_config(std::ostream& out, const ParserConfig& c) {
  out << "gamma=" << c.fading.gamma << " threshold="
      << (c.pair_threshold == kNoThreshold ? std::string("off") : format_score(c.pair_threshold))
      << " top-k=" << c.top_k_assignments << " top-m=" << c.top_m_interpretations
      << " strict-fill=" << (c.strict_fill ? "on" : "off") << " max-length=" << c.max_sequence_length << '\n';
}

}  // namespace detail

inline constexpr const char* kReplHelp =
    "commands:\n"
    "  add <ids...>        append icons\n"
    "  rm <positions...>   remove icons by 1-based position\n"
    "  show                print the sequence and ranked interpretations\n"
    "  config [key value]  show or change gamma|threshold|top-k|top-m|strict-fill\n"
    "  quit\n";

// Line-oriented session over one parser. Errors are reported and the loop
// continues; returns when input ends or on `quit`.
inline void run_repl(ChartParser& parser, std::istream& in, std::ostream& out, bool prompt = true) {
  if (!parser.parsed()) parser.parse_from_scratch(std::span<const std::string>{});
  std::string line;
  while (true) {
    if (prompt) out << "> " << std::flush;
    if (!std::getline(in, line)) break;
    auto words = detail::split_words(line);
    if (words.empty()) continue;
    const std::string cmd = words.front();
    std::vector<std::string> args(words.begin() + 1, words.end());
    try {
      if (cmd == "quit" || cmd == "exit") {
        break;
      } else if (cmd == "help") {
        out << kReplHelp;
      } else if (cmd == "show") {
        detail::print_state(out, parser);
      } else if (cmd == "add") {
        parser.add_icons(std::span<const std::string>(args));
        detail::print_state(out, parser);
      } else if (cmd == "rm") {
        std::vector<std::size_t> positions;
        for (const auto& a : args) {
          std::size_t used = 0;
          unsigned long v = 0;
          try {
            v = std::stoul(a, &used);
          } catch (const std::exception&) {
            used = 0;
          }
          if (used != a.size() || a.front() == '-') throw ContractViolation("not a position: '" + a + "'");
          positions.push_back(v);
        }
        parser.remove_positions(std::span<const std::size_t>(positions));
        detail::print_state(out, parser);
      } else if (cmd == "config") {
        if (args.empty()) {
          detail::print_config(out, parser.config());
          continue;
        }
        if (args.size() != 2) throw ContractViolation("usage: config <key> <value>");
        ParserConfig cfg = parser.config();
        const auto& key = args[0];
        const auto& val = args[1];
        if (key == "gamma") cfg.fading.gamma = std::stod(val);
        else if (key == "threshold") cfg.pair_threshold = val == "off" ? kNoThreshold : std::stod(val);
        else if (key == "top-k") cfg.top_k_assignments = std::stoul(val);
        else if (key == "top-m") cfg.top_m_interpretations = std::stoul(val);
        else if (key == "strict-fill") cfg.strict_fill = val == "on" || val == "true" || val == "1";
        else throw ContractViolation("unknown config key '" + key + "'");
        parser.set_config(cfg);
        std::vector<std::string> ids;
        for (const auto& it : parser.sequence().items) ids.push_back(it.lexicon_id);
        parser.parse_from_scratch(std::span<const std::string>(ids));
        detail::print_config(out, parser.config());
        detail::print_state(out, parser);
      } else {
        out << "unknown command '" << cmd << "'\n" << kReplHelp;
      }
    } catch (const std::exception& e) {
      out << "error: " << e.what() << '\n';
    }
  }
}

}  // namespace iconparse
