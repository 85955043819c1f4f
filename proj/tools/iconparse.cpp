// iconparse: command-line front end (parse, repl, bench, serve).

#include <chrono>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>

#include "iconparse/iconparse.hpp"
#include "iconparse/service.hpp"

#ifndef ICONPARSE_DATA_DIR
#define ICONPARSE_DATA_DIR "data"
#endif

namespace {

namespace fs = std::filesystem;
using namespace iconparse;

enum Exit : int { kOk = 0, kFailure = 1, kBadLexicon = 2, kUnknownIcon = 3, kTooLong = 4 };

struct CommonFlags {
  std::string lexicon = "demo";
  double gamma = 0.5;
  std::string threshold = "0.1";
  std::size_t top_k = 3;
  std::size_t top_m = 10;
  bool strict_fill = false;
  std::size_t max_length = 20;

  void attach(CLI::App* app) {
    app->add_option("--lexicon", lexicon, "lexicon file, or the name of a bundled one (micro, demo)");
    app->add_option("--gamma", gamma, "fading base, in (0,1)");
    app->add_option("--threshold", threshold, "minimum raw compatibility, or 'off'");
    app->add_option("--top-k", top_k, "assignments kept per predicate (0 = unlimited)");
    app->add_option("--top-m", top_m, "interpretations kept (0 = unlimited)");
    app->add_flag("--strict-fill", strict_fill, "every case slot must be filled");
    app->add_option("--max-length", max_length, "longest accepted sequence");
  }

  ParserConfig config() const {
    ParserConfig c;
    c.fading.gamma = gamma;
    c.pair_threshold = threshold == "off" ? kNoThreshold : std::stod(threshold);
    c.top_k_assignments = top_k == 0 ? kUnlimited : top_k;
    c.top_m_interpretations = top_m == 0 ? kUnlimited : top_m;
    c.strict_fill = strict_fill;
    c.max_sequence_length = max_length;
    c.validate();
    return c;
  }
};

fs::path resolve_lexicon(const std::string& name) {
  fs::path p(name);
  if (fs::exists(p)) return p;
  fs::path bundled = fs::path(ICONPARSE_DATA_DIR) / (name + ".json");
  if (!p.has_extension() && fs::exists(bundled)) return bundled;
  return p;
}

std::shared_ptr<const Lexicon> open_lexicon(const std::string& name) {
  return std::make_shared<const Lexicon>(load_lexicon_file(resolve_lexicon(name)));
}

std::vector<std::string> split_csv(const std::string& csv) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    auto b = cur.find_first_not_of(" \t");
    auto e = cur.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(cur.substr(b, e - b + 1));
    cur.clear();
  };
  for (char c : csv) {
    if (c == ',') flush();
    else cur += c;
  }
  flush();
  return out;
}

int cmd_parse(const CommonFlags& flags, const std::string& icons, const std::string& format,
              const std::string& engine) {
  auto lexicon = open_lexicon(flags.lexicon);
  auto config = flags.config();
  auto ids = split_csv(icons);
  std::span<const std::string> seq(ids);
  const bool machine = format == "machine";
  using clock = std::chrono::steady_clock;

  if (engine == "chart") {
    ChartParser parser(lexicon, config);
    auto t0 = clock::now();
    parser.parse_from_scratch(seq);
    auto report = make_report(parser, std::chrono::duration<double, std::milli>(clock::now() - t0).count());
    if (machine) std::cout << nlohmann::json(report).dump(2) << '\n';
    else render_human(std::cout, report);
    return kOk;
  }
  if (engine == "recursive") {
    auto t0 = clock::now();
    auto result = recursive_parse(*lexicon, seq, config);
    auto report =
        make_report(*lexicon, result, config, std::chrono::duration<double, std::milli>(clock::now() - t0).count());
    if (machine) std::cout << nlohmann::json(report).dump(2) << '\n';
    else render_human(std::cout, report);
    return kOk;
  }

  auto cmp = compare_engines(lexicon, seq, config);
  ChartParser parser(lexicon, config);
  parser.parse_from_scratch(seq);
  auto report = make_report(parser, cmp.chart_ms);
  if (machine) {
    nlohmann::json j = {{"equal", cmp.equal},
                        {"divergence", cmp.divergence},
                        {"chart", report},
                        {"recursive_counters", cmp.recursive},
                        {"recursive_ms", cmp.recursive_ms}};
    std::cout << j.dump(2) << '\n';
  } else {
    render_human(std::cout, report);
    std::cout << "# engines " << (cmp.equal ? "agree" : "DISAGREE: " + cmp.divergence) << "; structure_compat_evals chart="
              << cmp.chart.structure_compat_evals << " recursive=" << cmp.recursive.structure_compat_evals << '\n';
  }
  return cmp.equal ? kOk : kFailure;
}

int cmd_repl(const CommonFlags& flags) {
  ChartParser parser(open_lexicon(flags.lexicon), flags.config());
  std::cout << "iconparse repl; type 'help' for commands\n";
  run_repl(parser, std::cin, std::cout);
  return kOk;
}

int cmd_bench(const CommonFlags& flags, BenchParams params, const std::string& engine) {
  params.config = flags.config();
  params.engine = engine == "recursive" ? Engine::recursive : engine == "both" ? Engine::both : Engine::chart;
  run_bench(params, std::cout);
  return kOk;
}

int cmd_serve(const CommonFlags& flags, const std::string& bind, int idle_minutes) {
  auto lexicon = open_lexicon(flags.lexicon);
  (void)flags.config();
  SessionStore store(lexicon, std::chrono::minutes(idle_minutes));
  httplib::Server server;
  register_routes(server, store);
  std::string host = bind;
  int port = 8080;
  if (auto colon = bind.rfind(':'); colon != std::string::npos) {
    host = bind.substr(0, colon);
    port = std::stoi(bind.substr(colon + 1));
  }
  std::cerr << "listening on " << host << ':' << port << '\n';
  if (!server.listen(host, port)) {
    std::cerr << "error: cannot bind " << bind << '\n';
    return kFailure;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semantic chart parser for icon sequences"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string icons, format = "human", engine = "chart";

  auto* parse = app.add_subcommand("parse", "parse one sequence and print ranked interpretations");
  flags.attach(parse);
  parse->add_option("--icons", icons, "comma-separated icon ids")->required();
  parse->add_option("--format", format, "human|machine")->check(CLI::IsMember({"human", "machine"}));
  parse->add_option("--engine", engine, "chart|recursive|both")->check(CLI::IsMember({"chart", "recursive", "both"}));

  auto* repl = app.add_subcommand("repl", "interactive incremental session");
  flags.attach(repl);

  BenchParams bench_params;
  std::string bench_engine = "chart";
  double budget = bench_params.recursive.budget;
  std::uint64_t a = 1, b = 1;
  auto* bench = app.add_subcommand("bench", "worst-case sweep over N, CSV on stdout");
  flags.attach(bench);
  bench->add_option("--n-min", bench_params.n_min);
  bench->add_option("--n-max", bench_params.n_max);
  bench->add_option("--valency", bench_params.valency);
  bench->add_option("--engine", bench_engine, "chart|recursive|both")
      ->check(CLI::IsMember({"chart", "recursive", "both"}));
  bench->add_option("--budget", budget, "recursive engine work budget");
  bench->add_option("--a", a, "role/filler cost ratio used in predicted_ops");
  bench->add_option("--b", b, "assignment cost ratio used in predicted_ops");

  std::string bind = "127.0.0.1:8080";
  int idle_minutes = 30;
  auto* serve = app.add_subcommand("serve", "HTTP session service");
  flags.attach(serve);
  serve->add_option("--bind", bind, "host:port");
  serve->add_option("--idle-minutes", idle_minutes, "session idle expiry");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*parse) return cmd_parse(flags, icons, format, engine);
    if (*repl) return cmd_repl(flags);
    if (*bench) {
      bench_params.recursive.budget = budget;
      bench_params.a = a;
      bench_params.b = b;
      return cmd_bench(flags, bench_params, bench_engine);
    }
    if (*serve) return cmd_serve(flags, bind, idle_minutes);
  } catch (const LexiconError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadLexicon;
  } catch (const UnknownIconError& e) {
    std::cerr << "error: unknown icon '" << e.id() << "'\n";
    return kUnknownIcon;
  } catch (const SequenceTooLongError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kTooLong;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}
