#pragma once

// Sweeps sequence length over worst-case instances and emits one CSV row per
// (N, engine) with measured counters and the closed-form prediction.

#include <chrono>
#include <ostream>
#include <sstream>
#include <string>

#include "iconparse/baseline.hpp"
#include "iconparse/chart.hpp"
#include "iconparse/synthetic.hpp"

namespace iconparse {

enum class Engine { chart, recursive, both };

struct BenchParams {
  std::size_t n_min = 2;
  std::size_t n_max = 6;
  std::size_t valency = 2;
  Engine engine = Engine::chart;
  ParserConfig config;
  RecursiveOptions recursive;
  Count a = 1;
  Count b = 1;
};

inline constexpr const char* kBenchHeader =
    "N,V,engine,structure_compat_evals,assignment_scorings,interpretations_scored,wall_ms,predicted_ops";

inline void run_bench(const BenchParams& params, std::ostream& csv) {
  using clock = std::chrono::steady_clock;
  csv << kBenchHeader << '\n';
  ParserConfig config = params.config;
  for (std::size_t n = params.n_min; n <= params.n_max; ++n) {
    auto wc = worst_case(n, params.valency);
    config.max_sequence_length = std::max(config.max_sequence_length, n);

    std::string predicted_chart, predicted_recursive;
    if (n >= 1 && params.valency >= 1 && n - 1 > params.valency) {
      ComplexityParams cp{n, params.valency, params.a, params.b};
      predicted_chart = predict_chart_ops(cp).str();
      predicted_recursive = predict_recursive_ops(cp).str();
    }

    auto row = [&](const char* engine, const OpCounters& c, double ms, const std::string& predicted) {
      std::ostringstream wall;
      wall.precision(3);
      wall << std::fixed << ms;
      csv << n << ',' << params.valency << ',' << engine << ',' << c.structure_compat_evals << ','
          << c.assignment_scorings << ',' << c.interpretations_scored << ',' << wall.str() << ',' << predicted
          << '\n';
    };

    if (params.engine != Engine::recursive) {
      ChartParser parser(wc.lexicon, config);
      auto t0 = clock::now();
      parser.parse_from_scratch(std::span<const std::string>(wc.icons));
      auto ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
      row("chart", parser.counters(), ms, predicted_chart);
    }
    if (params.engine != Engine::chart) {
      try {
        auto t0 = clock::now();
        auto result = recursive_parse(*wc.lexicon, std::span<const std::string>(wc.icons), config, params.recursive);
        auto ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
        row("recursive", result.counters, ms, predicted_recursive);
      } catch (const BudgetExceededError&) {
        csv << n << ',' << params.valency << ",recursive,skipped,skipped,skipped,skipped," << predicted_recursive
            << '\n';
      }
    }
  }
}

}  // namespace iconparse
