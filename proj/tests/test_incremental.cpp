#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "iconparse/chart.hpp"
#include "iconparse/synthetic.hpp"
#include "support/instances.hpp"

using namespace iconparse;
using fixtures::diff;
using fixtures::view;

namespace {

std::vector<std::string> seq(std::initializer_list<const char*> ids) { return {ids.begin(), ids.end()}; }

fixtures::TableView scratch(std::shared_ptr<const Lexicon> lex, const std::vector<std::string>& ids,
                           const ParserConfig& cfg = {}) {
  ChartParser p(std::move(lex), cfg);
  p.parse_from_scratch(std::span<const std::string>(ids));
  return view(p);
}

class MicroIncremental : public ::testing::Test {
protected:
  std::shared_ptr<const Lexicon> lex = fixtures::bundled("micro");
};

}  // namespace

TEST_F(MicroIncremental, AppendMatchesFullParse) {
  ChartParser p(lex);
  p.parse_from_scratch(seq({"cat", "drink"}));
  p.add_icons(seq({"milk"}));
  EXPECT_EQ(diff(view(p), scratch(lex, seq({"cat", "drink", "milk"}))), "");
  EXPECT_NEAR(p.best_interpretation().score, 1.0, 1e-9);
}

TEST_F(MicroIncremental, AppendNothing) {
  ChartParser p(lex);
  p.parse_from_scratch(seq({"cat", "drink"}));
  const auto before = view(p);
  const auto counters = p.counters();
  p.add_icons(std::span<const std::string>{});
  EXPECT_EQ(diff(before, view(p), 0.0), "");
  EXPECT_EQ(p.counters(), counters);
}

TEST_F(MicroIncremental, AppendToEmptyOrUnparsed) {
  const auto full = scratch(lex, seq({"cat", "drink", "milk"}));
  ChartParser empty(lex);
  empty.parse_from_scratch(std::span<const std::string>{});
  empty.add_icons(seq({"cat", "drink", "milk"}));
  EXPECT_EQ(diff(view(empty), full), "");

  ChartParser fresh(lex);
  fresh.add_icons(seq({"cat", "drink", "milk"}));
  EXPECT_EQ(diff(view(fresh), full), "");
}

TEST_F(MicroIncremental, AppendOnlyEvaluatesNewPairs) {
  ChartParser p(lex);
  p.parse_from_scratch(seq({"cat", "drink"}));
  const auto before = p.compatibility().entries();
  p.add_icons(seq({"milk"}));
  // drink has two slots; only milk is new as a candidate, and milk has no slots
  EXPECT_EQ(p.counters().structure_compat_evals, 2u);
  for (const auto& [k, raw] : before) EXPECT_EQ(p.compatibility().find(k.predicate, k.case_type, k.candidate), raw);
}

TEST_F(MicroIncremental, RemoveMatchesFullParse) {
  ChartParser p(lex);
  p.parse_from_scratch(seq({"cat", "drink", "milk"}));
  p.remove_icons({3});
  EXPECT_EQ(diff(view(p), scratch(lex, seq({"cat", "drink"}))), "");
}

TEST_F(MicroIncremental, RemoveNothing) {
  ChartParser p(lex);
  p.parse_from_scratch(seq({"cat", "drink", "milk"}));
  const auto before = view(p);
  p.remove_icons(std::span<const InstanceId>{});
  EXPECT_EQ(diff(before, view(p), 0.0), "");
}

TEST_F(MicroIncremental, RemovalRepairsDistances) {
  ChartParser p(lex);
  p.parse_from_scratch(seq({"cat", "drink", "dog", "milk"}));
  // milk sits two away from drink: object value 0.25
  auto before = p.choices(p.best_interpretation());
  EXPECT_EQ(before[0]->fills.at("object"), 4u);
  EXPECT_NEAR(p.best_interpretation().score, 0.5 + 0.25, 1e-9);

  p.remove_icons({3});
  EXPECT_EQ(diff(view(p), scratch(lex, seq({"cat", "drink", "milk"}))), "");
  EXPECT_NEAR(p.best_interpretation().score, 1.0, 1e-9);
  EXPECT_EQ(p.position_of(4), 3u);
}

TEST_F(MicroIncremental, RemoveUnknownInstance) {
  ChartParser p(lex);
  p.parse_from_scratch(seq({"cat", "drink", "milk"}));
  const auto before = view(p);
  try {
    p.remove_icons({2, 9, 12});
    FAIL();
  } catch (const UnknownInstanceError& e) {
    EXPECT_EQ(e.ids(), (std::vector<std::uint64_t>{9, 12}));
  }
  EXPECT_EQ(diff(before, view(p), 0.0), "");
  EXPECT_THROW(p.remove_positions(std::vector<std::size_t>{99}), UnknownPositionError);
  EXPECT_THROW(p.remove_positions(std::vector<std::size_t>{0}), UnknownPositionError);
  EXPECT_EQ(diff(before, view(p), 0.0), "");
}

TEST_F(MicroIncremental, RemoveEverything) {
  ChartParser p(lex);
  p.parse_from_scratch(seq({"cat", "drink", "milk"}));
  p.remove_positions(std::vector<std::size_t>{1, 2, 3});
  EXPECT_TRUE(p.sequence().empty());
  EXPECT_EQ(diff(view(p), scratch(lex, {})), "");
  ASSERT_EQ(p.interpretations().size(), 1u);
  EXPECT_EQ(p.best_interpretation().score, 0.0);
}

TEST_F(MicroIncremental, RemoveNeedsAParse) {
  ChartParser p(lex);
  EXPECT_THROW(p.remove_icons({1}), StateError);
}

TEST(Incremental, PrunedRemovalRecoversHiddenAssignments) {
  // K = 1: the kept assignment is the one that goes away; the next best was
  // never stored and has to come back.
  auto wc = worst_case(5, 1);
  ParserConfig cfg;
  cfg.top_k_assignments = 1;
  ChartParser p(wc.lexicon, cfg);
  p.parse_from_scratch(std::span<const std::string>(wc.icons));
  p.remove_positions(std::vector<std::size_t>{2});
  EXPECT_EQ(diff(view(p), scratch(wc.lexicon, std::vector<std::string>(4, "w"), cfg)), "");
}

// Random prefix/suffix splits and deletion sets, across configs with and
// without pruning.
TEST(Incremental, RandomEquivalence) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    // unpruned runs stay small: the interpretation product is exhaustive
    auto inst = trial % 4 < 2 ? fixtures::random_instance(rng, 4, 2) : fixtures::random_instance(rng, 8, 3);
    ParserConfig cfg;
    switch (trial % 4) {
      case 0: cfg = ParserConfig::exhaustive(false); break;
      case 1: cfg = ParserConfig::exhaustive(true); break;
      case 2: cfg.top_k_assignments = 2; break;
      case 3: cfg.strict_fill = true; cfg.top_k_assignments = 1; cfg.pair_threshold = 0.0; break;
    }
    const auto& ids = inst.icons;
    const auto full = scratch(inst.lexicon, ids, cfg);

    std::uniform_int_distribution<std::size_t> cut(0, ids.size());
    const std::size_t split = cut(rng);
    std::vector<std::string> prefix(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(split));
    std::vector<std::string> suffix(ids.begin() + static_cast<std::ptrdiff_t>(split), ids.end());
    ChartParser inc(inst.lexicon, cfg);
    inc.parse_from_scratch(std::span<const std::string>(prefix));
    inc.add_icons(std::span<const std::string>(suffix));
    ASSERT_EQ(diff(view(inc), full), "") << "trial " << trial << " split " << split;

    std::vector<std::size_t> positions;
    std::vector<std::string> kept, dropped;
    std::bernoulli_distribution drop(0.35);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (drop(rng)) {
        positions.push_back(i + 1);
        dropped.push_back(ids[i]);
      } else {
        kept.push_back(ids[i]);
      }
    }
    ChartParser rem(inst.lexicon, cfg);
    rem.parse_from_scratch(std::span<const std::string>(ids));
    rem.remove_positions(std::span<const std::size_t>(positions));
    ASSERT_EQ(diff(view(rem), scratch(inst.lexicon, kept, cfg)), "") << "trial " << trial;

    // an edit session: the removed icons come back at the end
    rem.add_icons(std::span<const std::string>(dropped));
    auto again = kept;
    again.insert(again.end(), dropped.begin(), dropped.end());
    ASSERT_EQ(diff(view(rem), scratch(inst.lexicon, again, cfg)), "") << "trial " << trial;
  }
}

TEST(Incremental, AppendNeverTouchesExistingRawEntries) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 100; ++trial) {
    auto inst = fixtures::random_instance(rng, 8, 3, 2);
    auto cfg = ParserConfig::exhaustive(false);
    cfg.top_k_assignments = 3;
    ChartParser p(inst.lexicon, cfg);
    std::vector<std::string> head(inst.icons.begin(), inst.icons.begin() + 2);
    std::vector<std::string> tail(inst.icons.begin() + 2, inst.icons.end());
    p.parse_from_scratch(std::span<const std::string>(head));
    const auto before = p.compatibility().entries();
    p.add_icons(std::span<const std::string>(tail));
    for (const auto& [k, raw] : before)
      EXPECT_EQ(p.compatibility().find(k.predicate, k.case_type, k.candidate), raw);
  }
}
