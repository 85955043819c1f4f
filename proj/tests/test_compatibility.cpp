#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "iconparse/compatibility.hpp"
#include "support/instances.hpp"

using namespace iconparse;

namespace {

Feature fi(const std::string& a, int v) { return {a, FeatureValue::integer(v)}; }
Feature fr(const std::string& a, double v) { return {a, FeatureValue::real(v)}; }

// Direct double sum over (selectional, intrinsic) pairs.
double double_sum_oracle(const FeatureSet& intrinsic, const FeatureSet& selectional) {
  double sum = 0.0;
  for (const auto& s : selectional)
    for (const auto& i : intrinsic) {
      if (s.attribute != i.attribute) continue;
      if (s.value.kind == ValueKind::integer && i.value.kind == ValueKind::integer)
        sum += s.value.magnitude == i.value.magnitude ? 1.0 : -1.0;
      else
        sum += s.value.magnitude * i.value.magnitude;
    }
  return sum / static_cast<double>(selectional.size());
}

}  // namespace

TEST(FeatureCompat, FlatOntologyCases) {
  EXPECT_EQ(feature_compat(fi("human", 1), fi("human", 1)), 1.0);
  EXPECT_EQ(feature_compat(fi("human", 1), fi("male", 1)), 0.0);
  EXPECT_EQ(feature_compat(fi("human", 1), fi("human", -1)), -1.0);
  EXPECT_EQ(feature_compat(fr("liquid", 0.5), fi("liquid", 1)), 0.5);
  EXPECT_EQ(feature_compat(fr("liquid", -0.5), fr("liquid", 0.5)), -0.25);
  // real-kind values never take the integer branch, even at +/-1
  EXPECT_EQ(feature_compat(fr("a", 1.0), fi("a", -1)), -1.0);
}

TEST(FeatureCompat, SymmetricAndBounded) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    auto a = fixtures::random_features(rng, 1, 1);
    auto b = fixtures::random_features(rng, 1, 1);
    const auto& f1 = *a.begin();
    const auto& f2 = *b.begin();
    EXPECT_EQ(feature_compat(f1, f2), feature_compat(f2, f1));
    EXPECT_LE(std::abs(feature_compat(f1, f2)), 1.0);
  }
}

TEST(StructureCompat, Examples) {
  EXPECT_NEAR(structure_compat({fi("human", 1), fi("male", 1)}, {fi("human", 1)}), 1.0, 1e-9);
  EXPECT_NEAR(structure_compat({}, {fi("human", 1)}), 0.0, 1e-9);
  EXPECT_NEAR(structure_compat({fi("animate", 1), fi("human", -1)}, {fi("animate", 1)}), 1.0, 1e-9);
  EXPECT_NEAR(structure_compat({fi("liquid", 1)}, {fi("animate", 1)}), 0.0, 1e-9);
  EXPECT_NEAR(structure_compat({fi("animate", 1)}, {fi("animate", 1), fi("young", 1)}), 0.5, 1e-9);
}

TEST(StructureCompat, EmptySelectionalIsAContractViolation) {
  EXPECT_THROW(structure_compat({fi("a", 1)}, {}), ContractViolation);
}

TEST(StructureCompat, MatchesDoubleSumOracle) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 2000; ++i) {
    auto a = fixtures::random_features(rng, 0, 4);
    auto b = fixtures::random_features(rng, 1, 4);
    EXPECT_NEAR(structure_compat(a, b), double_sum_oracle(a, b), 1e-12);
  }
}

// The raw double sum is symmetric; only the denominator differs.
TEST(StructureCompat, CrossSymmetryAndBound) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 2000; ++i) {
    auto a = fixtures::random_features(rng, 1, 4);
    auto b = fixtures::random_features(rng, 1, 4);
    const double ab = structure_compat(a, b), ba = structure_compat(b, a);
    EXPECT_NEAR(ab * static_cast<double>(b.size()), ba * static_cast<double>(a.size()), 1e-9);
    const double bound = static_cast<double>(std::min(a.size(), b.size())) / static_cast<double>(b.size());
    EXPECT_LE(std::abs(ab), bound + 1e-12);
    EXPECT_LE(bound, 1.0);
  }
}

TEST(Fading, Values) {
  EXPECT_EQ(fading(0), 1.0);
  EXPECT_NEAR(fading(1, {0.5}), 0.5, 1e-9);
  EXPECT_NEAR(fading(3, {0.5}), 0.125, 1e-9);
  EXPECT_NEAR(fading(2, {0.8}), 0.64, 1e-9);
}

TEST(Fading, StrictlyDecreasingInUnitInterval) {
  for (double g : {0.1, 0.5, 0.9}) {
    double prev = fading(0, {g});
    EXPECT_EQ(prev, 1.0);
    for (std::size_t d = 1; d < 40; ++d) {
      const double cur = fading(d, {g});
      EXPECT_LT(cur, prev);
      EXPECT_GT(cur, 0.0);
      prev = cur;
    }
  }
  EXPECT_THROW(FadingConfig{1.0}.validate(), ContractViolation);
  EXPECT_THROW(FadingConfig{0.0}.validate(), ContractViolation);
}

TEST(WeightedValue, Examples) {
  EXPECT_NEAR(weighted_value(2, "agent", 1, 1.0, {0.5}), 0.5, 1e-9);
  EXPECT_NEAR(weighted_value(1, "agent", 4, 1.0, {0.5}), 0.125, 1e-9);
  EXPECT_THROW(weighted_value(2, "agent", 2, 1.0), ContractViolation);
  EXPECT_EQ(weighted_value(1, "agent", 7, 0.0), 0.0);
}

TEST(WeightedValue, BoundedByFading) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> raw(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> pos(1, 20);
  for (int i = 0; i < 1000; ++i) {
    auto p = pos(rng), c = pos(rng);
    if (p == c) continue;
    const double v = weighted_value(p, "x", c, raw(rng));
    EXPECT_LE(std::abs(v), fading(distance(p, c)));
    EXPECT_LE(fading(distance(p, c)), 1.0);
  }
}
