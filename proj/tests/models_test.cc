/*
 * Copyright 2026 The agreesim Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "agreesim/models.h"

#include <algorithm>

#include "agreesim/errors.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "oracles.h"

namespace agreesim {
namespace {

using ::testing::HasSubstr;

Dataset FromLabels(const std::vector<std::vector<int>>& labels) {
  std::vector<Document> docs;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    docs.push_back({"d" + std::to_string(i + 1), labels[i]});
  }
  return Dataset(ControversyScheme(), std::move(docs));
}

Document Doc(std::vector<int> labels) { return {"x", std::move(labels)}; }

Dataset RandomDataset(Rng& rng, std::size_t n_docs) {
  std::vector<std::vector<int>> labels(n_docs);
  for (auto& doc : labels) {
    doc.resize(1 + rng.UniformIndex(5));
    for (int& v : doc) v = static_cast<int>(rng.UniformIndex(4)) - 1;
  }
  return FromLabels(labels);
}

ConflationMatrix IdentityMatrix() {
  ConflationMatrix::Counts counts(4, std::vector<uint64_t>(4, 0));
  for (int i = 0; i < 4; ++i) counts[i][i] = 10;
  return ConflationMatrix(ControversyScheme(), counts);
}

TEST(LeafModels, Average) {
  EXPECT_DOUBLE_EQ(AverageLabel(Doc({2, 2, 2})), 2.0);
  EXPECT_DOUBLE_EQ(AverageLabel(Doc({2, 1, -1})), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(AverageLabel(Doc({0, -1})), -0.5);
}

TEST(LeafModels, Max) {
  EXPECT_EQ(MaxLabel(Doc({2, 1, -1})), 2);
  EXPECT_EQ(MaxLabel(Doc({0, -1})), 0);
  EXPECT_EQ(MaxLabel(Doc({-1})), -1);
}

TEST(LeafModels, SampleFrequencies) {
  Rng rng(8);
  constexpr int kDraws = 100000;
  int twos = 0, ones = 0;
  for (int i = 0; i < kDraws; ++i) {
    if (SampleLabel(Doc({2, 2, -1}), rng) == 2) ++twos;
    if (SampleLabel(Doc({1, -1}), rng) == 1) ++ones;
  }
  EXPECT_NEAR(twos / static_cast<double>(kDraws), 2.0 / 3.0, 0.01);
  EXPECT_NEAR(ones / static_cast<double>(kDraws), 0.5, 0.01);
}

TEST(LeafModels, CanonicalTruth) {
  const Assignment a =
      CanonicalTruth(FromLabels({{2, 1, -1}, {0, -1}, {1, 0}, {-1, -1}}));
  // Averages 0.667, -0.5, 0.5 and -1 against threshold 0.5.
  EXPECT_EQ(a.values, (std::vector<double>{1, 0, 1, 0}));
  EXPECT_TRUE(a.integral_only);
}

TEST(LeafModels, Properties) {
  Rng rng(99);
  const Dataset data = RandomDataset(rng, 200);
  const ModelOptions options;
  const Assignment avg = ApplyModel(ModelSpec::Average(), data, options, rng);
  const Assignment max = ApplyModel(ModelSpec::Max(), data, options, rng);
  const Assignment smp = ApplyModel(ModelSpec::Sample(), data, options, rng);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& labels = data[i].labels;
    const auto [lo, hi] = std::minmax_element(labels.begin(), labels.end());
    EXPECT_GE(avg.values[i], *lo);
    EXPECT_LE(avg.values[i], *hi);
    for (int v : labels) EXPECT_GE(max.values[i], v);
    EXPECT_NE(std::find(labels.begin(), labels.end(),
                        static_cast<int>(smp.values[i])),
              labels.end());
  }
  EXPECT_TRUE(max.integral_only);
  EXPECT_TRUE(smp.integral_only);
}

TEST(FlipLabel, Extremes) {
  const LabelScheme binary({{0, "no"}, {1, "yes"}}, 0.5);
  Rng rng(4);
  for (int i = 0; i < 1000; ++i) {
    ASSERT_EQ(FlipLabel(1, 1.0, ControversyScheme(), rng), 1);
    ASSERT_EQ(FlipLabel(1, 0.0, binary, rng), 0);
    ASSERT_NE(FlipLabel(2, 0.0, ControversyScheme(), rng), 2);
  }
}

TEST(FlipLabel, KeepRate) {
  Rng rng(643);
  constexpr int kDraws = 100000;
  int kept = 0;
  std::vector<int> moved(4, 0);
  const LabelScheme scheme = ControversyScheme();
  for (int i = 0; i < kDraws; ++i) {
    const int v = FlipLabel(2, 0.643, scheme, rng);
    if (v == 2) ++kept;
    ++moved[*scheme.IndexOf(v)];
  }
  EXPECT_NEAR(kept / static_cast<double>(kDraws), 0.643, 0.005);
  // Flipped mass splits evenly among the other three labels.
  for (int v : {-1, 0, 1}) {
    EXPECT_NEAR(moved[*scheme.IndexOf(v)] / static_cast<double>(kDraws),
                0.357 / 3, 0.005);
  }
}

TEST(CompositeModels, FlipOneIsBase) {
  Rng data_rng(1);
  const Dataset data = RandomDataset(data_rng, 50);
  for (FlipSpace space : {FlipSpace::kBinary, FlipSpace::kOrdinal}) {
    ModelOptions options;
    options.flip_space = space;
    Rng a(5), b(5);
    const auto base = ApplyModel(ModelSpec::Max(), data, options, a);
    const auto flipped = ApplyModel(
        ModelSpec::Flip(1.0, ModelSpec::Max()), data, options, b);
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (space == FlipSpace::kOrdinal) {
        EXPECT_EQ(flipped.values[i], base.values[i]);
      } else {
        EXPECT_EQ(flipped.values[i] >= 0.5, base.values[i] >= 0.5);
      }
    }
  }
}

TEST(CompositeModels, BinaryFlipOverTruthUsesRepresentatives) {
  const Dataset data = FromLabels({{2, 2}, {-1, -1}});
  Rng rng(2);
  const auto never = ApplyModel(ModelSpec::Flip(0.0, ModelSpec::CanonicalTruth()),
                                data, {}, rng);
  EXPECT_EQ(never.values, (std::vector<double>{0, 1}));
  const auto avg = ApplyModel(ModelSpec::Flip(1.0, ModelSpec::Average()), data,
                              {}, rng);
  EXPECT_EQ(avg.values, (std::vector<double>{1, 0}));
}

TEST(CompositeModels, ConflateIdentityIsBase) {
  Rng data_rng(3);
  const Dataset data = RandomDataset(data_rng, 60);
  const ConflationMatrix identity = IdentityMatrix();
  ModelOptions options;
  options.matrix = &identity;
  Rng a(6), b(6);
  const auto base = ApplyModel(ModelSpec::Max(), data, options, a);
  const auto conflated =
      ApplyModel(ModelSpec::Conflate(ModelSpec::Max()), data, options, b);
  EXPECT_EQ(conflated.values, base.values);
}

TEST(CompositeModels, Deterministic) {
  Rng data_rng(4);
  const Dataset data = RandomDataset(data_rng, 80);
  const ConflationMatrix m = ControversyReferenceMatrix();
  ModelOptions options;
  options.matrix = &m;
  const ModelSpec spec =
      ParseModelSpec("flip(0.7, conflate(sample))");
  Rng a(77), b(77);
  EXPECT_EQ(ApplyModel(spec, data, options, a).values,
            ApplyModel(spec, data, options, b).values);
}

TEST(ValidateModel, ConfigErrors) {
  const LabelScheme scheme = ControversyScheme();
  EXPECT_THROW(
      ValidateModel(ModelSpec::Conflate(ModelSpec::Sample()), scheme, {}),
      ConfigError);
  const ConflationMatrix m = ControversyReferenceMatrix();
  ModelOptions options;
  options.matrix = &m;
  EXPECT_THROW(
      ValidateModel(ModelSpec::Conflate(ModelSpec::Average()), scheme, options),
      ConfigError);
  options.flip_space = FlipSpace::kOrdinal;
  EXPECT_THROW(ValidateModel(ModelSpec::Flip(0.5, ModelSpec::Average()), scheme,
                             options),
               ConfigError);
  EXPECT_NO_THROW(ValidateModel(ModelSpec::Flip(0.5, ModelSpec::Max()), scheme,
                                options));
  const LabelScheme other({{0, "no"}, {1, "yes"}}, 0.5);
  EXPECT_THROW(
      ValidateModel(ModelSpec::Conflate(ModelSpec::Sample()), other, options),
      ConfigError);
  EXPECT_THROW(ModelSpec::Flip(1.5, ModelSpec::Sample()), ValidationError);
}

TEST(ParseModelSpec, RoundTripsAndAliases) {
  EXPECT_EQ(ParseModelSpec("  SAMPLE "), ModelSpec::Sample());
  EXPECT_EQ(ParseModelSpec("mean"), ModelSpec::Average());
  EXPECT_EQ(ParseModelSpec("canonical"), ModelSpec::CanonicalTruth());
  const ModelSpec spec = ParseModelSpec("Flip( 0.643 , Conflate(truth))");
  EXPECT_EQ(spec.kind(), ModelSpec::Kind::kFlip);
  EXPECT_DOUBLE_EQ(spec.keep_probability(), 0.643);
  EXPECT_EQ(spec.base().kind(), ModelSpec::Kind::kConflate);
  EXPECT_EQ(spec.Depth(), 3);
  EXPECT_TRUE(spec.RequiresMatrix());
  EXPECT_EQ(ParseModelSpec(spec.ToString()), spec);
  EXPECT_EQ(ModelSpec::Flip(0.643, ModelSpec::CanonicalTruth()).ToString(),
            "flip(0.643,truth)");
}

TEST(ParseModelSpec, ErrorsNameTheToken) {
  try {
    ParseModelSpec("conflate(wibble)");
    FAIL() << "expected an error";
  } catch (const ParseError& e) {
    EXPECT_THAT(e.what(), HasSubstr("wibble"));
  }
  EXPECT_THROW(ParseModelSpec(""), ParseError);
  EXPECT_THROW(ParseModelSpec("sample)"), ParseError);
  EXPECT_THROW(ParseModelSpec("flip(sample)"), ParseError);
  EXPECT_THROW(ParseModelSpec("flip(2, sample)"), ParseError);
  std::string deep = "sample";
  for (int i = 0; i < kMaxModelDepth + 1; ++i) deep = "conflate(" + deep + ")";
  EXPECT_THROW(ParseModelSpec(deep), ParseError);
}

}  // namespace
}  // namespace agreesim
