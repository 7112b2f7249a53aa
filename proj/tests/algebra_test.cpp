//
// Copyright 2026 The entailgen Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "entailgen/label.hpp"

#include <map>
#include <utility>

#include "gtest/gtest.h"

namespace entailgen {
namespace {

constexpr Label E = Label::kEntails;
constexpr Label C = Label::kContradicts;
constexpr Label N = Label::kNeutral;
constexpr Composition U = std::nullopt;

// Both halves of the composition table, written out row by row.
const std::map<std::pair<Label, Label>, std::pair<Composition, Composition>> kTable = {
    {{E, E}, {E, U}}, {{E, C}, {C, U}}, {{E, N}, {N, N}},
    {{C, E}, {U, U}}, {{C, C}, {U, U}}, {{C, N}, {N, N}},
    {{N, E}, {N, N}}, {{N, C}, {N, N}}, {{N, N}, {N, N}},
};

TEST(AlgebraTest, AllEighteenEntries) {
  ASSERT_EQ(kTable.size(), 9u);
  int undefined = 0;
  for (const auto& [args, expected] : kTable) {
    EXPECT_EQ(algebra::compose_oplus(args.first, args.second), expected.first);
    EXPECT_EQ(algebra::compose_otimes(args.first, args.second), expected.second);
    undefined += !expected.first + !expected.second;
  }
  EXPECT_EQ(undefined, 6);
}

TEST(AlgebraTest, NamedExamples) {
  EXPECT_EQ(algebra::compose_oplus(E, E), E);
  EXPECT_EQ(algebra::compose_oplus(C, C), U);
  EXPECT_EQ(algebra::compose_oplus(N, C), N);
  EXPECT_EQ(algebra::compose_otimes(E, N), N);
  EXPECT_EQ(algebra::compose_otimes(E, E), U);
  EXPECT_EQ(algebra::compose_otimes(N, N), N);
}

TEST(AlgebraTest, NeutralAbsorbs) {
  for (Label x : kAllLabels) {
    EXPECT_EQ(algebra::compose_oplus(N, x), N);
    EXPECT_EQ(algebra::compose_otimes(N, x), N);
    EXPECT_EQ(algebra::compose_oplus(x, N), N);
    EXPECT_EQ(algebra::compose_otimes(x, N), N);
  }
}

TEST(AlgebraTest, OplusWithEntailsIsIdentity) {
  for (Label g : kAllLabels) EXPECT_EQ(algebra::compose_oplus(E, g), g);
}

TEST(ProjectionTest, ThreeClassIsIdentity) {
  for (Label l : kAllLabels) EXPECT_EQ(algebra::project_label(l, LabelScheme::kThreeClass), l);
}

TEST(ProjectionTest, SciTail) {
  const auto s = LabelScheme::kSciTailTwoClass;
  EXPECT_EQ(algebra::project_label(E, s), E);
  EXPECT_EQ(algebra::project_label(C, s), C);
  EXPECT_EQ(label_name(C, s), "neutral");
  EXPECT_EQ(algebra::project_label(N, s), U);
  EXPECT_EQ(algebra::project_label(C, s, {.scitail_keep_contradictions = false}), U);
}

TEST(LabelNamesTest, RoundTripPerScheme) {
  for (Label l : kAllLabels) EXPECT_EQ(parse_label(label_name(l)), l);
  EXPECT_EQ(parse_label("neutral", LabelScheme::kSciTailTwoClass), C);
  EXPECT_EQ(parse_label("entailment"), E);
  EXPECT_EQ(parse_label("contradiction"), C);
  EXPECT_THROW(parse_label("-"), Error);
  EXPECT_EQ(class_index(N, LabelScheme::kSciTailTwoClass), std::nullopt);
  EXPECT_EQ(class_label(1, LabelScheme::kSciTailTwoClass), C);
}

}  // namespace
}  // namespace entailgen
