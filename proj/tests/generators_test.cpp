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

#include "entailgen/generators.hpp"

#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"

namespace entailgen::gen {
namespace {

kb::Rule MakeRule(kb::Source src, kb::Relation rel, std::vector<std::string> x,
                  std::vector<std::string> y, Label g, std::optional<text::Pos> pos = std::nullopt) {
  kb::Rule r;
  r.source = src;
  r.relation = rel;
  r.x = std::move(x);
  r.y = std::move(y);
  r.g = g;
  r.pos = pos;
  return r;
}

const kb::Rule kCarVehicle = MakeRule(kb::Source::kWordNet, kb::Relation::kHypernym, {"car"},
                                      {"vehicle"}, Label::kEntails, text::Pos::kNoun);
const kb::Rule kManPerson = MakeRule(kb::Source::kWordNet, kb::Relation::kHypernym, {"man"},
                                     {"person"}, Label::kEntails, text::Pos::kNoun);

std::string Negated(const std::string& raw, NegateMode mode = NegateMode::kDoes) {
  return negate(text::analyze(raw), mode).render();
}

TEST(ApplyRuleTest, CarBecomesVehicle) {
  auto s = text::analyze("A man is driving the car");
  EXPECT_EQ(transform(s, kCarVehicle).render(), "a man is driving the vehicle");
  EXPECT_EQ(apply_kb_rule(s, kCarVehicle, 5).render(), "a man is driving the vehicle");
}

TEST(ApplyRuleTest, NotApplicableWithoutMatch) {
  auto s = text::analyze("a woman is riding a horse");
  try {
    transform(s, kCarVehicle);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRuleNotApplicable);
  }
  EXPECT_THROW(apply_kb_rule(text::analyze("a man is driving the car"), kCarVehicle, 4), Error);
}

TEST(ApplyRuleTest, OnlyFirstMatchIsReplaced) {
  auto s = text::analyze("the car passed the car");
  EXPECT_EQ(transform(s, MakeRule(kb::Source::kPpdb, kb::Relation::kEquiv, {"car"}, {"auto"},
                                  Label::kEntails))
                .render(),
            "the auto passed the car");
}

TEST(ApplyRuleTest, MultiwordReplacementIsOneContiguousEdit) {
  auto rule = MakeRule(kb::Source::kPpdb, kb::Relation::kEquiv, {"because", "of"}, {"due", "to"},
                       Label::kEntails);
  auto s = text::analyze("the game stopped because of the heavy rain");
  auto out = transform(s, rule).surfaces();
  auto in = s.surfaces();
  // Common prefix and suffix cover everything except x and y.
  std::size_t pre = 0;
  while (pre < in.size() && pre < out.size() && in[pre] == out[pre]) ++pre;
  std::size_t suf = 0;
  while (suf < in.size() - pre && suf < out.size() - pre &&
         in[in.size() - 1 - suf] == out[out.size() - 1 - suf]) {
    ++suf;
  }
  EXPECT_EQ(std::vector<std::string>(in.begin() + pre, in.end() - suf), rule.x);
  EXPECT_EQ(std::vector<std::string>(out.begin() + pre, out.end() - suf), rule.y);
}

TEST(NegateTest, ExamplesFromTheText) {
  EXPECT_EQ(Negated("A person is crossing"), "a person is not crossing");
  EXPECT_EQ(Negated("A person crossed"), "a person did not cross");
}

TEST(NegateTest, TenseForms) {
  EXPECT_EQ(Negated("the dog eats the food"), "the dog does not eat the food");
  EXPECT_EQ(Negated("the dog eats the food", NegateMode::kDo), "the dog do not eat the food");
  EXPECT_EQ(Negated("the dogs run home"), "the dogs do not run home");
  EXPECT_EQ(Negated("the dog ate all of the chickens"), "the dog did not eat all of the chickens");
  EXPECT_EQ(Negated("a dirt bike rider catches some air going off a large hill", NegateMode::kDo),
            "a dirt bike rider do not catch some air going off a large hill");
  EXPECT_EQ(Negated("two men were playing"), "two men were not playing");
  EXPECT_EQ(Negated("she can swim"), "she can not swim");
}

TEST(NegateTest, RefusesAlreadyNegated) {
  for (const char* raw : {"a man is not sleeping", "no dog is barking", "he never ate",
                          "she isn't here"}) {
    try {
      Negated(raw);
      FAIL() << raw;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kRuleNotApplicable);
    }
  }
}

TEST(NegateTest, RefusesVerbless) {
  EXPECT_THROW(Negated("a red car"), Error);
}

TEST(NegateTest, AddsExactlyOneNegationTrigger) {
  for (const char* raw : {"a person is crossing", "a person crossed", "the cat sleeps",
                          "kids play in the park", "a man has eaten", "a woman will dance"}) {
    auto s = text::analyze(raw);
    auto n = negate(s);
    EXPECT_FALSE(text::contains_negation(s));
    EXPECT_TRUE(text::contains_negation(n)) << raw;
    int triggers = 0;
    for (const auto& t : n.tokens) triggers += text::is_negation_trigger(t.surface);
    EXPECT_EQ(triggers, 1) << n.render();
    EXPECT_GE(n.size(), s.size() + 1);
    EXPECT_LE(n.size(), s.size() + 2);
  }
}

TEST(FirstOrderTest, CarExample) {
  Example parent = make_example("A man is driving the car", "A person drives", Label::kEntails, 4);
  auto g = first_order(parent, kCarVehicle, Side::kPremise);
  EXPECT_EQ(g.example.premise.render(), "a man is driving the car");
  EXPECT_EQ(g.example.hypothesis.render(), "a man is driving the vehicle");
  EXPECT_EQ(g.example.label, Label::kEntails);
  EXPECT_EQ(g.parent_id, 4u);
  EXPECT_EQ(g.order, Order::kFirst);
}

TEST(FirstOrderTest, NegateLabelIsContradicts) {
  Example parent = make_example("A person crossed", "A person moved", Label::kEntails);
  auto g = first_order(parent, kb::negate_rule(), Side::kPremise);
  EXPECT_EQ(g.example.hypothesis.render(), "a person did not cross");
  EXPECT_EQ(g.example.label, Label::kContradicts);
  EXPECT_EQ(g.rule.arm.source, kb::Source::kHand);
}

TEST(SecondOrderTest, SoccerGameExample) {
  Example parent = make_example("A man is playing soccer", "A man is playing a game", Label::kEntails);
  auto g = second_order(parent, kManPerson, Order::kSecondHyp);
  ASSERT_TRUE(g.has_value());
  EXPECT_EQ(g->example.premise.render(), "a man is playing soccer");
  EXPECT_EQ(g->example.hypothesis.render(), "a person is playing a game");
  EXPECT_EQ(g->example.label, Label::kEntails);
  // The premise-side composition of two entailments is undetermined.
  EXPECT_FALSE(second_order(parent, kManPerson, Order::kSecondPrem).has_value());
}

TEST(SecondOrderTest, LabelsAgreeWithComposition) {
  const std::vector<kb::Rule> rules = {
      kManPerson,
      MakeRule(kb::Source::kWordNet, kb::Relation::kAntonym, {"man"}, {"woman"}, Label::kContradicts),
      MakeRule(kb::Source::kSick, kb::Relation::kSickLabeled, {"man"}, {"boy"}, Label::kNeutral),
      kb::negate_rule(),
  };
  for (Label c : kAllLabels) {
    Example parent = make_example("a man is sitting", "a man is resting", c);
    for (const auto& r : rules) {
      auto hyp = second_order(parent, r, Order::kSecondHyp);
      auto prem = second_order(parent, r, Order::kSecondPrem);
      const auto oplus = algebra::compose_oplus(c, r.g);
      const auto otimes = algebra::compose_otimes(c, r.g);
      ASSERT_EQ(hyp.has_value(), oplus.has_value());
      ASSERT_EQ(prem.has_value(), otimes.has_value());
      if (hyp) {
        EXPECT_EQ(hyp->example.label, *oplus);
        EXPECT_EQ(hyp->example.premise.render(), parent.premise.render());
      }
      if (prem) {
        EXPECT_EQ(prem->example.label, *otimes);
        EXPECT_EQ(prem->example.hypothesis.render(), parent.hypothesis.render());
      }
    }
  }
}

TEST(SecondOrderTest, RejectsFirstOrderKind) {
  Example parent = make_example("a man is sitting", "a man sits", Label::kEntails);
  EXPECT_THROW(second_order(parent, kManPerson, Order::kFirst), Error);
}

}  // namespace
}  // namespace entailgen::gen
