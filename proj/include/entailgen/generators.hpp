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

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "entailgen/error.hpp"
#include "entailgen/kb.hpp"
#include "entailgen/label.hpp"
#include "entailgen/text.hpp"

namespace entailgen {

struct Example {
  text::Sentence premise;
  text::Sentence hypothesis;
  Label label = Label::kNeutral;
  std::size_t id = 0;
};

inline Example make_example(std::string_view premise, std::string_view hypothesis, Label label,
                            std::size_t id = 0) {
  return Example{text::analyze(premise), text::analyze(hypothesis), label, id};
}

namespace gen {

enum class Order { kFirst, kSecondHyp, kSecondPrem };
enum class Side { kPremise, kHypothesis };

// Auxiliary used when negating a third-person present verb. kDo reproduces
// surface forms such as "a rider do not catch".
enum class NegateMode { kDoes, kDo };

inline std::string_view order_name(Order o) {
  switch (o) {
    case Order::kFirst: return "first";
    case Order::kSecondHyp: return "second_hyp";
    case Order::kSecondPrem: return "second_prem";
  }
  return "?";
}

inline std::string_view side_name(Side s) {
  return s == Side::kPremise ? "premise" : "hypothesis";
}

struct RuleRef {
  kb::Arm arm{kb::Source::kHand, kb::Relation::kNegate};
  std::optional<std::size_t> rule_id;  // index into the RuleStore; empty for hand rules
  std::string name;
  Label g = Label::kContradicts;
};

struct GeneratedExample {
  Example example;
  std::size_t parent_id = 0;
  RuleRef rule;
  Order order = Order::kFirst;
  Side side = Side::kPremise;
};

struct Options {
  NegateMode negate_mode = NegateMode::kDoes;
};

namespace detail {

inline text::Sentence retag(std::vector<std::string> surfaces) {
  return text::from_surfaces(surfaces);
}

}  // namespace detail

// Replaces rule.x at match_pos with rule.y; every other token is unchanged.
inline text::Sentence apply_kb_rule(const text::Sentence& s, const kb::Rule& rule,
                                    std::size_t match_pos) {
  if (!kb::matches_at(s, rule, match_pos)) {
    throw Error(ErrorCode::kRuleNotApplicable,
                rule.describe() + " at " + std::to_string(match_pos) + " in \"" + s.render() + "\"");
  }
  auto toks = s.surfaces();
  std::vector<std::string> out(toks.begin(), toks.begin() + static_cast<std::ptrdiff_t>(match_pos));
  out.insert(out.end(), rule.y.begin(), rule.y.end());
  out.insert(out.end(), toks.begin() + static_cast<std::ptrdiff_t>(match_pos + rule.x.size()),
             toks.end());
  return detail::retag(std::move(out));
}

// First position where `rule` applies, if any.
inline std::optional<std::size_t> first_match(const text::Sentence& s, const kb::Rule& rule) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (kb::matches_at(s, rule, i)) return i;
  }
  return std::nullopt;
}

// Position of the verb NEGATE acts on and whether "not" goes directly after it.
struct NegationSite {
  std::size_t index = 0;
  bool insert_after = false;
};

inline std::optional<NegationSite> negation_site(const text::Sentence& s) {
  using text::Pos;
  const auto& toks = s.tokens;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (toks[i].pos != Pos::kVerb) continue;
    const std::string_view w = toks[i].surface;
    if (text::detail::be_forms().contains(w) || text::detail::modal_forms().contains(w)) {
      return NegationSite{i, true};
    }
    const bool aux_like = w == "do" || w == "does" || w == "did" || w == "have" ||
                          w == "has" || w == "had";
    if (aux_like && i + 1 < toks.size() && toks[i + 1].pos == Pos::kVerb) {
      return NegationSite{i, true};
    }
    return NegationSite{i, false};
  }
  return std::nullopt;
}

// Inserts "not" after the first be-verb (or modal); otherwise rewrites the
// first main verb as "did/does/do not <lemma>" by tense.
inline text::Sentence negate(const text::Sentence& s, NegateMode mode = NegateMode::kDoes) {
  if (text::contains_negation(s)) {
    throw Error(ErrorCode::kRuleNotApplicable, "already negated: \"" + s.render() + "\"");
  }
  auto site = negation_site(s);
  if (!site) throw Error(ErrorCode::kRuleNotApplicable, "no verb in \"" + s.render() + "\"");
  auto toks = s.surfaces();
  const auto at = toks.begin() + static_cast<std::ptrdiff_t>(site->index);
  if (site->insert_after) {
    toks.insert(at + 1, "not");
    return detail::retag(std::move(toks));
  }
  const text::Token& verb = s.tokens[site->index];
  std::string aux;
  switch (text::verb_tense(verb)) {
    case text::Tense::kPast: aux = "did"; break;
    case text::Tense::kThirdPersonPresent: aux = mode == NegateMode::kDo ? "do" : "does"; break;
    case text::Tense::kPresent:
    case text::Tense::kBeForm: aux = "do"; break;
  }
  const std::string lemma = text::lemmatize(verb);
  *at = lemma;
  toks.insert(toks.begin() + static_cast<std::ptrdiff_t>(site->index), {aux, "not"});
  return detail::retag(std::move(toks));
}

// f_rho(s): applies a KB rule at its first match, or NEGATE for hand rules.
inline text::Sentence transform(const text::Sentence& s, const kb::Rule& rule,
                                const Options& opts = {}) {
  if (rule.relation == kb::Relation::kNegate) return negate(s, opts.negate_mode);
  auto pos = first_match(s, rule);
  if (!pos) {
    throw Error(ErrorCode::kRuleNotApplicable, rule.describe() + " in \"" + s.render() + "\"");
  }
  return apply_kb_rule(s, rule, *pos);
}

inline RuleRef make_ref(const kb::Rule& rule, std::optional<std::size_t> rule_id) {
  return RuleRef{rule.arm(), rule_id, rule.describe(), rule.g};
}

// (s, f(s), g) for s the chosen side of the parent.
inline GeneratedExample first_order(const Example& parent, const kb::Rule& rule, Side side,
                                    const Options& opts = {},
                                    std::optional<std::size_t> rule_id = std::nullopt) {
  const text::Sentence& s = side == Side::kPremise ? parent.premise : parent.hypothesis;
  GeneratedExample out;
  out.example = Example{s, transform(s, rule, opts), rule.g, 0};
  out.parent_id = parent.id;
  out.rule = make_ref(rule, rule_id);
  out.order = Order::kFirst;
  out.side = side;
  return out;
}

// kSecondHyp: (p, f(h), oplus(c, g)); kSecondPrem: (f(p), h, otimes(c, g)).
// Returns nullopt when the composed label is undefined.
inline std::optional<GeneratedExample> second_order(const Example& parent, const kb::Rule& rule,
                                                    Order kind, const Options& opts = {},
                                                    std::optional<std::size_t> rule_id = std::nullopt) {
  if (kind == Order::kFirst) {
    throw Error(ErrorCode::kConfig, "second_order called with first-order kind");
  }
  GeneratedExample out;
  out.parent_id = parent.id;
  out.rule = make_ref(rule, rule_id);
  out.order = kind;
  if (kind == Order::kSecondHyp) {
    text::Sentence h2 = transform(parent.hypothesis, rule, opts);
    auto label = algebra::compose_oplus(parent.label, rule.g);
    if (!label) return std::nullopt;
    out.side = Side::kHypothesis;
    out.example = Example{parent.premise, std::move(h2), *label, 0};
  } else {
    text::Sentence p2 = transform(parent.premise, rule, opts);
    auto label = algebra::compose_otimes(parent.label, rule.g);
    if (!label) return std::nullopt;
    out.side = Side::kPremise;
    out.example = Example{std::move(p2), parent.hypothesis, *label, 0};
  }
  return out;
}

}  // namespace gen
}  // namespace entailgen
