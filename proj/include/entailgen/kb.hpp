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

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "entailgen/error.hpp"
#include "entailgen/label.hpp"
#include "entailgen/text.hpp"

namespace entailgen::kb {

enum class Source { kWordNet, kPpdb, kSick, kHand };
enum class Relation { kHypernym, kSynonym, kAntonym, kEquiv, kSickLabeled, kNegate };

inline constexpr std::array<Source, 4> kAllSources = {Source::kWordNet, Source::kPpdb,
                                                      Source::kSick, Source::kHand};
inline constexpr std::array<Relation, 6> kAllRelations = {
    Relation::kHypernym, Relation::kSynonym,     Relation::kAntonym,
    Relation::kEquiv,    Relation::kSickLabeled, Relation::kNegate};

inline constexpr std::size_t kMaxNgram = 5;

inline std::string_view source_name(Source s) {
  switch (s) {
    case Source::kWordNet: return "wordnet";
    case Source::kPpdb: return "ppdb";
    case Source::kSick: return "sick";
    case Source::kHand: return "hand";
  }
  return "?";
}

inline Source parse_source(std::string_view name) {
  for (Source s : kAllSources) {
    if (source_name(s) == name) return s;
  }
  throw Error(ErrorCode::kConfig, "unknown rule source \"" + std::string(name) + "\"");
}

inline std::string_view relation_name(Relation r) {
  switch (r) {
    case Relation::kHypernym: return "hypernym";
    case Relation::kSynonym: return "synonym";
    case Relation::kAntonym: return "antonym";
    case Relation::kEquiv: return "equiv";
    case Relation::kSickLabeled: return "sick";
    case Relation::kNegate: return "negate";
  }
  return "?";
}

inline std::optional<Relation> parse_relation(std::string_view name) {
  if (name == "hyper") return Relation::kHypernym;
  if (name == "syno") return Relation::kSynonym;
  if (name == "anto") return Relation::kAntonym;
  if (name == "sick_labeled") return Relation::kSickLabeled;
  for (Relation r : kAllRelations) {
    if (relation_name(r) == name) return r;
  }
  return std::nullopt;
}

// Relations a source may carry.
inline bool source_allows(Source s, Relation r) {
  switch (s) {
    case Source::kWordNet:
      return r == Relation::kHypernym || r == Relation::kSynonym || r == Relation::kAntonym;
    case Source::kPpdb: return r == Relation::kEquiv;
    case Source::kSick: return r == Relation::kSickLabeled;
    case Source::kHand: return r == Relation::kNegate;
  }
  return false;
}

// Generated label implied by a relation. SICK rules carry their own.
inline std::optional<Label> implied_label(Relation r) {
  switch (r) {
    case Relation::kHypernym:
    case Relation::kSynonym:
    case Relation::kEquiv: return Label::kEntails;
    case Relation::kAntonym:
    case Relation::kNegate: return Label::kContradicts;
    case Relation::kSickLabeled: return std::nullopt;
  }
  return std::nullopt;
}

// A (source, relation) grouping of rules; the unit the generator policy samples.
struct Arm {
  Source source;
  Relation relation;

  friend auto operator<=>(const Arm&, const Arm&) = default;
};

inline constexpr std::array<Arm, 6> kArmCatalog = {{
    {Source::kWordNet, Relation::kHypernym},
    {Source::kWordNet, Relation::kSynonym},
    {Source::kWordNet, Relation::kAntonym},
    {Source::kPpdb, Relation::kEquiv},
    {Source::kSick, Relation::kSickLabeled},
    {Source::kHand, Relation::kNegate},
}};

inline std::size_t arm_index(Arm arm) {
  for (std::size_t i = 0; i < kArmCatalog.size(); ++i) {
    if (kArmCatalog[i] == arm) return i;
  }
  throw Error(ErrorCode::kConfig, "arm not in catalog");
}

inline std::string arm_name(Arm arm) {
  return std::string(source_name(arm.source)) + ":" + std::string(relation_name(arm.relation));
}

struct Rule {
  Source source = Source::kWordNet;
  Relation relation = Relation::kHypernym;
  std::vector<std::string> x;
  std::vector<std::string> y;
  std::optional<text::Pos> pos;
  Label g = Label::kEntails;

  Arm arm() const { return {source, relation}; }

  std::string describe() const {
    auto join = [](const std::vector<std::string>& v) {
      std::string out;
      for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + v[i];
      return out;
    };
    if (relation == Relation::kNegate) return "hand:negate";
    return arm_name(arm()) + ":" + join(x) + "->" + join(y);
  }

  auto key() const {
    return std::tuple(source, relation, x, y, pos.has_value() ? static_cast<int>(*pos) : -1, g);
  }
  friend bool operator==(const Rule& a, const Rule& b) { return a.key() == b.key(); }
};

inline const Rule& negate_rule() {
  static const Rule r{Source::kHand, Relation::kNegate, {}, {}, std::nullopt,
                      Label::kContradicts};
  return r;
}

struct LoadReport {
  std::size_t data_lines = 0;
  std::size_t malformed = 0;
  std::size_t duplicates = 0;
  std::size_t rules = 0;
};

struct RuleFragment {
  Source source = Source::kWordNet;
  std::vector<Rule> rules;
  LoadReport report;
};

namespace detail {

inline std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> cols;
  std::size_t start = 0;
  for (;;) {
    std::size_t tab = line.find('\t', start);
    cols.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return cols;
}

inline std::optional<std::vector<std::string>> ngram(const std::string& field) {
  try {
    auto toks = text::tokenize(field).surfaces();
    if (toks.empty() || toks.size() > kMaxNgram) return std::nullopt;
    return toks;
  } catch (const Error&) {
    return std::nullopt;
  }
}

inline std::optional<Rule> parse_rule_line(const std::string& line, Source source) {
  auto cols = split_tabs(line);
  while (!cols.empty() && cols.back().empty() && cols.size() > 3) cols.pop_back();
  if (cols.size() < 3 || cols.size() > 5) return std::nullopt;
  auto relation = parse_relation(cols[0]);
  if (!relation || !source_allows(source, *relation)) return std::nullopt;
  Rule r;
  r.source = source;
  r.relation = *relation;
  auto x = ngram(cols[1]);
  auto y = ngram(cols[2]);
  if (!x || !y || *x == *y) return std::nullopt;
  r.x = std::move(*x);
  r.y = std::move(*y);
  if (cols.size() >= 4 && !cols[3].empty() && cols[3] != "-") {
    auto pos = text::parse_pos(cols[3]);
    if (!pos || (*pos != text::Pos::kNoun && *pos != text::Pos::kVerb)) return std::nullopt;
    // SICK patterns carry no positional or POS information.
    if (source != Source::kSick) r.pos = pos;
  }
  if (auto g = implied_label(r.relation)) {
    if (cols.size() == 5 && !cols[4].empty()) return std::nullopt;
    r.g = *g;
  } else {
    if (cols.size() < 5 || cols[4].empty()) return std::nullopt;
    try {
      r.g = parse_label(cols[4]);
    } catch (const Error&) {
      return std::nullopt;
    }
  }
  return r;
}

}  // namespace detail

// Parses `relation<TAB>x<TAB>y<TAB>[pos]<TAB>[label]` lines. Blank and
// '#'-prefixed lines are ignored; malformed lines are counted and skipped.
inline RuleFragment parse_rules(std::istream& in, Source source, const std::string& name = "<stream>") {
  RuleFragment frag;
  frag.source = source;
  std::set<decltype(std::declval<Rule>().key())> seen;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    ++frag.report.data_lines;
    auto rule = detail::parse_rule_line(line, source);
    if (!rule) {
      ++frag.report.malformed;
      continue;
    }
    if (!seen.insert(rule->key()).second) {
      ++frag.report.duplicates;
      continue;
    }
    frag.rules.push_back(std::move(*rule));
  }
  if (frag.report.data_lines > 0 && 2 * frag.report.malformed > frag.report.data_lines) {
    throw Error(ErrorCode::kFormat, name + ": " + std::to_string(frag.report.malformed) + " of " +
                                        std::to_string(frag.report.data_lines) +
                                        " lines malformed");
  }
  frag.report.rules = frag.rules.size();
  return frag;
}

inline RuleFragment load_rules(const std::filesystem::path& path, Source source) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read rule file " + path.string());
  return parse_rules(in, source, path.string());
}

struct RuleMatch {
  std::size_t rule_id = 0;
  std::size_t start = 0;

  friend auto operator<=>(const RuleMatch&, const RuleMatch&) = default;
};

struct StoreStats {
  std::map<Source, std::size_t> per_source;
  std::map<Relation, std::size_t> per_relation;
  std::size_t total = 0;
};

// Immutable indexed rule collection. Rules are kept in canonical order so the
// store does not depend on input line order.
class RuleStore {
 public:
  RuleStore() = default;

  static RuleStore build(std::vector<RuleFragment> fragments) {
    RuleStore store;
    std::set<decltype(std::declval<Rule>().key())> seen;
    for (auto& frag : fragments) {
      for (auto& r : frag.rules) {
        if (seen.insert(r.key()).second) store.rules_.push_back(std::move(r));
      }
    }
    std::sort(store.rules_.begin(), store.rules_.end(),
              [](const Rule& a, const Rule& b) { return a.key() < b.key(); });
    for (std::size_t id = 0; id < store.rules_.size(); ++id) {
      store.index_[store.rules_[id].x.front()].push_back(id);
    }
    return store;
  }

  std::size_t size() const { return rules_.size(); }
  bool empty() const { return rules_.empty(); }
  const Rule& rule(std::size_t id) const { return rules_.at(id); }
  const std::vector<Rule>& rules() const { return rules_; }

  // Rule ids whose x starts with `first_token`, ascending.
  const std::vector<std::size_t>& candidates(const std::string& first_token) const {
    static const std::vector<std::size_t> kNone;
    auto it = index_.find(first_token);
    return it == index_.end() ? kNone : it->second;
  }

 private:
  std::vector<Rule> rules_;
  std::unordered_map<std::string, std::vector<std::size_t>> index_;
};

// True if rule.x occurs at `start` and the first token satisfies the POS gate.
inline bool matches_at(const text::Sentence& s, const Rule& rule, std::size_t start) {
  if (rule.x.empty() || start + rule.x.size() > s.size()) return false;
  for (std::size_t k = 0; k < rule.x.size(); ++k) {
    if (s.tokens[start + k].surface != rule.x[k]) return false;
  }
  return !rule.pos || s.tokens[start].pos == *rule.pos;
}

// All (rule, position) matches, ordered by rule id then position.
inline std::vector<RuleMatch> applicable_rules(const text::Sentence& s, const RuleStore& store) {
  std::vector<RuleMatch> out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t id : store.candidates(s.tokens[i].surface)) {
      if (matches_at(s, store.rule(id), i)) out.push_back({id, i});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline StoreStats store_stats(const RuleStore& store) {
  StoreStats st;
  for (Source s : kAllSources) st.per_source[s] = 0;
  for (Relation r : kAllRelations) st.per_relation[r] = 0;
  for (const auto& r : store.rules()) {
    ++st.per_source[r.source];
    ++st.per_relation[r.relation];
  }
  st.total = store.size();
  return st;
}

}  // namespace entailgen::kb
