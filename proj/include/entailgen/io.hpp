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

#include <map>
#include <string>

#include <json.hpp>

#include "entailgen/corpus.hpp"
#include "entailgen/discriminator.hpp"
#include "entailgen/generators.hpp"
#include "entailgen/kb.hpp"
#include "entailgen/sampler.hpp"

namespace entailgen::io {

using nlohmann::json;

// {"premise","hypothesis","label","parent_id","rule","order","side"}
inline json generated_json(const gen::GeneratedExample& g, LabelScheme scheme) {
  json j;
  j["premise"] = g.example.premise.render();
  j["hypothesis"] = g.example.hypothesis.render();
  j["label"] = std::string(label_name(g.example.label, scheme));
  j["parent_id"] = g.parent_id;
  j["rule"] = g.rule.name;
  j["order"] = std::string(gen::order_name(g.order));
  j["side"] = std::string(gen::side_name(g.side));
  return j;
}

inline json drops_json(const sampler::DropCounts& d) {
  return {{"undefined_label", d.undefined_label},
          {"projection", d.projection},
          {"over_quota", d.over_quota},
          {"not_applicable", d.not_applicable},
          {"sentences_without_rules", d.sentences_without_rules}};
}

inline json store_stats_json(const kb::StoreStats& st) {
  json j;
  for (const auto& [s, n] : st.per_source) j["per_source"][std::string(kb::source_name(s))] = n;
  for (const auto& [r, n] : st.per_relation) {
    j["per_relation"][std::string(kb::relation_name(r))] = n;
  }
  j["total"] = st.total;
  return j;
}

inline json load_report_json(const kb::LoadReport& r) {
  return {{"data_lines", r.data_lines},
          {"malformed", r.malformed},
          {"duplicates", r.duplicates},
          {"rules", r.rules}};
}

inline json ingest_stats_json(const corpus::Corpus& c) {
  json j{{"rows", c.stats.rows},
         {"examples", c.stats.examples},
         {"no_gold_label", c.stats.no_gold_label},
         {"malformed", c.stats.malformed},
         {"scheme", std::string(scheme_name(c.scheme))}};
  const auto counts = corpus::label_counts(c);
  for (Label l : kAllLabels) {
    if (class_index(l, c.scheme)) j["labels"][std::string(label_name(l, c.scheme))] = counts[label_index(l)];
  }
  return j;
}

inline json nan_to_null(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

inline json eval_json(const disc::EvalReport& r, LabelScheme scheme) {
  json j{{"count", r.count}, {"accuracy", r.accuracy}, {"mean_loss", r.mean_loss}};
  j["per_label"] = json::array();
  for (std::size_t c = 0; c < r.per_class_count.size(); ++c) {
    j["per_label"].push_back({{"label", std::string(label_name(class_label(c, scheme), scheme))},
                              {"count", r.per_class_count[c]},
                              {"accuracy", nan_to_null(r.per_class_accuracy[c])}});
  }
  return j;
}

}  // namespace entailgen::io
