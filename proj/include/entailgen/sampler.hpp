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
#include <cmath>
#include <cstdint>
#include <future>
#include <numeric>
#include <span>
#include <vector>

#include "entailgen/generators.hpp"
#include "entailgen/kb.hpp"
#include "entailgen/label.hpp"
#include "entailgen/policy.hpp"
#include "entailgen/rng.hpp"

namespace entailgen::sampler {

using LabelDistribution = std::array<double, 3>;

struct SamplerConfig {
  double alpha = 1.0;  // |Z| <= floor(alpha * |X|)
  std::size_t rules_per_source = 3;
  std::uint64_t seed = 0;
  LabelScheme scheme = LabelScheme::kThreeClass;
  algebra::ProjectionOptions projection;
  std::vector<kb::Source> sources = {kb::Source::kWordNet, kb::Source::kPpdb, kb::Source::kSick,
                                     kb::Source::kHand};
  gen::Options gen;
  std::size_t jobs = 1;

  void validate() const {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
      throw Error(ErrorCode::kConfig, "alpha must be a finite value >= 0");
    }
    if (rules_per_source < 1) throw Error(ErrorCode::kConfig, "rules_per_source must be >= 1");
    if (jobs < 1) throw Error(ErrorCode::kConfig, "jobs must be >= 1");
  }
};

struct DropCounts {
  std::size_t undefined_label = 0;  // composition gave '?'
  std::size_t projection = 0;       // label has no class under the scheme
  std::size_t over_quota = 0;       // removed by stratified subsampling
  std::size_t not_applicable = 0;   // transformation failed on the sentence
  std::size_t sentences_without_rules = 0;

  DropCounts& operator+=(const DropCounts& o) {
    undefined_label += o.undefined_label;
    projection += o.projection;
    over_quota += o.over_quota;
    not_applicable += o.not_applicable;
    sentences_without_rules += o.sentences_without_rules;
    return *this;
  }
};

struct BatchPlan {
  std::vector<Example> batch;
  std::vector<gen::GeneratedExample> generated;
  std::size_t candidates = 0;  // |Z_all|
  DropCounts drops;
};

// Epoch/batch-specific seed.
inline std::uint64_t batch_seed(std::uint64_t root, std::uint64_t epoch, std::uint64_t batch) {
  return derive_seed(root, {epoch, batch});
}

inline LabelDistribution label_distribution(std::span<const Example> examples) {
  LabelDistribution d{};
  for (const auto& e : examples) d[label_index(e.label)] += 1.0;
  if (!examples.empty()) {
    for (double& v : d) v /= static_cast<double>(examples.size());
  }
  return d;
}

// Largest-remainder apportionment of `cap` over the distribution.
inline std::array<std::size_t, 3> label_quotas(std::size_t cap, const LabelDistribution& dist) {
  std::array<std::size_t, 3> q{};
  const double total = dist[0] + dist[1] + dist[2];
  if (cap == 0 || total <= 0.0) return q;
  std::array<double, 3> rem{};
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double exact = static_cast<double>(cap) * dist[i] / total;
    q[i] = static_cast<std::size_t>(std::floor(exact));
    rem[i] = exact - static_cast<double>(q[i]);
    assigned += q[i];
  }
  std::array<std::size_t, 3> order = {0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return rem[a] > rem[b]; });
  for (std::size_t k = 0; assigned < cap && k < 3; ++k) {
    if (dist[order[k]] > 0.0) {
      ++q[order[k]];
      ++assigned;
    }
  }
  return q;
}

// Keeps at most quota(L) examples of each label, chosen uniformly at random
// under `seed`. A shortfall in one label does not raise the others' quotas.
// Survivors keep their relative order from z_all.
inline std::vector<gen::GeneratedExample> stratified_subsample(
    std::vector<gen::GeneratedExample> z_all, const LabelDistribution& target, std::size_t cap,
    std::uint64_t seed) {
  const auto quotas = label_quotas(cap, target);
  std::array<std::vector<std::size_t>, 3> by_label;
  for (std::size_t i = 0; i < z_all.size(); ++i) {
    by_label[label_index(z_all[i].example.label)].push_back(i);
  }
  Rng rng(seed);
  std::vector<std::size_t> keep;
  for (std::size_t l = 0; l < 3; ++l) {
    auto& idx = by_label[l];
    const std::size_t take = std::min(quotas[l], idx.size());
    for (std::size_t k = 0; k < take; ++k) {
      const std::size_t j = k + uniform_index(rng, idx.size() - k);
      std::swap(idx[k], idx[j]);
    }
    keep.insert(keep.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(take));
  }
  std::sort(keep.begin(), keep.end());
  std::vector<gen::GeneratedExample> out;
  out.reserve(keep.size());
  for (std::size_t i : keep) out.push_back(std::move(z_all[i]));
  return out;
}

namespace detail {

struct Candidate {
  const kb::Rule* rule = nullptr;
  std::optional<std::size_t> rule_id;
};

inline std::vector<Candidate> candidates_for(const text::Sentence& s, kb::Source source,
                                             const kb::RuleStore& store) {
  std::vector<Candidate> out;
  if (source == kb::Source::kHand) {
    if (!text::contains_negation(s) && gen::negation_site(s)) {
      out.push_back({&kb::negate_rule(), std::nullopt});
    }
    return out;
  }
  std::optional<std::size_t> last;
  for (const auto& m : kb::applicable_rules(s, store)) {
    if (last == m.rule_id) continue;  // first match position only
    last = m.rule_id;
    const kb::Rule& r = store.rule(m.rule_id);
    if (r.source == source) out.push_back({&r, m.rule_id});
  }
  return out;
}

// Weighted draw of up to k distinct candidates, weight = policy probability of the arm.
inline std::vector<Candidate> weighted_pick(std::vector<Candidate> pool, std::size_t k,
                                            const std::array<double, GeneratorPolicy::kNumArms>& probs,
                                            Rng& rng) {
  std::vector<Candidate> out;
  while (!pool.empty() && out.size() < k) {
    double total = 0.0;
    for (const auto& c : pool) total += probs[kb::arm_index(c.rule->arm())];
    double u = uniform01(rng) * total;
    std::size_t pick = pool.size() - 1;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      u -= probs[kb::arm_index(pool[i].rule->arm())];
      if (u < 0.0) {
        pick = i;
        break;
      }
    }
    out.push_back(pool[pick]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return out;
}

struct SentenceYield {
  std::vector<gen::GeneratedExample> examples;
  DropCounts drops;
};

inline void emit(std::optional<gen::GeneratedExample> g, const SamplerConfig& cfg, SentenceYield& y) {
  if (!g) {
    ++y.drops.undefined_label;
    return;
  }
  auto projected = algebra::project_label(g->example.label, cfg.scheme, cfg.projection);
  if (!projected) {
    ++y.drops.projection;
    return;
  }
  g->example.label = *projected;
  y.examples.push_back(std::move(*g));
}

inline SentenceYield generate_for_sentence(const Example& parent, std::size_t index, gen::Side side,
                                           const kb::RuleStore& store,
                                           const std::array<double, GeneratorPolicy::kNumArms>& probs,
                                           const SamplerConfig& cfg, std::uint64_t seed) {
  SentenceYield y;
  const text::Sentence& s = side == gen::Side::kPremise ? parent.premise : parent.hypothesis;
  Rng rng(derive_seed(seed, {index, side == gen::Side::kPremise ? 0u : 1u}));
  bool any = false;
  for (kb::Source source : cfg.sources) {
    auto chosen = weighted_pick(candidates_for(s, source, store), cfg.rules_per_source, probs, rng);
    any = any || !chosen.empty();
    for (const auto& c : chosen) {
      try {
        emit(gen::first_order(parent, *c.rule, side, cfg.gen, c.rule_id), cfg, y);
        const auto kind = side == gen::Side::kHypothesis ? gen::Order::kSecondHyp
                                                         : gen::Order::kSecondPrem;
        emit(gen::second_order(parent, *c.rule, kind, cfg.gen, c.rule_id), cfg, y);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kRuleNotApplicable && e.code() != ErrorCode::kNotAVerb) throw;
        ++y.drops.not_applicable;
      }
    }
  }
  if (!any) ++y.drops.sentences_without_rules;
  return y;
}

}  // namespace detail

// One mini-batch of generation: sample up to rules_per_source applicable
// rules per (sentence, source) weighted by the policy, build first- and
// second-order examples, then subsample to the batch's label distribution
// with |Z| <= floor(alpha * |X|).
inline BatchPlan generate_for_batch(std::span<const Example> batch, const kb::RuleStore& store,
                                    const GeneratorPolicy& policy, const SamplerConfig& cfg,
                                    std::uint64_t seed) {
  cfg.validate();
  BatchPlan plan;
  plan.batch.assign(batch.begin(), batch.end());
  const auto probs = policy.probabilities();

  const std::size_t units = batch.size() * 2;
  std::vector<detail::SentenceYield> yields(units);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t u = begin; u < end; ++u) {
      const auto side = u % 2 == 0 ? gen::Side::kPremise : gen::Side::kHypothesis;
      yields[u] = detail::generate_for_sentence(batch[u / 2], u / 2, side, store, probs, cfg, seed);
    }
  };
  const std::size_t jobs = std::min(cfg.jobs, std::max<std::size_t>(units, 1));
  if (jobs <= 1) {
    work(0, units);
  } else {
    std::vector<std::future<void>> futures;
    const std::size_t chunk = (units + jobs - 1) / jobs;
    for (std::size_t b = 0; b < units; b += chunk) {
      futures.push_back(std::async(std::launch::async, work, b, std::min(units, b + chunk)));
    }
    for (auto& f : futures) f.get();
  }

  std::vector<gen::GeneratedExample> z_all;
  for (auto& y : yields) {
    plan.drops += y.drops;
    for (auto& g : y.examples) z_all.push_back(std::move(g));
  }
  plan.candidates = z_all.size();
  const auto cap = static_cast<std::size_t>(std::floor(cfg.alpha * static_cast<double>(batch.size())));
  plan.generated = stratified_subsample(std::move(z_all), label_distribution(batch), cap,
                                        derive_seed(seed, {0x5ab5a3b1eULL}));
  plan.drops.over_quota = plan.candidates - plan.generated.size();
  return plan;
}

}  // namespace entailgen::sampler
