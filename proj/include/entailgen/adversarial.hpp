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
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "entailgen/discriminator.hpp"
#include "entailgen/error.hpp"
#include "entailgen/kb.hpp"
#include "entailgen/policy.hpp"
#include "entailgen/rng.hpp"
#include "entailgen/sampler.hpp"

namespace entailgen::adv {

struct TrainConfig {
  std::size_t iterations = 30;  // K
  std::size_t batch_size = 32;
  std::uint64_t seed = 0;
  sampler::SamplerConfig sampler;  // alpha lives here

  void validate() const {
    if (batch_size < 1) throw Error(ErrorCode::kConfig, "batch_size must be >= 1");
    sampler.validate();
  }
};

struct MetricRow {
  std::size_t iteration = 0;
  std::size_t batch = 0;
  double loss_x = 0.0;  // mean loss on the original batch after the update
  double loss_z = 0.0;  // mean loss on the generated examples after the update
  std::size_t generated = 0;
  std::optional<double> dev_accuracy;  // filled on the last batch of an iteration
  double policy_entropy = 0.0;
  std::array<double, GeneratorPolicy::kNumArms> policy{};
  std::vector<ArmReward> rewards;
};

struct TrainRun {
  std::vector<MetricRow> log;
  std::size_t completed_iterations = 0;
};

namespace stream {
inline constexpr std::uint64_t kShuffle = 0x5348554646ULL;
inline constexpr std::uint64_t kPretrain = 0x50524554ULL;
inline constexpr std::uint64_t kGenerate = 0x47454eULL;
}  // namespace stream

// Shuffled mini-batches of [0, n) for one pass, seeded per (seed, tag, epoch).
inline std::vector<std::vector<std::size_t>> epoch_batches(std::size_t n, std::size_t batch_size,
                                                           std::uint64_t seed, std::uint64_t tag,
                                                           std::uint64_t epoch) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed(seed, {tag, epoch}));
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[uniform_index(rng, i)]);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t b = 0; b < n; b += batch_size) {
    out.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(b),
                     order.begin() + static_cast<std::ptrdiff_t>(std::min(n, b + batch_size)));
  }
  return out;
}

inline std::vector<Example> gather(std::span<const Example> data, const std::vector<std::size_t>& idx) {
  std::vector<Example> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(data[i]);
  return out;
}

inline double mean(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Trains on the original data only. Returns the mean loss on X afterwards.
inline double pretrain(disc::Discriminator& model, std::span<const Example> data, std::size_t epochs,
                       std::size_t batch_size, std::uint64_t seed) {
  if (data.empty()) throw Error(ErrorCode::kEmptyBatch, "pretrain on empty data");
  for (std::size_t ep = 0; ep < epochs; ++ep) {
    for (const auto& idx : epoch_batches(data.size(), batch_size, seed, stream::kPretrain, ep)) {
      model.train_step(gather(data, idx));
    }
  }
  return mean(model.losses(data));
}

// The adversarial schedule with no generation: same batches, same order.
inline void train_plain(disc::Discriminator& model, std::span<const Example> data,
                        const TrainConfig& cfg, std::size_t start_iteration = 0) {
  if (data.empty()) throw Error(ErrorCode::kEmptyBatch, "training on empty data");
  for (std::size_t it = start_iteration; it < cfg.iterations; ++it) {
    for (const auto& idx : epoch_batches(data.size(), cfg.batch_size, cfg.seed, stream::kShuffle, it)) {
      model.train_step(gather(data, idx));
    }
  }
}

// Mean discriminator loss per arm over the generated examples; ordered by
// the arm catalog.
inline std::vector<ArmReward> arm_rewards(const std::vector<gen::GeneratedExample>& generated,
                                          const std::vector<double>& losses) {
  std::array<double, GeneratorPolicy::kNumArms> sum{};
  std::array<std::size_t, GeneratorPolicy::kNumArms> count{};
  for (std::size_t i = 0; i < generated.size(); ++i) {
    const auto a = kb::arm_index(generated[i].rule.arm);
    sum[a] += losses[i];
    ++count[a];
  }
  std::vector<ArmReward> out;
  for (std::size_t a = 0; a < GeneratorPolicy::kNumArms; ++a) {
    if (count[a]) out.push_back({kb::kArmCatalog[a], sum[a] / static_cast<double>(count[a])});
  }
  return out;
}

using IterationCallback = std::function<void(std::size_t completed_iterations, const TrainRun&)>;

// For each iteration and mini-batch B: generate Z with the current policy,
// cap |Z| <= floor(alpha |B|), take one discriminator step on B + Z, then
// reward each arm with the discriminator's mean loss on its examples.
inline TrainRun adversarial_train(disc::Discriminator& model, GeneratorPolicy& policy,
                                  std::span<const Example> data, const kb::RuleStore& store,
                                  const TrainConfig& cfg, std::span<const Example> dev = {},
                                  std::size_t start_iteration = 0,
                                  const IterationCallback& on_iteration = {}) {
  cfg.validate();
  if (data.empty()) throw Error(ErrorCode::kEmptyBatch, "adversarial_train on empty data");
  TrainRun run;
  run.completed_iterations = start_iteration;
  const bool generate = cfg.sampler.alpha > 0.0 && !cfg.sampler.sources.empty();
  for (std::size_t it = start_iteration; it < cfg.iterations; ++it) {
    const auto batches = epoch_batches(data.size(), cfg.batch_size, cfg.seed, stream::kShuffle, it);
    for (std::size_t b = 0; b < batches.size(); ++b) {
      std::vector<Example> batch = gather(data, batches[b]);
      std::vector<gen::GeneratedExample> generated;
      if (generate) {
        auto plan = sampler::generate_for_batch(
            batch, store, policy, cfg.sampler,
            derive_seed(cfg.seed, {stream::kGenerate, it, b}));
        generated = std::move(plan.generated);
      }
      std::vector<Example> z;
      z.reserve(generated.size());
      for (const auto& g : generated) z.push_back(g.example);

      std::vector<Example> combined = batch;
      combined.insert(combined.end(), z.begin(), z.end());
      model.train_step(combined);

      MetricRow row;
      row.iteration = it;
      row.batch = b;
      row.generated = z.size();
      row.loss_x = mean(model.losses(batch));
      if (!z.empty()) {
        const auto z_losses = model.losses(z);
        row.loss_z = mean(z_losses);
        row.rewards = arm_rewards(generated, z_losses);
        policy.update(row.rewards);
      }
      row.policy = policy.probabilities();
      row.policy_entropy = policy.entropy();
      if (b + 1 == batches.size() && !dev.empty()) {
        row.dev_accuracy = model.evaluate(dev).accuracy;
      }
      run.log.push_back(std::move(row));
    }
    run.completed_iterations = it + 1;
    if (on_iteration) on_iteration(run.completed_iterations, run);
  }
  return run;
}

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

inline void write_metrics_header(std::ostream& out) {
  out << "iteration,batch,loss_X,loss_Z,generated,acc_dev,policy_entropy\n";
}

inline void write_metrics_row(std::ostream& out, const MetricRow& r) {
  out << r.iteration << ',' << r.batch << ',' << format_double(r.loss_x) << ','
      << format_double(r.loss_z) << ',' << r.generated << ','
      << (r.dev_accuracy ? format_double(*r.dev_accuracy) : std::string()) << ','
      << format_double(r.policy_entropy) << '\n';
}

inline nlohmann::json policy_to_json(const GeneratorPolicy& p) {
  nlohmann::json arms = nlohmann::json::object();
  for (std::size_t a = 0; a < GeneratorPolicy::kNumArms; ++a) {
    arms[kb::arm_name(kb::kArmCatalog[a])] = p.weights()[a];
  }
  const auto& c = p.config();
  return {{"weights", arms},
          {"baseline", p.baseline()},
          {"baseline_initialized", p.baseline_initialized()},
          {"temperature", c.temperature},
          {"learning_rate", c.learning_rate},
          {"baseline_decay", c.baseline_decay},
          {"floor_fraction", c.floor_fraction}};
}

inline GeneratorPolicy policy_from_json(const nlohmann::json& j) {
  try {
    PolicyConfig c;
    c.temperature = j.at("temperature").get<double>();
    c.learning_rate = j.at("learning_rate").get<double>();
    c.baseline_decay = j.at("baseline_decay").get<double>();
    c.floor_fraction = j.at("floor_fraction").get<double>();
    GeneratorPolicy p(c);
    std::array<double, GeneratorPolicy::kNumArms> w{};
    for (std::size_t a = 0; a < GeneratorPolicy::kNumArms; ++a) {
      w[a] = j.at("weights").at(kb::arm_name(kb::kArmCatalog[a])).get<double>();
    }
    p.set_state(w, j.at("baseline").get<double>(), j.at("baseline_initialized").get<bool>());
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("policy checkpoint: ") + e.what());
  }
}

}  // namespace entailgen::adv
