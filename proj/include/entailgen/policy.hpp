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
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "entailgen/error.hpp"
#include "entailgen/kb.hpp"

namespace entailgen {

struct PolicyConfig {
  double temperature = 1.0;
  double learning_rate = 0.1;
  double baseline_decay = 0.9;
  // Each arm keeps at least this fraction of the uniform probability.
  double floor_fraction = 0.01;
};

struct ArmReward {
  kb::Arm arm;
  double reward = 0.0;
};

// Categorical distribution over the rule-arm catalog, trained with a
// score-function (REINFORCE) update and an exponential-moving-average baseline.
class GeneratorPolicy {
 public:
  static constexpr std::size_t kNumArms = kb::kArmCatalog.size();

  explicit GeneratorPolicy(PolicyConfig cfg = {}) : cfg_(cfg) { weights_.fill(0.0); }

  const PolicyConfig& config() const { return cfg_; }
  const std::array<double, kNumArms>& weights() const { return weights_; }
  double baseline() const { return baseline_; }
  bool baseline_initialized() const { return baseline_initialized_; }

  void set_state(const std::array<double, kNumArms>& weights, double baseline,
                 bool baseline_initialized) {
    weights_ = weights;
    baseline_ = baseline;
    baseline_initialized_ = baseline_initialized;
  }

  // softmax(weights / temperature), without the floor.
  std::array<double, kNumArms> softmax() const {
    std::array<double, kNumArms> p{};
    double mx = -std::numeric_limits<double>::infinity();
    for (double w : weights_) mx = std::max(mx, w / cfg_.temperature);
    double z = 0.0;
    for (std::size_t i = 0; i < kNumArms; ++i) {
      p[i] = std::exp(weights_[i] / cfg_.temperature - mx);
      z += p[i];
    }
    for (double& v : p) v /= z;
    return p;
  }

  // Sampling distribution: softmax mixed with uniform so every arm keeps
  // floor_fraction / kNumArms.
  std::array<double, kNumArms> probabilities() const {
    auto p = softmax();
    const double eps = cfg_.floor_fraction;
    for (double& v : p) v = (1.0 - eps) * v + eps / static_cast<double>(kNumArms);
    return p;
  }

  double probability(kb::Arm arm) const { return probabilities()[kb::arm_index(arm)]; }

  double entropy() const {
    double h = 0.0;
    for (double v : probabilities()) {
      if (v > 0.0) h -= v * std::log(v);
    }
    return h;
  }

  // For each (arm, reward) in order:
  //   w_j += lr * (r - b) * (1[j == arm] - softmax_j) / temperature
  //   b    = decay * b + (1 - decay) * r
  // The first reward ever seen initializes the baseline.
  void update(std::span<const ArmReward> rewards) {
    for (const auto& r : rewards) {
      if (!std::isfinite(r.reward)) {
        throw Error(ErrorCode::kInvalidReward,
                    "non-finite reward for arm " + kb::arm_name(r.arm));
      }
      kb::arm_index(r.arm);
    }
    for (const auto& r : rewards) {
      if (!baseline_initialized_) {
        baseline_ = r.reward;
        baseline_initialized_ = true;
      }
      const double advantage = r.reward - baseline_;
      const auto p = softmax();
      const std::size_t a = kb::arm_index(r.arm);
      for (std::size_t j = 0; j < kNumArms; ++j) {
        const double score = ((j == a ? 1.0 : 0.0) - p[j]) / cfg_.temperature;
        weights_[j] += cfg_.learning_rate * advantage * score;
      }
      baseline_ = cfg_.baseline_decay * baseline_ + (1.0 - cfg_.baseline_decay) * r.reward;
    }
  }

 private:
  PolicyConfig cfg_;
  std::array<double, kNumArms> weights_{};
  double baseline_ = 0.0;
  bool baseline_initialized_ = false;
};

inline void policy_update(GeneratorPolicy& policy, std::span<const ArmReward> rewards) {
  policy.update(rewards);
}

}  // namespace entailgen
