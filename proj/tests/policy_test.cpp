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

#include "entailgen/policy.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "entailgen/rng.hpp"
#include "gtest/gtest.h"

namespace entailgen {
namespace {

constexpr std::size_t K = GeneratorPolicy::kNumArms;
const kb::Arm kHyper = kb::kArmCatalog[0];
const kb::Arm kSyn = kb::kArmCatalog[1];

// Direct transcription of the update rule with plain loops.
struct ScalarPolicy {
  std::array<double, K> w{};
  double b = 0.0;
  bool init = false;
  double lr, decay, tau;

  void step(std::size_t a, double r) {
    if (!init) {
      b = r;
      init = true;
    }
    double z = 0.0;
    std::array<double, K> p{};
    for (std::size_t j = 0; j < K; ++j) z += std::exp(w[j] / tau);
    for (std::size_t j = 0; j < K; ++j) p[j] = std::exp(w[j] / tau) / z;
    for (std::size_t j = 0; j < K; ++j) w[j] += lr * (r - b) * ((j == a) - p[j]) / tau;
    b = decay * b + (1 - decay) * r;
  }
};

TEST(PolicyTest, StartsUniform) {
  GeneratorPolicy p;
  for (double v : p.probabilities()) EXPECT_DOUBLE_EQ(v, 1.0 / K);
  EXPECT_NEAR(p.entropy(), std::log(static_cast<double>(K)), 1e-12);
}

TEST(PolicyTest, ZeroAdvantageLeavesWeights) {
  GeneratorPolicy p;
  std::vector<ArmReward> r = {{kHyper, 2.0}};
  p.update(r);  // first reward sets the baseline, so the advantage is zero
  for (double w : p.weights()) EXPECT_EQ(w, 0.0);
  EXPECT_DOUBLE_EQ(p.baseline(), 2.0);
  p.update(r);
  for (double w : p.weights()) EXPECT_EQ(w, 0.0);
}

TEST(PolicyTest, PositiveAdvantageRaisesOnlyThatArm) {
  GeneratorPolicy p;
  std::vector<ArmReward> warm = {{kSyn, 0.0}};
  p.update(warm);
  const auto before = p.probabilities();
  std::vector<ArmReward> r = {{kHyper, 1.0}};
  p.update(r);
  const auto after = p.probabilities();
  EXPECT_GT(after[0], before[0]);
  for (std::size_t j = 1; j < K; ++j) EXPECT_LT(after[j], before[j]);
}

TEST(PolicyTest, MatchesScalarOracle) {
  PolicyConfig cfg{.temperature = 0.7, .learning_rate = 0.3, .baseline_decay = 0.8,
                   .floor_fraction = 0.0};
  GeneratorPolicy p(cfg);
  ScalarPolicy o{.lr = 0.3, .decay = 0.8, .tau = 0.7};
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    const std::size_t a = uniform_index(rng, K);
    const double r = 3.0 * uniform01(rng) + (a == 2 ? 1.0 : 0.0);
    std::vector<ArmReward> rw = {{kb::kArmCatalog[a], r}};
    p.update(rw);
    o.step(a, r);
  }
  for (std::size_t j = 0; j < K; ++j) EXPECT_NEAR(p.weights()[j], o.w[j], 1e-10);
  EXPECT_NEAR(p.baseline(), o.b, 1e-10);
}

TEST(PolicyTest, StaysOnSimplexWithFloor) {
  GeneratorPolicy p;
  Rng rng(1);
  for (int t = 0; t < 2000; ++t) {
    std::vector<ArmReward> rw = {{kHyper, 50.0 * uniform01(rng)}, {kSyn, -50.0 * uniform01(rng)}};
    p.update(rw);
    const auto probs = p.probabilities();
    double sum = 0;
    for (double v : probs) {
      EXPECT_GE(v, 0.01 / K - 1e-15);
      sum += v;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(PolicyTest, NonFiniteRewardRejectedWithoutSideEffects) {
  GeneratorPolicy p;
  std::vector<ArmReward> good = {{kHyper, 1.0}, {kSyn, 0.0}};
  p.update(good);
  const auto w = p.weights();
  const double b = p.baseline();
  for (double bad : {std::numeric_limits<double>::quiet_NaN(),
                     std::numeric_limits<double>::infinity()}) {
    std::vector<ArmReward> rw = {{kHyper, 1.0}, {kSyn, bad}};
    try {
      p.update(rw);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInvalidReward);
    }
    EXPECT_EQ(p.weights(), w);
    EXPECT_EQ(p.baseline(), b);
  }
}

TEST(PolicyTest, ConsistentlyHarderArmGainsMass) {
  GeneratorPolicy p;
  for (int t = 0; t < 100; ++t) {
    std::vector<ArmReward> rw = {{kHyper, 2.0}, {kSyn, 0.5}};
    p.update(rw);
  }
  EXPECT_GT(p.probability(kHyper), 2.0 / K);
  EXPECT_LT(p.probability(kSyn), 1.0 / K);
}

}  // namespace
}  // namespace entailgen
