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
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "entailgen/error.hpp"
#include "entailgen/generators.hpp"
#include "entailgen/label.hpp"
#include "entailgen/rng.hpp"
#include "entailgen/text.hpp"

namespace entailgen::disc {

inline constexpr std::size_t kNumDense = 6;
inline constexpr unsigned kDefaultHashBits = 18;
inline constexpr std::uint64_t kDefaultHashSeed = 0x656e7461696c6765ULL;

enum DenseFeature : std::size_t {
  kUnigramOverlap = 0,  // fraction of hypothesis token types found in the premise
  kPremiseOnly = 1,     // log(1 + #premise types absent from the hypothesis)
  kHypothesisOnly = 2,  // log(1 + #hypothesis types absent from the premise)
  kLengthDiff = 3,      // (|p| - |h|) / max(|p|, |h|)
  kNegationMismatch = 4,
  kBigramOverlap = 5,   // fraction of hypothesis bigrams found in the premise
};

struct FeatureVector {
  std::array<double, kNumDense> dense{};
  // (bucket, value), buckets strictly increasing.
  std::vector<std::pair<std::uint32_t, double>> sparse;
};

// FNV-1a 64 over the bytes, offset basis xor'd with the seed, then a
// SplitMix64 finalizer.
inline std::uint64_t feature_hash(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return mix64(h);
}

inline std::uint32_t cross_bucket(std::string_view p_tok, std::string_view h_tok, unsigned bits,
                                  std::uint64_t seed) {
  std::string key;
  key.reserve(p_tok.size() + h_tok.size() + 1);
  key.append(p_tok).push_back('\x1f');
  key.append(h_tok);
  return static_cast<std::uint32_t>(feature_hash(key, seed) & ((std::uint64_t{1} << bits) - 1));
}

inline FeatureVector featurize(const text::Sentence& p, const text::Sentence& h,
                               unsigned hash_bits = kDefaultHashBits,
                               std::uint64_t hash_seed = kDefaultHashSeed) {
  FeatureVector fv;
  std::unordered_set<std::string_view> pset, hset;
  for (const auto& t : p.tokens) pset.insert(t.surface);
  for (const auto& t : h.tokens) hset.insert(t.surface);
  std::size_t h_in_p = 0, h_only = 0, p_only = 0;
  for (auto w : hset) (pset.contains(w) ? h_in_p : h_only)++;
  for (auto w : pset) p_only += hset.contains(w) ? 0 : 1;
  fv.dense[kUnigramOverlap] =
      hset.empty() ? 0.0 : static_cast<double>(h_in_p) / static_cast<double>(hset.size());
  fv.dense[kPremiseOnly] = std::log1p(static_cast<double>(p_only));
  fv.dense[kHypothesisOnly] = std::log1p(static_cast<double>(h_only));
  const double lp = static_cast<double>(p.size()), lh = static_cast<double>(h.size());
  fv.dense[kLengthDiff] = std::max(lp, lh) > 0 ? (lp - lh) / std::max(lp, lh) : 0.0;
  fv.dense[kNegationMismatch] =
      text::contains_negation(p) != text::contains_negation(h) ? 1.0 : 0.0;

  std::unordered_set<std::string> pbi;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    pbi.insert(p.tokens[i].surface + " " + p.tokens[i + 1].surface);
  }
  std::unordered_set<std::string> hbi;
  for (std::size_t i = 0; i + 1 < h.size(); ++i) {
    hbi.insert(h.tokens[i].surface + " " + h.tokens[i + 1].surface);
  }
  std::size_t bi_hits = 0;
  for (const auto& b : hbi) bi_hits += pbi.contains(b) ? 1 : 0;
  fv.dense[kBigramOverlap] =
      hbi.empty() ? 0.0 : static_cast<double>(bi_hits) / static_cast<double>(hbi.size());

  std::vector<std::uint32_t> buckets;
  for (auto pw : pset) {
    for (auto hw : hset) buckets.push_back(cross_bucket(pw, hw, hash_bits, hash_seed));
  }
  std::sort(buckets.begin(), buckets.end());
  buckets.erase(std::unique(buckets.begin(), buckets.end()), buckets.end());
  const double v = buckets.empty() ? 0.0 : 1.0 / std::sqrt(static_cast<double>(buckets.size()));
  fv.sparse.reserve(buckets.size());
  for (auto b : buckets) fv.sparse.emplace_back(b, v);
  return fv;
}

struct EvalReport {
  std::size_t count = 0;
  double accuracy = 0.0;
  double mean_loss = 0.0;
  std::vector<std::size_t> per_class_count;
  std::vector<double> per_class_accuracy;  // NaN for classes with no examples
};

inline double cross_entropy(const std::vector<double>& probs, std::size_t target) {
  return -std::log(std::max(probs.at(target), std::numeric_limits<double>::min()));
}

inline std::size_t argmax(const std::vector<double>& probs) {
  return static_cast<std::size_t>(std::max_element(probs.begin(), probs.end()) - probs.begin());
}

inline std::size_t target_class(const Example& e, LabelScheme scheme) {
  auto idx = class_index(e.label, scheme);
  if (!idx) {
    throw Error(ErrorCode::kConfig, "label " + std::string(label_symbol(e.label)) +
                                        " has no class under scheme " +
                                        std::string(scheme_name(scheme)));
  }
  return *idx;
}

// Entailment classifier D(label | premise, hypothesis; theta). predict and
// evaluate are read-only; train_step needs exclusive access.
class Discriminator {
 public:
  virtual ~Discriminator() = default;

  virtual LabelScheme scheme() const = 0;
  std::size_t num_classes() const { return entailgen::num_classes(scheme()); }

  // One probability row per example; labels are ignored.
  virtual std::vector<std::vector<double>> predict(std::span<const Example> pairs) const = 0;

  // One gradient step on the mean cross-entropy; returns the pre-step loss.
  virtual double train_step(std::span<const Example> examples) = 0;

  virtual EvalReport evaluate(std::span<const Example> data) const {
    return evaluate_by_prediction(data);
  }

  std::vector<double> predict_one(const text::Sentence& p, const text::Sentence& h) const {
    Example e{p, h, Label::kEntails, 0};
    return predict(std::span<const Example>(&e, 1)).front();
  }

  // Per-example cross-entropy under the current parameters.
  std::vector<double> losses(std::span<const Example> examples) const {
    auto probs = predict(examples);
    std::vector<double> out(examples.size());
    for (std::size_t i = 0; i < examples.size(); ++i) {
      out[i] = cross_entropy(probs[i], target_class(examples[i], scheme()));
    }
    return out;
  }

  EvalReport evaluate_by_prediction(std::span<const Example> data) const {
    EvalReport r;
    const std::size_t k = num_classes();
    r.count = data.size();
    r.per_class_count.assign(k, 0);
    std::vector<std::size_t> correct_per(k, 0);
    if (data.empty()) {
      r.per_class_accuracy.assign(k, std::numeric_limits<double>::quiet_NaN());
      return r;
    }
    auto probs = predict(data);
    std::size_t correct = 0;
    double loss = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      const std::size_t y = target_class(data[i], scheme());
      ++r.per_class_count[y];
      loss += cross_entropy(probs[i], y);
      if (argmax(probs[i]) == y) {
        ++correct;
        ++correct_per[y];
      }
    }
    r.accuracy = static_cast<double>(correct) / static_cast<double>(data.size());
    r.mean_loss = loss / static_cast<double>(data.size());
    for (std::size_t c = 0; c < k; ++c) {
      r.per_class_accuracy.push_back(
          r.per_class_count[c] ? static_cast<double>(correct_per[c]) /
                                     static_cast<double>(r.per_class_count[c])
                               : std::numeric_limits<double>::quiet_NaN());
    }
    return r;
  }
};

struct LogisticConfig {
  LabelScheme scheme = LabelScheme::kThreeClass;
  unsigned hash_bits = kDefaultHashBits;
  std::uint64_t hash_seed = kDefaultHashSeed;
  double learning_rate = 0.5;
  double l2 = 1e-4;
};

// Multinomial logistic regression over dense overlap features and hashed
// premise x hypothesis word pairs. Plain mini-batch gradient descent with L2
// on the weights (not the bias).
class LogisticDiscriminator final : public Discriminator {
 public:
  explicit LogisticDiscriminator(LogisticConfig cfg = {})
      : cfg_(cfg),
        classes_(entailgen::num_classes(cfg.scheme)),
        dim_(kNumDense + (std::size_t{1} << cfg.hash_bits)),
        weights_(classes_ * dim_, 0.0),
        bias_(classes_, 0.0) {
    if (cfg.hash_bits < 1 || cfg.hash_bits > 24) {
      throw Error(ErrorCode::kConfig, "hash_bits must be in [1, 24]");
    }
  }

  LabelScheme scheme() const override { return cfg_.scheme; }
  const LogisticConfig& config() const { return cfg_; }
  void set_learning_rate(double lr) { cfg_.learning_rate = lr; }

  std::size_t dim() const { return dim_; }
  std::vector<double>& weights() { return weights_; }
  const std::vector<double>& weights() const { return weights_; }
  std::vector<double>& bias() { return bias_; }
  const std::vector<double>& bias() const { return bias_; }

  FeatureVector features(const Example& e) const {
    return featurize(e.premise, e.hypothesis, cfg_.hash_bits, cfg_.hash_seed);
  }

  std::vector<double> scores(const FeatureVector& fv) const {
    std::vector<double> s(bias_);
    for (std::size_t k = 0; k < classes_; ++k) {
      const double* w = &weights_[k * dim_];
      for (std::size_t i = 0; i < kNumDense; ++i) s[k] += w[i] * fv.dense[i];
      for (const auto& [b, v] : fv.sparse) s[k] += w[kNumDense + b] * v;
    }
    return s;
  }

  static std::vector<double> softmax(std::vector<double> s) {
    const double mx = *std::max_element(s.begin(), s.end());
    double z = 0.0;
    for (double& v : s) {
      v = std::exp(v - mx);
      z += v;
    }
    for (double& v : s) v /= z;
    return s;
  }

  std::vector<std::vector<double>> predict(std::span<const Example> pairs) const override {
    std::vector<std::vector<double>> out;
    out.reserve(pairs.size());
    for (const auto& e : pairs) out.push_back(softmax(scores(features(e))));
    return out;
  }

  // Objective = mean cross-entropy + (l2 / 2) * ||W||^2. Gradient is dense,
  // laid out as weights followed by bias; intended for small hash spaces.
  std::pair<double, std::vector<double>> objective_and_gradient(
      std::span<const Example> examples) const {
    std::vector<double> grad(weights_.size() + bias_.size(), 0.0);
    double loss = 0.0;
    const double n = static_cast<double>(examples.size());
    for (const auto& e : examples) {
      const auto fv = features(e);
      const auto p = softmax(scores(fv));
      const std::size_t y = target_class(e, cfg_.scheme);
      loss += cross_entropy(p, y);
      for (std::size_t k = 0; k < classes_; ++k) {
        const double d = (p[k] - (k == y ? 1.0 : 0.0)) / n;
        double* g = &grad[k * dim_];
        for (std::size_t i = 0; i < kNumDense; ++i) g[i] += d * fv.dense[i];
        for (const auto& [b, v] : fv.sparse) g[kNumDense + b] += d * v;
        grad[weights_.size() + k] += d;
      }
    }
    loss /= n;
    double sq = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      sq += weights_[i] * weights_[i];
      grad[i] += cfg_.l2 * weights_[i];
    }
    return {loss + 0.5 * cfg_.l2 * sq, std::move(grad)};
  }

  double train_step(std::span<const Example> examples) override {
    if (examples.empty()) throw Error(ErrorCode::kEmptyBatch, "train_step on empty batch");
    const double n = static_cast<double>(examples.size());
    const double lr = cfg_.learning_rate;
    struct Pending {
      FeatureVector fv;
      std::vector<double> delta;
    };
    std::vector<Pending> pending;
    pending.reserve(examples.size());
    double loss = 0.0;
    for (const auto& e : examples) {
      auto fv = features(e);
      auto p = softmax(scores(fv));
      const std::size_t y = target_class(e, cfg_.scheme);
      loss += cross_entropy(p, y);
      for (std::size_t k = 0; k < classes_; ++k) p[k] -= (k == y ? 1.0 : 0.0);
      pending.push_back({std::move(fv), std::move(p)});
    }
    if (lr != 0.0) {
      if (cfg_.l2 != 0.0) {
        const double decay = 1.0 - lr * cfg_.l2;
        for (double& w : weights_) w *= decay;
      }
      for (const auto& [fv, delta] : pending) {
        for (std::size_t k = 0; k < classes_; ++k) {
          const double step = lr * delta[k] / n;
          double* w = &weights_[k * dim_];
          for (std::size_t i = 0; i < kNumDense; ++i) w[i] -= step * fv.dense[i];
          for (const auto& [b, v] : fv.sparse) w[kNumDense + b] -= step * v;
          bias_[k] -= step;
        }
      }
    }
    return loss / n;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["format"] = "entailgen-logistic";
    j["version"] = 1;
    j["scheme"] = std::string(scheme_name(cfg_.scheme));
    j["hash_bits"] = cfg_.hash_bits;
    j["hash_seed"] = cfg_.hash_seed;
    j["learning_rate"] = cfg_.learning_rate;
    j["l2"] = cfg_.l2;
    j["bias"] = bias_;
    auto sparse = nlohmann::json::array();
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      if (weights_[i] != 0.0) sparse.push_back({i, weights_[i]});
    }
    j["weights"] = std::move(sparse);
    return j;
  }

  static LogisticDiscriminator from_json(const nlohmann::json& j) {
    try {
      if (j.at("format") != "entailgen-logistic" || j.at("version") != 1) {
        throw Error(ErrorCode::kFormat, "not an entailgen logistic checkpoint");
      }
      LogisticConfig cfg;
      cfg.scheme = parse_scheme(j.at("scheme").get<std::string>());
      cfg.hash_bits = j.at("hash_bits").get<unsigned>();
      cfg.hash_seed = j.at("hash_seed").get<std::uint64_t>();
      cfg.learning_rate = j.at("learning_rate").get<double>();
      cfg.l2 = j.at("l2").get<double>();
      LogisticDiscriminator m(cfg);
      m.bias_ = j.at("bias").get<std::vector<double>>();
      if (m.bias_.size() != m.classes_) throw Error(ErrorCode::kFormat, "bias size mismatch");
      for (const auto& entry : j.at("weights")) {
        const auto idx = entry.at(0).get<std::size_t>();
        if (idx >= m.weights_.size()) throw Error(ErrorCode::kFormat, "weight index out of range");
        m.weights_[idx] = entry.at(1).get<double>();
      }
      return m;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kFormat, std::string("checkpoint: ") + e.what());
    }
  }

 private:
  LogisticConfig cfg_;
  std::size_t classes_;
  std::size_t dim_;
  std::vector<double> weights_;  // classes x dim, row-major
  std::vector<double> bias_;
};

}  // namespace entailgen::disc
