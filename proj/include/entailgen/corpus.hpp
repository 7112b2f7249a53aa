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
#include <optional>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "entailgen/error.hpp"
#include "entailgen/generators.hpp"
#include "entailgen/label.hpp"
#include "entailgen/rng.hpp"

namespace entailgen::corpus {

enum class Format { kSnliJsonl, kSciTailTsv, kCanonicalJsonl };
enum class Split { kTrain, kDev, kTest };

inline Format parse_format(std::string_view name) {
  if (name == "snli" || name == "snli-jsonl") return Format::kSnliJsonl;
  if (name == "scitail" || name == "scitail-tsv") return Format::kSciTailTsv;
  if (name == "canonical" || name == "jsonl") return Format::kCanonicalJsonl;
  throw Error(ErrorCode::kConfig, "unknown corpus format \"" + std::string(name) + "\"");
}

struct IngestStats {
  std::size_t rows = 0;
  std::size_t examples = 0;
  std::size_t no_gold_label = 0;  // SNLI "-" rows
  std::size_t malformed = 0;
};

struct Corpus {
  std::vector<Example> examples;
  LabelScheme scheme = LabelScheme::kThreeClass;
  Split split = Split::kTrain;
  IngestStats stats;

  std::size_t size() const { return examples.size(); }
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

}  // namespace detail

// Reads one of the supported formats. SciTail input always uses the
// two-class scheme. Rows that fail to parse are counted; more than 10%
// failures is a FormatError.
inline Corpus ingest(std::istream& in, Format format, LabelScheme scheme = LabelScheme::kThreeClass,
                     const std::string& name = "<stream>") {
  Corpus c;
  c.scheme = format == Format::kSciTailTsv ? LabelScheme::kSciTailTwoClass : scheme;
  std::set<std::size_t> ids;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++c.stats.rows;
    try {
      std::string premise, hypothesis, label;
      std::optional<std::size_t> id;
      if (format == Format::kSciTailTsv) {
        auto cols = detail::split_tabs(line);
        if (cols.size() < 3) throw Error(ErrorCode::kFormat, "expected 3 columns");
        premise = cols[0];
        hypothesis = cols[1];
        label = cols[2];
      } else {
        const auto j = nlohmann::json::parse(line);
        if (format == Format::kSnliJsonl) {
          label = j.at("gold_label").get<std::string>();
          premise = j.at("sentence1").get<std::string>();
          hypothesis = j.at("sentence2").get<std::string>();
          if (label == "-") {
            ++c.stats.no_gold_label;
            continue;
          }
        } else {
          label = j.at("label").get<std::string>();
          premise = j.at("premise").get<std::string>();
          hypothesis = j.at("hypothesis").get<std::string>();
          if (j.contains("id")) id = j.at("id").get<std::size_t>();
        }
      }
      Example e = make_example(premise, hypothesis, parse_label(label, c.scheme));
      e.id = id.value_or(c.examples.size());
      if (!ids.insert(e.id).second) throw Error(ErrorCode::kFormat, "duplicate id");
      c.examples.push_back(std::move(e));
    } catch (const Error&) {
      ++c.stats.malformed;
    } catch (const nlohmann::json::exception&) {
      ++c.stats.malformed;
    }
  }
  c.stats.examples = c.examples.size();
  if (c.stats.rows > 0 && 10 * c.stats.malformed > c.stats.rows) {
    throw Error(ErrorCode::kFormat, name + ": " + std::to_string(c.stats.malformed) + " of " +
                                        std::to_string(c.stats.rows) + " rows unparseable");
  }
  return c;
}

inline Corpus ingest(const std::filesystem::path& path, Format format,
                     LabelScheme scheme = LabelScheme::kThreeClass) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read corpus " + path.string());
  return ingest(in, format, scheme, path.string());
}

// {"id","premise","hypothesis","label"} per line.
inline void write_canonical(const Corpus& c, std::ostream& out) {
  for (const auto& e : c.examples) {
    nlohmann::json j;
    j["id"] = e.id;
    j["premise"] = e.premise.render();
    j["hypothesis"] = e.hypothesis.render();
    j["label"] = std::string(label_name(e.label, c.scheme));
    out << j.dump() << "\n";
  }
}

inline void write_canonical(const Corpus& c, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  write_canonical(c, out);
}

// Uniform sample without replacement of round(fraction * N) examples,
// returned in corpus order.
inline Corpus subsample(const Corpus& c, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw Error(ErrorCode::kConfig, "fraction must be in (0, 1]");
  }
  const std::size_t n = c.examples.size();
  const auto k = std::min<std::size_t>(
      n, static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n))));
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(idx[i], idx[i + uniform_index(rng, n - i)]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  Corpus out;
  out.scheme = c.scheme;
  out.split = c.split;
  out.stats = c.stats;
  out.stats.examples = k;
  for (auto i : idx) out.examples.push_back(c.examples[i]);
  return out;
}

inline bool has_negation(const Example& e) {
  return text::contains_negation(e.premise) || text::contains_negation(e.hypothesis);
}

// Examples whose premise or hypothesis has a token in {not, no, never} or
// ending in "n't".
inline Corpus nega_extract(const Corpus& c) {
  Corpus out;
  out.scheme = c.scheme;
  out.split = c.split;
  for (const auto& e : c.examples) {
    if (has_negation(e)) out.examples.push_back(e);
  }
  out.stats.rows = c.examples.size();
  out.stats.examples = out.examples.size();
  return out;
}

inline std::array<std::size_t, 3> label_counts(const Corpus& c) {
  std::array<std::size_t, 3> n{};
  for (const auto& e : c.examples) ++n[label_index(e.label)];
  return n;
}

}  // namespace entailgen::corpus
