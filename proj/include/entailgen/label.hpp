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

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "entailgen/error.hpp"

namespace entailgen {

// Entailment relation from one sentence to another.
enum class Label { kEntails, kContradicts, kNeutral };

inline constexpr std::array<Label, 3> kAllLabels = {Label::kEntails, Label::kContradicts,
                                                    Label::kNeutral};

// Result of composing two labels; nullopt is the undefined entry.
using Composition = std::optional<Label>;

enum class LabelScheme { kThreeClass, kSciTailTwoClass };

inline constexpr std::size_t label_index(Label l) { return static_cast<std::size_t>(l); }

inline std::string_view label_symbol(Composition c) {
  if (!c) return "?";
  switch (*c) {
    case Label::kEntails: return "entails";
    case Label::kContradicts: return "contradicts";
    case Label::kNeutral: return "neutral";
  }
  return "?";
}

namespace algebra {

namespace detail {
inline constexpr Composition E = Label::kEntails;
inline constexpr Composition C = Label::kContradicts;
inline constexpr Composition N = Label::kNeutral;
inline constexpr Composition U = std::nullopt;

// Rows: label of the original pair; columns: label of the generated pair.
inline constexpr std::array<std::array<Composition, 3>, 3> kOplus = {{
    {E, C, N},
    {U, U, N},
    {N, N, N},
}};
inline constexpr std::array<std::array<Composition, 3>, 3> kOtimes = {{
    {U, U, N},
    {U, U, N},
    {N, N, N},
}};
}  // namespace detail

// Label of (p, f(h)) given c = p=>h and g = h=>f(h).
inline constexpr Composition compose_oplus(Label c, Label g) {
  return detail::kOplus[label_index(c)][label_index(g)];
}

// Label of (f(p), h) given c = p=>h and g = p=>f(p).
inline constexpr Composition compose_otimes(Label c, Label g) {
  return detail::kOtimes[label_index(c)][label_index(g)];
}

struct ProjectionOptions {
  // Keep generated contradictions as the SciTail "neutral" class.
  bool scitail_keep_contradictions = true;
};

// Maps a 3-way label onto the label space of `scheme`; nullopt means drop.
// Under the SciTail scheme the two classes are ENTAILS and CONTRADICTS, the
// latter written as "neutral" in SciTail files.
inline Composition project_label(Label l, LabelScheme scheme,
                                 ProjectionOptions opts = {}) {
  if (scheme == LabelScheme::kThreeClass) return l;
  switch (l) {
    case Label::kEntails: return Label::kEntails;
    case Label::kContradicts:
      return opts.scitail_keep_contradictions ? Composition(Label::kContradicts)
                                              : std::nullopt;
    case Label::kNeutral: return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace algebra

inline std::size_t num_classes(LabelScheme scheme) {
  return scheme == LabelScheme::kThreeClass ? 3 : 2;
}

// Dense class index under a scheme. Under SciTail, NEUTRAL has no class.
inline std::optional<std::size_t> class_index(Label l, LabelScheme scheme) {
  if (scheme == LabelScheme::kThreeClass) return label_index(l);
  if (l == Label::kEntails) return 0;
  if (l == Label::kContradicts) return 1;
  return std::nullopt;
}

inline Label class_label(std::size_t index, LabelScheme scheme) {
  if (scheme == LabelScheme::kThreeClass) return kAllLabels.at(index);
  return index == 0 ? Label::kEntails : Label::kContradicts;
}

inline std::string_view label_name(Label l, LabelScheme scheme = LabelScheme::kThreeClass) {
  if (scheme == LabelScheme::kSciTailTwoClass && l != Label::kEntails) return "neutral";
  return label_symbol(l);
}

inline Label parse_label(std::string_view name, LabelScheme scheme = LabelScheme::kThreeClass) {
  if (name == "entails" || name == "entailment") return Label::kEntails;
  if (scheme == LabelScheme::kSciTailTwoClass) {
    if (name == "neutral" || name == "contradicts" || name == "contradiction") {
      return Label::kContradicts;
    }
  } else {
    if (name == "contradicts" || name == "contradiction") return Label::kContradicts;
    if (name == "neutral") return Label::kNeutral;
  }
  throw Error(ErrorCode::kFormat, "unknown label \"" + std::string(name) + "\"");
}

inline std::string_view scheme_name(LabelScheme scheme) {
  return scheme == LabelScheme::kThreeClass ? "three-class" : "scitail";
}

inline LabelScheme parse_scheme(std::string_view name) {
  if (name == "three-class" || name == "3" || name == "snli") return LabelScheme::kThreeClass;
  if (name == "scitail" || name == "2" || name == "two-class") {
    return LabelScheme::kSciTailTwoClass;
  }
  throw Error(ErrorCode::kConfig, "unknown label scheme \"" + std::string(name) + "\"");
}

}  // namespace entailgen
