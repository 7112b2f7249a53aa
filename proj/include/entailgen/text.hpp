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

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>

#include <algorithm>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "entailgen/error.hpp"
#include "entailgen/irregular_verbs.hpp"

namespace entailgen::text {

enum class Pos { kNoun, kVerb, kAdj, kAdv, kOther };

enum class Tense { kPast, kThirdPersonPresent, kPresent, kBeForm };

inline std::string_view pos_name(Pos pos) {
  switch (pos) {
    case Pos::kNoun: return "NOUN";
    case Pos::kVerb: return "VERB";
    case Pos::kAdj: return "ADJ";
    case Pos::kAdv: return "ADV";
    case Pos::kOther: return "OTHER";
  }
  return "OTHER";
}

// Accepts the 5-tag names and coarse Penn Treebank prefixes (NN*, VB*, ...).
inline std::optional<Pos> parse_pos(std::string_view name) {
  std::string up(name);
  std::transform(up.begin(), up.end(), up.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (up == "NOUN" || up.starts_with("NN")) return Pos::kNoun;
  if (up == "VERB" || up.starts_with("VB") || up == "MD") return Pos::kVerb;
  if (up == "ADJ" || up.starts_with("JJ")) return Pos::kAdj;
  if (up == "ADV" || up.starts_with("RB")) return Pos::kAdv;
  if (up == "OTHER") return Pos::kOther;
  if (!up.empty() && std::all_of(up.begin(), up.end(), [](char c) {
        return std::isupper(static_cast<unsigned char>(c)) || c == '$';
      })) {
    return Pos::kOther;
  }
  return std::nullopt;
}

struct Token {
  std::string surface;
  Pos pos = Pos::kNoun;
  std::string lemma;

  friend bool operator==(const Token&, const Token&) = default;
};

struct Sentence {
  std::string raw;
  std::vector<Token> tokens;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }

  // Tokens joined with single spaces.
  std::string render() const {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (i > 0) out.push_back(' ');
      out += tokens[i].surface;
    }
    return out;
  }

  std::vector<std::string> surfaces() const {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) out.push_back(t.surface);
    return out;
  }
};

namespace detail {

using WordSet = std::unordered_set<std::string_view>;

inline const WordSet& be_forms() {
  static const WordSet s{"is", "are", "was", "were", "am", "be", "been", "being"};
  return s;
}

// Auxiliaries and modals after which "not" is inserted directly.
inline const WordSet& modal_forms() {
  static const WordSet s{"can", "could", "will", "would", "shall", "should",
                         "may", "might", "must"};
  return s;
}

inline const WordSet& auxiliaries() {
  static const WordSet s{"is",    "are",   "was",    "were",  "am",    "be",
                         "been",  "being", "do",     "does",  "did",   "have",
                         "has",   "had",   "having", "can",   "could", "will",
                         "would", "shall", "should", "may",   "might", "must"};
  return s;
}

inline const WordSet& determiners() {
  static const WordSet s{
      "a",     "an",     "the",     "this",    "that",    "these", "those",
      "some",  "any",    "every",   "each",    "all",     "both",  "either",
      "neither", "no",   "another", "such",    "what",    "which", "whose",
      "my",    "your",   "his",     "her",     "its",     "our",   "their",
      "several", "many", "few",     "much",    "more",    "most",  "other",
      "one",   "two",    "three",   "four",    "five",    "six",   "seven",
      "eight", "nine",   "ten",     "twelve",  "twenty",  "hundred", "lots",
      "plenty", "numerous"};
  return s;
}

inline const WordSet& subject_pronouns() {
  static const WordSet s{"i",  "you",  "he",   "she",    "it",      "we",
                         "they", "who", "that", "which", "someone", "somebody",
                         "everyone", "everybody", "nobody", "something",
                         "everything", "nothing", "anyone", "people"};
  return s;
}

// Closed-class words tagged OTHER.
inline const WordSet& closed_class() {
  static const WordSet s{
      // pronouns
      "i", "you", "he", "she", "it", "we", "they", "me", "him", "us", "them",
      "mine", "yours", "hers", "ours", "theirs", "myself", "yourself",
      "himself", "herself", "itself", "ourselves", "themselves", "who",
      "whom", "someone", "somebody", "something", "anyone", "anybody",
      "anything", "everyone", "everybody", "everything", "nobody", "nothing",
      "none", "whoever", "whatever", "each", "other", "others",
      // prepositions
      "about", "above", "across", "after", "against", "along", "alongside",
      "amid", "among", "amongst", "around", "at", "atop", "before", "behind",
      "below", "beneath", "beside", "besides", "between", "beyond", "by",
      "despite", "down", "during", "except", "for", "from", "in", "inside",
      "into", "like", "near", "nearby", "of", "off", "on", "onto", "opposite",
      "out", "outside", "over", "past", "per", "since", "through",
      "throughout", "till", "to", "toward", "towards", "under", "underneath",
      "unlike", "until", "up", "upon", "via", "with", "within", "without",
      "aboard", "versus",
      // conjunctions and complementizers
      "and", "or", "but", "nor", "so", "yet", "because", "although", "though",
      "while", "whilst", "if", "unless", "whereas", "as", "than", "then",
      "whether", "once", "where", "when", "why", "how", "whenever",
      "wherever",
      // particles and misc
      "not", "n't", "to", "there", "here", "&", "-", "--", "'s",
      "zero", "eleven", "thirteen", "fourteen", "fifteen", "sixteen",
      "seventeen", "eighteen", "nineteen", "thirty", "forty", "fifty",
      "sixty", "seventy", "eighty", "ninety", "thousand", "million",
      "first", "second", "third", "last", "next"};
  return s;
}

inline const WordSet& adverbs() {
  static const WordSet s{
      "very",   "too",     "also",   "just",    "never",   "always",
      "often",  "now",     "together", "away",  "back",    "almost",
      "still",  "already", "quite",  "soon",    "again",   "ever",
      "even",   "rather",  "perhaps", "maybe",  "seldom",  "sometimes",
      "yesterday", "today", "tomorrow", "tonight", "downstairs",
      "upstairs", "outdoors", "indoors", "alone", "ahead", "forward",
      "apart", "instead", "somewhere", "anywhere", "everywhere", "nowhere",
      "only",   "well",    "fast",   "hard",    "later",   "home"};
  return s;
}

inline const WordSet& adjectives() {
  static const WordSet s{
      "large", "small", "big", "little", "young", "old", "new", "good", "bad",
      "red", "blue", "green", "yellow", "black", "white", "brown", "orange",
      "pink", "purple", "gray", "grey", "tall", "short", "long", "happy",
      "sad", "empty", "full", "hot", "cold", "warm", "cool", "wet", "dry",
      "dirty", "clean", "pretty", "ugly", "busy", "wooden", "huge", "tiny",
      "high", "low", "heavy", "light", "dark", "bright", "open", "closed",
      "asleep", "awake", "alive", "dead", "rich", "poor", "strong", "weak",
      "quiet", "loud", "calm", "angry", "funny", "silly", "nice", "fine",
      "great", "fat", "thin", "slim", "elderly", "male", "female", "several",
      "same", "different", "blond", "blonde", "bald", "shirtless", "naked",
      "sunny", "rainy", "snowy", "cloudy", "windy", "muddy", "sandy", "rocky",
      "grassy", "steep", "deep", "shallow", "wide", "narrow", "round", "flat",
      "smooth", "rough", "soft", "hard", "sharp", "tired", "hungry", "thirsty",
      "sick", "healthy", "ready", "free", "real", "fake", "modern", "ancient",
      "professional", "local", "public", "private", "famous", "favorite",
      "certain", "main", "whole", "entire", "front", "middle", "top",
      "bottom", "left", "right", "other", "outdoor", "indoor", "colorful",
      "striped", "furry", "hairy", "curly", "asian", "african", "american",
      "european", "indian", "chinese", "japanese", "mexican"};
  return s;
}

// Regular verbs the lemmatizer and tagger recognize by stem.
inline const WordSet& regular_verbs() {
  static const WordSet s{
      "accept", "act", "add", "admire", "agree", "allow", "answer", "appear",
      "arrive", "ask", "attack", "attend", "bake", "balance", "bathe",
      "blossom", "boil", "bounce", "bow", "brush", "call", "carry", "carve", "change", "chase", "chat", "cheer", "chew", "clap",
      "clean", "climb", "close", "collect", "comb", "compete", "cook",
      "crawl", "cross", "cry", "dance", "decide",
      "decorate", "deliver", "describe", "die", "dislike", "drag", "drop", "dry", "enjoy", "enter", "examine", "explain", "explore",
      "fill", "finish", "fix", "float", "follow",
      "gather", "gaze", "glance", "glide", "grab", "greet", "happen", "hate", "help", "hike", "hop",
      "hope", "hug", "hunt", "hurry", "ignore", "inspect", "jog", "join",
      "joke", "juggle", "jump", "kick", "kiss", "knit", "knock", "laugh", "lift", "like", "listen", "live", "load", "look", "love",
      "march", "marry", "mix", "move", "mow", "need", "notice",
      "observe", "open", "paddle", "paint", "pass", "perform",
      "pet", "pick", "plant", "play", "pose", "pour", "practice",
      "prepare", "press", "pull", "punch", "push",
      "raise", "reach", "relax", "remove", "repair",
      "return", "roll", "rub", "sail", "scream", "serve",
      "shave", "shop", "shout", "skate", "ski", "skip", "slip",
      "smile", "smoke", "splash", "spray", "stare", "start",
      "stay", "step", "stop", "stretch", "stroll", "study", "surf", "talk",
      "taste", "tie", "touch", "tow", "travel", "try", "turn",
      "use", "visit", "wait", "walk", "want", "wash",
      "watch", "wave", "wipe", "wish", "work", "worry", "wrap",
      "yell", "fetch", "kneel", "lean", "learn", "lick", "lie", "lounge",
      "pedal", "peel", "plow", "pray", "read", "ride",
      "sew", "sing", "sip", "sit", "sleep", "slide", "smell", "spin", "squat", "stir", "swim", "swing", "tease", "toss", "wander",
      "whisper", "wink", "wrestle", "yawn", "dive", "dig",
      "hold", "wear", "eat", "drink", "drive", "catch", "fly",
      "fall", "run", "stand", "throw", "win", "write", "shoot"};
  return s;
}

struct IrregularIndex {
  std::unordered_map<std::string_view, std::string_view> past_to_base;
  std::unordered_map<std::string_view, std::string_view> participle_to_base;
  WordSet bases;
};

inline const IrregularIndex& irregular_index() {
  static const IrregularIndex idx = [] {
    IrregularIndex out;
    for (const auto& v : kIrregularVerbs) {
      out.bases.insert(v.base);
      if (v.past != v.base) out.past_to_base.emplace(v.past, v.base);
      if (v.participle != v.base) out.participle_to_base.emplace(v.participle, v.base);
    }
    return out;
  }();
  return idx;
}

inline bool is_known_verb(std::string_view w) {
  return regular_verbs().contains(w) || irregular_index().bases.contains(w);
}

inline bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

inline bool ends_with(std::string_view w, std::string_view suffix) {
  return w.size() >= suffix.size() && w.substr(w.size() - suffix.size()) == suffix;
}

// Stem left after removing -ed / -ing, repaired by lexicon lookup,
// consonant undoubling and e-restoration.
inline std::string repair_stem(std::string stem) {
  if (is_known_verb(stem)) return stem;
  if (is_known_verb(stem + "e")) return stem + "e";
  const std::size_t n = stem.size();
  if (n >= 3 && stem[n - 1] == stem[n - 2] && !is_vowel(stem[n - 1]) &&
      stem[n - 1] != 'l' && stem[n - 1] != 's' && stem[n - 1] != 'z') {
    return stem.substr(0, n - 1);
  }
  if (n >= 2) {
    const char last = stem[n - 1];
    if (last == 'c' || last == 'v' || last == 'u' || last == 'z') return stem + "e";
    if ((last == 'l' || last == 'r') && !is_vowel(stem[n - 2]) && stem[n - 2] != last &&
        stem[n - 2] != 'r') {
      return stem + "e";
    }
  }
  return stem;
}

inline std::string lemmatize_verb(std::string_view w) {
  const auto& irr = irregular_index();
  if (be_forms().contains(w)) return "be";
  if (w == "'s" || w == "'re" || w == "'m") return "be";
  if (ends_with(w, "n't")) {
    if (w == "won't") return "will";
    if (w == "can't") return "can";
    if (w == "shan't") return "shall";
    std::string_view head = w.substr(0, w.size() - 3);
    if (be_forms().contains(head)) return "be";
    return lemmatize_verb(head);
  }
  if (auto it = irr.past_to_base.find(w); it != irr.past_to_base.end()) {
    return std::string(it->second);
  }
  if (auto it = irr.participle_to_base.find(w); it != irr.participle_to_base.end()) {
    return std::string(it->second);
  }
  if (w == "does") return "do";
  if (w == "has") return "have";
  if (w == "goes") return "go";
  if (is_known_verb(w)) return std::string(w);
  if (w.size() > 4 && ends_with(w, "ing")) {
    return repair_stem(std::string(w.substr(0, w.size() - 3)));
  }
  if (w.size() > 3 && ends_with(w, "ied")) {
    return std::string(w.substr(0, w.size() - 3)) + "y";
  }
  if (w.size() > 3 && ends_with(w, "ed")) {
    return repair_stem(std::string(w.substr(0, w.size() - 2)));
  }
  if (w.size() > 3 && ends_with(w, "ies")) {
    return std::string(w.substr(0, w.size() - 3)) + "y";
  }
  if (w.size() > 2 && ends_with(w, "s") && !ends_with(w, "ss")) {
    std::string_view one = w.substr(0, w.size() - 1);
    if (is_known_verb(one)) return std::string(one);
    if (ends_with(w, "es")) {
      std::string_view two = w.substr(0, w.size() - 2);
      if (ends_with(two, "ch") || ends_with(two, "sh") || ends_with(two, "ss") ||
          ends_with(two, "x") || ends_with(two, "z") || ends_with(two, "o")) {
        return std::string(two);
      }
    }
    return std::string(one);
  }
  return std::string(w);
}

// True for surfaces that look like an inflected form of a known verb.
inline bool is_verb_form(std::string_view w) {
  if (is_known_verb(w)) return true;
  const auto& irr = irregular_index();
  if (irr.past_to_base.contains(w) || irr.participle_to_base.contains(w)) return true;
  if (ends_with(w, "s") || ends_with(w, "ed") || ends_with(w, "ing")) {
    return is_known_verb(lemmatize_verb(w));
  }
  return false;
}

inline bool has_adjective_suffix(std::string_view w) {
  if (w.size() < 5) return false;
  for (std::string_view suf : {"ous", "ful", "ive", "less", "able", "ible", "ical"}) {
    if (ends_with(w, suf)) return true;
  }
  return false;
}

inline const WordSet& ly_nouns() {
  static const WordSet s{"family", "belly", "jelly", "rally", "lily", "bully",
                         "butterfly", "dragonfly", "firefly", "assembly",
                         "supply", "reply", "ally", "holly", "italy"};
  return s;
}

inline bool is_strip_char(unsigned char c) {
  switch (c) {
    case '.': case ',': case '!': case '?': case ';': case ':': case '"':
    case '(': case ')': case '[': case ']': case '{': case '}': case '`':
    case '\'':
      return true;
    default:
      return false;
  }
}

}  // namespace detail

// NFC normalization followed by simple case folding.
inline std::string normalize(std::string_view raw) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  icu::UnicodeString text = icu::UnicodeString::fromUTF8(
      icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size())));
  icu::UnicodeString normalized;
  if (U_SUCCESS(status)) normalized = nfc->normalize(text, status);
  if (U_FAILURE(status)) normalized = text;
  normalized.foldCase();
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

inline bool is_negation_trigger(std::string_view surface) {
  return surface == "not" || surface == "no" || surface == "never" ||
         detail::ends_with(surface, "n't");
}

inline bool contains_negation(const Sentence& s) {
  return std::any_of(s.tokens.begin(), s.tokens.end(),
                     [](const Token& t) { return is_negation_trigger(t.surface); });
}

// Lowercases, splits on whitespace and strips leading/trailing punctuation
// from each piece. Pieces that were pure punctuation are discarded.
inline Sentence tokenize(std::string_view raw) {
  Sentence out;
  out.raw = std::string(raw);
  const std::string norm = normalize(raw);
  std::size_t i = 0;
  while (i < norm.size()) {
    while (i < norm.size() && std::isspace(static_cast<unsigned char>(norm[i]))) ++i;
    std::size_t j = i;
    while (j < norm.size() && !std::isspace(static_cast<unsigned char>(norm[j]))) ++j;
    std::size_t b = i, e = j;
    while (b < e && detail::is_strip_char(static_cast<unsigned char>(norm[b]))) ++b;
    while (e > b && detail::is_strip_char(static_cast<unsigned char>(norm[e - 1]))) {
      // keep the apostrophe of a trailing "n't"
      if (norm[e - 1] == '\'' && e - b >= 2 && norm[e - 2] == 'n') break;
      --e;
    }
    if (e > b) {
      std::string surface = norm.substr(b, e - b);
      out.tokens.push_back(Token{surface, Pos::kNoun, surface});
    }
    i = j;
  }
  if (out.tokens.empty()) {
    throw Error(ErrorCode::kEmptySentence, "no tokens in \"" + std::string(raw) + "\"");
  }
  return out;
}

inline std::string lemmatize(const Token& tok) {
  if (tok.pos != Pos::kVerb) return tok.surface;
  return detail::lemmatize_verb(tok.surface);
}

inline Tense verb_tense(const Token& tok) {
  if (tok.pos != Pos::kVerb) {
    throw Error(ErrorCode::kNotAVerb, "\"" + tok.surface + "\" is tagged " +
                                          std::string(pos_name(tok.pos)));
  }
  const std::string_view w = tok.surface;
  if (detail::be_forms().contains(w)) return Tense::kBeForm;
  const auto& irr = detail::irregular_index();
  if (irr.past_to_base.contains(w)) return Tense::kPast;
  if (w == "does" || w == "has") return Tense::kThirdPersonPresent;
  if (irr.bases.contains(w) || detail::regular_verbs().contains(w)) return Tense::kPresent;
  if (detail::ends_with(w, "ed")) return Tense::kPast;
  if (detail::ends_with(w, "s") && !detail::ends_with(w, "ss")) {
    return Tense::kThirdPersonPresent;
  }
  return Tense::kPresent;
}

// Closed-class lexicon plus suffix and context heuristics over a 5-tag set.
// Surfaces and token count are never changed.
inline Sentence pos_tag(Sentence s) {
  using namespace detail;
  auto& toks = s.tokens;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const std::string_view w = toks[i].surface;
    const Token* prev = i > 0 ? &toks[i - 1] : nullptr;
    const std::string_view pw = prev ? std::string_view(prev->surface) : std::string_view();
    const bool after_det = prev && (determiners().contains(pw) || prev->pos == Pos::kAdj);
    const bool after_aux = prev && (auxiliaries().contains(pw) || is_negation_trigger(pw) ||
                                    pw == "to");
    const bool after_subject =
        prev && (prev->pos == Pos::kNoun || subject_pronouns().contains(pw));

    Pos pos = Pos::kNoun;
    if (auxiliaries().contains(w) || (ends_with(w, "n't") && w.size() > 3)) {
      pos = Pos::kVerb;
    } else if (determiners().contains(w) || closed_class().contains(w)) {
      pos = Pos::kOther;
    } else if (adverbs().contains(w)) {
      pos = Pos::kAdv;
    } else if (adjectives().contains(w)) {
      pos = (after_subject && is_known_verb(w)) ? Pos::kVerb : Pos::kAdj;
    } else if (w.size() > 3 && ends_with(w, "ly") && !ly_nouns().contains(w)) {
      pos = Pos::kAdv;
    } else if (w.size() > 4 && ends_with(w, "ing")) {
      pos = (after_det && !after_aux) ? Pos::kNoun : Pos::kVerb;
    } else if (w.size() > 3 && ends_with(w, "ed")) {
      pos = (after_det && !after_aux) ? Pos::kAdj : Pos::kVerb;
    } else if (is_verb_form(w)) {
      const auto& irr = irregular_index();
      const bool marked_past = irr.past_to_base.contains(w) || irr.participle_to_base.contains(w);
      if (after_aux || after_subject || (marked_past && !after_det)) {
        pos = Pos::kVerb;
      }
    } else if (has_adjective_suffix(w)) {
      pos = Pos::kAdj;
    }
    toks[i].pos = pos;
    toks[i].lemma = pos == Pos::kVerb ? lemmatize_verb(w) : std::string(w);
  }
  return s;
}

inline Sentence analyze(std::string_view raw) { return pos_tag(tokenize(raw)); }

// Builds a tagged sentence from already-normalized surface tokens.
inline Sentence from_surfaces(const std::vector<std::string>& surfaces) {
  Sentence s;
  for (const auto& w : surfaces) s.tokens.push_back(Token{w, Pos::kNoun, w});
  s.raw = s.render();
  if (s.tokens.empty()) throw Error(ErrorCode::kEmptySentence, "no tokens");
  return pos_tag(std::move(s));
}

// "surface\tPOS\tlemma" per line, blank line between sentences.
inline std::vector<Sentence> read_pretagged(std::istream& in) {
  std::vector<Sentence> out;
  Sentence cur;
  std::string line;
  std::size_t lineno = 0;
  auto flush = [&] {
    if (!cur.tokens.empty()) {
      cur.raw = cur.render();
      out.push_back(std::move(cur));
      cur = Sentence{};
    }
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    std::vector<std::string> cols;
    std::size_t start = 0;
    for (;;) {
      std::size_t tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (cols.size() < 2 || cols[0].empty()) {
      throw Error(ErrorCode::kFormat, "pre-tagged line " + std::to_string(lineno));
    }
    auto pos = parse_pos(cols[1]);
    if (!pos) throw Error(ErrorCode::kFormat, "unknown POS \"" + cols[1] + "\"");
    Token tok;
    tok.surface = normalize(cols[0]);
    tok.pos = *pos;
    tok.lemma = cols.size() >= 3 && !cols[2].empty() ? normalize(cols[2]) : lemmatize(tok);
    cur.tokens.push_back(std::move(tok));
  }
  flush();
  return out;
}

}  // namespace entailgen::text
