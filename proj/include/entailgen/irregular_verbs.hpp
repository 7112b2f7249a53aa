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

#include <string_view>

namespace entailgen::text {

struct IrregularVerb {
  std::string_view base;
  std::string_view past;
  std::string_view participle;
};

// Past forms are unique across the table so past -> base is a function.
inline constexpr IrregularVerb kIrregularVerbs[] = {
    {"arise", "arose", "arisen"},       {"awake", "awoke", "awoken"},
    {"bear", "bore", "borne"},          {"beat", "beat", "beaten"},
    {"become", "became", "become"},     {"begin", "began", "begun"},
    {"bend", "bent", "bent"},           {"bet", "bet", "bet"},
    {"bind", "bound", "bound"},         {"bite", "bit", "bitten"},
    {"bleed", "bled", "bled"},          {"blow", "blew", "blown"},
    {"break", "broke", "broken"},       {"breed", "bred", "bred"},
    {"bring", "brought", "brought"},    {"broadcast", "broadcast", "broadcast"},
    {"build", "built", "built"},        {"burn", "burnt", "burnt"},
    {"burst", "burst", "burst"},        {"buy", "bought", "bought"},
    {"cast", "cast", "cast"},           {"catch", "caught", "caught"},
    {"choose", "chose", "chosen"},      {"cling", "clung", "clung"},
    {"come", "came", "come"},           {"cost", "cost", "cost"},
    {"creep", "crept", "crept"},        {"cut", "cut", "cut"},
    {"deal", "dealt", "dealt"},         {"dig", "dug", "dug"},
    {"dive", "dove", "dived"},          {"do", "did", "done"},
    {"draw", "drew", "drawn"},          {"dream", "dreamt", "dreamt"},
    {"drink", "drank", "drunk"},        {"drive", "drove", "driven"},
    {"dwell", "dwelt", "dwelt"},        {"eat", "ate", "eaten"},
    {"fall", "fell", "fallen"},         {"feed", "fed", "fed"},
    {"feel", "felt", "felt"},           {"fight", "fought", "fought"},
    {"find", "found", "found"},         {"flee", "fled", "fled"},
    {"fling", "flung", "flung"},        {"fly", "flew", "flown"},
    {"forbid", "forbade", "forbidden"}, {"forget", "forgot", "forgotten"},
    {"forgive", "forgave", "forgiven"}, {"freeze", "froze", "frozen"},
    {"get", "got", "gotten"},           {"give", "gave", "given"},
    {"go", "went", "gone"},             {"grind", "ground", "ground"},
    {"grow", "grew", "grown"},          {"hang", "hung", "hung"},
    {"have", "had", "had"},             {"hear", "heard", "heard"},
    {"hide", "hid", "hidden"},          {"hit", "hit", "hit"},
    {"hold", "held", "held"},           {"hurt", "hurt", "hurt"},
    {"keep", "kept", "kept"},           {"kneel", "knelt", "knelt"},
    {"know", "knew", "known"},          {"lay", "laid", "laid"},
    {"lead", "led", "led"},             {"lean", "leant", "leant"},
    {"leap", "leapt", "leapt"},         {"learn", "learnt", "learnt"},
    {"leave", "left", "left"},          {"lend", "lent", "lent"},
    {"let", "let", "let"},              {"lie", "lay", "lain"},
    {"light", "lit", "lit"},            {"lose", "lost", "lost"},
    {"make", "made", "made"},           {"mean", "meant", "meant"},
    {"meet", "met", "met"},             {"mistake", "mistook", "mistaken"},
    {"overcome", "overcame", "overcome"}, {"overtake", "overtook", "overtaken"},
    {"pay", "paid", "paid"},            {"put", "put", "put"},
    {"quit", "quit", "quit"},           {"read", "read", "read"},
    {"rid", "rid", "rid"},              {"ride", "rode", "ridden"},
    {"ring", "rang", "rung"},           {"rise", "rose", "risen"},
    {"run", "ran", "run"},              {"say", "said", "said"},
    {"see", "saw", "seen"},             {"seek", "sought", "sought"},
    {"sell", "sold", "sold"},           {"send", "sent", "sent"},
    {"set", "set", "set"},              {"sew", "sewed", "sewn"},
    {"shake", "shook", "shaken"},       {"shed", "shed", "shed"},
    {"shine", "shone", "shone"},        {"shoot", "shot", "shot"},
    {"show", "showed", "shown"},        {"shrink", "shrank", "shrunk"},
    {"shut", "shut", "shut"},           {"sing", "sang", "sung"},
    {"sink", "sank", "sunk"},           {"sit", "sat", "sat"},
    {"slay", "slew", "slain"},          {"sleep", "slept", "slept"},
    {"slide", "slid", "slid"},          {"sling", "slung", "slung"},
    {"slit", "slit", "slit"},           {"smell", "smelt", "smelt"},
    {"sow", "sowed", "sown"},           {"speak", "spoke", "spoken"},
    {"speed", "sped", "sped"},          {"spell", "spelt", "spelt"},
    {"spend", "spent", "spent"},        {"spill", "spilt", "spilt"},
    {"spin", "spun", "spun"},           {"spit", "spat", "spat"},
    {"split", "split", "split"},        {"spoil", "spoilt", "spoilt"},
    {"spread", "spread", "spread"},     {"spring", "sprang", "sprung"},
    {"stand", "stood", "stood"},        {"steal", "stole", "stolen"},
    {"stick", "stuck", "stuck"},        {"sting", "stung", "stung"},
    {"stink", "stank", "stunk"},        {"stride", "strode", "stridden"},
    {"strike", "struck", "struck"},     {"string", "strung", "strung"},
    {"strive", "strove", "striven"},    {"swear", "swore", "sworn"},
    {"sweep", "swept", "swept"},        {"swell", "swelled", "swollen"},
    {"swim", "swam", "swum"},           {"swing", "swung", "swung"},
    {"take", "took", "taken"},          {"teach", "taught", "taught"},
    {"tear", "tore", "torn"},           {"tell", "told", "told"},
    {"think", "thought", "thought"},    {"throw", "threw", "thrown"},
    {"thrust", "thrust", "thrust"},     {"tread", "trod", "trodden"},
    {"undergo", "underwent", "undergone"}, {"understand", "understood", "understood"},
    {"undertake", "undertook", "undertaken"}, {"upset", "upset", "upset"},
    {"wake", "woke", "woken"},          {"wear", "wore", "worn"},
    {"weave", "wove", "woven"},         {"weep", "wept", "wept"},
    {"win", "won", "won"},              {"wind", "wound", "wound"},
    {"withdraw", "withdrew", "withdrawn"}, {"wring", "wrung", "wrung"},
    {"write", "wrote", "written"},      {"be", "was", "been"},
    {"bid", "bid", "bid"},              {"cleave", "cleft", "cleft"},
    {"forsake", "forsook", "forsaken"}, {"sneak", "snuck", "snuck"},
};

}  // namespace entailgen::text
