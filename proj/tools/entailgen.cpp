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

// Command-line front end: ingest, generate, train, eval, nega-extract,
// rules-stats. Exit codes: 0 success, 1 runtime failure, 2 configuration error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "entailgen/adversarial.hpp"
#include "entailgen/corpus.hpp"
#include "entailgen/discriminator.hpp"
#include "entailgen/io.hpp"
#include "entailgen/kb.hpp"
#include "entailgen/remote.hpp"
#include "entailgen/sampler.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace entailgen;

namespace {

struct DataOptions {
  std::string format = "canonical";
  std::string scheme = "three-class";
};

struct RuleOptions {
  std::string wordnet, ppdb, sick;
  std::string generators;  // comma-separated subset of wordnet,ppdb,sick,hand
};

struct SamplerOptions {
  double alpha = 1.0;
  std::size_t rules_per_source = 3;
  std::uint64_t seed = 0;
  std::string negate_mode = "does";
  bool scitail_drop_contradictions = false;
  std::size_t jobs = 1;
};

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::kConfig, msg); }

void require_file(const std::string& path, const std::string& what) {
  if (path.empty()) config_error(what + " path is required");
  if (!fs::is_regular_file(path)) config_error(what + " not found: " + path);
}

void add_data_options(CLI::App* cmd, DataOptions& d) {
  cmd->add_option("--format", d.format, "canonical | snli | scitail")->capture_default_str();
  cmd->add_option("--scheme", d.scheme, "three-class | scitail")->capture_default_str();
}

void add_rule_options(CLI::App* cmd, RuleOptions& r) {
  cmd->add_option("--wordnet", r.wordnet, "WordNet rule TSV");
  cmd->add_option("--ppdb", r.ppdb, "PPDB rule TSV");
  cmd->add_option("--sick", r.sick, "SICK rule TSV");
  cmd->add_option("--generators", r.generators,
                  "comma-separated subset of wordnet,ppdb,sick,hand (default: hand plus every "
                  "source with a rule file)");
}

void add_sampler_options(CLI::App* cmd, SamplerOptions& s) {
  cmd->add_option("--alpha", s.alpha, "cap ratio |Z| <= alpha |X|")->capture_default_str();
  cmd->add_option("--rules-per-source", s.rules_per_source)->capture_default_str();
  cmd->add_option("--seed", s.seed, "root seed")->capture_default_str();
  cmd->add_option("--negate-mode", s.negate_mode, "does | do")->capture_default_str();
  cmd->add_flag("--scitail-drop-contradictions", s.scitail_drop_contradictions,
                "drop generated contradictions under the scitail scheme");
  cmd->add_option("--jobs", s.jobs, "worker threads for generation")->capture_default_str();
}

corpus::Corpus load_corpus(const std::string& path, const DataOptions& d) {
  require_file(path, "corpus");
  return corpus::ingest(fs::path(path), corpus::parse_format(d.format), parse_scheme(d.scheme));
}

std::vector<kb::Source> generator_set(const RuleOptions& r) {
  std::vector<kb::Source> out;
  if (r.generators.empty()) {
    if (!r.wordnet.empty()) out.push_back(kb::Source::kWordNet);
    if (!r.ppdb.empty()) out.push_back(kb::Source::kPpdb);
    if (!r.sick.empty()) out.push_back(kb::Source::kSick);
    out.push_back(kb::Source::kHand);
    return out;
  }
  std::stringstream ss(r.generators);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const kb::Source s = kb::parse_source(item);
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  }
  if (out.empty()) config_error("generator set is empty");
  return out;
}

struct LoadedRules {
  kb::RuleStore store;
  json reports = json::object();
};

LoadedRules load_rule_store(const RuleOptions& r, const std::vector<kb::Source>& sources) {
  auto path_for = [&](kb::Source s) -> const std::string& {
    static const std::string kNone;
    switch (s) {
      case kb::Source::kWordNet: return r.wordnet;
      case kb::Source::kPpdb: return r.ppdb;
      case kb::Source::kSick: return r.sick;
      case kb::Source::kHand: return kNone;
    }
    return kNone;
  };
  for (kb::Source s : sources) {
    if (s != kb::Source::kHand) require_file(path_for(s), std::string(kb::source_name(s)) + " rule file");
  }
  LoadedRules out;
  std::vector<kb::RuleFragment> frags;
  for (kb::Source s : {kb::Source::kWordNet, kb::Source::kPpdb, kb::Source::kSick}) {
    const std::string& p = path_for(s);
    if (p.empty()) continue;
    require_file(p, std::string(kb::source_name(s)) + " rule file");
    frags.push_back(kb::load_rules(p, s));
    out.reports[std::string(kb::source_name(s))] = io::load_report_json(frags.back().report);
  }
  out.store = kb::RuleStore::build(std::move(frags));
  return out;
}

sampler::SamplerConfig make_sampler_config(const SamplerOptions& s, LabelScheme scheme,
                                           std::vector<kb::Source> sources) {
  sampler::SamplerConfig cfg;
  cfg.alpha = s.alpha;
  cfg.rules_per_source = s.rules_per_source;
  cfg.seed = s.seed;
  cfg.scheme = scheme;
  cfg.projection.scitail_keep_contradictions = !s.scitail_drop_contradictions;
  cfg.sources = std::move(sources);
  cfg.jobs = s.jobs;
  if (s.negate_mode == "does") {
    cfg.gen.negate_mode = gen::NegateMode::kDoes;
  } else if (s.negate_mode == "do") {
    cfg.gen.negate_mode = gen::NegateMode::kDo;
  } else {
    config_error("--negate-mode must be does or do");
  }
  cfg.validate();
  return cfg;
}

std::ofstream open_output(const std::string& path) {
  if (path.empty()) config_error("output path is required");
  if (auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  return out;
}

void write_json_file(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << j.dump(2) << "\n";
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kFormat, path.string() + ": " + e.what());
  }
}

// ---- ingest / nega-extract / rules-stats -----------------------------------

struct IngestArgs {
  std::string input, output;
  DataOptions data;
};

int run_ingest(const IngestArgs& a) {
  auto c = load_corpus(a.input, a.data);
  auto out = open_output(a.output);
  corpus::write_canonical(c, out);
  std::cout << io::ingest_stats_json(c).dump(2) << "\n";
  return 0;
}

int run_nega_extract(const IngestArgs& a) {
  auto c = load_corpus(a.input, a.data);
  auto nega = corpus::nega_extract(c);
  auto out = open_output(a.output);
  corpus::write_canonical(nega, out);
  json stats = io::ingest_stats_json(nega);
  stats["input_examples"] = c.size();
  stats["fraction"] = c.size() ? static_cast<double>(nega.size()) / static_cast<double>(c.size()) : 0.0;
  std::cout << stats.dump(2) << "\n";
  return 0;
}

int run_rules_stats(const RuleOptions& r) {
  if (r.wordnet.empty() && r.ppdb.empty() && r.sick.empty()) {
    config_error("at least one of --wordnet, --ppdb, --sick is required");
  }
  auto loaded = load_rule_store(r, {});
  json j = io::store_stats_json(kb::store_stats(loaded.store));
  j["files"] = loaded.reports;
  std::cout << j.dump(2) << "\n";
  return 0;
}

// ---- generate ---------------------------------------------------------------

struct GenerateArgs {
  std::string data_path, output, stats;
  std::size_t batch_size = 32;
  DataOptions data;
  RuleOptions rules;
  SamplerOptions sampler;
};

int run_generate(const GenerateArgs& a) {
  const auto sources = generator_set(a.rules);
  auto loaded = load_rule_store(a.rules, sources);
  auto c = load_corpus(a.data_path, a.data);
  auto cfg = make_sampler_config(a.sampler, c.scheme, sources);
  if (a.batch_size < 1) config_error("--batch-size must be >= 1");
  auto out = open_output(a.output);
  GeneratorPolicy policy;

  sampler::DropCounts drops;
  std::size_t candidates = 0, total = 0;
  std::map<std::string, std::size_t> per_source, per_label;
  for (std::size_t b = 0, batch = 0; b < c.size(); b += a.batch_size, ++batch) {
    std::span<const Example> chunk(c.examples.data() + b, std::min(a.batch_size, c.size() - b));
    auto plan = sampler::generate_for_batch(chunk, loaded.store, policy, cfg,
                                            sampler::batch_seed(cfg.seed, 0, batch));
    drops += plan.drops;
    candidates += plan.candidates;
    for (const auto& g : plan.generated) {
      out << io::generated_json(g, c.scheme).dump() << "\n";
      ++per_source[std::string(kb::source_name(g.rule.arm.source))];
      ++per_label[std::string(label_name(g.example.label, c.scheme))];
      ++total;
    }
  }
  json stats{{"seed", cfg.seed},
             {"alpha", cfg.alpha},
             {"input_examples", c.size()},
             {"candidates", candidates},
             {"generated", total},
             {"per_source", per_source},
             {"per_label", per_label},
             {"drops", io::drops_json(drops)},
             {"rules", io::store_stats_json(kb::store_stats(loaded.store))}};
  if (!a.stats.empty()) {
    auto s = open_output(a.stats);
    s << stats.dump(2) << "\n";
  } else {
    std::cout << stats.dump(2) << "\n";
  }
  return 0;
}

// ---- train / eval -----------------------------------------------------------

struct TrainArgs {
  std::string train_path, dev_path, checkpoint;
  bool resume = false;
  std::size_t iterations = 30, batch_size = 32, pretrain_epochs = 5;
  double lr = 0.5, l2 = 1e-4;
  unsigned hash_bits = disc::kDefaultHashBits;
  double policy_lr = 0.1, policy_decay = 0.9, policy_temperature = 1.0;
  std::string discriminator = "builtin";
  DataOptions data;
  RuleOptions rules;
  SamplerOptions sampler;
};

std::unique_ptr<disc::Discriminator> open_discriminator(const std::string& spec) {
  if (spec.starts_with("bridge:")) return remote::RemoteDiscriminator::connect(spec.substr(7));
  config_error("--discriminator must be builtin or bridge:<endpoint>, got " + spec);
}

int run_train(const TrainArgs& a) {
  const auto sources = generator_set(a.rules);
  auto loaded = load_rule_store(a.rules, sources);
  auto train = load_corpus(a.train_path, a.data);
  corpus::Corpus dev;
  if (!a.dev_path.empty()) dev = load_corpus(a.dev_path, a.data);
  if (a.checkpoint.empty()) config_error("--checkpoint directory is required");
  const fs::path dir(a.checkpoint);
  const bool builtin = a.discriminator == "builtin";

  adv::TrainConfig cfg;
  cfg.iterations = a.iterations;
  cfg.batch_size = a.batch_size;
  cfg.seed = a.sampler.seed;
  cfg.sampler = make_sampler_config(a.sampler, train.scheme, sources);
  cfg.validate();

  std::unique_ptr<disc::Discriminator> model;
  GeneratorPolicy policy(PolicyConfig{a.policy_temperature, a.policy_lr, a.policy_decay, 0.01});
  std::size_t start = 0;
  if (a.resume) {
    const json state = read_json_file(dir / "state.json");
    start = state.at("completed_iterations").get<std::size_t>();
    if (state.at("seed").get<std::uint64_t>() != cfg.seed) {
      config_error("resume seed differs from checkpoint seed");
    }
    policy = adv::policy_from_json(read_json_file(dir / "policy.json"));
    if (builtin) {
      model = std::make_unique<disc::LogisticDiscriminator>(
          disc::LogisticDiscriminator::from_json(read_json_file(dir / "model.json")));
    } else {
      model = open_discriminator(a.discriminator);
    }
    std::cerr << "resuming at iteration " << start << "\n";
  } else {
    if (builtin) {
      disc::LogisticConfig mc;
      mc.scheme = train.scheme;
      mc.hash_bits = a.hash_bits;
      mc.learning_rate = a.lr;
      mc.l2 = a.l2;
      model = std::make_unique<disc::LogisticDiscriminator>(mc);
    } else {
      model = open_discriminator(a.discriminator);
    }
    if (model->scheme() != train.scheme) config_error("discriminator class count does not match scheme");
    const double loss = adv::pretrain(*model, train.examples, a.pretrain_epochs, a.batch_size, cfg.seed);
    std::cerr << "pretrain: " << a.pretrain_epochs << " epochs, loss " << loss << "\n";
  }
  fs::create_directories(dir);
  const fs::path metrics_path = dir / "metrics.csv";
  std::ofstream metrics(metrics_path, a.resume ? std::ios::app : std::ios::trunc);
  if (!metrics) throw Error(ErrorCode::kIo, "cannot write " + metrics_path.string());
  if (!a.resume) adv::write_metrics_header(metrics);

  std::size_t written = 0;
  auto save = [&](std::size_t completed, const adv::TrainRun& run) {
    for (; written < run.log.size(); ++written) adv::write_metrics_row(metrics, run.log[written]);
    metrics.flush();
    if (builtin) {
      write_json_file(dir / "model.json",
                      static_cast<const disc::LogisticDiscriminator&>(*model).to_json());
    }
    write_json_file(dir / "policy.json", adv::policy_to_json(policy));
    json policy_probs = json::object();
    const auto probs = policy.probabilities();
    for (std::size_t i = 0; i < probs.size(); ++i) policy_probs[kb::arm_name(kb::kArmCatalog[i])] = probs[i];
    write_json_file(dir / "state.json",
                    {{"completed_iterations", completed},
                     {"iterations", cfg.iterations},
                     {"seed", cfg.seed},
                     {"alpha", cfg.sampler.alpha},
                     {"batch_size", cfg.batch_size},
                     {"scheme", std::string(scheme_name(train.scheme))},
                     {"discriminator", a.discriminator},
                     {"policy_probabilities", policy_probs}});
    std::cerr << "iteration " << completed << "/" << cfg.iterations << "\n";
  };
  auto run = adv::adversarial_train(*model, policy, train.examples, loaded.store, cfg, dev.examples,
                                    start, save);
  if (run.completed_iterations == start) save(start, run);
  return 0;
}

struct EvalArgs {
  std::string checkpoint, data_path, output;
  std::string discriminator = "builtin";
  DataOptions data;
};

int run_eval(const EvalArgs& a) {
  auto c = load_corpus(a.data_path, a.data);
  std::unique_ptr<disc::Discriminator> model;
  if (a.discriminator == "builtin") {
    if (a.checkpoint.empty()) config_error("--checkpoint is required for the builtin discriminator");
    const fs::path model_path = fs::path(a.checkpoint) / "model.json";
    if (!fs::is_regular_file(model_path)) config_error("checkpoint not found: " + model_path.string());
    model = std::make_unique<disc::LogisticDiscriminator>(
        disc::LogisticDiscriminator::from_json(read_json_file(model_path)));
  } else {
    model = open_discriminator(a.discriminator);
  }
  if (model->scheme() != c.scheme) config_error("model class count does not match the data scheme");
  auto nega = corpus::nega_extract(c);
  json report{{"scheme", std::string(scheme_name(c.scheme))},
              {"overall", io::eval_json(model->evaluate_by_prediction(c.examples), c.scheme)},
              {"nega_slice", io::eval_json(model->evaluate_by_prediction(nega.examples), c.scheme)}};
  if (a.output.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    auto out = open_output(a.output);
    out << report.dump(2) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Knowledge-guided adversarial example generation and training for textual entailment"};
  app.set_config("--config", "", "key=value configuration file (CLI flags take precedence)");
  app.require_subcommand(1);

  IngestArgs ingest_args;
  auto* ingest = app.add_subcommand("ingest", "convert a corpus to canonical JSONL");
  ingest->add_option("--input", ingest_args.input)->required();
  ingest->add_option("--output", ingest_args.output)->required();
  add_data_options(ingest, ingest_args.data);

  IngestArgs nega_args;
  auto* nega = app.add_subcommand("nega-extract", "keep examples containing negation triggers");
  nega->add_option("--input", nega_args.input)->required();
  nega->add_option("--output", nega_args.output)->required();
  add_data_options(nega, nega_args.data);

  RuleOptions stats_args;
  auto* rules_stats = app.add_subcommand("rules-stats", "load rule files and report counts");
  add_rule_options(rules_stats, stats_args);

  GenerateArgs gen_args;
  auto* generate = app.add_subcommand("generate", "generate adversarial examples per batch");
  generate->add_option("--data", gen_args.data_path)->required();
  generate->add_option("--output", gen_args.output)->required();
  generate->add_option("--stats", gen_args.stats, "stats JSON path (default: stdout)");
  generate->add_option("--batch-size", gen_args.batch_size)->capture_default_str();
  add_data_options(generate, gen_args.data);
  add_rule_options(generate, gen_args.rules);
  add_sampler_options(generate, gen_args.sampler);

  TrainArgs train_args;
  auto* train = app.add_subcommand("train", "pretrain then adversarially train a discriminator");
  train->add_option("--train", train_args.train_path)->required();
  train->add_option("--dev", train_args.dev_path);
  train->add_option("--checkpoint", train_args.checkpoint, "checkpoint directory")->required();
  train->add_flag("--resume", train_args.resume, "continue from the checkpoint directory");
  train->add_option("--iterations,-K", train_args.iterations)->capture_default_str();
  train->add_option("--batch-size", train_args.batch_size)->capture_default_str();
  train->add_option("--pretrain-epochs", train_args.pretrain_epochs)->capture_default_str();
  train->add_option("--lr", train_args.lr, "discriminator learning rate")->capture_default_str();
  train->add_option("--l2", train_args.l2)->capture_default_str();
  train->add_option("--hash-bits", train_args.hash_bits)->capture_default_str();
  train->add_option("--policy-lr", train_args.policy_lr)->capture_default_str();
  train->add_option("--policy-decay", train_args.policy_decay)->capture_default_str();
  train->add_option("--policy-temperature", train_args.policy_temperature)->capture_default_str();
  train->add_option("--discriminator", train_args.discriminator, "builtin | bridge:<endpoint>")
      ->capture_default_str();
  add_data_options(train, train_args.data);
  add_rule_options(train, train_args.rules);
  add_sampler_options(train, train_args.sampler);

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "accuracy report with per-label and negation slices");
  eval->add_option("--checkpoint", eval_args.checkpoint);
  eval->add_option("--data", eval_args.data_path)->required();
  eval->add_option("--output", eval_args.output, "report path (default: stdout)");
  eval->add_option("--discriminator", eval_args.discriminator)->capture_default_str();
  add_data_options(eval, eval_args.data);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*ingest) return run_ingest(ingest_args);
    if (*nega) return run_nega_extract(nega_args);
    if (*rules_stats) return run_rules_stats(stats_args);
    if (*generate) return run_generate(gen_args);
    if (*train) return run_train(train_args);
    if (*eval) return run_eval(eval_args);
  } catch (const Error& e) {
    std::cerr << "entailgen: " << e.what() << "\n";
    return e.code() == ErrorCode::kConfig ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "entailgen: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
