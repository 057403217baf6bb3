// kge: train, evaluate, sample and rank knowledge-graph embedding models.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kge/anomaly.hpp"
#include "kge/dataset.hpp"
#include "kge/errors.hpp"
#include "kge/eval.hpp"
#include "kge/io.hpp"
#include "kge/model.hpp"
#include "kge/synthetic.hpp"
#include "kge/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace kge;

namespace {

// ---------------------------------------------------------------------
// path + config plumbing

fs::path resolve_path(const fs::path& path) {
  if (fs::exists(path) || path.is_absolute()) return path;
  if (const char* base = std::getenv("KGE_DATA_DIR")) {
    fs::path candidate = fs::path(base) / path;
    if (fs::exists(candidate)) return candidate;
  }
  return path;
}

ProposalPositions parse_positions(const std::string& text) {
  ProposalPositions p{false, false, false};
  for (char c : text) {
    switch (c) {
      case 's':
        p.subject = true;
        break;
      case 'p':
        p.predicate = true;
        break;
      case 'o':
        p.object = true;
        break;
      default:
        throw DataError(std::string("positions: unknown letter '") + c +
                        "' (use a subset of \"spo\")");
    }
  }
  if (!p.any()) throw DataError("positions: at least one of s, p, o");
  return p;
}

std::string positions_string(const ProposalPositions& p) {
  std::string s;
  if (p.subject) s += 's';
  if (p.predicate) s += 'p';
  if (p.object) s += 'o';
  return s;
}

OptimizerKind parse_optimizer(const std::string& name) {
  if (name == "adagrad") return OptimizerKind::Adagrad;
  if (name == "adam") return OptimizerKind::Adam;
  throw DataError("unknown optimizer: " + name + " (adagrad or adam)");
}

// The config file is line-oriented `key = value` with exactly the
// TrainConfig keys; unknown keys are errors. CLI flags override it.
void apply_config_entry(TrainConfig& config, const std::string& key,
                        const std::string& value) {
  try {
    if (key == "model") {
      config.model = model_kind_from_name(value);
    } else if (key == "dim") {
      config.dim = std::stoll(value);
    } else if (key == "lr") {
      config.learning_rate = std::stod(value);
    } else if (key == "epochs") {
      config.epochs = std::stoi(value);
    } else if (key == "batch") {
      config.batch_size = std::stoull(value);
    } else if (key == "neg_subj") {
      config.neg_subject = std::stoi(value);
    } else if (key == "neg_obj") {
      config.neg_object = std::stoi(value);
    } else if (key == "free_samples") {
      config.sampler.steps_per_chain = std::stoi(value);
    } else if (key == "chains") {
      config.sampler.chains_per_triple = std::stoi(value);
    } else if (key == "positions") {
      config.sampler.positions = parse_positions(value);
    } else if (key == "l1") {
      config.l1_weight = std::stod(value);
    } else if (key == "l2") {
      config.l2_weight = std::stod(value);
    } else if (key == "optimizer") {
      config.optimizer = parse_optimizer(value);
    } else if (key == "mu") {
      config.init_mu = std::stod(value);
    } else if (key == "sigma") {
      config.init_sigma = std::stod(value);
    } else if (key == "margin") {
      config.margin = std::stod(value);
    } else if (key == "seed") {
      config.seed = std::stoull(value);
    } else {
      throw DataError("unknown config key: " + key);
    }
  } catch (const std::invalid_argument&) {
    throw DataError("config key " + key + ": cannot parse value '" + value +
                    "'");
  } catch (const std::out_of_range&) {
    throw DataError("config key " + key + ": value out of range: " + value);
  }
}

void load_config_file(TrainConfig& config, const fs::path& path) {
  std::ifstream in(resolve_path(path));
  if (!in) throw DataError("cannot open config file " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string trimmed = line;
    trimmed.erase(0, trimmed.find_first_not_of(" \t"));
    if (trimmed.empty() || trimmed.front() == '#') continue;
    auto eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw ParseError(line_no, "expected `key = value`");
    }
    auto strip = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t"));
      s.erase(s.find_last_not_of(" \t") + 1);
      return s;
    };
    apply_config_entry(config, strip(trimmed.substr(0, eq)),
                       strip(trimmed.substr(eq + 1)));
  }
}

json config_json(const TrainConfig& config) {
  return json{{"model", model_kind_name(config.model)},
              {"dim", config.dim},
              {"lr", config.learning_rate},
              {"epochs", config.epochs},
              {"batch", config.batch_size},
              {"neg_subj", config.neg_subject},
              {"neg_obj", config.neg_object},
              {"free_samples", config.sampler.steps_per_chain},
              {"chains", config.sampler.chains_per_triple},
              {"positions", positions_string(config.sampler.positions)},
              {"l1", config.l1_weight},
              {"l2", config.l2_weight},
              {"optimizer", config.optimizer == OptimizerKind::Adam
                                ? "adam"
                                : "adagrad"},
              {"mu", config.init_mu},
              {"sigma", config.init_sigma},
              {"margin", config.margin},
              {"seed", config.seed}};
}

void write_json_atomically(const fs::path& path, const json& value) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw DataError("cannot write " + tmp.string());
    out << value.dump(2) << '\n';
  }
  fs::rename(tmp, path);
}

struct DatasetInfo {
  fs::path path;
  std::vector<RawTriple> raw;
};

DatasetInfo load_dataset(const fs::path& requested) {
  DatasetInfo info;
  info.path = resolve_path(requested);
  info.raw = read_triple_file(info.path);
  return info;
}

json dataset_json(const DatasetInfo& info) {
  char checksum[17];
  std::snprintf(checksum, sizeof(checksum), "%016llx",
                static_cast<unsigned long long>(file_checksum(info.path)));
  return json{{"path", info.path.string()},
              {"checksum_fnv64", checksum},
              {"triples", info.raw.size()}};
}

// ---------------------------------------------------------------------
// train

struct TrainCli {
  TrainConfig config;
  std::string data_file;
  std::string valid_file;
  std::string config_file;
  std::string out_file = "model.kgeb";
  std::string export_text_file;
};

int run_train(const TrainCli& cli,
              const std::map<std::string, std::string>& flag_overrides) {
  auto started = std::chrono::steady_clock::now();

  TrainConfig config = cli.config;
  if (!cli.config_file.empty()) {
    // Config file first, explicit flags win.
    load_config_file(config, cli.config_file);
    for (const auto& [key, value] : flag_overrides) {
      apply_config_entry(config, key, value);
    }
  }
  config.validate();

  DatasetInfo data = load_dataset(cli.data_file);
  Vocabulary vocab = build_vocabulary(data.raw);
  if (vocab.num_entities() < 2) {
    throw DataError("training data needs at least two entities");
  }
  TripleStore train = encode(vocab, data.raw);

  std::optional<DatasetInfo> valid;
  std::vector<Triple> valid_triples;
  TripleSet valid_filter;
  if (!cli.valid_file.empty()) {
    valid = load_dataset(cli.valid_file);
    for (const RawTriple& raw : valid->raw) {
      valid_triples.push_back(encode_one(vocab, raw));
    }
    valid_filter = train.membership();
    valid_filter.insert(valid_triples.begin(), valid_triples.end());
  }

  Rng init_rng = make_stream(config.seed, "init");
  Rng batch_rng = make_stream(config.seed, "batching");
  Rng sampler_rng = make_stream(config.seed, "sampler");
  Rng negative_rng = make_stream(config.seed, "negatives");

  Model model;
  model.kind = config.model;
  model.vocab = vocab;

  OptimizerConfig opt_config;
  opt_config.kind = config.optimizer;

  json epoch_log = json::array();
  auto record_epoch = [&](int epoch, const EpochStats& stats,
                          std::optional<Scalar> valid_mrr) {
    json entry{{"epoch", epoch},
               {"mean_score", stats.mean_score},
               {"mean_prob", stats.mean_prob},
               {"acceptance_rate", stats.acceptance_rate},
               {"loss", stats.loss}};
    std::cout << "epoch\t" << epoch << "\tmean_score\t" << stats.mean_score;
    if (config.model == ModelKind::EnM || config.model == ModelKind::EnMd) {
      std::cout << "\tacceptance\t" << stats.acceptance_rate;
    } else {
      std::cout << "\tloss\t" << stats.loss;
    }
    if (valid_mrr) {
      entry["valid_mrr"] = *valid_mrr;
      std::cout << "\tvalid_mrr\t" << *valid_mrr;
    }
    std::cout << '\n';
    epoch_log.push_back(entry);
  };

  if (config.model == ModelKind::TransE) {
    TransEParams params = TransEParams::random(
        vocab.num_entities(), vocab.num_relations(), config.dim,
        config.init_mu, config.init_sigma, init_rng);
    OptimizerState optimizer(opt_config, params);
    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
      EpochStats stats = train_transe_epoch(params, train, config, optimizer,
                                            batch_rng, negative_rng);
      if (!params.all_finite()) {
        throw NumericError("non-finite parameters detected at epoch " +
                           std::to_string(epoch));
      }
      std::optional<Scalar> valid_mrr;
      if (valid) {
        valid_mrr = mrr(make_scorer(params), valid_triples, valid_filter);
      }
      record_epoch(epoch, stats, valid_mrr);
    }
    model.params = std::move(params);
  } else {
    EmbeddingSpace space = EmbeddingSpace::random(
        vocab.num_entities(), vocab.num_relations(), config.dim,
        relation_kind(config.model), config.init_mu, config.init_sigma,
        init_rng);
    OptimizerState optimizer(opt_config, space);
    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
      EpochStats stats;
      switch (config.model) {
        case ModelKind::EnM:
        case ModelKind::EnMd:
          stats = train_energy_epoch(space, train, config, optimizer,
                                     batch_rng, sampler_rng);
          break;
        case ModelKind::ReSE:
          stats = train_rese_epoch(space, train, config, optimizer, batch_rng,
                                   negative_rng);
          break;
        case ModelKind::ReKL:
          stats = train_rekl_epoch(space, train, config, optimizer, batch_rng,
                                   negative_rng);
          break;
        default:
          break;
      }
      if (!space.all_finite()) {
        throw NumericError("non-finite parameters detected at epoch " +
                           std::to_string(epoch));
      }
      std::optional<Scalar> valid_mrr;
      if (valid) {
        valid_mrr = mrr(make_scorer(space), valid_triples, valid_filter);
      }
      record_epoch(epoch, stats, valid_mrr);
    }
    model.params = std::move(space);
  }

  fs::path out_path(cli.out_file);
  if (out_path.has_parent_path()) {
    fs::create_directories(out_path.parent_path());
  }
  save_model(out_path, model);
  if (!cli.export_text_file.empty()) {
    export_text(cli.export_text_file, model);
  }

  auto elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  json manifest{{"command", "train"},
                {"config", config_json(config)},
                {"seed", config.seed},
                {"datasets", json{{"train", dataset_json(data)}}},
                {"model_file", out_path.string()},
                {"epochs", epoch_log},
                {"wall_clock_seconds", elapsed}};
  if (valid) manifest["datasets"]["valid"] = dataset_json(*valid);
  fs::path manifest_path = out_path;
  manifest_path += ".manifest.json";
  write_json_atomically(manifest_path, manifest);

  std::cout << "model\t" << out_path.string() << "\nmanifest\t"
            << manifest_path.string() << '\n';
  return 0;
}

// ---------------------------------------------------------------------
// eval

struct EvalCli {
  std::string model_file;
  std::string test_file;
  std::vector<std::string> filter_files;
  std::string report_file;
  std::string json_file;
  int threads = 1;
  std::uint64_t seed = 0;
};

int run_eval(const EvalCli& cli) {
  Model model = load_model(resolve_path(cli.model_file));
  DatasetInfo test = load_dataset(cli.test_file);

  std::vector<Triple> test_triples;
  for (const RawTriple& raw : test.raw) {
    test_triples.push_back(encode_one(model.vocab, raw));
  }
  if (test_triples.empty()) throw DataError("test set is empty");

  TripleSet filter(test_triples.begin(), test_triples.end());
  for (const std::string& f : cli.filter_files) {
    for (const RawTriple& raw : load_dataset(f).raw) {
      filter.insert(encode_one(model.vocab, raw));
    }
  }

  Scorer scorer = model.scorer();
  auto ranks = filtered_ranks(scorer, test_triples, filter, cli.threads);

  std::vector<std::pair<std::string, std::string>> rows;
  auto add_metric = [&rows](const std::string& key, Scalar value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", value);
    rows.emplace_back(key, buf);
  };
  add_metric("mrr", mrr_from_ranks(ranks));
  for (int k : {1, 3, 10}) {
    add_metric("hits@" + std::to_string(k), hits_from_ranks(ranks, k));
  }

  // Score/probability distributions of the test positives against
  // seeded uniform corruptions that are not known-true triples.
  Rng neg_rng = make_stream(cli.seed, "negatives");
  std::vector<Triple> negatives;
  for (const Triple& t : test_triples) {
    for (const Triple& n :
         negative_samples(neg_rng, t, 1, 1, model.num_entities())) {
      if (filter.count(n) == 0) negatives.push_back(n);
    }
  }
  if (!negatives.empty()) {
    ScoreDistributions distributions =
        score_distributions(scorer, test_triples, negatives);
    for (const auto& row : distribution_report(distributions)) {
      rows.push_back(row);
    }
  }

  for (const auto& [key, value] : rows) {
    std::cout << key << '\t' << value << '\n';
  }
  if (!cli.report_file.empty()) {
    std::ofstream out(cli.report_file);
    if (!out) throw DataError("cannot write " + cli.report_file);
    for (const auto& [key, value] : rows) {
      out << key << '\t' << value << '\n';
    }
  }
  if (!cli.json_file.empty()) {
    json out;
    for (const auto& [key, value] : rows) out[key] = value;
    write_json_atomically(cli.json_file, out);
  }
  return 0;
}

// ---------------------------------------------------------------------
// score / rank

struct ScoreCli {
  std::string model_file;
  std::string events_file;
  std::string out_dir = ".";
  std::vector<std::string> entities;
  bool skip_unknown = false;
};

void write_alerts(const fs::path& path, const Vocabulary& vocab,
                  const std::vector<Suspiciousness>& ranked) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out.precision(10);
  std::size_t rank = 1;
  for (const Suspiciousness& s : ranked) {
    out << rank++ << '\t' << vocab.entity_name(s.triple.s) << '\t'
        << vocab.relation_name(s.triple.p) << '\t'
        << vocab.entity_name(s.triple.o) << '\t' << s.value << '\t'
        << (s.label ? severity_name(*s.label) : "-") << '\n';
  }
}

int run_score(const ScoreCli& cli) {
  Model model = load_model(resolve_path(cli.model_file));
  auto raw_events = read_event_file(resolve_path(cli.events_file));

  std::vector<Suspiciousness> scored;
  std::vector<std::string> unknown;
  for (const RawEvent& event : raw_events) {
    Triple t;
    try {
      t = encode_one(model.vocab, event.names);
    } catch (const UnknownSymbolError& e) {
      unknown.push_back("line " + std::to_string(event.line) + ": " +
                        e.symbol());
      continue;
    }
    Suspiciousness s;
    s.triple = t;
    s.value = suspiciousness(model, t);
    s.model = model.kind;
    s.label = event.label;
    scored.push_back(s);
  }

  if (!unknown.empty() && !cli.skip_unknown) {
    for (const std::string& u : unknown) {
      std::cerr << "unknown symbol at " << u << '\n';
    }
    throw DataError("events contain " + std::to_string(unknown.size()) +
                    " unknown symbols (use --skip-unknown to drop them)");
  }
  for (const std::string& u : unknown) {
    std::cerr << "skipped unknown symbol at " << u << '\n';
  }

  fs::create_directories(cli.out_dir);
  fs::path global = fs::path(cli.out_dir) / "alerts.tsv";
  write_alerts(global, model.vocab, rank_alerts(scored, std::nullopt));
  std::cout << "alerts\t" << global.string() << '\n';

  for (const std::string& name : cli.entities) {
    Index entity = model.vocab.require_entity(name);
    fs::path path = fs::path(cli.out_dir) / ("alerts_" + name + ".tsv");
    write_alerts(path, model.vocab, rank_alerts(scored, entity));
    std::cout << "alerts_entity\t" << path.string() << '\n';
  }

  std::vector<Suspiciousness> labeled;
  for (const Suspiciousness& s : scored) {
    if (s.label) labeled.push_back(s);
  }
  if (!labeled.empty()) {
    std::array<bool, kNumSeverityClasses> present{};
    for (const Suspiciousness& s : labeled) {
      present[static_cast<int>(*s.label)] = true;
    }
    int classes = 0;
    for (bool b : present) classes += b;
    if (classes >= 2) {
      std::cout << "severity_ordering_accuracy\t"
                << severity_ordering_accuracy(labeled) << '\n';
    } else {
      std::cout << "severity_ordering_accuracy\tn/a (one label class)\n";
    }
  }
  return 0;
}

// ---------------------------------------------------------------------
// sample

struct SampleCli {
  std::string model_file;
  std::string data_file;
  std::string out_file = "samples.tsv";
  int count = 100;
  int steps = 20;
  std::string positions = "spo";
  std::uint64_t seed = 0;
};

int run_sample(const SampleCli& cli) {
  Model model = load_model(resolve_path(cli.model_file));
  if (model.is_transe()) {
    throw DataError("sampling requires a bilinear model (enm/enmd/rese/rekl)");
  }
  DatasetInfo data = load_dataset(cli.data_file);
  if (data.raw.empty()) throw DataError("data file has no triples");

  std::vector<Triple> seeds;
  seeds.reserve(data.raw.size());
  for (const RawTriple& raw : data.raw) {
    seeds.push_back(encode_one(model.vocab, raw));
  }

  Rng rng = make_stream(cli.seed, "sampler");
  std::vector<Triple> origins;
  origins.reserve(static_cast<std::size_t>(cli.count));
  for (int i = 0; i < cli.count; ++i) {
    origins.push_back(seeds[uniform_index(rng, seeds.size())]);
  }

  SamplerConfig config;
  config.steps_per_chain = cli.steps;
  config.chains_per_triple = 1;
  config.positions = parse_positions(cli.positions);
  std::vector<Triple> samples =
      generate_samples(model.space(), origins, config, rng);

  write_triple_file(cli.out_file, model.vocab, samples);
  std::cout << "samples\t" << cli.out_file << '\n';
  return 0;
}

// ---------------------------------------------------------------------
// synth

struct SynthCli {
  SynthConfig config;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
};

int run_synth(const SynthCli& cli) {
  SynthResult result = synth_industrial_graph(cli.config, cli.seed);
  fs::create_directories(cli.out_dir);
  fs::path baseline = fs::path(cli.out_dir) / "baseline.tsv";
  fs::path events = fs::path(cli.out_dir) / "events.tsv";
  write_triple_file(baseline, result.vocab, result.baseline.triples());
  write_event_file(events, result.vocab, result.events);

  std::cout << "baseline\t" << baseline.string() << "\ntriples\t"
            << result.baseline.size() << "\nentities\t"
            << result.vocab.num_entities() << "\nrelations\t"
            << result.vocab.num_relations() << "\nevents\t" << events.string()
            << "\nevent_count\t" << result.events.size() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"knowledge-graph embeddings: energy-based model and baselines"};
  app.require_subcommand(1);

  // --- train
  TrainCli train_cli;
  CLI::App* train = app.add_subcommand("train", "train a model");
  train->add_option("--data", train_cli.data_file, "training triples (TSV)")
      ->required();
  train->add_option("--valid", train_cli.valid_file,
                    "validation triples for per-epoch MRR");
  train->add_option("--config", train_cli.config_file,
                    "key = value config file");
  train->add_option("--out", train_cli.out_file, "output model file");
  train->add_option("--export-text", train_cli.export_text_file,
                    "also write a TSV dump of the embeddings");
  std::string model_name = "enmd", optimizer_name = "adagrad",
              positions = "spo";
  train->add_option("--model", model_name, "enm|enmd|rese|rekl|transe");
  train->add_option("--dim", train_cli.config.dim, "embedding dimension N");
  train->add_option("--lr", train_cli.config.learning_rate, "learning rate");
  train->add_option("--epochs", train_cli.config.epochs, "training epochs");
  train->add_option("--batch", train_cli.config.batch_size, "batch size");
  train->add_option("--neg-subj", train_cli.config.neg_subject,
                    "subject corruptions per positive");
  train->add_option("--neg-obj", train_cli.config.neg_object,
                    "object corruptions per positive");
  train->add_option("--free-samples", train_cli.config.sampler.steps_per_chain,
                    "Metropolis-Hastings steps per chain");
  train->add_option("--chains", train_cli.config.sampler.chains_per_triple,
                    "chains per batch triple");
  train->add_option("--positions", positions,
                    "proposal positions, subset of spo");
  train->add_option("--l1", train_cli.config.l1_weight, "L1 weight");
  train->add_option("--l2", train_cli.config.l2_weight, "L2 weight");
  train->add_option("--optimizer", optimizer_name, "adagrad|adam");
  train->add_option("--mu", train_cli.config.init_mu, "init mean");
  train->add_option("--sigma", train_cli.config.init_sigma, "init std dev");
  train->add_option("--margin", train_cli.config.margin, "TransE soft margin");
  train->add_option("--seed", train_cli.config.seed, "master seed");

  // --- eval
  EvalCli eval_cli;
  CLI::App* eval = app.add_subcommand("eval", "link-prediction metrics");
  eval->add_option("--model", eval_cli.model_file, "model file")->required();
  eval->add_option("--test", eval_cli.test_file, "test triples")->required();
  eval->add_option("--filter", eval_cli.filter_files,
                   "known-true triple files (repeatable)");
  eval->add_option("--report", eval_cli.report_file, "metrics TSV output");
  eval->add_option("--json", eval_cli.json_file, "metrics JSON output");
  eval->add_option("--threads", eval_cli.threads, "evaluation threads")
      ->check(CLI::PositiveNumber);
  eval->add_option("--seed", eval_cli.seed,
                   "seed for the distribution negatives");

  // --- score / rank
  ScoreCli score_cli;
  CLI::App* score =
      app.add_subcommand("score", "suspiciousness scoring and ranked alerts");
  score->alias("rank");
  score->add_option("--model", score_cli.model_file, "model file")->required();
  score->add_option("--events", score_cli.events_file,
                    "event triples, optionally labeled")
      ->required();
  score->add_option("--out-dir", score_cli.out_dir, "report directory");
  score->add_option("--entity", score_cli.entities,
                    "per-entity alert files (repeatable)");
  score->add_flag("--skip-unknown", score_cli.skip_unknown,
                  "drop events with unknown symbols instead of failing");

  // --- sample
  SampleCli sample_cli;
  CLI::App* sample =
      app.add_subcommand("sample", "draw triples from a trained model");
  sample->add_option("--model", sample_cli.model_file, "model file")
      ->required();
  sample->add_option("--data", sample_cli.data_file,
                     "data triples that seed the chains")
      ->required();
  sample->add_option("--out", sample_cli.out_file, "output TSV");
  sample->add_option("--count", sample_cli.count, "number of samples")
      ->check(CLI::PositiveNumber);
  sample->add_option("--steps", sample_cli.steps, "steps per chain")
      ->check(CLI::PositiveNumber);
  sample->add_option("--positions", sample_cli.positions,
                     "proposal positions, subset of spo");
  sample->add_option("--seed", sample_cli.seed, "master seed");

  // --- synth
  SynthCli synth_cli;
  CLI::App* synth =
      app.add_subcommand("synth", "generate the synthetic industrial graph");
  synth->add_option("--out-dir", synth_cli.out_dir, "output directory");
  synth->add_option("--seed", synth_cli.seed, "generator seed");
  synth->add_option("--dev-hosts", synth_cli.config.dev_hosts,
                    "developer host count");
  synth->add_option("--edge-computers", synth_cli.config.edge_computers,
                    "edge computer count");
  synth->add_option("--apps", synth_cli.config.apps, "app count");
  synth->add_option("--sensors", synth_cli.config.sensors, "sensor count");
  synth->add_option("--tags", synth_cli.config.tags, "process tag count");
  synth->add_option("--scale", synth_cli.config.activity_scale,
                    "activity rate multiplier");
  synth->add_option("--events-per-class", synth_cli.config.events_per_class,
                    "labeled events per severity class");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*train) {
      train_cli.config.model = model_kind_from_name(model_name);
      train_cli.config.optimizer = parse_optimizer(optimizer_name);
      train_cli.config.sampler.positions = parse_positions(positions);
      // Flags that were explicitly passed win over --config entries.
      std::map<std::string, std::string> overrides;
      auto remember = [&](const char* flag, const char* key,
                          const std::string& value) {
        if (train->count(flag) > 0) overrides[key] = value;
      };
      remember("--model", "model", model_name);
      remember("--dim", "dim", std::to_string(train_cli.config.dim));
      remember("--lr", "lr", std::to_string(train_cli.config.learning_rate));
      remember("--epochs", "epochs", std::to_string(train_cli.config.epochs));
      remember("--batch", "batch",
               std::to_string(train_cli.config.batch_size));
      remember("--neg-subj", "neg_subj",
               std::to_string(train_cli.config.neg_subject));
      remember("--neg-obj", "neg_obj",
               std::to_string(train_cli.config.neg_object));
      remember("--free-samples", "free_samples",
               std::to_string(train_cli.config.sampler.steps_per_chain));
      remember("--chains", "chains",
               std::to_string(train_cli.config.sampler.chains_per_triple));
      remember("--positions", "positions", positions);
      remember("--l1", "l1", std::to_string(train_cli.config.l1_weight));
      remember("--l2", "l2", std::to_string(train_cli.config.l2_weight));
      remember("--optimizer", "optimizer", optimizer_name);
      remember("--mu", "mu", std::to_string(train_cli.config.init_mu));
      remember("--sigma", "sigma", std::to_string(train_cli.config.init_sigma));
      remember("--margin", "margin", std::to_string(train_cli.config.margin));
      remember("--seed", "seed", std::to_string(train_cli.config.seed));
      return run_train(train_cli, overrides);
    }
    if (*eval) return run_eval(eval_cli);
    if (*score) return run_score(score_cli);
    if (*sample) return run_sample(sample_cli);
    if (*synth) return run_synth(synth_cli);
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
