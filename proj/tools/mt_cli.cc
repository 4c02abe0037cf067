//
// Copyright 2026 The mtbench Authors
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

// Command-line entry point: data generation, training, ranking, terminal
// teaching, simulated experiments and the HTTP service.

#include <chrono>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "httplib.h"
#include "mt/augment.h"
#include "mt/checkpoint.h"
#include "mt/corpus.h"
#include "mt/error.h"
#include "mt/experiments.h"
#include "mt/jsonl.h"
#include "mt/knowledge.h"
#include "mt/learner.h"
#include "mt/selector.h"
#include "mt/service.h"
#include "mt/session.h"

namespace fs = std::filesystem;

namespace mt {
namespace {

constexpr char kIntentsFile[] = "intents.json";

IntentInventory LoadInventory(const fs::path& path) {
  return IntentInventory(Json::parse(ReadFile(path)).get<std::vector<std::string>>());
}

// Looks for intents.json next to `path` (or inside it, for directories).
IntentInventory InventoryNear(const fs::path& path) {
  const fs::path dir = fs::is_directory(path) ? path : path.parent_path();
  return LoadInventory(dir / kIntentsFile);
}

TimeModel TimePreset(const std::string& name) {
  if (name == "t1") return TimeModel::TeacherOne();
  if (name == "t2") return TimeModel::TeacherTwo();
  Fail(ErrorCode::kInvalidArgument, "unknown time model preset: " + name);
}

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  std::string templates;
  std::string test_templates;
  double fraction = 0.2;
  uint64_t seed = 7;
  size_t test_size = 200;
  std::string out;
};

int RunGenerate(const GenerateArgs& args) {
  const auto templates = LoadTemplates(args.templates);
  const IntentInventory inventory = InventoryFromTemplates(templates);
  DatasetSplit split = SplitDataset(templates, inventory, args.fraction, args.seed);
  if (!args.test_templates.empty()) {
    std::vector<LabeledExample> test;
    for (const Template& t : LoadTemplates(args.test_templates, "x")) {
      for (LabeledExample& e : ExpandTemplate(t, inventory)) {
        e.origin = Origin::kManual;
        test.push_back(std::move(e));
      }
    }
    split.test = SampleExamples(test, args.test_size, args.seed);
  }
  const fs::path out(args.out);
  fs::create_directories(out);
  WriteFile(out / kIntentsFile, Json(inventory.names()).dump() + "\n");
  SaveDataset(out / "bootstrap.jsonl", split.bootstrap, inventory);
  SaveDataset(out / "novel_pool.jsonl", split.novel_pool, inventory);
  if (!split.test.empty()) SaveDataset(out / "test.jsonl", split.test, inventory);
  Json manifest = {{"bootstrap_fraction", args.fraction},
                   {"seed", args.seed},
                   {"bootstrap_templates", split.bootstrap_templates},
                   {"novel_templates", split.novel_templates},
                   {"bootstrap_examples", split.bootstrap.size()},
                   {"novel_examples", split.novel_pool.size()},
                   {"test_examples", split.test.size()}};
  WriteFile(out / "manifest.json", manifest.dump(2) + "\n");
  std::cout << "bootstrap " << split.bootstrap.size() << ", novel pool "
            << split.novel_pool.size() << ", test " << split.test.size()
            << " -> " << out.string() << "\n";
  return 0;
}

// --------------------------------------------------------- bootstrap/sweep

int RunBootstrap(const std::string& data, const std::string& hp_path,
                 uint64_t seed, const std::string& out) {
  const IntentInventory inventory = InventoryNear(data);
  const auto train = LoadDataset(fs::path(data) / "bootstrap.jsonl", inventory);
  Hyperparams hp = Hyperparams::Bootstrap();
  if (!hp_path.empty()) hp = LoadHyperparams(hp_path).front();
  const auto start = std::chrono::steady_clock::now();
  LinearModel model = Train(train, inventory, hp, seed);
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start).count();
  model.set_hyperparams(Hyperparams::Online());
  SaveModel(out, model);
  std::cout << "trained on " << train.size() << " examples in " << std::fixed
            << std::setprecision(2) << secs << " s; training error "
            << ErrorRate(model, train) << "\n";
  return 0;
}

int RunSweep(const std::string& data, const std::string& grid_path,
             const std::string& eval_path, uint64_t seed,
             const std::string& out) {
  const IntentInventory inventory = InventoryNear(data);
  const auto train = LoadDataset(fs::path(data) / "bootstrap.jsonl", inventory);
  const auto eval = LoadDataset(
      eval_path.empty() ? fs::path(data) / "test.jsonl" : fs::path(eval_path),
      inventory);
  const auto grid = LoadHyperparams(grid_path);
  const SweepResult result = Sweep(grid, train, eval, inventory, seed);
  for (size_t i = 0; i < grid.size(); ++i) {
    Json row = HyperparamsToJson(grid[i]);
    row["eval_error"] = result.eval_errors[i];
    row["best"] = i == result.best_index;
    std::cout << row.dump() << "\n";
  }
  if (!out.empty()) WriteFile(out, HyperparamsToJson(result.best).dump(2) + "\n");
  return 0;
}

// -------------------------------------------------------------------- rank

int RunRank(const std::string& model_path, const std::string& pool_path,
            int top) {
  const LinearModel model = LoadModel(model_path);
  const auto pool = LoadDataset(pool_path, model.inventory());
  const auto ranked = RankPool(model, pool);
  for (size_t i = 0; i < ranked.size() && static_cast<int>(i) < top; ++i) {
    Json predictions = Json::array();
    for (const ScoredIntent& s : ranked[i].top_k) {
      predictions.push_back({{"intent", s.intent.name}, {"confidence", s.confidence}});
    }
    std::cout << Json{{"id", ranked[i].example_id},
                      {"text", ranked[i].sentence.raw},
                      {"confusion", ranked[i].confusion},
                      {"top_k", predictions}}
                     .dump()
              << "\n";
  }
  return 0;
}

// ------------------------------------------------------------------- teach

struct TeachArgs {
  std::string model;
  std::string pool;
  std::string test;
  std::string kb;
  std::string log;
  std::string replay;
  std::string out;
  std::string time = "t1";
  uint64_t seed = 0;
};

std::vector<int> ReadInts(const std::string& line) {
  std::vector<int> out;
  std::stringstream in(line);
  int v;
  while (in >> v) out.push_back(v);
  return out;
}

bool Prompt(const std::string& text, std::string& line) {
  std::cout << text << std::flush;
  return static_cast<bool>(std::getline(std::cin, line));
}

void PrintView(const MachineStateView& view) {
  std::cout << "\nexample " << view.example_id << "  (confusion "
            << std::setprecision(4) << view.confusion << ")\n";
  const auto norm = view.importance.Normalized();
  for (size_t i = 0; i < view.sentence.size(); ++i) {
    std::cout << "  [" << i << "] " << std::left << std::setw(16)
              << view.sentence.tokens[i] << std::right << " "
              << std::string(static_cast<size_t>(norm[i] * 20 + 0.5), '#')
              << "\n";
  }
  std::cout << "predictions:\n";
  for (const ScoredIntent& s : view.top_k) {
    std::cout << "  " << s.intent.id << " " << s.intent.name << "  "
              << std::fixed << std::setprecision(3) << s.confidence << "\n";
    std::cout.unsetf(std::ios::fixed);
  }
}

// Interactive feedback for an accepted example; nullopt on end of input.
std::optional<FeedbackRecord> AskFeedback(const MachineStateView& view,
                                          const IntentInventory& inventory) {
  FeedbackRecord fb;
  fb.example_id = view.example_id;
  std::string line;
  for (;;) {
    if (!Prompt("label (id or name, empty = top-1): ", line)) return std::nullopt;
    if (line.empty()) {
      fb.label = view.top_k.front().intent.id;
      break;
    }
    if (auto id = inventory.Find(line)) {
      fb.label = *id;
      break;
    }
    const auto ids = ReadInts(line);
    if (ids.size() == 1 && ids[0] >= 0 && ids[0] < inventory.size()) {
      fb.label = ids[0];
      break;
    }
    std::cout << "unknown intent\n";
  }
  for (;;) {
    if (!Prompt("important positions: ", line)) return std::nullopt;
    fb.important = {};
    for (int p : ReadInts(line)) fb.important.insert(p);
    if (!Prompt("inconsequential positions: ", line)) return std::nullopt;
    fb.inconsequential = {};
    for (int p : ReadInts(line)) fb.inconsequential.insert(p);
    try {
      fb.ValidateAnnotations(view.sentence.size());
      break;
    } catch (const Error& e) {
      std::cout << e.what() << "\n";
    }
  }
  for (int p : fb.important) {
    const auto& recs = view.recommendations[p];
    std::cout << "replacements for '" << view.sentence.tokens[p] << "':\n";
    for (size_t i = 0; i < recs.size(); ++i) {
      std::cout << "  " << i << " " << recs[i].phrase << " ("
                << SourceName(recs[i].source) << ")\n";
    }
    if (!Prompt("accept (indices, or phrases after ':'): ", line)) {
      return std::nullopt;
    }
    std::vector<std::string> accepted;
    if (auto colon = line.find(':'); colon != std::string::npos) {
      for (const std::string& phrase : SplitList(line.substr(colon + 1))) {
        try {
          accepted.push_back(NormalizePhrase(phrase));
        } catch (const Error& e) {
          std::cout << e.what() << "\n";
        }
      }
      line = line.substr(0, colon);
    }
    for (int i : ReadInts(line)) {
      if (i >= 0 && i < static_cast<int>(recs.size())) {
        accepted.push_back(recs[i].phrase);
      }
    }
    if (!accepted.empty()) fb.validated[p] = accepted;
  }
  return fb;
}

int RunTeach(const TeachArgs& args) {
  LinearModel model = LoadModel(args.model);
  const IntentInventory inventory = model.inventory();
  auto pool = LoadDataset(args.pool, inventory);
  const fs::path test_path = args.test.empty()
                                 ? fs::path(args.pool).parent_path() / "test.jsonl"
                                 : fs::path(args.test);
  auto test = LoadDataset(test_path, inventory);
  std::vector<Sentence> corpus;
  for (const LabeledExample& e : model.training_set()) {
    if (e.origin != Origin::kAugmented) corpus.push_back(e.sentence);
  }
  auto kb = std::make_shared<KnowledgeBase>(KnowledgeBase::Open(args.kb, corpus));

  SessionConfig config;
  config.session_id = "terminal";
  config.time = TimePreset(args.time);
  config.seed = args.seed;
  Session session(config, std::move(model), std::move(pool), std::move(test), kb);
  if (!args.log.empty()) {
    const fs::path log = args.log;
    session.set_event_sink(
        [log](const InteractionEvent& e) { AppendJsonl(log, EventToJson(e)); });
  }

  if (!args.replay.empty()) {
    ReplayEvents(session, LoadEventLog(args.replay));
  } else {
    std::string line;
    while (!session.pool_empty()) {
      const MachineStateView view = session.NextCandidate();
      PrintView(view);
      if (!Prompt("[a]ccept, [s]kip, [q]uit: ", line) || line == "q") break;
      if (line == "s") {
        session.Decide(view.example_id, FeedbackAction::kSkip);
        continue;
      }
      if (line != "a") continue;
      session.Decide(view.example_id, FeedbackAction::kAccept);
      std::optional<FeedbackRecord> fb;
      for (;;) {
        fb = AskFeedback(view, inventory);
        if (!fb) break;
        try {
          const TeachStepResult r = session.SubmitFeedback(*fb);
          std::cout << r.variation_count << " variations; test error "
                    << r.error << "\n";
          if (r.persistence_error) {
            std::cout << "warning: " << *r.persistence_error << "\n";
          }
          break;
        } catch (const Error& e) {
          std::cout << e.what() << "\n";
        }
      }
      if (!fb) break;
    }
  }
  const SessionReport report = session.Report();
  std::cout << ReportToJson(report).dump(2) << "\n";
  if (!args.out.empty()) SaveModel(args.out, session.model());
  return 0;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string data;
  std::string strategies = "RL,AL,FULL_MT";
  int seeds = 5;
  uint64_t first_seed = 1;
  int budget = 150;
  std::string out = "results";
  std::string time = "t1";
  bool logs = false;
  double accept_confusion = SimTeacherProfile().accept_confusion;
};

int RunSimulate(const SimulateArgs& args) {
  const ExperimentData data = LoadDataPack(args.data);
  ExperimentConfig config;
  config.profile.stoplist = data.stoplist;
  config.profile.time = TimePreset(args.time);
  config.profile.accept_confusion = args.accept_confusion;
  std::vector<StrategyRun> runs;
  for (const std::string& name : SplitList(args.strategies)) {
    const Strategy strategy = ParseStrategy(name);
    for (int i = 0; i < args.seeds; ++i) {
      const uint64_t seed = args.first_seed + i;
      runs.push_back(RunStrategy(strategy, data, config, seed, args.budget));
      const StrategyRun& run = runs.back();
      std::cerr << name << " seed " << seed << ": final running avg "
                << run.curve.back().running_avg << ", accepted " << run.report.accepted << ", final error " << run.curve.back().error << ", skipped "
                << run.report.skipped << ", variations "
                << run.report.variations << "\n";
    }
  }
  const fs::path out(args.out);
  fs::create_directories(out);
  WriteFile(out / "curves.csv", CurvesToCsv(runs));
  if (args.logs) {
    for (const StrategyRun& run : runs) {
      std::vector<Json> events;
      for (const InteractionEvent& e : run.log) events.push_back(EventToJson(e));
      WriteJsonl(out / "logs" /
                     (std::string(StrategyName(run.strategy)) + "-" +
                      std::to_string(run.seed) + ".events.jsonl"),
                 events);
      WriteFile(out / "checkpoints" /
                    (std::string(StrategyName(run.strategy)) + "-" +
                     std::to_string(run.seed) + ".ckpt"),
                run.final_checkpoint);
    }
  }
  return 0;
}

int RunCompare(const std::string& in, const std::string& out) {
  const auto curves = ParseCurvesCsv(ReadFile(fs::path(in) / "curves.csv"));
  std::map<std::string, std::vector<ErrorCurve>> by_strategy;
  for (const auto& [key, curve] : curves) by_strategy[key.strategy].push_back(curve);
  std::map<std::string, ErrorCurve> medians;
  for (const auto& [name, list] : by_strategy) medians[name] = MedianCurve(list);
  const ComparisonTable table = CompareCurves(medians);
  if (!table.examples_overlap || !table.time_overlap) {
    std::cerr << "warning: curves do not share an x-range; areas cover the "
                 "intersection only\n";
  }
  const std::string csv = ComparisonToCsv(table);
  if (out.empty()) {
    std::cout << csv;
  } else {
    WriteFile(out, csv);
  }
  return 0;
}

// ------------------------------------------------------------ serve/export

int RunServe(int port, const std::string& artifacts, const std::string& host) {
  httplib::Server server;
  TeachingService service(artifacts);
  service.Mount(server);
  std::cerr << "listening on " << host << ":" << port << "\n";
  if (!server.listen(host, port)) {
    Fail(ErrorCode::kUnavailable, "cannot bind port " + std::to_string(port));
  }
  return 0;
}

int RunExport(const std::string& model_path, bool augmented_only,
              const std::string& out) {
  const LinearModel model = LoadModel(model_path);
  std::vector<LabeledExample> selected;
  for (const LabeledExample& e : model.training_set()) {
    if (!augmented_only || e.origin == Origin::kAugmented) selected.push_back(e);
  }
  if (out.empty()) {
    for (const LabeledExample& e : selected) {
      std::cout << ExampleToJson(e, model.inventory()).dump() << "\n";
    }
  } else {
    SaveDataset(out, selected, model.inventory());
  }
  return 0;
}

}  // namespace
}  // namespace mt

int main(int argc, char** argv) {
  using namespace mt;
  CLI::App app{"mt: interactive machine teaching for intent classification"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate-data", "Expand and split a template pack");
  generate->add_option("--templates", gen.templates, "Templates JSONL")->required();
  generate->add_option("--test-templates", gen.test_templates, "Test templates JSONL");
  generate->add_option("--bootstrap-fraction", gen.fraction)->check(CLI::Range(0.0, 1.0));
  generate->add_option("--seed", gen.seed);
  generate->add_option("--test-size", gen.test_size);
  generate->add_option("--out", gen.out)->required();

  std::string data, hp, out, grid, eval, model, pool;
  uint64_t seed = 0;
  auto* bootstrap = app.add_subcommand("bootstrap", "Train the initial model");
  bootstrap->add_option("--data", data, "generate-data output directory")->required();
  bootstrap->add_option("--hp", hp, "Hyperparameter JSON");
  bootstrap->add_option("--seed", seed);
  bootstrap->add_option("--out", out)->required();

  auto* sweep = app.add_subcommand("sweep", "Grid hyperparameter sweep");
  sweep->add_option("--grid", grid)->required();
  sweep->add_option("--data", data)->required();
  sweep->add_option("--eval", eval, "Evaluation set (default: <data>/test.jsonl)");
  sweep->add_option("--seed", seed);
  sweep->add_option("--out", out, "Write the best point here");

  int top = 10;
  auto* rank = app.add_subcommand("rank", "Print the head of the confusion ranking");
  rank->add_option("--model", model)->required();
  rank->add_option("--pool", pool)->required();
  rank->add_option("--top", top);

  TeachArgs teach_args;
  auto* teach = app.add_subcommand("teach", "Terminal teaching session");
  teach->add_option("--model", teach_args.model)->required();
  teach->add_option("--pool", teach_args.pool)->required();
  teach->add_option("--kb", teach_args.kb)->required();
  teach->add_option("--test", teach_args.test, "Test set (default: next to the pool)");
  teach->add_option("--log", teach_args.log, "Append events to this JSONL file");
  teach->add_option("--replay", teach_args.replay, "Re-drive the session from a log");
  teach->add_option("--out", teach_args.out, "Save the final model");
  teach->add_option("--time-model", teach_args.time, "t1 or t2");
  teach->add_option("--seed", teach_args.seed);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Simulated-teacher experiments");
  simulate->add_option("--data", sim.data, "Template pack directory")->required();
  simulate->add_option("--strategies", sim.strategies);
  simulate->add_option("--seeds", sim.seeds);
  simulate->add_option("--first-seed", sim.first_seed);
  simulate->add_option("--budget", sim.budget);
  simulate->add_option("--out", sim.out);
  simulate->add_option("--time-model", sim.time, "t1 or t2");
  simulate->add_option("--accept-confusion", sim.accept_confusion,
                       "Teacher skips correct predictions at or below this confusion");
  simulate->add_flag("--logs", sim.logs, "Also write per-run event logs and final checkpoints");

  std::string in;
  auto* compare = app.add_subcommand("compare", "Compare median curves");
  compare->add_option("--in", in, "simulate output directory")->required();
  compare->add_option("--out", out);

  int port = 8080;
  std::string artifacts = ".", host = "127.0.0.1";
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--port", port);
  serve->add_option("--artifacts", artifacts);
  serve->add_option("--host", host);

  bool augmented = false;
  auto* export_cmd = app.add_subcommand("export", "Dump a checkpoint's training set");
  export_cmd->add_option("--model", model)->required();
  export_cmd->add_flag("--augmented", augmented, "Only augmented examples");
  export_cmd->add_option("--out", out);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*generate) return RunGenerate(gen);
    if (*bootstrap) return RunBootstrap(data, hp, seed, out);
    if (*sweep) return RunSweep(data, grid, eval, seed, out);
    if (*rank) return RunRank(model, pool, top);
    if (*teach) return RunTeach(teach_args);
    if (*simulate) return RunSimulate(sim);
    if (*compare) return RunCompare(in, out);
    if (*serve) return RunServe(port, artifacts, host);
    if (*export_cmd) return RunExport(model, augmented, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
