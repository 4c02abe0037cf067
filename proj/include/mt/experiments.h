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

#ifndef MT_EXPERIMENTS_H_
#define MT_EXPERIMENTS_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "mt/corpus.h"
#include "mt/knowledge.h"
#include "mt/learner.h"
#include "mt/masked_lm.h"
#include "mt/session.h"
#include "mt/sim_teacher.h"

namespace mt {

enum class Strategy { kRL, kAL, kALHC, kMtNi, kMtNv, kFullMt, kMtEda };

std::string_view StrategyName(Strategy strategy);
Strategy ParseStrategy(std::string_view name);
std::vector<Strategy> AllStrategies();

// Everything a simulated run needs besides the strategy and the seed.
struct ExperimentData {
  IntentInventory inventory;
  std::vector<Template> templates;
  DatasetSplit split;
  std::shared_ptr<const SynonymLexicon> lexicon;
  GoldSynonymTable gold_synonyms;
  std::set<std::string> stoplist;
  // Masked LM used for inconsequential words and MT_NV; built over the
  // bootstrap sentences.
  std::shared_ptr<const MaskedLm> masked_lm;
};

struct DataPackOptions {
  double bootstrap_fraction = 0.2;
  uint64_t split_seed = 7;
  size_t test_size = 200;
};

// Loads a template pack directory: templates.jsonl, test_templates.jsonl,
// lexicon.jsonl, gold_synonyms.jsonl, stoplist.txt. The split and the test
// sample are drawn from the options' seed.
ExperimentData LoadDataPack(const std::filesystem::path& dir,
                            const DataPackOptions& options = {});

struct ExperimentConfig {
  Hyperparams bootstrap_hp = Hyperparams::Bootstrap();
  Hyperparams online_hp = Hyperparams::Online();
  SimTeacherProfile profile;
};

struct StrategyRun {
  Strategy strategy = Strategy::kRL;
  uint64_t seed = 0;
  ErrorCurve curve;
  std::vector<InteractionEvent> log;
  SessionReport report;
  std::vector<size_t> variation_counts;  // per accepted example
  bool truncated = false;
  std::string final_checkpoint;  // serialized final model
};

// Bootstraps a model from the split, then teaches up to `budget` accepted
// examples from the novel pool with the strategy's selection order,
// filtering and feedback.
StrategyRun RunStrategy(Strategy strategy, const ExperimentData& data,
                        const ExperimentConfig& config, uint64_t seed,
                        int budget);

// risk + eta * cost.
double TeachingObjective(double risk, double cost, double eta);

// (b - a) / b: how much lower a is than b, relative to b.
double RelativeDecrease(double a, double b);

// Trapezoid area under y(x) restricted to [lo, hi], interpolating linearly
// at the cut points.
double TrapezoidArea(std::span<const double> xs, std::span<const double> ys,
                     double lo, double hi);

struct CurveSummary {
  std::string name;
  double final_error = 0.0;
  double final_running_avg = 0.0;
  double auc_examples = 0.0;
  double auc_time = 0.0;
};

struct CurveDelta {
  std::string a;
  std::string b;
  double final_running_avg = 0.0;  // RelativeDecrease(a, b)
  double auc_examples = 0.0;
  double auc_time = 0.0;
};

struct ComparisonTable {
  std::vector<CurveSummary> rows;
  std::vector<CurveDelta> deltas;  // every ordered pair a != b
  double examples_lo = 0.0, examples_hi = 0.0;
  double time_lo = 0.0, time_hi = 0.0;
  bool examples_overlap = true;
  bool time_overlap = true;
};

// Areas use the running average over the x-range shared by all curves.
ComparisonTable CompareCurves(const std::map<std::string, ErrorCurve>& curves);

std::string ComparisonToCsv(const ComparisonTable& table);

// strategy,seed,n_examples,sim_seconds,error,running_avg
inline constexpr char kCurveCsvHeader[] =
    "strategy,seed,n_examples,sim_seconds,error,running_avg";
std::string CurvesToCsv(std::span<const StrategyRun> runs);

struct CurveKey {
  std::string strategy;
  uint64_t seed = 0;
  auto operator<=>(const CurveKey&) const = default;
};
std::map<CurveKey, ErrorCurve> ParseCurvesCsv(const std::string& text);

// Pointwise median across curves, truncated to the shortest curve.
ErrorCurve MedianCurve(std::span<const ErrorCurve> curves);

double Median(std::vector<double> values);

// Shortest round-trip decimal form.
std::string FormatDouble(double value);

}  // namespace mt

#endif  // MT_EXPERIMENTS_H_
