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

#include "mt/experiments.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

#include "mt/checkpoint.h"
#include "mt/error.h"

namespace mt {

std::string_view StrategyName(Strategy strategy) {
  switch (strategy) {
    case Strategy::kRL:
      return "RL";
    case Strategy::kAL:
      return "AL";
    case Strategy::kALHC:
      return "ALHC";
    case Strategy::kMtNi:
      return "MT_NI";
    case Strategy::kMtNv:
      return "MT_NV";
    case Strategy::kFullMt:
      return "FULL_MT";
    case Strategy::kMtEda:
      return "MT_EDA";
  }
  return "RL";
}

std::vector<Strategy> AllStrategies() {
  return {Strategy::kRL,   Strategy::kAL,     Strategy::kALHC, Strategy::kMtNi,
          Strategy::kMtNv, Strategy::kFullMt, Strategy::kMtEda};
}

Strategy ParseStrategy(std::string_view name) {
  for (Strategy s : AllStrategies()) {
    if (StrategyName(s) == name) return s;
  }
  Fail(ErrorCode::kInvalidArgument, "unknown strategy: " + std::string(name));
}

ExperimentData LoadDataPack(const std::filesystem::path& dir,
                            const DataPackOptions& options) {
  ExperimentData data;
  data.templates = LoadTemplates(dir / "templates.jsonl");
  data.inventory = InventoryFromTemplates(data.templates);
  data.split = SplitDataset(data.templates, data.inventory,
                            options.bootstrap_fraction, options.split_seed);
  std::vector<LabeledExample> test_all;
  for (const Template& t : LoadTemplates(dir / "test_templates.jsonl", "x")) {
    auto expanded = ExpandTemplate(t, data.inventory);
    for (LabeledExample& e : expanded) {
      e.origin = Origin::kManual;
      test_all.push_back(std::move(e));
    }
  }
  data.split.test = SampleExamples(test_all, options.test_size, options.split_seed);
  data.lexicon = std::make_shared<const SynonymLexicon>(
      SynonymLexicon::Load(dir / "lexicon.jsonl"));
  data.gold_synonyms = GoldSynonymTable::Load(dir / "gold_synonyms.jsonl");
  data.stoplist = LoadStoplist(dir / "stoplist.txt");
  std::vector<Sentence> corpus;
  for (const LabeledExample& e : data.split.bootstrap) corpus.push_back(e.sentence);
  data.masked_lm = std::make_shared<const CorpusMaskedLm>(corpus);
  return data;
}

namespace {

struct StrategyTraits {
  SelectionPolicy selection = SelectionPolicy::kConfusion;
  bool filter = false;
  bool important = false;
  bool inconsequential = false;
  ReplacementSource replacements = ReplacementSource::kGoldValidated;
  AugmentMode augment = AugmentMode::kFeedback;
  bool record_validated = false;
};

StrategyTraits TraitsOf(Strategy strategy) {
  StrategyTraits t;
  switch (strategy) {
    case Strategy::kRL:
      t.selection = SelectionPolicy::kRandom;
      break;
    case Strategy::kAL:
      break;
    case Strategy::kALHC:
      t.filter = true;
      break;
    case Strategy::kMtNi:
      t.filter = t.inconsequential = true;
      break;
    case Strategy::kMtNv:
      t.filter = t.important = t.inconsequential = true;
      t.replacements = ReplacementSource::kLexiconMaskedLm;
      break;
    case Strategy::kFullMt:
      t.filter = t.important = t.inconsequential = t.record_validated = true;
      break;
    case Strategy::kMtEda:
      t.filter = t.important = t.inconsequential = t.record_validated = true;
      t.augment = AugmentMode::kEdaMatched;
      break;
  }
  return t;
}

}  // namespace

StrategyRun RunStrategy(Strategy strategy, const ExperimentData& data,
                        const ExperimentConfig& config, uint64_t seed,
                        int budget) {
  if (budget < 1) Fail(ErrorCode::kInvalidArgument, "budget must be >= 1");
  const StrategyTraits traits = TraitsOf(strategy);
  StrategyRun run;
  run.strategy = strategy;
  run.seed = seed;

  LinearModel model =
      Train(data.split.bootstrap, data.inventory, config.bootstrap_hp, seed);
  model.set_hyperparams(config.online_hp);

  auto kb = std::make_shared<KnowledgeBase>(
      data.lexicon, std::make_shared<ValidatedStore>(), data.masked_lm);
  SessionConfig session_config;
  session_config.session_id =
      std::string(StrategyName(strategy)) + "-" + std::to_string(seed);
  session_config.time = config.profile.time;
  session_config.seed = seed;
  session_config.selection = traits.selection;
  session_config.augment = traits.augment;
  session_config.record_validated = traits.record_validated;
  session_config.explain = false;
  Session session(session_config, std::move(model), data.split.novel_pool,
                  data.split.test, kb);

  SimTeacherProfile profile = config.profile;
  profile.filter_examples = traits.filter;
  profile.mark_important = traits.important;
  profile.mark_inconsequential = traits.inconsequential;
  profile.replacements = traits.replacements;
  if (profile.stoplist.empty()) profile.stoplist = data.stoplist;

  if (static_cast<size_t>(budget) > data.split.novel_pool.size()) {
    std::cerr << "warning: budget " << budget << " exceeds pool size "
              << data.split.novel_pool.size() << "; truncating\n";
    budget = static_cast<int>(data.split.novel_pool.size());
    run.truncated = true;
  }
  const GoldIndex gold(data.templates, data.inventory);
  size_t consecutive_skips = 0;
  while (session.Report().accepted < budget && !session.pool_empty()) {
    const MachineStateView view = session.NextCandidate();
    const LabeledExample example = session.PoolExample(view.example_id);
    const GoldAnnotation* annotation = gold.Find(example.id);
    FeedbackRecord fb;
    if (annotation == nullptr) {
      // No gold: the teacher can only label.
      fb.example_id = example.id;
      fb.label = example.label;
    } else {
      SimTeacherProfile step_profile = profile;
      if (profile.patience > 0 &&
          consecutive_skips >= static_cast<size_t>(profile.patience)) {
        step_profile.filter_examples = false;
      }
      fb = SimulateTeacher(example, annotation, view, step_profile,
                           data.gold_synonyms, *kb);
    }
    if (fb.action == FeedbackAction::kSkip) {
      session.Decide(example.id, FeedbackAction::kSkip);
      // Everything left is confidently known; stop instead of cycling.
      if (++consecutive_skips > session.pool().size()) {
        run.truncated = true;
        break;
      }
      continue;
    }
    consecutive_skips = 0;
    session.Decide(example.id, FeedbackAction::kAccept);
    run.variation_counts.push_back(session.SubmitFeedback(fb).variation_count);
  }

  run.curve = session.curve();
  run.log = session.events();
  run.report = session.Report();
  run.final_checkpoint = SerializeModel(session.model());
  return run;
}

double TeachingObjective(double risk, double cost, double eta) {
  if (!(risk >= 0.0 && risk <= 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "teaching risk must be in [0, 1]");
  }
  if (!(cost >= 0.0)) Fail(ErrorCode::kInvalidArgument, "teaching cost must be >= 0");
  return risk + eta * cost;
}

double RelativeDecrease(double a, double b) {
  if (b == 0.0) return a == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
  return (b - a) / b;
}

double TrapezoidArea(std::span<const double> xs, std::span<const double> ys,
                     double lo, double hi) {
  if (xs.size() != ys.size()) {
    Fail(ErrorCode::kInvalidArgument, "x and y lengths differ");
  }
  if (xs.empty() || !(hi > lo)) return 0.0;
  auto value_at = [&](double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const size_t j = std::upper_bound(xs.begin(), xs.end(), x) - xs.begin();
    const double x0 = xs[j - 1], x1 = xs[j];
    if (x1 == x0) return ys[j];
    return ys[j - 1] + (ys[j] - ys[j - 1]) * (x - x0) / (x1 - x0);
  };
  std::vector<double> px{lo};
  for (double x : xs) {
    if (x > lo && x < hi) px.push_back(x);
  }
  px.push_back(hi);
  double area = 0.0;
  for (size_t i = 1; i < px.size(); ++i) {
    area += 0.5 * (value_at(px[i - 1]) + value_at(px[i])) * (px[i] - px[i - 1]);
  }
  return area;
}

ComparisonTable CompareCurves(const std::map<std::string, ErrorCurve>& curves) {
  if (curves.size() < 2) {
    Fail(ErrorCode::kInvalidArgument, "comparison needs at least two curves");
  }
  ComparisonTable table;
  table.examples_lo = table.time_lo = -std::numeric_limits<double>::infinity();
  table.examples_hi = table.time_hi = std::numeric_limits<double>::infinity();
  for (const auto& [name, curve] : curves) {
    if (curve.empty()) Fail(ErrorCode::kInvalidArgument, "empty curve: " + name);
    table.examples_lo = std::max<double>(table.examples_lo, curve.points().front().n_examples);
    table.examples_hi = std::min<double>(table.examples_hi, curve.back().n_examples);
    table.time_lo = std::max(table.time_lo, curve.points().front().sim_seconds);
    table.time_hi = std::min(table.time_hi, curve.back().sim_seconds);
  }
  table.examples_overlap = table.examples_hi > table.examples_lo;
  table.time_overlap = table.time_hi > table.time_lo;

  for (const auto& [name, curve] : curves) {
    std::vector<double> n, t, y;
    for (const CurvePoint& p : curve.points()) {
      n.push_back(p.n_examples);
      t.push_back(p.sim_seconds);
      y.push_back(p.running_avg);
    }
    table.rows.push_back(
        {name, curve.back().error, curve.back().running_avg,
         TrapezoidArea(n, y, table.examples_lo, table.examples_hi),
         TrapezoidArea(t, y, table.time_lo, table.time_hi)});
  }
  for (const CurveSummary& a : table.rows) {
    for (const CurveSummary& b : table.rows) {
      if (a.name == b.name) continue;
      table.deltas.push_back(
          {a.name, b.name,
           RelativeDecrease(a.final_running_avg, b.final_running_avg),
           RelativeDecrease(a.auc_examples, b.auc_examples),
           RelativeDecrease(a.auc_time, b.auc_time)});
    }
  }
  return table;
}

std::string FormatDouble(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

std::string ComparisonToCsv(const ComparisonTable& table) {
  std::ostringstream out;
  out << "kind,a,b,final_error,final_running_avg,auc_examples,auc_time\n";
  for (const CurveSummary& row : table.rows) {
    out << "curve," << row.name << ",," << FormatDouble(row.final_error) << ','
        << FormatDouble(row.final_running_avg) << ','
        << FormatDouble(row.auc_examples) << ',' << FormatDouble(row.auc_time)
        << '\n';
  }
  for (const CurveDelta& d : table.deltas) {
    out << "relative_decrease," << d.a << ',' << d.b << ",,"
        << FormatDouble(d.final_running_avg) << ','
        << FormatDouble(d.auc_examples) << ',' << FormatDouble(d.auc_time)
        << '\n';
  }
  return out.str();
}

std::string CurvesToCsv(std::span<const StrategyRun> runs) {
  std::ostringstream out;
  out << kCurveCsvHeader << '\n';
  for (const StrategyRun& run : runs) {
    for (const CurvePoint& p : run.curve.points()) {
      out << StrategyName(run.strategy) << ',' << run.seed << ','
          << p.n_examples << ',' << FormatDouble(p.sim_seconds) << ','
          << FormatDouble(p.error) << ',' << FormatDouble(p.running_avg)
          << '\n';
    }
  }
  return out.str();
}

std::map<CurveKey, ErrorCurve> ParseCurvesCsv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCurveCsvHeader) {
    Fail(ErrorCode::kInvalidArgument, "curve CSV must start with the header");
  }
  std::map<CurveKey, std::vector<CurvePoint>> points;
  int line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (cells.size() != 6) {
      Fail(ErrorCode::kInvalidArgument,
           "curve CSV line " + std::to_string(line_number) + " has " +
               std::to_string(cells.size()) + " fields");
    }
    try {
      CurveKey key{cells[0], std::stoull(cells[1])};
      points[key].push_back({std::stoi(cells[2]), std::stod(cells[3]),
                             std::stod(cells[4]), std::stod(cells[5])});
    } catch (const std::exception&) {
      Fail(ErrorCode::kInvalidArgument,
           "curve CSV line " + std::to_string(line_number) + " is malformed");
    }
  }
  std::map<CurveKey, ErrorCurve> out;
  for (auto& [key, list] : points) {
    out[key] = ErrorCurve::FromPoints(std::move(list));
  }
  return out;
}

double Median(std::vector<double> values) {
  if (values.empty()) Fail(ErrorCode::kInvalidArgument, "median of nothing");
  std::sort(values.begin(), values.end());
  const size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

ErrorCurve MedianCurve(std::span<const ErrorCurve> curves) {
  if (curves.empty()) Fail(ErrorCode::kInvalidArgument, "no curves");
  size_t length = curves.front().size();
  for (const ErrorCurve& c : curves) length = std::min(length, c.size());
  std::vector<CurvePoint> points;
  for (size_t i = 0; i < length; ++i) {
    std::vector<double> t, e, r;
    for (const ErrorCurve& c : curves) {
      t.push_back(c.points()[i].sim_seconds);
      e.push_back(c.points()[i].error);
      r.push_back(c.points()[i].running_avg);
    }
    points.push_back({static_cast<int>(i) + 1, Median(t), Median(e), Median(r)});
  }
  return ErrorCurve::FromPoints(std::move(points));
}

}  // namespace mt
