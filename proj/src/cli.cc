/*
 * Copyright 2026 The RuleFit Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "rulefit/cli.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rulefit/bench.h"
#include "rulefit/dataset.h"
#include "rulefit/errors.h"
#include "rulefit/interpret.h"
#include "rulefit/model.h"
#include "rulefit/pipeline.h"

namespace rulefit {
namespace {

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string Num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, result.ptr);
}

// CSV field quoting for names and rule text.
std::string Field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

// Collects CSV text and writes it atomically with a provenance comment.
class CsvOut {
 public:
  explicit CsvOut(const std::string& provenance) { text_ << "# " << provenance << "\n"; }
  void Row(const std::vector<std::string>& fields) {
    for (size_t i = 0; i < fields.size(); ++i) {
      if (i > 0) text_ << ',';
      text_ << Field(fields[i]);
    }
    text_ << '\n';
  }
  void Write(const std::string& path, std::ostream& out) const {
    if (path.empty() || path == "-") {
      out << text_.str();
    } else {
      WriteFileAtomically(path, text_.str());
    }
  }

 private:
  std::ostringstream text_;
};

struct DataFlags {
  std::string input;
  std::string target;
  std::string categorical;
  std::string task = "auto";
};

struct PdFlags {
  size_t max_points = 500;
  size_t max_rows = 500;
  bool exact = false;
  uint64_t seed = 1;

  PdOptions Options() const { return {max_points, max_rows, exact, seed}; }
};

struct Context {
  std::ostream& out;
  std::ostream& err;
  size_t threads = 1;
  std::string provenance;
};

void AddPdFlags(CLI::App* cmd, PdFlags& f) {
  cmd->add_option("--max-points", f.max_points, "Evaluation-point cap (0 = all rows)");
  cmd->add_option("--max-rows", f.max_rows, "Integration-row cap (0 = all rows)");
  cmd->add_flag("--exact", f.exact, "Use every row for points and integration");
  cmd->add_option("--pd-seed", f.seed, "Seed of the row subsampling");
}

Task ResolveTask(const std::string& task, LossKind loss) {
  if (task == "regression") return Task::kRegression;
  if (task == "classification") return Task::kBinaryClassification;
  if (task != "auto") throw ConfigError("unknown task '" + task + "'");
  return loss == LossKind::kRamp ? Task::kBinaryClassification : Task::kRegression;
}

// Reads a file with the model's predictor schema; the model's target column
// is optional.
Dataset LoadForModel(const EnsembleModel& model, const std::string& path,
                     bool require_target) {
  CsvOptions options;
  options.target = model.target;
  options.task = model.task;
  options.reference_schema = model.schema;
  Dataset data = LoadCsv(path, options);
  if (require_target) {
    // A missing target column parses as zeros with the regression task.
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    bool found = false;
    for (const std::string& name : SplitList(header)) {
      std::string trimmed = name;
      trimmed.erase(std::remove(trimmed.begin(), trimmed.end(), '"'), trimmed.end());
      trimmed.erase(std::remove_if(trimmed.begin(), trimmed.end(),
                                   [](char c) { return std::isspace(static_cast<unsigned char>(c)); }),
                    trimmed.end());
      if (trimmed == model.target) found = true;
    }
    if (!found) {
      throw SchemaError("file '" + path + "' lacks the response column '" +
                        model.target + "'");
    }
  }
  return data;
}

std::vector<size_t> ResolveVars(const EnsembleModel& model, const std::string& list) {
  std::vector<size_t> vars;
  for (const std::string& name : SplitList(list)) {
    size_t j = 0;
    for (; j < model.schema.size(); ++j) {
      if (model.schema[j].name == name) break;
    }
    if (j == model.schema.size()) throw ConfigError("unknown variable '" + name + "'");
    vars.push_back(j);
  }
  return vars;
}

// ---------------------------------------------------------------------------

struct FitFlags {
  DataFlags data;
  std::string out;
  std::string loss = "squared";
  double huber_alpha = 0.9;
  size_t trees = 333;
  double nu = 0.01;
  size_t eta = 0;
  double lbar = 4.0;
  double kappa = 1.0;
  size_t min_node = 10;
  double beta = 0.025;
  std::string basis = "rules+linear";
  size_t num_lambdas = 100;
  double min_ratio = 1e-3;
  size_t cv_folds = 10;
  double holdout = 0.0;
  double tol = 1e-4;
  uint64_t seed = 1;
};

PipelineConfig ConfigFromFlags(const FitFlags& f) {
  PipelineConfig c;
  c.loss.kind = ParseLossKind(f.loss);
  c.loss.alpha = f.huber_alpha;
  c.ensemble.num_trees = f.trees;
  c.ensemble.nu = f.nu;
  c.ensemble.eta = f.eta;
  c.ensemble.mean_tree_size = f.lbar;
  c.ensemble.kappa = f.kappa;
  c.ensemble.min_node_rows = f.min_node;
  c.winsor_beta = f.beta;
  c.basis = ParseBasisKind(f.basis);
  c.fit.num_lambdas = f.num_lambdas;
  c.fit.min_ratio = f.min_ratio;
  c.fit.cv_folds = f.cv_folds;
  c.fit.holdout_fraction = f.holdout;
  c.fit.tol = f.tol;
  c.seed = f.seed;
  return c;
}

int RunFit(const FitFlags& f, Context& ctx) {
  const PipelineConfig config = ConfigFromFlags(f);
  CsvOptions options;
  options.target = f.data.target;
  options.categorical = SplitList(f.data.categorical);
  options.task = ResolveTask(f.data.task, config.loss.kind);
  const Dataset data = LoadCsv(f.data.input, options);
  config.Validate(data);
  EnsembleModel model = FitModel(data, config, ctx.threads);
  model.target = f.data.target;
  SaveModel(model, f.out);
  ctx.err << "fit: " << model.rules.size() << " rules, " << model.linear.size()
          << " linear terms, lambda " << model.diagnostics.selected_lambda << "\n";
  return kExitOk;
}

struct PredictFlags {
  std::string model;
  std::string input;
  std::string out;
};

int RunPredict(const PredictFlags& f, Context& ctx) {
  const EnsembleModel model = LoadModel(f.model);
  const Dataset data = LoadForModel(model, f.input, false);
  const std::vector<double> pred = model.PredictAll(data);
  CsvOut csv(ctx.provenance);
  const bool labels = model.task == Task::kBinaryClassification;
  csv.Row(labels ? std::vector<std::string>{"prediction", "label"}
                 : std::vector<std::string>{"prediction"});
  for (double p : pred) {
    if (labels) {
      csv.Row({Num(p), Num(EnsembleModel::Label(p))});
    } else {
      csv.Row({Num(p)});
    }
  }
  csv.Write(f.out, ctx.out);
  return kExitOk;
}

struct ImportanceFlags {
  std::string model;
  std::string input;
  std::string at;
  std::string region;
  std::string out;
};

int RunImportance(const ImportanceFlags& f, Context& ctx) {
  const EnsembleModel model = LoadModel(f.model);
  if (!f.at.empty() && !f.region.empty()) {
    throw ConfigError("--at and --region are mutually exclusive");
  }
  ImportanceReport report;
  std::string scope = "global";
  if (!f.at.empty()) {
    const Dataset point = LoadForModel(model, f.at, false);
    if (point.num_rows() != 1) throw ConfigError("--at file must hold exactly one row");
    report = LocalImportance(model, point.Row(0));
    scope = "point";
  } else if (!f.region.empty()) {
    const size_t colon = f.region.find(':');
    const std::string side = f.region.substr(0, colon);
    if (colon == std::string::npos || (side != "top" && side != "bottom")) {
      throw ConfigError("--region expects top:q or bottom:q");
    }
    double q = 0.0;
    try {
      q = std::stod(f.region.substr(colon + 1));
    } catch (const std::exception&) {
      throw ConfigError("--region fraction is not a number");
    }
    if (f.input.empty()) throw ConfigError("--region needs --input data");
    const Dataset data = LoadForModel(model, f.input, false);
    const std::vector<size_t> rows = PredictionRegion(model, data, q, side == "top");
    report = RegionImportance(model, data, rows);
    scope = f.region;
  } else {
    report = GlobalImportance(model);
  }
  CsvOut csv(ctx.provenance);
  csv.Row({"scope", "kind", "term", "coefficient", "support", "importance", "relative"});
  const std::vector<double> rel_var = report.RelativeVariables();
  std::vector<size_t> order(model.num_variables());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return report.variable_importance[a] > report.variable_importance[b];
  });
  for (size_t j : order) {
    csv.Row({scope, "variable", model.schema[j].name, "", "",
             Num(report.variable_importance[j]), Num(rel_var[j])});
  }
  const std::vector<double> rel_rules = report.RelativeRules();
  const std::vector<double> rel_linear = report.RelativeLinear();
  for (size_t t = 0; t < model.linear.size(); ++t) {
    const LinearModelTerm& term = model.linear[t];
    csv.Row({scope, "linear", model.schema[term.variable].name, Num(term.coefficient), "",
             Num(report.linear_importance[t]), Num(rel_linear[t])});
  }
  for (size_t k = 0; k < model.rules.size(); ++k) {
    const RuleTerm& term = model.rules[k];
    csv.Row({scope, "rule", term.rule.ToString(model.schema), Num(term.coefficient),
             Num(term.rule.support), Num(report.rule_importance[k]), Num(rel_rules[k])});
  }
  csv.Write(f.out, ctx.out);
  return kExitOk;
}

struct PdpFlags {
  std::string model;
  std::string input;
  std::string vars;
  std::string out;
  PdFlags pd;
};

int RunPdp(const PdpFlags& f, Context& ctx) {
  const EnsembleModel model = LoadModel(f.model);
  const Dataset data = LoadForModel(model, f.input, false);
  const std::vector<size_t> vars = ResolveVars(model, f.vars);
  if (vars.empty() || vars.size() > 3) throw ConfigError("--vars takes 1 to 3 variables");
  for (size_t a = 0; a < vars.size(); ++a) {
    for (size_t b = a + 1; b < vars.size(); ++b) {
      if (vars[a] == vars[b]) throw ConfigError("--vars repeats a variable");
    }
  }
  const PartialDependence pd(model, data, f.pd.Options());
  // Distinct observed tuples at the evaluation rows, in sorted order.
  std::vector<std::vector<double>> points;
  for (size_t i : pd.eval_rows()) {
    std::vector<double> p;
    for (size_t j : vars) p.push_back(data.value(i, j));
    points.push_back(std::move(p));
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  const std::vector<double> values = Centered(pd.Evaluate(vars, points));
  CsvOut csv(ctx.provenance);
  std::vector<std::string> header;
  for (size_t j : vars) header.push_back(model.schema[j].name);
  header.push_back("partial_dependence");
  csv.Row(header);
  for (size_t e = 0; e < points.size(); ++e) {
    std::vector<std::string> row;
    for (size_t v = 0; v < vars.size(); ++v) {
      const Column& col = model.schema[vars[v]];
      const double x = points[e][v];
      if (col.is_categorical()) {
        row.push_back(x >= 0 ? col.levels[static_cast<size_t>(x)] : "<unseen>");
      } else {
        row.push_back(Num(x));
      }
    }
    row.push_back(Num(values[e]));
    csv.Row(row);
  }
  csv.Write(f.out, ctx.out);
  return kExitOk;
}

struct InteractionFlags {
  std::string model;
  std::string input;
  size_t order = 1;
  std::string vars;
  size_t top = 10;
  size_t null_reps = 0;
  uint64_t null_seed = 7;
  bool importance_weighted = false;
  std::string out;
  PdFlags pd;
};

std::vector<HRequest> RequestsFor(const EnsembleModel& model, const InteractionFlags& f) {
  std::vector<size_t> vars = ResolveVars(model, f.vars);
  if (vars.empty()) {
    if (f.order == 1) {
      vars.resize(model.num_variables());
      std::iota(vars.begin(), vars.end(), size_t{0});
    } else {
      // Most important variables by global J_l.
      const ImportanceReport report = GlobalImportance(model);
      std::vector<size_t> order(model.num_variables());
      std::iota(order.begin(), order.end(), size_t{0});
      std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return report.variable_importance[a] > report.variable_importance[b];
      });
      order.resize(std::min(f.top, order.size()));
      std::sort(order.begin(), order.end());
      vars = order;
    }
  }
  return EnumerateRequests(f.order, vars);
}

NullSummary RunNull(const EnsembleModel& model, const Dataset& data,
                    std::span<const HRequest> requests, const HOptions& options,
                    size_t reps, uint64_t seed, Context& ctx) {
  if (model.config.empty()) throw ConfigError("model lacks its fitting configuration");
  const PipelineConfig config = PipelineConfig::FromJson(model.config);
  const EnsembleModel additive = FitAdditiveReference(data, config, ctx.threads);
  return NullDistribution(data, config, additive, requests, options, reps, seed,
                          ctx.threads);
}

int RunInteractions(const InteractionFlags& f, Context& ctx) {
  const EnsembleModel model = LoadModel(f.model);
  const Dataset data = LoadForModel(model, f.input, f.null_reps > 0);
  const std::vector<HRequest> requests = RequestsFor(model, f);
  HOptions options;
  options.pd = f.pd.Options();
  options.importance_weighted = f.importance_weighted;
  const std::vector<HValue> raw = ComputeH(model, data, requests, options);
  NullSummary null;
  if (f.null_reps > 0) {
    null = RunNull(model, data, requests, options, f.null_reps, f.null_seed, ctx);
  }
  const std::vector<InteractionEntry> entries = ExcessStatistics(requests, raw, null);
  CsvOut csv(ctx.provenance);
  csv.Row({"tuple", "H", "null_mean", "null_std", "excess", "reps", "zero_denominator"});
  for (const InteractionEntry& e : entries) {
    const bool has_null = e.reps > 0;
    csv.Row({RequestLabel(e.request, model.schema), Num(e.h),
             has_null ? Num(e.null_mean) : "", has_null ? Num(e.null_std) : "",
             has_null ? Num(e.excess) : "", std::to_string(e.reps),
             e.zero_denominator ? "1" : "0"});
  }
  csv.Write(f.out, ctx.out);
  return kExitOk;
}

int RunNullCalibrate(const InteractionFlags& f, Context& ctx) {
  if (f.null_reps < 2) throw ConfigError("--null-reps must be at least 2");
  const EnsembleModel model = LoadModel(f.model);
  const Dataset data = LoadForModel(model, f.input, true);
  const std::vector<HRequest> requests = RequestsFor(model, f);
  HOptions options;
  options.pd = f.pd.Options();
  options.importance_weighted = f.importance_weighted;
  const NullSummary null =
      RunNull(model, data, requests, options, f.null_reps, f.null_seed, ctx);
  CsvOut csv(ctx.provenance);
  std::vector<std::string> header = {"tuple", "null_mean", "null_std", "reps"};
  for (size_t r = 0; r < null.reps; ++r) header.push_back("rep" + std::to_string(r));
  csv.Row(header);
  for (size_t q = 0; q < requests.size(); ++q) {
    std::vector<std::string> row = {RequestLabel(requests[q], model.schema),
                                    Num(null.mean[q]), Num(null.std[q]),
                                    std::to_string(null.reps)};
    for (size_t r = 0; r < null.reps; ++r) row.push_back(Num(null.values[r][q]));
    csv.Row(row);
  }
  csv.Write(f.out, ctx.out);
  return kExitOk;
}

struct SynthFlags {
  std::string kind = "eq51";
  size_t rows = 5000;
  size_t cols = 100;
  double snr = 2.0;
  uint64_t seed = 1;
  bool squared_variant = false;
  std::string out;
  std::string truth;
};

int RunGenSynth(const SynthFlags& f, Context& ctx) {
  SynthSpec spec;
  spec.kind = ParseSynthKind(f.kind);
  spec.num_rows = f.rows;
  spec.num_columns = f.cols;
  spec.signal_to_noise = f.snr;
  spec.seed = f.seed;
  spec.squared_second_term = f.squared_variant;
  const SynthData synth = GenerateSynthetic(spec);
  const Dataset& data = synth.data;
  std::ostringstream text;
  for (size_t j = 0; j < data.num_columns(); ++j) text << data.column(j).name << ',';
  text << "y\n";
  for (size_t i = 0; i < data.num_rows(); ++i) {
    for (size_t j = 0; j < data.num_columns(); ++j) text << Num(data.value(i, j)) << ',';
    text << Num(data.response()[i]) << '\n';
  }
  WriteFileAtomically(f.out, text.str());
  if (!f.truth.empty()) {
    CsvOut csv(ctx.provenance);
    csv.Row({"truth"});
    for (double t : synth.truth) csv.Row({Num(t)});
    csv.Write(f.truth, ctx.out);
  }
  return kExitOk;
}

std::vector<double> ReadSingleColumn(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::vector<double> values;
  std::string line;
  bool header = true;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    const std::string first = line.substr(0, line.find(','));
    try {
      size_t used = 0;
      values.push_back(std::stod(first, &used));
      if (used != first.size()) throw std::invalid_argument(first);
    } catch (const std::exception&) {
      throw ParseError("'" + path + "' line " + std::to_string(line_no) +
                       ": not a number");
    }
  }
  return values;
}

struct EvalFlags {
  std::string model;
  std::string test;
  std::string truth;
  std::string metrics = "aae";
  std::string out;
};

int RunEval(const EvalFlags& f, Context& ctx) {
  const EnsembleModel model = LoadModel(f.model);
  const std::vector<std::string> metrics = SplitList(f.metrics);
  bool needs_y = false;
  for (const std::string& m : metrics) {
    if (m == "aae" || m == "errrate") {
      needs_y = true;
    } else if (m != "target") {
      throw ConfigError("unknown metric '" + m + "'");
    }
  }
  const Dataset data = LoadForModel(model, f.test, needs_y);
  const std::vector<double> pred = model.PredictAll(data);
  CsvOut csv(ctx.provenance);
  csv.Row({"metric", "value"});
  for (const std::string& m : metrics) {
    double value = 0.0;
    if (m == "aae") {
      value = MetricAae(data.response(), pred);
    } else if (m == "errrate") {
      if (data.task() != Task::kBinaryClassification) {
        throw ConfigError("errrate needs a classification model");
      }
      value = MetricErrorRate(data.response(), pred);
    } else {
      if (f.truth.empty()) throw ConfigError("metric 'target' needs --truth");
      const std::vector<double> truth = ReadSingleColumn(f.truth);
      if (truth.size() != pred.size()) {
        throw SchemaError("truth file has " + std::to_string(truth.size()) +
                          " rows, test file " + std::to_string(pred.size()));
      }
      value = MetricTargetError(truth, pred);
    }
    csv.Row({m, Num(value)});
  }
  csv.Write(f.out, ctx.out);
  return kExitOk;
}

void AddDataFlags(CLI::App* cmd, DataFlags& d) {
  cmd->add_option("--input", d.input, "Training CSV")->required();
  cmd->add_option("--target", d.target, "Response column")->required();
  cmd->add_option("--categorical", d.categorical, "Comma-separated categorical columns");
  cmd->add_option("--task", d.task, "regression, classification or auto")
      ->check(CLI::IsMember({"auto", "regression", "classification"}));
}

}  // namespace

int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rule ensembles: fitting, prediction and interpretation", "rulefit"};
  app.set_version_flag("--version", std::string("rulefit ") + kVersion);
  app.require_subcommand(0, 1);
  Context ctx{out, err, 1, ""};
  app.add_option("--threads", ctx.threads, "Worker threads")
      ->check(CLI::PositiveNumber);

  FitFlags fit;
  CLI::App* fit_cmd = app.add_subcommand("fit", "Fit a rule ensemble");
  AddDataFlags(fit_cmd, fit.data);
  fit_cmd->add_option("--out", fit.out, "Model JSON path")->required();
  fit_cmd->add_option("--loss", fit.loss, "squared, huber or ramp")
      ->check(CLI::IsMember({"squared", "huber", "ramp"}));
  fit_cmd->add_option("--huber-alpha", fit.huber_alpha, "Huber residual quantile");
  fit_cmd->add_option("--trees", fit.trees, "Number of trees M");
  fit_cmd->add_option("--nu", fit.nu, "Shrinkage");
  fit_cmd->add_option("--eta", fit.eta, "Subsample size (0 = automatic)");
  fit_cmd->add_option("--lbar", fit.lbar, "Mean terminal nodes per tree");
  fit_cmd->add_option("--kappa", fit.kappa, "Split incentive for path variables");
  fit_cmd->add_option("--min-node", fit.min_node, "Minimum rows per terminal node");
  fit_cmd->add_option("--beta", fit.beta, "Winsorizing quantile");
  fit_cmd->add_option("--basis", fit.basis, "rules+linear, rules or linear")
      ->check(CLI::IsMember({"rules+linear", "rules", "linear"}));
  fit_cmd->add_option("--lambdas", fit.num_lambdas, "Path length");
  fit_cmd->add_option("--min-ratio", fit.min_ratio, "Smallest lambda / lambda_max");
  fit_cmd->add_option("--cv-folds", fit.cv_folds, "Cross-validation folds");
  fit_cmd->add_option("--holdout", fit.holdout, "Holdout fraction (replaces CV)");
  fit_cmd->add_option("--tol", fit.tol, "Coordinate-descent tolerance");
  fit_cmd->add_option("--seed", fit.seed, "Random seed");

  PredictFlags predict;
  CLI::App* predict_cmd = app.add_subcommand("predict", "Predict with a saved model");
  predict_cmd->add_option("--model", predict.model, "Model JSON")->required();
  predict_cmd->add_option("--input", predict.input, "CSV to score")->required();
  predict_cmd->add_option("--out", predict.out, "Output CSV (default stdout)");

  ImportanceFlags importance;
  CLI::App* imp_cmd = app.add_subcommand("importance", "Term and variable importances");
  imp_cmd->add_option("--model", importance.model, "Model JSON")->required();
  imp_cmd->add_option("--input", importance.input, "Data for --region");
  imp_cmd->add_option("--at", importance.at, "One-row CSV for local importance");
  imp_cmd->add_option("--region", importance.region, "top:q or bottom:q");
  imp_cmd->add_option("--out", importance.out, "Output CSV (default stdout)");

  PdpFlags pdp;
  CLI::App* pdp_cmd = app.add_subcommand("pdp", "Partial dependence table");
  pdp_cmd->add_option("--model", pdp.model, "Model JSON")->required();
  pdp_cmd->add_option("--input", pdp.input, "Data CSV")->required();
  pdp_cmd->add_option("--vars", pdp.vars, "1 to 3 comma-separated variables")->required();
  pdp_cmd->add_option("--out", pdp.out, "Output CSV (default stdout)");
  AddPdFlags(pdp_cmd, pdp.pd);

  InteractionFlags inter;
  CLI::App* inter_cmd = app.add_subcommand("interactions", "Interaction H statistics");
  InteractionFlags calib;
  CLI::App* calib_cmd =
      app.add_subcommand("null-calibrate", "Null distribution of H statistics");
  for (auto [cmd, flags] : {std::pair{inter_cmd, &inter}, std::pair{calib_cmd, &calib}}) {
    cmd->add_option("--model", flags->model, "Model JSON")->required();
    cmd->add_option("--input", flags->input, "Training CSV")->required();
    cmd->add_option("--order", flags->order, "1, 2 or 3")->check(CLI::Range(1, 3));
    cmd->add_option("--vars", flags->vars, "Variables to analyse");
    cmd->add_option("--top", flags->top, "Variables by importance for order 2 and 3");
    cmd->add_option("--null-reps", flags->null_reps, "Null replications");
    cmd->add_option("--null-seed", flags->null_seed, "Seed of the null replications");
    cmd->add_flag("--importance-weighted", flags->importance_weighted,
                  "Divide by the variance of F");
    cmd->add_option("--out", flags->out, "Output CSV (default stdout)");
    AddPdFlags(cmd, flags->pd);
  }
  calib.null_reps = 10;

  SynthFlags synth;
  CLI::App* synth_cmd = app.add_subcommand("gen-synth", "Generate synthetic data");
  synth_cmd->add_option("--kind", synth.kind, "eq51 or eq27")
      ->check(CLI::IsMember({"eq51", "eq27"}));
  synth_cmd->add_option("--n-rows", synth.rows, "Rows");
  synth_cmd->add_option("--n-cols", synth.cols, "Predictors");
  synth_cmd->add_option("--snr", synth.snr, "Signal-to-noise ratio");
  synth_cmd->add_option("--seed", synth.seed, "Random seed");
  synth_cmd->add_flag("--squared-variant", synth.squared_variant,
                      "Square the x4 - x5 exponent");
  synth_cmd->add_option("--out", synth.out, "Data CSV")->required();
  synth_cmd->add_option("--with-truth", synth.truth, "Noise-free target CSV");

  EvalFlags eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate a model on test data");
  eval_cmd->add_option("--model", eval.model, "Model JSON")->required();
  eval_cmd->add_option("--test", eval.test, "Test CSV")->required();
  eval_cmd->add_option("--truth", eval.truth, "Noise-free target CSV");
  eval_cmd->add_option("--metrics", eval.metrics, "aae,target,errrate");
  eval_cmd->add_option("--out", eval.out, "Output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << (dynamic_cast<const CLI::CallForVersion*>(&e) ? e.what() : app.help());
      out << "\n";
      return kExitOk;
    }
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }
  if (app.get_subcommands().empty()) {
    err << app.help();
    return kExitUsage;
  }

  std::string provenance = "rulefit " + std::string(kVersion);
  for (int i = 1; i < argc; ++i) provenance += std::string(" ") + argv[i];
  ctx.provenance = provenance;

  try {
    if (fit_cmd->parsed()) return RunFit(fit, ctx);
    if (predict_cmd->parsed()) return RunPredict(predict, ctx);
    if (imp_cmd->parsed()) return RunImportance(importance, ctx);
    if (pdp_cmd->parsed()) return RunPdp(pdp, ctx);
    if (inter_cmd->parsed()) return RunInteractions(inter, ctx);
    if (calib_cmd->parsed()) return RunNullCalibrate(calib, ctx);
    if (synth_cmd->parsed()) return RunGenSynth(synth, ctx);
    if (eval_cmd->parsed()) return RunEval(eval, ctx);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace rulefit
