// Copyright 2026 The fairpp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// fairpp command-line tool: fit, apply, evaluate and sweep.
//
// Exit codes: 0 success, 2 configuration error, 3 data error, 4 solver error.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fairpp/fairpp.hpp"
#include "json.hpp"

namespace {

using fairpp::Error;
using fairpp::ErrorKind;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitSolver = 4;

constexpr std::uint64_t kFitStreamDomain = 0x666974ULL;      // "fit"
constexpr std::uint64_t kApplyStreamDomain = 0x6170706cULL;  // "appl"

int ExitCodeFor(const Error& e) {
  switch (e.error_class()) {
    case fairpp::ErrorClass::kConfig: return kExitConfig;
    case fairpp::ErrorClass::kData: return kExitData;
    case fairpp::ErrorClass::kSolver: return kExitSolver;
  }
  return kExitData;
}

// "inf" or a number.
double ParseReal(const std::string& text) {
  if (text == "inf" || text == "+inf" || text == "Inf") return fairpp::kInfinity;
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::kInvalidParameter, "cannot parse '" + text + "' as a number");
}

struct CommonOptions {
  std::string data;
  std::string schema_path;
  std::vector<double> interval;
  std::string group_column;
  std::string score_column;
  std::string label_column;
};

void AddDataOptions(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--data", o.data, "Input CSV")->required();
  cmd->add_option("--schema", o.schema_path, "Dataset schema JSON");
  cmd->add_option("--interval", o.interval, "Score interval as two numbers: lower upper")
      ->expected(2);
  cmd->add_option("--group-column", o.group_column, "Group column (overrides schema)");
  cmd->add_option("--score-column", o.score_column, "Score column (overrides schema)");
  cmd->add_option("--label-column", o.label_column, "Label column (overrides schema)");
}

fairpp::DatasetSchema ResolveSchema(const CommonOptions& o) {
  fairpp::DatasetSchema schema;
  if (!o.schema_path.empty()) schema = fairpp::DatasetSchema::Load(o.schema_path);
  if (!o.interval.empty()) {
    schema.lower = o.interval[0];
    schema.upper = o.interval[1];
  }
  if (!o.group_column.empty()) schema.group_column = o.group_column;
  if (!o.score_column.empty()) schema.score_column = o.score_column;
  if (!o.label_column.empty()) schema.label_column = o.label_column;
  schema.Validate();
  return schema;
}

std::ofstream OpenOut(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kInvalidParameter, "cannot write " + path);
  return out;
}

void WriteMetadata(std::ostream& out, std::uint64_t seed) {
  out << "# fairpp " << fairpp::kToolVersion << " master_seed=" << seed << "\n";
}

// Shortest round-trip spelling, for file names and messages.
std::string AlphaTag(double alpha) {
  return std::isinf(alpha) ? "inf" : nlohmann::json(alpha).dump();
}

// ---- fit -------------------------------------------------------------------

struct FitOptions {
  CommonOptions common;
  std::vector<std::size_t> bins;
  std::vector<std::string> alphas;
  std::string epsilon;
  std::uint64_t seed = 0;
  std::string out;
  std::string dump_lp;
  std::size_t max_lp_iterations = 0;
  bool allow_budget_reuse = false;
};

int RunFit(const FitOptions& o) {
  const fairpp::DatasetSchema schema = ResolveSchema(o.common);
  const fairpp::LoadedDataset data = fairpp::LoadCsv(o.common.data, schema);
  if (data.dropped_rows > 0) {
    std::cerr << "fairpp: dropped " << data.dropped_rows << " rows with missing values\n";
  }
  const double epsilon = ParseReal(o.epsilon);
  std::vector<double> alphas;
  for (const auto& a : o.alphas) alphas.push_back(ParseReal(a));
  const auto [lower, upper] = schema.InternalInterval();
  const bool many = alphas.size() * o.bins.size() > 1;

  // Each fit releases a fresh noisy histogram of the same data. Charge
  // them all up front so a refused run writes nothing.
  fairpp::PrivacyBudgetLedger ledger(o.allow_budget_reuse);
  if (std::isfinite(epsilon)) {
    try {
      for (std::size_t i = 0; i < alphas.size() * o.bins.size(); ++i) ledger.Charge(o.common.data, epsilon);
    } catch (const Error& e) {
      const std::string msg = e.what();
      throw Error(e.kind(), msg.substr(msg.find(": ") + 2) + " (--allow-budget-reuse)");
    }
  }
  std::size_t index = 0;
  for (std::size_t k : o.bins) {
    for (double alpha : alphas) {
      fairpp::FitConfig config{lower, upper, k, alpha, epsilon, o.seed};
      fairpp::RandomStream rng(fairpp::DeriveSeed(o.seed, kFitStreamDomain, index));
      fairpp::lp::SimplexOptions lp_options;
      lp_options.max_iterations = o.max_lp_iterations;
      fairpp::FairPostprocessor model = fairpp::Fit(data.samples, config, rng, lp_options);
      model.set_scale(data.scale);
      const std::string path =
          many ? o.out + "_k" + std::to_string(k) + "_a" + AlphaTag(alpha) + ".json" : o.out;
      model.Save(path);
      std::cout << path << ": k=" << k << " alpha=" << AlphaTag(alpha)
                << " objective=" << fairpp::internal::FormatReal(model.diagnostics().objective) << "\n";
      if (!o.dump_lp.empty() && index == 0) {
        // Rebuilt from the privatized estimates stored in the model, so the
        // dump reads no raw data.
        const auto& d = model.diagnostics();
        fairpp::PrivateGroupDists dists{d.weights, d.pmfs, {}};
        auto out = OpenOut(o.dump_lp);
        fairpp::BuildLp(dists, model.grid(), std::isinf(alpha) ? fairpp::kInfinity : alpha)
            .program()
            .WriteLpFormat(out, "fairpp barycenter k=" + std::to_string(k) + " alpha=" + AlphaTag(alpha));
      }
      ++index;
    }
  }
  if (std::isfinite(epsilon)) {
    std::cerr << "fairpp: privacy budget spent on " << o.common.data << ": epsilon="
              << ledger.Spent(o.common.data) << "\n";
  }
  return kExitOk;
}

// ---- apply / evaluate ------------------------------------------------------

struct ApplyOptions {
  CommonOptions common;
  std::string model;
  std::uint64_t seed = 0;
  std::string out;
  bool deterministic = false;
};

// Loads rows in raw units; the model's own scale maps them inside.
fairpp::LoadedDataset LoadForModel(const CommonOptions& common, const fairpp::FairPostprocessor& model) {
  fairpp::DatasetSchema schema = ResolveSchema(common);
  schema.normalization = fairpp::Normalization::kNone;
  fairpp::LoadedDataset data = fairpp::LoadCsv(common.data, schema);
  const fairpp::AffineScale& s = model.scale();
  for (auto& row : data.samples.rows) {
    row.score = s.ToInternal(row.score);
    if (row.label) row.label = s.ToInternal(*row.label);
  }
  data.scale = s;
  return data;
}

std::vector<double> PredictAll(const fairpp::FairPostprocessor& model, const fairpp::LoadedDataset& data,
                               std::uint64_t seed, bool deterministic) {
  if (deterministic) {
    std::cerr << "fairpp: --deterministic uses the barycentric projection; outputs no longer follow "
                 "the fitted target distributions and the statistical parity bound does not apply\n";
  }
  fairpp::RandomStream rng(fairpp::DeriveSeed(seed, kApplyStreamDomain, 0));
  const auto mode = deterministic ? fairpp::PredictMode::kBarycentricProjection
                                  : fairpp::PredictMode::kRandomized;
  auto predictions = model.PredictBatch(data.samples, rng, mode);
  if (model.out_of_range_count() > 0) {
    std::cerr << "fairpp: " << model.out_of_range_count()
              << " scores fell outside the fitted interval and were clamped\n";
  }
  return predictions;
}

int RunApply(const ApplyOptions& o) {
  const auto model = fairpp::FairPostprocessor::Load(o.model);
  const auto data = LoadForModel(o.common, model);
  const auto predictions = PredictAll(model, data, o.seed, o.deterministic);
  auto out = OpenOut(o.out);
  WriteMetadata(out, o.seed);
  out << "row,group,score,prediction\n";
  const auto& s = model.scale();
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const auto& r = data.samples.rows[i];
    out << i << ',' << fairpp::internal::CsvQuote(data.samples.groups[r.group]) << ','
        << fairpp::internal::FormatReal(s.ToRaw(r.score)) << ','
        << fairpp::internal::FormatReal(s.ToRaw(predictions[i])) << '\n';
  }
  return kExitOk;
}

int RunEvaluate(const ApplyOptions& o) {
  const auto model = fairpp::FairPostprocessor::Load(o.model);
  const auto data = LoadForModel(o.common, model);
  std::vector<double> labels;
  for (const auto& r : data.samples.rows) {
    if (!r.label) {
      throw Error(ErrorKind::kInvalidParameter, "evaluate needs a label column (--label-column or schema)");
    }
    labels.push_back(*r.label);
  }
  const auto predictions = PredictAll(model, data, o.seed, o.deterministic);
  std::vector<std::vector<double>> by_group(data.samples.num_groups());
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    by_group[data.samples.rows[i].group].push_back(predictions[i]);
  }
  const double mse = fairpp::Mse(predictions, labels);
  const double scale = model.scale().scale;
  nlohmann::json report;
  report["tool"] = std::string("fairpp ") + fairpp::kToolVersion;
  report["seed"] = o.seed;
  report["n"] = predictions.size();
  report["mse_raw"] = mse * scale * scale;
  report["mse_internal"] = mse;
  report["delta_sp"] = fairpp::DeltaSp(by_group, model.grid());
  report["out_of_range"] = model.out_of_range_count();
  report["deterministic"] = o.deterministic;
  nlohmann::json sizes;
  for (std::size_t a = 0; a < by_group.size(); ++a) sizes[data.samples.groups[a]] = by_group[a].size();
  report["group_sizes"] = sizes;
  const std::string text = report.dump(1);
  if (o.out.empty()) {
    std::cout << text << "\n";
  } else {
    OpenOut(o.out) << text << "\n";
  }
  return kExitOk;
}

// ---- sweep -----------------------------------------------------------------

struct SweepOptions {
  std::string config;
  std::string data;
  std::string schema_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::string out;
};

int RunSweepCommand(const SweepOptions& o) {
  nlohmann::json doc;
  {
    std::ifstream in(o.config);
    if (!in) throw Error(ErrorKind::kInvalidParameter, "cannot read sweep config " + o.config);
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::kInvalidParameter, "sweep config " + o.config + ": " + e.what());
    }
  }
  fairpp::SweepConfig cfg = fairpp::SweepConfig::FromJson(doc);
  if (!o.data.empty()) cfg.data_path = o.data;
  if (!o.schema_path.empty()) cfg.schema = fairpp::DatasetSchema::Load(o.schema_path);
  if (o.seed) cfg.master_seed = *o.seed;
  if (o.workers) cfg.workers = *o.workers;
  if (!o.out.empty()) cfg.out_prefix = o.out;
  if (cfg.data_path.empty()) throw Error(ErrorKind::kInvalidParameter, "sweep needs a data file");

  const fairpp::LoadedDataset data = fairpp::LoadCsv(cfg.data_path, cfg.schema);
  const fairpp::SweepResult result = fairpp::RunSweep(data.samples, data.scale, cfg);

  auto results = OpenOut(cfg.out_prefix + "_results.csv");
  fairpp::WriteResultsCsv(results, result, cfg.master_seed);
  auto summary = OpenOut(cfg.out_prefix + "_summary.csv");
  fairpp::WriteSummaryCsv(summary, result, cfg.master_seed);
  auto envelope = OpenOut(cfg.out_prefix + "_envelope.csv");
  fairpp::WriteEnvelopeCsv(envelope, result, cfg.master_seed);
  auto timing = OpenOut(cfg.out_prefix + "_timing.csv");
  fairpp::WriteTimingCsv(timing, result);

  std::size_t failed = 0;
  for (const auto& r : result.rows) failed += r.ok() ? 0 : 1;
  std::cout << "fairpp sweep: " << result.rows.size() << " runs, " << failed << " failed, "
            << result.aggregates.size() << " settings -> " << cfg.out_prefix << "_*.csv\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fair and differentially private post-processing for regression"};
  app.set_version_flag("--version", std::string("fairpp ") + fairpp::kToolVersion);
  app.require_subcommand(1);

  FitOptions fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a post-processor and write it as JSON");
  AddDataOptions(fit_cmd, fit.common);
  fit_cmd->add_option("--k", fit.bins, "Number of bins (several values fit several models)")->required();
  fit_cmd->add_option("--alpha", fit.alphas, "Fairness tolerance, or inf (several values allowed)")
      ->required();
  fit_cmd->add_option("--epsilon", fit.epsilon, "Privacy budget, or inf")->required();
  fit_cmd->add_option("--seed", fit.seed, "Seed for the privacy noise");
  fit_cmd->add_option("--out", fit.out, "Model path (a prefix when fitting several models)")->required();
  fit_cmd->add_option("--dump-lp", fit.dump_lp, "Also write the barycenter LP in CPLEX LP format");
  fit_cmd->add_option("--max-lp-iterations", fit.max_lp_iterations, "Simplex pivot cap (0 picks one from the size)");
  fit_cmd->add_flag("--allow-budget-reuse", fit.allow_budget_reuse,
                    "Permit several private fits of the same data in one run");

  ApplyOptions apply;
  auto* apply_cmd = app.add_subcommand("apply", "Post-process scores with a fitted model");
  AddDataOptions(apply_cmd, apply.common);
  apply_cmd->add_option("--model", apply.model, "Model JSON")->required();
  apply_cmd->add_option("--seed", apply.seed, "Seed for the randomized maps");
  apply_cmd->add_option("--out", apply.out, "Predictions CSV")->required();
  apply_cmd->add_flag("--deterministic", apply.deterministic,
                      "Use the barycentric projection (drops the fairness guarantee)");

  ApplyOptions eval;
  auto* eval_cmd = app.add_subcommand("evaluate", "Report MSE and parity gap on labeled data");
  AddDataOptions(eval_cmd, eval.common);
  eval_cmd->add_option("--model", eval.model, "Model JSON")->required();
  eval_cmd->add_option("--seed", eval.seed, "Seed for the randomized maps");
  eval_cmd->add_option("--out", eval.out, "Report JSON (stdout if omitted)");
  eval_cmd->add_flag("--deterministic", eval.deterministic,
                     "Use the barycentric projection (drops the fairness guarantee)");

  SweepOptions sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run an (alpha, k, epsilon, seed) sweep");
  sweep_cmd->add_option("--config", sweep.config, "Sweep config JSON")->required();
  sweep_cmd->add_option("--data", sweep.data, "Input CSV (overrides config)");
  sweep_cmd->add_option("--schema", sweep.schema_path, "Dataset schema JSON (overrides config)");
  sweep_cmd->add_option("--seed", sweep.seed, "Master seed (overrides config)");
  sweep_cmd->add_option("--workers", sweep.workers, "Worker threads (overrides config)");
  sweep_cmd->add_option("--out", sweep.out, "Output prefix (overrides config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*fit_cmd) return RunFit(fit);
    if (*apply_cmd) return RunApply(apply);
    if (*eval_cmd) return RunEvaluate(eval);
    if (*sweep_cmd) return RunSweepCommand(sweep);
  } catch (const Error& e) {
    std::cerr << "fairpp: " << e.what() << "\n";
    return ExitCodeFor(e);
  } catch (const std::exception& e) {
    std::cerr << "fairpp: " << e.what() << "\n";
    return kExitData;
  }
  return kExitConfig;
}
