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

// Hyperparameter sweeps over (alpha, k, epsilon, seed) for error/fairness
// trade-off curves, and their lower envelopes.
//
// Every cell is fit on the training part of a seeded 70-30 style split and
// evaluated on the held-out part. A seed fixes the split (shared by all
// cells with that seed); the cell's own stream drives the privacy noise and
// the randomized predictions. Results come back in canonical cell order no
// matter how many workers ran them, so output files are reproducible byte
// for byte. Wall-clock timings are kept out of those files.

#ifndef FAIRPP_HARNESS_HPP_
#define FAIRPP_HARNESS_HPP_

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "fairpp/data_io.hpp"
#include "fairpp/errors.hpp"
#include "fairpp/metrics.hpp"
#include "fairpp/pipeline.hpp"
#include "fairpp/random.hpp"
#include "fairpp/samples.hpp"
#include "json.hpp"

namespace fairpp {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr std::uint64_t kSplitStreamDomain = 0x73706c6974ULL;  // "split"
inline constexpr std::uint64_t kCellStreamDomain = 0x63656c6cULL;     // "cell"

struct SweepConfig {
  std::string data_path;
  DatasetSchema schema;
  std::vector<double> alphas{0.0, 0.05, 0.1, 0.2, kInfinity};
  std::vector<std::size_t> bins{1, 8, 16, 36};
  std::vector<double> epsilons{0.1, 1.0, kInfinity};
  std::size_t seeds = 50;
  double split_ratio = 0.7;
  std::uint64_t master_seed = 0;
  std::size_t workers = 1;
  std::string out_prefix = "sweep";

  void Validate() const {
    if (alphas.empty() || bins.empty() || epsilons.empty()) {
      throw Error(ErrorKind::kInvalidParameter, "sweep lists must be nonempty");
    }
    if (seeds == 0) throw Error(ErrorKind::kInvalidParameter, "at least one seed is required");
    for (double a : alphas) {
      if (!(a >= 0.0)) throw Error(ErrorKind::kInvalidParameter, "alpha values must be nonnegative");
    }
    for (double e : epsilons) {
      if (!(e > 0.0)) throw Error(ErrorKind::kInvalidParameter, "epsilon values must be positive");
    }
    for (std::size_t k : bins) {
      if (k == 0) throw Error(ErrorKind::kInvalidBins, "bin counts must be positive");
    }
    if (!(split_ratio > 0.0 && split_ratio < 1.0)) {
      throw Error(ErrorKind::kInvalidParameter, "split ratio must lie in (0, 1)");
    }
  }

  std::size_t num_cells() const { return epsilons.size() * bins.size() * alphas.size() * seeds; }

  static SweepConfig FromJson(const nlohmann::json& doc);
};

struct SweepRow {
  double alpha = 0.0;
  std::size_t bins = 0;
  double epsilon = 0.0;
  std::size_t seed = 0;
  double mse_raw = std::numeric_limits<double>::quiet_NaN();
  double mse_internal = std::numeric_limits<double>::quiet_NaN();
  double delta_sp = std::numeric_limits<double>::quiet_NaN();
  double objective = std::numeric_limits<double>::quiet_NaN();
  double fit_seconds = 0.0;
  std::string status = "ok";

  bool ok() const { return status == "ok"; }
};

// Seed-averaged metrics of one (epsilon, k, alpha) setting.
struct CellAggregate {
  double alpha = 0.0;
  std::size_t bins = 0;
  double epsilon = 0.0;
  std::size_t completed = 0;
  std::size_t failed = 0;
  double mse_raw = 0.0;
  double mse_internal = 0.0;
  double delta_sp = 0.0;
  double delta_sp_se = 0.0;
  double objective = 0.0;
};

struct EnvelopePoint {
  double delta_sp = 0.0;
  double mse = 0.0;
  std::size_t id = 0;  // caller's tag, e.g. an index into the aggregates
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<CellAggregate> aggregates;
};

// Drops every point dominated by another (no worse in both coordinates,
// strictly better in one) and keeps one copy of duplicates. The result is
// sorted by delta_sp ascending, with mse strictly decreasing.
inline std::vector<EnvelopePoint> LowerEnvelope(std::vector<EnvelopePoint> points) {
  std::sort(points.begin(), points.end(), [](const EnvelopePoint& a, const EnvelopePoint& b) {
    if (a.delta_sp != b.delta_sp) return a.delta_sp < b.delta_sp;
    if (a.mse != b.mse) return a.mse < b.mse;
    return a.id < b.id;
  });
  std::vector<EnvelopePoint> out;
  for (const EnvelopePoint& p : points) {
    if (out.empty() || p.mse < out.back().mse) out.push_back(p);
  }
  return out;
}

namespace internal {

inline std::string FormatReal(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  // Shortest text that parses back to the same double.
  char buf[40];
  return std::string(buf, std::to_chars(buf, buf + sizeof(buf), v).ptr);
}

inline std::string CsvQuote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline double ParseRealOrInf(const nlohmann::json& v) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf" || s == "+inf") return kInfinity;
    throw Error(ErrorKind::kInvalidParameter, "expected a number or \"inf\", got \"" + s + "\"");
  }
  if (!v.is_number()) throw Error(ErrorKind::kInvalidParameter, "expected a number or \"inf\"");
  return v.get<double>();
}

inline SweepRow RunCell(const GroupedSamples& train, const GroupedSamples& test,
                        const AffineScale& scale, double lower, double upper, double alpha,
                        std::size_t bins, double epsilon, std::uint64_t cell_seed) {
  SweepRow row;
  row.alpha = alpha;
  row.bins = bins;
  row.epsilon = epsilon;
  const auto start = std::chrono::steady_clock::now();
  try {
    RandomStream rng(cell_seed);
    const FitConfig config{lower, upper, bins, alpha, epsilon, cell_seed};
    const FairPostprocessor model = Fit(train, config, rng);
    row.fit_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const std::vector<double> predictions = model.PredictBatch(test, rng);
    std::vector<double> labels;
    labels.reserve(test.size());
    std::vector<std::vector<double>> by_group(test.num_groups());
    for (std::size_t i = 0; i < test.size(); ++i) {
      const Sample& s = test.rows[i];
      labels.push_back(s.label.value_or(s.score));
      by_group[s.group].push_back(predictions[i]);
    }
    row.mse_internal = Mse(predictions, labels);
    row.mse_raw = row.mse_internal * scale.scale * scale.scale;
    row.delta_sp = DeltaSp(by_group, model.grid());
    row.objective = model.diagnostics().objective;
  } catch (const Error& e) {
    row.status = e.what();
  }
  return row;
}

}  // namespace internal

inline SweepConfig SweepConfig::FromJson(const nlohmann::json& doc) {
  SweepConfig cfg;
  try {
    cfg.data_path = doc.value("data", std::string());
    if (doc.contains("schema")) {
      cfg.schema = doc.at("schema").is_string() ? DatasetSchema::Load(doc.at("schema").get<std::string>())
                                                : DatasetSchema::FromJson(doc.at("schema"));
    }
    if (doc.contains("alphas")) {
      cfg.alphas.clear();
      for (const auto& v : doc.at("alphas")) cfg.alphas.push_back(internal::ParseRealOrInf(v));
    }
    if (doc.contains("bins")) cfg.bins = doc.at("bins").get<std::vector<std::size_t>>();
    if (doc.contains("epsilons")) {
      cfg.epsilons.clear();
      for (const auto& v : doc.at("epsilons")) cfg.epsilons.push_back(internal::ParseRealOrInf(v));
    }
    cfg.seeds = doc.value("seeds", cfg.seeds);
    cfg.split_ratio = doc.value("split_ratio", cfg.split_ratio);
    cfg.master_seed = doc.value("master_seed", cfg.master_seed);
    cfg.workers = doc.value("workers", cfg.workers);
    cfg.out_prefix = doc.value("out", cfg.out_prefix);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kInvalidParameter, std::string("malformed sweep config: ") + e.what());
  }
  cfg.Validate();
  return cfg;
}

// Runs every cell. Cells are ordered epsilon-major, then k, alpha, seed;
// cell i draws from stream DeriveSeed(master, cell domain, i).
inline SweepResult RunSweep(const GroupedSamples& data, const AffineScale& scale,
                            const SweepConfig& cfg) {
  cfg.Validate();
  if (data.empty()) throw Error(ErrorKind::kEmptyInput, "sweep dataset is empty");
  const auto [lower, upper] = cfg.schema.InternalInterval();

  std::vector<std::pair<GroupedSamples, GroupedSamples>> splits;
  splits.reserve(cfg.seeds);
  for (std::size_t s = 0; s < cfg.seeds; ++s) {
    splits.push_back(SplitTrainTest(data, cfg.split_ratio,
                                    DeriveSeed(cfg.master_seed, kSplitStreamDomain, s)));
  }

  struct Cell {
    double alpha;
    std::size_t bins;
    double epsilon;
    std::size_t seed;
  };
  std::vector<Cell> cells;
  cells.reserve(cfg.num_cells());
  for (double eps : cfg.epsilons) {
    for (std::size_t k : cfg.bins) {
      for (double alpha : cfg.alphas) {
        for (std::size_t s = 0; s < cfg.seeds; ++s) cells.push_back({alpha, k, eps, s});
      }
    }
  }

  SweepResult result;
  result.rows.resize(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1)) {
      const Cell& c = cells[i];
      SweepRow row = internal::RunCell(splits[c.seed].first, splits[c.seed].second, scale, lower,
                                       upper, c.alpha, c.bins, c.epsilon,
                                       DeriveSeed(cfg.master_seed, kCellStreamDomain, i));
      row.seed = c.seed;
      result.rows[i] = std::move(row);
    }
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min(cfg.workers, cells.size()));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (std::size_t begin = 0; begin < result.rows.size(); begin += cfg.seeds) {
    CellAggregate agg;
    agg.alpha = result.rows[begin].alpha;
    agg.bins = result.rows[begin].bins;
    agg.epsilon = result.rows[begin].epsilon;
    std::vector<double> sp;
    for (std::size_t i = begin; i < begin + cfg.seeds; ++i) {
      const SweepRow& r = result.rows[i];
      if (!r.ok()) {
        ++agg.failed;
        continue;
      }
      ++agg.completed;
      agg.mse_raw += r.mse_raw;
      agg.mse_internal += r.mse_internal;
      agg.delta_sp += r.delta_sp;
      agg.objective += r.objective;
      sp.push_back(r.delta_sp);
    }
    if (agg.completed > 0) {
      const double n = static_cast<double>(agg.completed);
      agg.mse_raw /= n;
      agg.mse_internal /= n;
      agg.delta_sp /= n;
      agg.objective /= n;
      if (agg.completed > 1) {
        double ss = 0.0;
        for (double v : sp) ss += (v - agg.delta_sp) * (v - agg.delta_sp);
        agg.delta_sp_se = std::sqrt(ss / (n - 1.0) / n);
      }
    } else {
      agg.mse_raw = agg.mse_internal = agg.delta_sp = agg.objective =
          std::numeric_limits<double>::quiet_NaN();
    }
    result.aggregates.push_back(agg);
  }
  return result;
}

// Per-epsilon lower envelope over the seed-averaged (delta_sp, raw MSE)
// points; `id` indexes into `aggregates`.
inline std::vector<std::pair<double, std::vector<EnvelopePoint>>> EnvelopesByEpsilon(
    const std::vector<CellAggregate>& aggregates) {
  std::vector<std::pair<double, std::vector<EnvelopePoint>>> out;
  for (std::size_t i = 0; i < aggregates.size(); ++i) {
    const CellAggregate& a = aggregates[i];
    if (a.completed == 0) continue;
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& e) { return e.first == a.epsilon; });
    if (it == out.end()) {
      out.push_back({a.epsilon, {}});
      it = out.end() - 1;
    }
    it->second.push_back({a.delta_sp, a.mse_raw, i});
  }
  for (auto& [eps, points] : out) points = LowerEnvelope(std::move(points));
  return out;
}

inline void WriteMetadataLine(std::ostream& out, std::uint64_t master_seed) {
  out << "# fairpp " << kToolVersion << " master_seed=" << master_seed << "\n";
}

inline void WriteResultsCsv(std::ostream& out, const SweepResult& result, std::uint64_t master_seed) {
  using internal::FormatReal;
  WriteMetadataLine(out, master_seed);
  out << "alpha,k,epsilon,seed,mse_raw,mse_internal,delta_sp,objective,status\n";
  for (const SweepRow& r : result.rows) {
    out << FormatReal(r.alpha) << ',' << r.bins << ',' << FormatReal(r.epsilon) << ',' << r.seed << ','
        << FormatReal(r.mse_raw) << ',' << FormatReal(r.mse_internal) << ',' << FormatReal(r.delta_sp)
        << ',' << FormatReal(r.objective) << ',' << internal::CsvQuote(r.status) << '\n';
  }
}

inline void WriteSummaryCsv(std::ostream& out, const SweepResult& result, std::uint64_t master_seed) {
  using internal::FormatReal;
  WriteMetadataLine(out, master_seed);
  out << "alpha,k,epsilon,completed,failed,mse_raw,mse_internal,delta_sp,delta_sp_se,objective\n";
  for (const CellAggregate& a : result.aggregates) {
    out << FormatReal(a.alpha) << ',' << a.bins << ',' << FormatReal(a.epsilon) << ',' << a.completed
        << ',' << a.failed << ',' << FormatReal(a.mse_raw) << ',' << FormatReal(a.mse_internal) << ','
        << FormatReal(a.delta_sp) << ',' << FormatReal(a.delta_sp_se) << ',' << FormatReal(a.objective)
        << '\n';
  }
}

inline void WriteEnvelopeCsv(std::ostream& out, const SweepResult& result, std::uint64_t master_seed) {
  using internal::FormatReal;
  WriteMetadataLine(out, master_seed);
  out << "epsilon,delta_sp,mse_raw,alpha,k\n";
  for (const auto& [eps, points] : EnvelopesByEpsilon(result.aggregates)) {
    for (const EnvelopePoint& p : points) {
      const CellAggregate& a = result.aggregates[p.id];
      out << FormatReal(eps) << ',' << FormatReal(p.delta_sp) << ',' << FormatReal(p.mse) << ','
          << FormatReal(a.alpha) << ',' << a.bins << '\n';
    }
  }
}

inline void WriteTimingCsv(std::ostream& out, const SweepResult& result) {
  out << "alpha,k,epsilon,seed,fit_seconds\n";
  for (const SweepRow& r : result.rows) {
    out << internal::FormatReal(r.alpha) << ',' << r.bins << ',' << internal::FormatReal(r.epsilon)
        << ',' << r.seed << ',' << internal::FormatReal(r.fit_seconds) << '\n';
  }
}

}  // namespace fairpp

#endif  // FAIRPP_HARNESS_HPP_
