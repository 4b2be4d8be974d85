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

// End-to-end fair and private post-processing: estimate the per-group
// score distributions privately, solve the relaxed barycenter problem, and
// turn the optimal couplings into randomized per-group maps. A fitted
// FairPostprocessor predicts by discretizing a score to its bin and then
// sampling an output bin from its group's transport kernel.

#ifndef FAIRPP_PIPELINE_HPP_
#define FAIRPP_PIPELINE_HPP_

#include <atomic>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fairpp/barycenter_lp.hpp"
#include "fairpp/dp_estimation.hpp"
#include "fairpp/errors.hpp"
#include "fairpp/grid.hpp"
#include "fairpp/random.hpp"
#include "fairpp/samples.hpp"
#include "fairpp/transport.hpp"
#include "json.hpp"

namespace fairpp {

inline constexpr int kModelFormatVersion = 1;
inline constexpr const char* kModelFormatName = "fairpp-model";

struct FitConfig {
  double lower = 0.0;
  double upper = 1.0;
  std::size_t bins = 1;
  double alpha = 0.0;
  double epsilon = kInfinity;
  std::optional<std::uint64_t> seed;  // recorded in the model; the stream is passed separately
};

struct FitDiagnostics {
  std::vector<double> weights;
  std::vector<std::vector<double>> pmfs;
  std::vector<std::vector<double>> targets;
  std::vector<double> barycenter;
  double objective = 0.0;
  std::size_t lp_iterations = 0;
};

enum class PredictMode {
  kRandomized,
  // Deterministic, but voids the statistical parity guarantee.
  kBarycentricProjection,
};

class FairPostprocessor {
 public:
  FairPostprocessor(Grid grid, std::vector<std::string> groups, TransportKernels kernels,
                    FitConfig config, std::size_t fit_size, FitDiagnostics diagnostics,
                    AffineScale scale = {})
      : grid_(std::move(grid)),
        groups_(std::move(groups)),
        kernels_(std::move(kernels)),
        config_(config),
        fit_size_(fit_size),
        diagnostics_(std::move(diagnostics)),
        scale_(scale) {
    if (kernels_.num_groups() != groups_.size()) {
      throw Error(ErrorKind::kMismatchedLength, "one kernel per group is required");
    }
    for (const Matrix& k : kernels_.kernels) {
      if (k.rows() != grid_.size() || k.cols() != grid_.size()) {
        throw Error(ErrorKind::kMismatchedLength, "kernel size does not match the grid");
      }
    }
  }

  FairPostprocessor(const FairPostprocessor& other)
      : grid_(other.grid_),
        groups_(other.groups_),
        kernels_(other.kernels_),
        config_(other.config_),
        fit_size_(other.fit_size_),
        diagnostics_(other.diagnostics_),
        scale_(other.scale_),
        out_of_range_(other.out_of_range_.load()) {}

  const Grid& grid() const { return grid_; }
  const std::vector<std::string>& groups() const { return groups_; }
  const TransportKernels& kernels() const { return kernels_; }
  const FitConfig& config() const { return config_; }
  std::size_t fit_size() const { return fit_size_; }
  const FitDiagnostics& diagnostics() const { return diagnostics_; }
  const AffineScale& scale() const { return scale_; }
  void set_scale(const AffineScale& scale) { scale_ = scale; }

  // Number of scores seen outside the fitted interval; they were clamped.
  std::size_t out_of_range_count() const { return out_of_range_.load(); }

  std::size_t GroupIndex(std::string_view label) const {
    for (std::size_t a = 0; a < groups_.size(); ++a) {
      if (groups_[a] == label) return a;
    }
    throw Error(ErrorKind::kUnknownGroup, "group '" + std::string(label) + "' was not seen at fit time");
  }

  double Predict(std::size_t group, double score, RandomStream& rng,
                 PredictMode mode = PredictMode::kRandomized) const {
    if (group >= groups_.size()) {
      throw Error(ErrorKind::kUnknownGroup, "group index " + std::to_string(group) + " out of range");
    }
    if (!grid_.Contains(score)) out_of_range_.fetch_add(1, std::memory_order_relaxed);
    const std::size_t bin = grid_.Discretize(score);
    if (mode == PredictMode::kBarycentricProjection) {
      return BarycentricProjection(kernels_, group, bin, grid_);
    }
    return grid_.midpoint(ApplySample(kernels_, group, bin, rng));
  }

  double Predict(std::string_view group, double score, RandomStream& rng,
                 PredictMode mode = PredictMode::kRandomized) const {
    return Predict(GroupIndex(group), score, rng, mode);
  }

  // Predicts every row in order from one stream. Groups are matched by
  // label, so `data` may list its groups in any order.
  std::vector<double> PredictBatch(const GroupedSamples& data, RandomStream& rng,
                                   PredictMode mode = PredictMode::kRandomized) const {
    std::vector<std::optional<std::size_t>> mapping(data.num_groups());
    for (std::size_t g = 0; g < data.num_groups(); ++g) {
      for (std::size_t a = 0; a < groups_.size(); ++a) {
        if (groups_[a] == data.groups[g]) mapping[g] = a;
      }
    }
    std::vector<double> out;
    out.reserve(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
      const Sample& row = data.rows[i];
      if (row.group >= mapping.size() || !mapping[row.group]) {
        const std::string label =
            row.group < data.groups.size() ? data.groups[row.group] : std::to_string(row.group);
        throw Error(ErrorKind::kUnknownGroup,
                    "row " + std::to_string(i) + ": group '" + label + "' was not seen at fit time");
      }
      out.push_back(Predict(*mapping[row.group], row.score, rng, mode));
    }
    return out;
  }

  nlohmann::json ToJson() const;
  static FairPostprocessor FromJson(const nlohmann::json& doc);

  void Save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::kInvalidParameter, "cannot write model file " + path);
    out << ToJson().dump(1) << "\n";
  }

  static FairPostprocessor Load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::kEmptyFile, "cannot read model file " + path);
    nlohmann::json doc;
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::kUnparseableCell, "model file " + path + ": " + e.what());
    }
    return FromJson(doc);
  }

 private:
  Grid grid_;
  std::vector<std::string> groups_;
  TransportKernels kernels_;
  FitConfig config_;
  std::size_t fit_size_;
  FitDiagnostics diagnostics_;
  AffineScale scale_;
  mutable std::atomic<std::size_t> out_of_range_{0};
};

// Fits the post-processor. The raw samples go to EstimatePrivateDists and
// nowhere else; everything after it works on the privatized distributions.
inline FairPostprocessor Fit(const GroupedSamples& samples, const FitConfig& config,
                             RandomStream& rng, const lp::SimplexOptions& lp_options = {}) {
  Grid grid(config.lower, config.upper, config.bins);
  if (!(config.alpha >= 0.0)) throw Error(ErrorKind::kInvalidParameter, "alpha must be nonnegative");
  const PrivacyParams privacy{config.epsilon, 1};
  privacy.Validate();

  const PrivateGroupDists dists = EstimatePrivateDists(samples, grid, privacy, rng);
  const BarycenterSolution sol = ComputeBarycenter(dists, grid, config.alpha, lp_options);
  TransportKernels kernels = ExtractKernels(sol, dists);

  FitDiagnostics diag;
  diag.weights = dists.weights;
  diag.pmfs = dists.pmfs;
  diag.targets = sol.targets;
  diag.barycenter = sol.barycenter;
  diag.objective = sol.objective;
  diag.lp_iterations = sol.iterations;
  return FairPostprocessor(std::move(grid), samples.groups, std::move(kernels), config,
                           samples.size(), std::move(diag));
}

// ---- model file ------------------------------------------------------------

namespace internal {

inline nlohmann::json EncodeReal(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline double DecodeReal(const nlohmann::json& v) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf") return kInfinity;
    if (s == "-inf") return -kInfinity;
    throw Error(ErrorKind::kUnparseableCell, "expected a number or \"inf\", got \"" + s + "\"");
  }
  if (!v.is_number()) throw Error(ErrorKind::kUnparseableCell, "expected a number");
  return v.get<double>();
}

}  // namespace internal

inline nlohmann::json FairPostprocessor::ToJson() const {
  using nlohmann::json;
  json kernels = json::array();
  for (const Matrix& k : kernels_.kernels) {
    kernels.push_back(std::vector<double>(k.data().begin(), k.data().end()));
  }
  json doc;
  doc["format"] = kModelFormatName;
  doc["version"] = kModelFormatVersion;
  doc["grid"] = {{"lower", grid_.lower()}, {"upper", grid_.upper()}, {"bins", grid_.size()}};
  doc["groups"] = groups_;
  doc["kernels"] = std::move(kernels);
  doc["hyperparameters"] = {{"alpha", internal::EncodeReal(config_.alpha)},
                            {"epsilon", internal::EncodeReal(config_.epsilon)},
                            {"bins", config_.bins},
                            {"interval", {config_.lower, config_.upper}}};
  doc["fit"] = {{"n", fit_size_}, {"seed", nullptr}};
  if (config_.seed) doc["fit"]["seed"] = *config_.seed;
  doc["score_scale"] = {{"offset", scale_.offset}, {"scale", scale_.scale}};
  doc["diagnostics"] = {{"weights", diagnostics_.weights},
                        {"pmfs", diagnostics_.pmfs},
                        {"targets", diagnostics_.targets},
                        {"barycenter", diagnostics_.barycenter},
                        {"objective", diagnostics_.objective},
                        {"lp_iterations", diagnostics_.lp_iterations}};
  return doc;
}

inline FairPostprocessor FairPostprocessor::FromJson(const nlohmann::json& doc) {
  try {
    if (doc.value("format", std::string()) != kModelFormatName) {
      throw Error(ErrorKind::kUnparseableCell, "not a fairpp model document");
    }
    const int version = doc.at("version").get<int>();
    if (version != kModelFormatVersion) {
      throw Error(ErrorKind::kUnparseableCell, "unsupported model version " + std::to_string(version));
    }
    const auto& g = doc.at("grid");
    Grid grid(g.at("lower").get<double>(), g.at("upper").get<double>(), g.at("bins").get<std::size_t>());
    auto groups = doc.at("groups").get<std::vector<std::string>>();
    const std::size_t k = grid.size();

    TransportKernels kernels;
    for (const auto& flat : doc.at("kernels")) {
      auto values = flat.get<std::vector<double>>();
      if (values.size() != k * k) {
        throw Error(ErrorKind::kMismatchedLength, "kernel has " + std::to_string(values.size()) +
                                                      " entries, expected " + std::to_string(k * k));
      }
      Matrix m(k, k);
      std::copy(values.begin(), values.end(), m.data().begin());
      for (std::size_t j = 0; j < k; ++j) {
        if (std::abs(m.RowSum(j) - 1.0) > 1e-9) {
          throw Error(ErrorKind::kUnparseableCell, "kernel row " + std::to_string(j) + " is not stochastic");
        }
      }
      kernels.kernels.push_back(std::move(m));
    }

    const auto& hp = doc.at("hyperparameters");
    FitConfig config;
    config.alpha = internal::DecodeReal(hp.at("alpha"));
    config.epsilon = internal::DecodeReal(hp.at("epsilon"));
    config.bins = hp.at("bins").get<std::size_t>();
    config.lower = hp.at("interval").at(0).get<double>();
    config.upper = hp.at("interval").at(1).get<double>();
    const auto& fit = doc.at("fit");
    if (!fit.at("seed").is_null()) config.seed = fit.at("seed").get<std::uint64_t>();

    FitDiagnostics diag;
    if (doc.contains("diagnostics")) {
      const auto& d = doc.at("diagnostics");
      diag.weights = d.value("weights", std::vector<double>{});
      diag.pmfs = d.value("pmfs", std::vector<std::vector<double>>{});
      diag.targets = d.value("targets", std::vector<std::vector<double>>{});
      diag.barycenter = d.value("barycenter", std::vector<double>{});
      diag.objective = d.value("objective", 0.0);
      diag.lp_iterations = d.value("lp_iterations", std::size_t{0});
    }
    AffineScale scale;
    if (doc.contains("score_scale")) {
      scale.offset = doc.at("score_scale").at("offset").get<double>();
      scale.scale = doc.at("score_scale").at("scale").get<double>();
    }
    return FairPostprocessor(std::move(grid), std::move(groups), std::move(kernels), config,
                             fit.at("n").get<std::size_t>(), std::move(diag), scale);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kUnparseableCell, std::string("malformed model document: ") + e.what());
  }
}

}  // namespace fairpp

#endif  // FAIRPP_PIPELINE_HPP_
