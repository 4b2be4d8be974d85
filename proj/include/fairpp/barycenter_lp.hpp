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

// Fixed-support Wasserstein barycenter with a Kolmogorov-Smirnov ball
// relaxation, as a linear program over
//
//   pi_a(j, l) >= 0   coupling of group a's distribution and its target
//   q(j)       >= 0   barycenter (center of the KS ball)
//   q_a(j)     >= 0   group a's target distribution
//
// minimizing sum_a w_a sum_{j,l} (v_j - v_l)^2 pi_a(j, l) subject to
//
//   sum_l pi_a(j, l) = p_a(j)                       row marginals
//   sum_j pi_a(j, l) = q_a(l)                       column marginals
//   |sum_{j <= l} (q_a(j) - q(j))| <= alpha / 2     KS ball, two rows each
//
// With every target inside the ball around q, any two targets are within
// alpha of each other in KS distance.
//
// BuildLp produces exactly this program. SolveLp hands the simplex an
// equivalent compact form instead: q_a is substituted by the column sums
// of pi_a, and each pair of partial-sum rows becomes one sparse recurrence
//
//   g_a(l) - g_a(l-1) - sum_j pi_a(j, l) + q(l) = [l == 0] alpha / 2,
//   0 <= g_a(l) <= alpha,
//
// where g_a(l) = alpha / 2 + sum_{j <= l} (q_a(j) - q(j)) is the shifted
// CDF gap. The dense partial sums otherwise fill the basis and dominate
// solve time for k in the tens.

#ifndef FAIRPP_BARYCENTER_LP_HPP_
#define FAIRPP_BARYCENTER_LP_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fairpp/dp_estimation.hpp"
#include "fairpp/errors.hpp"
#include "fairpp/grid.hpp"
#include "fairpp/matrix.hpp"
#include "fairpp/metrics.hpp"
#include "fairpp/simplex.hpp"

namespace fairpp {

inline constexpr double kNegativeDust = 1e-9;
inline constexpr double kMarginalTol = 1e-6;
inline constexpr double kRearrangementTol = 1e-9;

class LpInstance {
 public:
  LpInstance(const PrivateGroupDists& dists, const Grid& grid, double alpha)
      : grid_(grid),
        alpha_(alpha),
        groups_(dists.num_groups()),
        bins_(grid.size()),
        weights_(dists.weights),
        pmfs_(dists.pmfs) {}

  std::size_t num_groups() const { return groups_; }
  std::size_t num_bins() const { return bins_; }
  double alpha() const { return alpha_; }
  const Grid& grid() const { return grid_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<std::vector<double>>& pmfs() const { return pmfs_; }

  std::size_t CouplingVar(std::size_t a, std::size_t j, std::size_t l) const {
    return (a * bins_ + j) * bins_ + l;
  }
  std::size_t BarycenterVar(std::size_t j) const { return groups_ * bins_ * bins_ + j; }
  std::size_t TargetVar(std::size_t a, std::size_t j) const {
    return groups_ * bins_ * bins_ + bins_ + a * bins_ + j;
  }

  const lp::LinearProgram& program() const { return program_; }
  lp::LinearProgram& program() { return program_; }

 private:
  Grid grid_;
  double alpha_;
  std::size_t groups_;
  std::size_t bins_;
  std::vector<double> weights_;
  std::vector<std::vector<double>> pmfs_;
  lp::LinearProgram program_;
};

struct BarycenterSolution {
  std::vector<Matrix> couplings;             // per group, k x k
  std::vector<double> barycenter;            // q
  std::vector<std::vector<double>> targets;  // q_a
  double objective = 0.0;                    // after repair
  double lp_objective = 0.0;                 // as reported by the solver
  std::size_t iterations = 0;
};

namespace internal {

inline void ValidateDists(const PrivateGroupDists& dists, const Grid& grid) {
  if (dists.num_groups() == 0) throw Error(ErrorKind::kEmptyInput, "no groups");
  if (dists.pmfs.size() != dists.num_groups()) {
    throw Error(ErrorKind::kMismatchedLength, "weights and distributions disagree on group count");
  }
  for (const auto& pmf : dists.pmfs) {
    if (pmf.size() != grid.size()) {
      throw Error(ErrorKind::kMismatchedLength, "distribution does not match the grid");
    }
  }
}

inline void ValidateAlpha(double alpha) {
  if (!(alpha >= 0.0)) {
    throw Error(ErrorKind::kInvalidParameter, "alpha must be nonnegative");
  }
}

}  // namespace internal

inline LpInstance BuildLp(const PrivateGroupDists& dists, const Grid& grid, double alpha) {
  internal::ValidateDists(dists, grid);
  internal::ValidateAlpha(alpha);
  LpInstance inst(dists, grid, alpha);
  lp::LinearProgram& prog = inst.program();
  const std::size_t groups = inst.num_groups();
  const std::size_t k = inst.num_bins();
  const auto tag = [](const char* kind, std::size_t a, std::size_t j) {
    return std::string(kind) + "_" + std::to_string(a) + "_" + std::to_string(j);
  };

  for (std::size_t a = 0; a < groups; ++a) {
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t l = 0; l < k; ++l) {
        const double d = grid.midpoint(j) - grid.midpoint(l);
        prog.AddVariable(dists.weights[a] * d * d,
                         "pi_" + std::to_string(a) + "_" + std::to_string(j) + "_" + std::to_string(l));
      }
    }
  }
  for (std::size_t j = 0; j < k; ++j) prog.AddVariable(0.0, "q_" + std::to_string(j));
  for (std::size_t a = 0; a < groups; ++a) {
    for (std::size_t j = 0; j < k; ++j) prog.AddVariable(0.0, tag("qa", a, j));
  }

  for (std::size_t a = 0; a < groups; ++a) {
    for (std::size_t j = 0; j < k; ++j) {
      std::vector<lp::Term> terms;
      for (std::size_t l = 0; l < k; ++l) terms.push_back({inst.CouplingVar(a, j, l), 1.0});
      prog.AddRow(std::move(terms), lp::Sense::kEqual, dists.pmfs[a][j], tag("row", a, j));
    }
    for (std::size_t l = 0; l < k; ++l) {
      std::vector<lp::Term> terms;
      for (std::size_t j = 0; j < k; ++j) terms.push_back({inst.CouplingVar(a, j, l), 1.0});
      terms.push_back({inst.TargetVar(a, l), -1.0});
      prog.AddRow(std::move(terms), lp::Sense::kEqual, 0.0, tag("col", a, l));
    }
  }
  if (std::isfinite(alpha)) {
    const double radius = alpha / 2.0;
    for (std::size_t a = 0; a < groups; ++a) {
      for (std::size_t l = 0; l < k; ++l) {
        std::vector<lp::Term> upper;
        std::vector<lp::Term> lower;
        for (std::size_t j = 0; j <= l; ++j) {
          upper.push_back({inst.TargetVar(a, j), 1.0});
          upper.push_back({inst.BarycenterVar(j), -1.0});
          lower.push_back({inst.TargetVar(a, j), -1.0});
          lower.push_back({inst.BarycenterVar(j), 1.0});
        }
        prog.AddRow(std::move(upper), lp::Sense::kLessEqual, radius, tag("ksu", a, l));
        prog.AddRow(std::move(lower), lp::Sense::kLessEqual, radius, tag("ksl", a, l));
      }
    }
  }
  return inst;
}

namespace internal {

// The compact program described at the top of this file. Coupling and
// barycenter variables keep their indices; gap variables follow.
inline lp::LinearProgram CompactProgram(const LpInstance& inst) {
  const std::size_t groups = inst.num_groups();
  const std::size_t k = inst.num_bins();
  const lp::LinearProgram& full = inst.program();
  lp::LinearProgram out;
  for (std::size_t v = 0; v < inst.TargetVar(0, 0); ++v) {
    out.AddVariable(full.cost(v), full.name(v), full.upper(v));
  }
  const bool ball = std::isfinite(inst.alpha());
  const std::size_t first_gap = out.num_variables();
  if (ball) {
    for (std::size_t a = 0; a < groups; ++a) {
      for (std::size_t l = 0; l < k; ++l) {
        out.AddVariable(0.0, "gap_" + std::to_string(a) + "_" + std::to_string(l), inst.alpha());
      }
    }
  }
  for (std::size_t a = 0; a < groups; ++a) {
    for (std::size_t j = 0; j < k; ++j) {
      std::vector<lp::Term> terms;
      for (std::size_t l = 0; l < k; ++l) terms.push_back({inst.CouplingVar(a, j, l), 1.0});
      out.AddRow(std::move(terms), lp::Sense::kEqual, inst.pmfs()[a][j]);
    }
  }
  if (ball) {
    for (std::size_t a = 0; a < groups; ++a) {
      for (std::size_t l = 0; l < k; ++l) {
        std::vector<lp::Term> terms{{first_gap + a * k + l, 1.0}, {inst.BarycenterVar(l), 1.0}};
        if (l > 0) terms.push_back({first_gap + a * k + l - 1, -1.0});
        for (std::size_t j = 0; j < k; ++j) terms.push_back({inst.CouplingVar(a, j, l), -1.0});
        out.AddRow(std::move(terms), lp::Sense::kEqual, l == 0 ? inst.alpha() / 2.0 : 0.0);
      }
    }
  }
  return out;
}

}  // namespace internal

// Solves the instance and repairs the raw vertex: float dust below zero is
// clipped, targets are re-read from the coupling column sums, and each
// coupling is replaced by the monotone coupling with the same marginals.
// An optimal LP coupling is already optimal for its own marginals, so the
// rearrangement must leave the weighted cost unchanged.
inline BarycenterSolution SolveLp(const LpInstance& inst,
                                  const lp::SimplexOptions& options = {}) {
  const lp::SimplexResult raw = lp::Solve(internal::CompactProgram(inst), options);
  if (raw.status != lp::Status::kOptimal) {
    throw Error(ErrorKind::kSolverFailure,
                std::string("barycenter LP ended with status ") + lp::StatusName(raw.status) +
                    " after " + std::to_string(raw.iterations) + " iterations");
  }
  // Back to the full layout: targets are the coupling column sums.
  std::vector<double> x(inst.program().num_variables(), 0.0);
  std::copy_n(raw.x.begin(), inst.TargetVar(0, 0), x.begin());
  for (std::size_t a = 0; a < inst.num_groups(); ++a) {
    for (std::size_t l = 0; l < inst.num_bins(); ++l) {
      double column = 0.0;
      for (std::size_t j = 0; j < inst.num_bins(); ++j) column += x[inst.CouplingVar(a, j, l)];
      x[inst.TargetVar(a, l)] = column;
    }
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < -kNegativeDust) {
      throw Error(ErrorKind::kSolverFailure, "LP variable " + inst.program().name(i) +
                                                 " is negative (" + std::to_string(x[i]) + ")");
    }
    x[i] = std::max(x[i], 0.0);
  }

  const std::size_t groups = inst.num_groups();
  const std::size_t k = inst.num_bins();
  const Grid& grid = inst.grid();
  BarycenterSolution sol;
  sol.lp_objective = inst.program().Objective(x);
  sol.iterations = raw.iterations;
  sol.barycenter.resize(k);
  for (std::size_t j = 0; j < k; ++j) sol.barycenter[j] = x[inst.BarycenterVar(j)];

  for (std::size_t a = 0; a < groups; ++a) {
    const auto& pmf = inst.pmfs()[a];
    Matrix raw_coupling(k, k);
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t l = 0; l < k; ++l) raw_coupling(j, l) = x[inst.CouplingVar(a, j, l)];
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (std::abs(raw_coupling.RowSum(j) - pmf[j]) > kMarginalTol) {
        throw Error(ErrorKind::kSolverFailure, "coupling row marginal off for group " +
                                                   std::to_string(a) + ", bin " + std::to_string(j));
      }
    }
    std::vector<double> target(k);
    double total = 0.0;
    for (std::size_t l = 0; l < k; ++l) {
      target[l] = raw_coupling.ColSum(l);
      total += target[l];
    }
    if (!(total > 0.0)) throw Error(ErrorKind::kSolverFailure, "target has no mass");
    double pmf_total = 0.0;
    for (double v : pmf) pmf_total += v;
    for (double& v : target) v *= pmf_total / total;

    Matrix coupling = MonotoneCoupling(pmf, target);
    const double change = inst.weights()[a] *
                          (TransportCost(coupling, grid) - TransportCost(raw_coupling, grid));
    if (std::abs(change) > kRearrangementTol) {
      throw Error(ErrorKind::kSolverFailure,
                  "monotone rearrangement changed the weighted cost of group " +
                      std::to_string(a) + " by " + std::to_string(change));
    }
    sol.objective += inst.weights()[a] * TransportCost(coupling, grid);
    sol.couplings.push_back(std::move(coupling));
    sol.targets.push_back(std::move(target));
  }

  if (std::isfinite(inst.alpha())) {
    const double limit = inst.alpha() / 2.0 + kMarginalTol;
    for (std::size_t a = 0; a < groups; ++a) {
      double gap = 0.0;
      for (std::size_t l = 0; l < k; ++l) {
        gap += sol.targets[a][l] - sol.barycenter[l];
        if (std::abs(gap) > limit) {
          throw Error(ErrorKind::kSolverFailure,
                      "target of group " + std::to_string(a) + " leaves the KS ball at bin " +
                          std::to_string(l));
        }
      }
    }
  }
  return sol;
}

// Unconstrained fairness: every group keeps its own distribution.
inline BarycenterSolution IdentitySolution(const PrivateGroupDists& dists) {
  const std::size_t k = dists.num_bins();
  BarycenterSolution sol;
  sol.barycenter.assign(k, 0.0);
  double total_weight = 0.0;
  for (double w : dists.weights) total_weight += w;
  for (std::size_t a = 0; a < dists.num_groups(); ++a) {
    Matrix coupling(k, k);
    for (std::size_t j = 0; j < k; ++j) coupling(j, j) = dists.pmfs[a][j];
    sol.couplings.push_back(std::move(coupling));
    sol.targets.push_back(dists.pmfs[a]);
    for (std::size_t j = 0; j < k; ++j) {
      sol.barycenter[j] += total_weight > 0.0
                               ? dists.weights[a] / total_weight * dists.pmfs[a][j]
                               : dists.pmfs[a][j] / static_cast<double>(dists.num_groups());
    }
  }
  return sol;
}

// The full barycenter step: alpha = +inf bypasses the LP entirely.
inline BarycenterSolution ComputeBarycenter(const PrivateGroupDists& dists, const Grid& grid,
                                            double alpha,
                                            const lp::SimplexOptions& options = {}) {
  internal::ValidateDists(dists, grid);
  internal::ValidateAlpha(alpha);
  if (std::isinf(alpha)) return IdentitySolution(dists);
  return SolveLp(BuildLp(dists, grid, alpha), options);
}

// Optimal transport cost from p to a fixed q, solved as an LP. This is the
// bridge to the closed-form monotone coupling in metrics.hpp.
inline double FixedTargetCost(std::span<const double> p, std::span<const double> q,
                              const Grid& grid) {
  internal::RequireSameLength(p, q);
  if (p.size() != grid.size()) {
    throw Error(ErrorKind::kMismatchedLength, "distribution does not match the grid");
  }
  const std::size_t k = grid.size();
  lp::LinearProgram prog;
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t l = 0; l < k; ++l) {
      const double d = grid.midpoint(j) - grid.midpoint(l);
      prog.AddVariable(d * d);
    }
  }
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<lp::Term> terms;
    for (std::size_t l = 0; l < k; ++l) terms.push_back({j * k + l, 1.0});
    prog.AddRow(std::move(terms), lp::Sense::kEqual, p[j]);
  }
  for (std::size_t l = 0; l < k; ++l) {
    std::vector<lp::Term> terms;
    for (std::size_t j = 0; j < k; ++j) terms.push_back({j * k + l, 1.0});
    prog.AddRow(std::move(terms), lp::Sense::kEqual, q[l]);
  }
  const lp::SimplexResult raw = lp::Solve(prog);
  if (raw.status != lp::Status::kOptimal) {
    throw Error(ErrorKind::kSolverFailure,
                std::string("transport LP ended with status ") + lp::StatusName(raw.status));
  }
  return raw.objective;
}

}  // namespace fairpp

#endif  // FAIRPP_BARYCENTER_LP_HPP_
