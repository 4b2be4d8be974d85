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

// A small dense revised simplex solver for
//
//   minimize c'x  subject to  row constraints (<=, =, >=),  0 <= x <= u.
//
// The basis inverse is kept explicitly (column-major) and updated with
// rank-one pivots. It is rebuilt by Gauss-Jordan elimination periodically
// and whenever a residual check on the pivot column shows drift. Reduced
// costs are updated in place from the pivot row and recomputed at every
// rebuild. Pricing is Dantzig's rule with a Harris two-pass ratio test;
// after a long run of degenerate pivots the solver switches to Bland's rule
// until it makes progress again. Feasibility is found with a
// sum-of-artificials phase one.

#ifndef FAIRPP_SIMPLEX_HPP_
#define FAIRPP_SIMPLEX_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fairpp::lp {

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

enum class Sense { kLessEqual, kEqual, kGreaterEqual };

struct Term {
  std::size_t var;
  double coef;
};

struct Row {
  std::vector<Term> terms;
  Sense sense;
  double rhs;
  std::string name;
};

class LinearProgram {
 public:
  std::size_t AddVariable(double cost, std::string name = {}, double upper = kUnbounded) {
    cost_.push_back(cost);
    upper_.push_back(upper);
    names_.push_back(name.empty() ? "x" + std::to_string(cost_.size() - 1) : std::move(name));
    return cost_.size() - 1;
  }

  std::size_t AddRow(std::vector<Term> terms, Sense sense, double rhs, std::string name = {}) {
    rows_.push_back({std::move(terms), sense, rhs,
                     name.empty() ? "r" + std::to_string(rows_.size()) : std::move(name)});
    return rows_.size() - 1;
  }

  std::size_t num_variables() const { return cost_.size(); }
  std::size_t num_rows() const { return rows_.size(); }
  std::size_t CountRows(Sense sense) const {
    return static_cast<std::size_t>(std::count_if(
        rows_.begin(), rows_.end(), [sense](const Row& r) { return r.sense == sense; }));
  }

  double cost(std::size_t j) const { return cost_[j]; }
  double upper(std::size_t j) const { return upper_[j]; }
  const std::string& name(std::size_t j) const { return names_[j]; }
  const std::vector<Row>& rows() const { return rows_; }

  double Objective(std::span<const double> x) const {
    double total = 0.0;
    for (std::size_t j = 0; j < cost_.size(); ++j) total += cost_[j] * x[j];
    return total;
  }

  double RowActivity(const Row& row, std::span<const double> x) const {
    double total = 0.0;
    for (const Term& t : row.terms) total += t.coef * x[t.var];
    return total;
  }

  // Largest violation of any row or bound at x.
  double MaxViolation(std::span<const double> x) const {
    double worst = 0.0;
    for (std::size_t j = 0; j < cost_.size(); ++j) {
      worst = std::max(worst, -x[j]);
      if (std::isfinite(upper_[j])) worst = std::max(worst, x[j] - upper_[j]);
    }
    for (const Row& row : rows_) {
      const double slack = RowActivity(row, x) - row.rhs;
      switch (row.sense) {
        case Sense::kLessEqual: worst = std::max(worst, slack); break;
        case Sense::kGreaterEqual: worst = std::max(worst, -slack); break;
        case Sense::kEqual: worst = std::max(worst, std::abs(slack)); break;
      }
    }
    return worst;
  }

  // CPLEX LP text format, coefficients with 12 significant digits.
  void WriteLpFormat(std::ostream& out, const std::string& title = "fairpp") const {
    auto num = [](double v) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.12g", v);
      return std::string(buf);
    };
    auto term = [&](double coef, const std::string& var, bool first) {
      std::string s;
      if (coef < 0) {
        s = first ? "- " : " - ";
      } else if (!first) {
        s = " + ";
      }
      return s + num(std::abs(coef)) + " " + var;
    };
    // Long expressions wrap every few terms; LP readers cap line length.
    constexpr std::size_t kTermsPerLine = 8;
    out << "\\ " << title << "\nMinimize\n obj:";
    bool first = true;
    std::size_t written = 0;
    for (std::size_t j = 0; j < cost_.size(); ++j) {
      if (cost_[j] == 0.0) continue;
      if (written > 0 && written % kTermsPerLine == 0) out << "\n  ";
      out << (first ? " " : "") << term(cost_[j], names_[j], first);
      first = false;
      ++written;
    }
    if (first) out << " 0 " << names_.front();
    out << "\nSubject To\n";
    for (const Row& row : rows_) {
      out << " " << row.name << ":";
      bool lead = true;
      for (std::size_t i = 0; i < row.terms.size(); ++i) {
        if (i > 0 && i % kTermsPerLine == 0) out << "\n  ";
        const Term& t = row.terms[i];
        out << (lead ? " " : "") << term(t.coef, names_[t.var], lead);
        lead = false;
      }
      if (lead) out << " 0 " << names_.front();
      switch (row.sense) {
        case Sense::kLessEqual: out << " <= "; break;
        case Sense::kGreaterEqual: out << " >= "; break;
        case Sense::kEqual: out << " = "; break;
      }
      out << num(row.rhs) << "\n";
    }
    out << "Bounds\n";
    for (std::size_t j = 0; j < cost_.size(); ++j) {
      if (std::isfinite(upper_[j])) out << " 0 <= " << names_[j] << " <= " << num(upper_[j]) << "\n";
    }
    out << "End\n";
  }

 private:
  std::vector<double> cost_;
  std::vector<double> upper_;
  std::vector<std::string> names_;
  std::vector<Row> rows_;
};

enum class Status { kOptimal, kInfeasible, kUnbounded, kIterationLimit, kNumericalFailure };

inline const char* StatusName(Status s) {
  switch (s) {
    case Status::kOptimal: return "optimal";
    case Status::kInfeasible: return "infeasible";
    case Status::kUnbounded: return "unbounded";
    case Status::kIterationLimit: return "iteration-limit";
    case Status::kNumericalFailure: return "numerical-failure";
  }
  return "unknown";
}

struct SimplexOptions {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-10;
  double pivot_tol = 1e-9;
  // Iteration cap; 0 picks 50 * (rows + columns).
  std::size_t max_iterations = 0;
  // Forced basis rebuild interval; 0 picks max(64, rows).
  std::size_t refactor_interval = 0;
  // Consecutive degenerate pivots, as a multiple of the row count, before
  // switching to Bland's rule.
  std::size_t degenerate_factor = 10;
};

struct SimplexResult {
  Status status = Status::kNumericalFailure;
  std::vector<double> x;
  double objective = 0.0;
  std::size_t iterations = 0;
  std::size_t bland_iterations = 0;
  std::size_t refactorizations = 0;
};

namespace internal {

class RevisedSimplex {
 public:
  RevisedSimplex(const LinearProgram& lp, const SimplexOptions& options)
      : lp_(lp), opt_(options) {
    Setup();
  }

  SimplexResult Run() {
    if (!Refactor()) return Finish(Status::kNumericalFailure);

    if (num_artificial_ > 0) {
      SetPhaseCosts(/*phase_one=*/true);
      Status s = Iterate();
      if (s != Status::kOptimal) return Finish(s == Status::kUnbounded ? Status::kNumericalFailure : s);
      double infeasibility = 0.0;
      for (std::size_t j = first_artificial_; j < n_; ++j) infeasibility += x_[j];
      if (infeasibility > 1e-7 * (1.0 + rhs_scale_)) return Finish(Status::kInfeasible);
      for (std::size_t j = first_artificial_; j < n_; ++j) {
        upper_[j] = 0.0;
        if (pos_[j] < 0) x_[j] = 0.0;
      }
      DriveOutArtificials();
      if (!Refactor()) return Finish(Status::kNumericalFailure);
    }
    SetPhaseCosts(/*phase_one=*/false);
    return Finish(Iterate());
  }

 private:
  // ---- setup -------------------------------------------------------------

  void Setup() {
    m_ = lp_.num_rows();
    const std::size_t n_struct = lp_.num_variables();
    std::vector<std::vector<std::pair<std::size_t, double>>> cols(n_struct);
    for (std::size_t i = 0; i < m_; ++i) {
      for (const Term& t : lp_.rows()[i].terms) {
        auto& col = cols[t.var];
        if (!col.empty() && col.back().first == i) {
          col.back().second += t.coef;
        } else {
          col.emplace_back(i, t.coef);
        }
      }
    }
    col_start_.push_back(0);
    auto push_col = [&](const std::vector<std::pair<std::size_t, double>>& entries, double up) {
      for (auto [r, v] : entries) {
        if (v == 0.0) continue;
        row_idx_.push_back(r);
        val_.push_back(v);
      }
      col_start_.push_back(row_idx_.size());
      upper_.push_back(up);
    };
    for (std::size_t j = 0; j < n_struct; ++j) push_col(cols[j], lp_.upper(j));

    b_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      b_[i] = lp_.rows()[i].rhs;
      rhs_scale_ = std::max(rhs_scale_, std::abs(b_[i]));
    }
    basis_.assign(m_, 0);
    // Slacks first; rows whose slack cannot start basic get an artificial.
    std::vector<std::size_t> needs_artificial;
    for (std::size_t i = 0; i < m_; ++i) {
      const Sense sense = lp_.rows()[i].sense;
      if (sense == Sense::kEqual) {
        needs_artificial.push_back(i);
        continue;
      }
      const double sign = sense == Sense::kLessEqual ? 1.0 : -1.0;
      push_col({{i, sign}}, kUnbounded);
      if (b_[i] * sign >= 0.0) {
        basis_[i] = col_start_.size() - 2;
      } else {
        needs_artificial.push_back(i);
      }
    }
    first_artificial_ = col_start_.size() - 1;
    for (std::size_t i : needs_artificial) {
      push_col({{i, b_[i] >= 0.0 ? 1.0 : -1.0}}, kUnbounded);
      basis_[i] = col_start_.size() - 2;
    }
    n_ = col_start_.size() - 1;
    num_artificial_ = n_ - first_artificial_;
    // Row-wise copy of the constraint matrix for the pivot-row product.
    row_start_.assign(m_ + 1, 0);
    for (std::size_t r : row_idx_) ++row_start_[r + 1];
    for (std::size_t i = 0; i < m_; ++i) row_start_[i + 1] += row_start_[i];
    col_idx_.resize(row_idx_.size());
    row_val_.resize(row_idx_.size());
    {
      std::vector<std::size_t> fill(row_start_.begin(), row_start_.end() - 1);
      for (std::size_t j = 0; j < n_; ++j) {
        for (std::size_t p = col_start_[j]; p < col_start_[j + 1]; ++p) {
          const std::size_t at = fill[row_idx_[p]]++;
          col_idx_[at] = j;
          row_val_[at] = val_[p];
        }
      }
    }
    alpha_row_.assign(n_, 0.0);
    marked_.assign(n_, 0);

    x_.assign(n_, 0.0);
    pos_.assign(n_, -1);
    for (std::size_t i = 0; i < m_; ++i) pos_[basis_[i]] = static_cast<long>(i);
    cost_.assign(n_, 0.0);
    binv_.assign(m_ * m_, 0.0);
    if (opt_.max_iterations == 0) opt_.max_iterations = 50 * (m_ + n_);
    if (opt_.refactor_interval == 0) opt_.refactor_interval = std::max<std::size_t>(64, m_);
  }

  void SetPhaseCosts(bool phase_one) {
    std::fill(cost_.begin(), cost_.end(), 0.0);
    if (phase_one) {
      for (std::size_t j = first_artificial_; j < n_; ++j) cost_[j] = 1.0;
    } else {
      for (std::size_t j = 0; j < lp_.num_variables(); ++j) cost_[j] = lp_.cost(j);
    }
    ComputeDuals();
  }

  // ---- linear algebra ----------------------------------------------------

  // Rebuilds the basis inverse from scratch and recomputes basic values.
  bool Refactor() {
    ++refactorizations_;
    pivots_since_refactor_ = 0;
    const std::size_t w = 2 * m_;
    std::vector<double> aug(m_ * w, 0.0);
    for (std::size_t c = 0; c < m_; ++c) {
      const std::size_t j = basis_[c];
      for (std::size_t p = col_start_[j]; p < col_start_[j + 1]; ++p) aug[row_idx_[p] * w + c] = val_[p];
    }
    for (std::size_t i = 0; i < m_; ++i) aug[i * w + m_ + i] = 1.0;
    std::vector<std::size_t> order(m_);
    for (std::size_t i = 0; i < m_; ++i) order[i] = i;
    std::vector<std::size_t> nonzeros;
    nonzeros.reserve(w);
    for (std::size_t c = 0; c < m_; ++c) {
      std::size_t best = c;
      double best_abs = std::abs(aug[order[c] * w + c]);
      for (std::size_t r = c + 1; r < m_; ++r) {
        const double v = std::abs(aug[order[r] * w + c]);
        if (v > best_abs) {
          best_abs = v;
          best = r;
        }
      }
      if (best_abs < 1e-12) return false;
      std::swap(order[c], order[best]);
      double* prow = &aug[order[c] * w];
      const double inv = 1.0 / prow[c];
      // Basis matrices are very sparse; eliminate over the pivot row's
      // nonzeros only.
      nonzeros.clear();
      for (std::size_t t = c; t < w; ++t) {
        if (prow[t] == 0.0) continue;
        prow[t] *= inv;
        nonzeros.push_back(t);
      }
      for (std::size_t r = 0; r < m_; ++r) {
        if (r == c) continue;
        double* row = &aug[order[r] * w];
        const double f = row[c];
        if (f == 0.0) continue;
        for (std::size_t t : nonzeros) row[t] -= f * prow[t];
      }
    }
    // Row c of B^{-1} is the right half of the row that pivoted on column c.
    for (std::size_t c = 0; c < m_; ++c) {
      const double* src = &aug[order[c] * w + m_];
      for (std::size_t t = 0; t < m_; ++t) binv_[t * m_ + c] = src[t];
    }
    RecomputeBasicValues();
    ComputeDuals();
    return true;
  }

  void RecomputeBasicValues() {
    std::vector<double> rhs = b_;
    for (std::size_t j = 0; j < n_; ++j) {
      if (pos_[j] >= 0 || x_[j] == 0.0) continue;
      for (std::size_t p = col_start_[j]; p < col_start_[j + 1]; ++p) rhs[row_idx_[p]] -= val_[p] * x_[j];
    }
    std::vector<double> xb(m_, 0.0);
    for (std::size_t t = 0; t < m_; ++t) {
      if (rhs[t] == 0.0) continue;
      const double* col = &binv_[t * m_];
      for (std::size_t i = 0; i < m_; ++i) xb[i] += col[i] * rhs[t];
    }
    for (std::size_t i = 0; i < m_; ++i) x_[basis_[i]] = xb[i];
  }

  void ComputeDuals() {
    std::vector<double> cb(m_);
    for (std::size_t i = 0; i < m_; ++i) cb[i] = cost_[basis_[i]];
    y_.assign(m_, 0.0);
    for (std::size_t t = 0; t < m_; ++t) {
      const double* col = &binv_[t * m_];
      double v = 0.0;
      for (std::size_t i = 0; i < m_; ++i) v += cb[i] * col[i];
      y_[t] = v;
    }
    reduced_.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) reduced_[j] = ReducedCost(j);
  }

  double ReducedCost(std::size_t j) const {
    double d = cost_[j];
    for (std::size_t p = col_start_[j]; p < col_start_[j + 1]; ++p) d -= y_[row_idx_[p]] * val_[p];
    return d;
  }

  // w = B^{-1} a_j
  void Ftran(std::size_t j, std::vector<double>& w) const {
    w.assign(m_, 0.0);
    for (std::size_t p = col_start_[j]; p < col_start_[j + 1]; ++p) {
      const std::size_t r = row_idx_[p];
      const double v = val_[p];
      const double* col = &binv_[r * m_];
      for (std::size_t i = 0; i < m_; ++i) w[i] += col[i] * v;
    }
  }

  // max |B w - a_j|, a cheap check on the accuracy of the inverse.
  double FtranResidual(std::size_t j, const std::vector<double>& w) const {
    std::vector<double> r(m_, 0.0);
    for (std::size_t p = col_start_[j]; p < col_start_[j + 1]; ++p) r[row_idx_[p]] -= val_[p];
    for (std::size_t i = 0; i < m_; ++i) {
      if (w[i] == 0.0) continue;
      const std::size_t c = basis_[i];
      for (std::size_t p = col_start_[c]; p < col_start_[c + 1]; ++p) r[row_idx_[p]] += val_[p] * w[i];
    }
    double worst = 0.0;
    for (double v : r) worst = std::max(worst, std::abs(v));
    return worst;
  }

  // B^{-1} is stored by columns, so each column takes the elementary
  // row update on its own, touching only rows where w is nonzero.
  void Pivot(std::size_t r, const std::vector<double>& w) {
    const double inv = 1.0 / w[r];
    pivot_nonzeros_.clear();
    for (std::size_t i = 0; i < m_; ++i) {
      if (i != r && w[i] != 0.0) pivot_nonzeros_.push_back(i);
    }
    for (std::size_t t = 0; t < m_; ++t) {
      double* col = &binv_[t * m_];
      if (col[r] == 0.0) continue;
      const double piv = col[r] * inv;
      col[r] = piv;
      for (std::size_t i : pivot_nonzeros_) col[i] -= w[i] * piv;
    }
    ++pivots_since_refactor_;
  }

  // y += t * (row r of B^{-1}) and the matching change in every reduced
  // cost, d_j -= t * (row r of B^{-1}) a_j. The row is sparse, so the
  // product runs over the rows of A it touches instead of all columns.
  void UpdateDuals(std::size_t r, double t) {
    touched_.clear();
    for (std::size_t i = 0; i < m_; ++i) {
      const double v = binv_[i * m_ + r];
      if (v == 0.0) continue;
      y_[i] += t * v;
      for (std::size_t p = row_start_[i]; p < row_start_[i + 1]; ++p) {
        const std::size_t j = col_idx_[p];
        if (!marked_[j]) {
          marked_[j] = 1;
          touched_.push_back(j);
        }
        alpha_row_[j] += v * row_val_[p];
      }
    }
    for (std::size_t j : touched_) {
      reduced_[j] -= t * alpha_row_[j];
      alpha_row_[j] = 0.0;
      marked_[j] = 0;
    }
  }

  // ---- iterations --------------------------------------------------------

  bool Eligible(std::size_t j, double d) const {
    if (pos_[j] >= 0 || upper_[j] <= 0.0) return false;
    const bool at_upper = std::isfinite(upper_[j]) && x_[j] >= upper_[j];
    return at_upper ? d > opt_.optimality_tol : d < -opt_.optimality_tol;
  }

  // Returns the entering column, or n_ when the basis is optimal. Dantzig's
  // rule normally; Bland's (lowest eligible index) while cycling is suspected.
  std::size_t Price(bool bland, double& reduced) const {
    std::size_t best = n_;
    double best_score = 0.0;
    const double tol = opt_.optimality_tol;
    for (std::size_t j = 0; j < n_; ++j) {
      const double d = reduced_[j];
      // Most columns stop here: a positive reduced cost only matters for a
      // variable that can sit at a finite upper bound.
      if (d >= -tol && (d <= tol || !std::isfinite(upper_[j]))) continue;
      if (!Eligible(j, d)) continue;
      if (bland) {
        reduced = d;
        return j;
      }
      if (std::abs(d) > best_score) {
        best_score = std::abs(d);
        best = j;
        reduced = d;
      }
    }
    return best;
  }

  Status Iterate() {
    std::vector<double> w;
    std::size_t degenerate_run = 0;
    bool bland = false;
    bool verified = false;
    for (;;) {
      if (iterations_ >= opt_.max_iterations) return Status::kIterationLimit;
      if (pivots_since_refactor_ >= opt_.refactor_interval && !Refactor()) {
        return Status::kNumericalFailure;
      }
      double d = 0.0;
      const std::size_t q = Price(bland, d);
      if (q == n_) {
        // Confirm optimality on a fresh factorization before stopping.
        if (verified || pivots_since_refactor_ == 0) return Status::kOptimal;
        if (!Refactor()) return Status::kNumericalFailure;
        verified = true;
        continue;
      }
      verified = false;
      Ftran(q, w);
      if (FtranResidual(q, w) > 1e-9) {
        if (pivots_since_refactor_ == 0) return Status::kNumericalFailure;
        if (!Refactor()) return Status::kNumericalFailure;
        continue;
      }
      const bool at_upper = std::isfinite(upper_[q]) && x_[q] >= upper_[q];
      const double dir = at_upper ? -1.0 : 1.0;

      // Rate of change of each basic variable per unit step.
      auto rate = [&](std::size_t i) { return -dir * w[i]; };
      auto room = [&](std::size_t i, double g) {
        const std::size_t bj = basis_[i];
        return g < 0.0 ? std::max(x_[bj], 0.0) : std::max(upper_[bj] - x_[bj], 0.0);
      };
      double bound_limit = kUnbounded;
      for (std::size_t i = 0; i < m_; ++i) {
        const double g = rate(i);
        if (std::abs(g) <= opt_.pivot_tol) continue;
        if (g > 0.0 && !std::isfinite(upper_[basis_[i]])) continue;
        const double slackened = bland ? room(i, g) : room(i, g) + opt_.feasibility_tol;
        bound_limit = std::min(bound_limit, slackened / std::abs(g));
      }
      const double flip = upper_[q];  // lower bounds are all zero
      long leave = -1;
      double step = kUnbounded;
      if (std::isfinite(bound_limit)) {
        double best_pivot = 0.0;
        std::size_t best_var = n_;
        for (std::size_t i = 0; i < m_; ++i) {
          const double g = rate(i);
          if (std::abs(g) <= opt_.pivot_tol) continue;
          if (g > 0.0 && !std::isfinite(upper_[basis_[i]])) continue;
          const double ratio = room(i, g) / std::abs(g);
          if (bland) {
            if (ratio <= bound_limit + 1e-12 && basis_[i] < best_var) {
              best_var = basis_[i];
              leave = static_cast<long>(i);
              step = ratio;
            }
          } else if (ratio <= bound_limit && std::abs(g) > best_pivot) {
            best_pivot = std::abs(g);
            leave = static_cast<long>(i);
            step = ratio;
          }
        }
      }
      if (flip < step) {
        leave = -1;
        step = flip;
      }
      if (!std::isfinite(step)) return Status::kUnbounded;

      ++iterations_;
      if (bland) ++bland_iterations_;
      if (step <= 1e-12) {
        if (++degenerate_run > opt_.degenerate_factor * m_) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }

      x_[q] += dir * step;
      for (std::size_t i = 0; i < m_; ++i) {
        if (w[i] != 0.0) x_[basis_[i]] += rate(i) * step;
      }
      if (leave < 0) {
        x_[q] = at_upper ? 0.0 : upper_[q];
        continue;
      }
      const std::size_t r = static_cast<std::size_t>(leave);
      const std::size_t out = basis_[r];
      x_[out] = rate(r) < 0.0 ? 0.0 : upper_[out];
      // Dual update uses the pivot row of the old inverse.
      const double ratio_d = d / w[r];
      pos_[out] = -1;
      basis_[r] = q;
      pos_[q] = static_cast<long>(r);
      UpdateDuals(r, ratio_d);
      Pivot(r, w);
    }
  }

  // After phase one, swap zero-valued basic artificials for structural or
  // slack columns where the pivot element allows it.
  void DriveOutArtificials() {
    std::vector<double> w;
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < first_artificial_) continue;
      std::vector<double> brow(m_);
      for (std::size_t t = 0; t < m_; ++t) brow[t] = binv_[t * m_ + r];
      std::size_t chosen = n_;
      double chosen_abs = 1e-7;
      for (std::size_t j = 0; j < first_artificial_; ++j) {
        if (pos_[j] >= 0) continue;
        double alpha = 0.0;
        for (std::size_t p = col_start_[j]; p < col_start_[j + 1]; ++p) alpha += brow[row_idx_[p]] * val_[p];
        if (std::abs(alpha) > chosen_abs) {
          chosen_abs = std::abs(alpha);
          chosen = j;
        }
      }
      if (chosen == n_) continue;  // redundant row; artificial stays at zero
      Ftran(chosen, w);
      const std::size_t out = basis_[r];
      pos_[out] = -1;
      x_[out] = 0.0;
      basis_[r] = chosen;
      pos_[chosen] = static_cast<long>(r);
      Pivot(r, w);
    }
  }

  SimplexResult Finish(Status status) {
    SimplexResult result;
    result.status = status;
    result.iterations = iterations_;
    result.bland_iterations = bland_iterations_;
    result.refactorizations = refactorizations_;
    result.x.assign(x_.begin(), x_.begin() + static_cast<long>(lp_.num_variables()));
    result.objective = lp_.Objective(result.x);
    return result;
  }

  const LinearProgram& lp_;
  SimplexOptions opt_;

  std::size_t m_ = 0;
  std::size_t n_ = 0;
  std::size_t first_artificial_ = 0;
  std::size_t num_artificial_ = 0;
  double rhs_scale_ = 0.0;

  std::vector<std::size_t> col_start_;
  std::vector<std::size_t> row_idx_;
  std::vector<double> val_;
  std::vector<double> upper_;
  std::vector<double> b_;
  std::vector<double> cost_;

  std::vector<std::size_t> basis_;
  std::vector<long> pos_;
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> binv_;  // column-major
  std::vector<std::size_t> pivot_nonzeros_;
  std::vector<double> reduced_;
  std::vector<std::size_t> row_start_;
  std::vector<std::size_t> col_idx_;
  std::vector<double> row_val_;
  std::vector<double> alpha_row_;
  std::vector<std::size_t> touched_;
  std::vector<char> marked_;

  std::size_t iterations_ = 0;
  std::size_t bland_iterations_ = 0;
  std::size_t refactorizations_ = 0;
  std::size_t pivots_since_refactor_ = 0;
};

}  // namespace internal

inline SimplexResult Solve(const LinearProgram& lp, const SimplexOptions& options = {}) {
  if (lp.num_rows() == 0) {
    // Nothing couples the variables: each sits at whichever bound its cost prefers.
    SimplexResult result;
    result.status = Status::kOptimal;
    result.x.assign(lp.num_variables(), 0.0);
    for (std::size_t j = 0; j < lp.num_variables(); ++j) {
      if (lp.cost(j) < 0.0) {
        if (!std::isfinite(lp.upper(j))) {
          result.status = Status::kUnbounded;
          return result;
        }
        result.x[j] = lp.upper(j);
      }
    }
    result.objective = lp.Objective(result.x);
    return result;
  }
  return internal::RevisedSimplex(lp, options).Run();
}

}  // namespace fairpp::lp

#endif  // FAIRPP_SIMPLEX_HPP_
