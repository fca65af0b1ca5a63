// Copyright 2026 The cqc Authors
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


#include "cqc/linear_feasibility.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cqc/errors.h"

namespace cqc {

namespace {

Eigen::VectorXd solve_passive(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const std::vector<bool>& passive) {
  std::vector<Eigen::Index> cols;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    if (passive[j]) cols.push_back(j);
  }
  Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = a.col(cols[k]);
  Eigen::VectorXd s_sub = sub.colPivHouseholderQr().solve(b);
  Eigen::VectorXd s = Eigen::VectorXd::Zero(a.cols());
  for (std::size_t k = 0; k < cols.size(); ++k) s(cols[k]) = s_sub(static_cast<Eigen::Index>(k));
  return s;
}

}  // namespace

FeasibleWeights nonnegative_least_squares(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  const Eigen::Index n = a.cols();
  if (b.size() != a.rows()) throw ConfigError("constraint matrix and right-hand side disagree");
  if (n == 0) throw ConfigError("no candidate columns");
  const double tol = 1e-13 * std::max(1.0, a.cwiseAbs().maxCoeff()) * std::max(1.0, b.cwiseAbs().maxCoeff());

  FeasibleWeights out;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(n, false);
  const int max_outer = 3 * static_cast<int>(n) + 30;
  for (;;) {
    Eigen::VectorXd g = a.transpose() * (b - a * w);
    Eigen::Index best = -1;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[j] && g(j) > tol && (best < 0 || g(j) > g(best))) best = j;
    }
    if (best < 0) break;
    if (++out.iterations > max_outer) throw std::runtime_error("nonnegative least squares did not converge");
    passive[best] = true;
    for (int inner = 0;; ++inner) {
      if (inner > static_cast<int>(n)) throw std::runtime_error("nonnegative least squares inner loop stalled");
      Eigen::VectorXd s = solve_passive(a, b, passive);
      double alpha = 1;
      bool feasible = true;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && s(j) <= 0) {
          feasible = false;
          double denom = w(j) - s(j);
          if (denom > 0) alpha = std::min(alpha, w(j) / denom);
        }
      }
      if (feasible) {
        w = s;
        break;
      }
      w += alpha * (s - w);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && w(j) <= 1e-15) {
          passive[j] = false;
          w(j) = 0;
        }
      }
    }
  }
  out.weights = w;
  out.residual = (a * w - b).cwiseAbs().maxCoeff();
  return out;
}

std::optional<FeasibleWeights> find_nonnegative_solution(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                                         double tolerance) {
  FeasibleWeights fit = nonnegative_least_squares(a, b);
  if (fit.residual > tolerance * std::max(1.0, b.cwiseAbs().maxCoeff())) return std::nullopt;
  return fit;
}

}  // namespace cqc
