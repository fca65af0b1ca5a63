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


// Feasibility of A w = b with w >= 0, by Lawson-Hanson nonnegative least squares.

#pragma once

#include <Eigen/Dense>
#include <optional>

namespace cqc {

struct FeasibleWeights {
  Eigen::VectorXd weights;
  double residual = 0;  // max |A w - b|
  int iterations = 0;
};

// Nonnegative least-squares solution of A w = b.
FeasibleWeights nonnegative_least_squares(const Eigen::MatrixXd& a, const Eigen::VectorXd& b);

// Returns nullopt when the best nonnegative fit misses b by more than `tolerance` * max(1, |b|_inf).
std::optional<FeasibleWeights> find_nonnegative_solution(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                                         double tolerance = 1e-10);

}  // namespace cqc
