// Copyright 2026 The petzlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <vector>

#include "petzlab/linalg.hpp"

namespace petzlab {

/// Welford running mean/variance.
class MeanAccumulator {
 public:
  void add(double x);
  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const;  // unbiased sample variance
  double stderr_of_mean() const;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Result of comparing the sample mean of a random Hermitian matrix with a
/// predicted expectation. The statistic is the Mahalanobis distance of the
/// mean deviation under the sample covariance (pseudo-inverse on the
/// directions with non-zero variance), which is chi^2 distributed with `dof`
/// degrees of freedom. Directions with zero sample variance must match the
/// prediction exactly; their deviation is `null_residual`.
struct MomentTest {
  double chi2 = 0.0;
  std::size_t dof = 0;
  double null_residual = 0.0;
  std::size_t samples = 0;

  /// 3-sigma acceptance bound of the chi^2 distribution.
  double threshold() const;
  bool pass() const;
  /// Amount by which the test exceeds its acceptance bound (0 when passing).
  double excess() const;
};

/// Accumulates samples of a Hermitian matrix for a MomentTest.
class MatrixMomentAccumulator {
 public:
  explicit MatrixMomentAccumulator(std::size_t dim);
  void add(const Matrix& sample);
  Matrix mean() const;
  MomentTest compare(const Matrix& expected) const;

 private:
  RealVector features(const Matrix& m) const;

  std::size_t dim_;
  std::size_t n_ = 0;
  RealVector sum_;
  Eigen::MatrixXd sum_outer_;
};

/// Linear-interpolated quantile (q in [0,1]) of an unsorted sample.
double quantile(std::vector<double> values, double q);

}  // namespace petzlab
