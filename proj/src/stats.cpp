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

#include "petzlab/stats.hpp"

#include <algorithm>
#include <cmath>

#include "petzlab/error.hpp"

namespace petzlab {

void MeanAccumulator::add(double x) {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

double MeanAccumulator::variance() const {
  if (n_ < 2) return 0.0;
  return m2_ / static_cast<double>(n_ - 1);
}

double MeanAccumulator::stderr_of_mean() const {
  if (n_ == 0) return 0.0;
  return std::sqrt(variance() / static_cast<double>(n_));
}

double MomentTest::threshold() const {
  const double k = static_cast<double>(dof);
  return k + 3.0 * std::sqrt(2.0 * k);
}

bool MomentTest::pass() const { return excess() == 0.0; }

double MomentTest::excess() const {
  const double over = std::max(0.0, chi2 - threshold());
  const double null_over = std::max(0.0, null_residual - 1e-9);
  return over + null_over;
}

MatrixMomentAccumulator::MatrixMomentAccumulator(std::size_t dim)
    : dim_(dim),
      sum_(RealVector::Zero(static_cast<Eigen::Index>(dim * dim))),
      sum_outer_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim * dim),
                                       static_cast<Eigen::Index>(dim * dim))) {}

RealVector MatrixMomentAccumulator::features(const Matrix& m) const {
  // Independent real coordinates of a Hermitian matrix: the diagonal, then
  // real and imaginary parts of the strict upper triangle.
  RealVector f(static_cast<Eigen::Index>(dim_ * dim_));
  Eigen::Index k = 0;
  const auto n = static_cast<Eigen::Index>(dim_);
  for (Eigen::Index i = 0; i < n; ++i) f(k++) = m(i, i).real();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      f(k++) = m(i, j).real();
      f(k++) = m(i, j).imag();
    }
  return f;
}

void MatrixMomentAccumulator::add(const Matrix& sample) {
  if (static_cast<std::size_t>(sample.rows()) != dim_) {
    throw Error(Errc::DimensionMismatch, "MatrixMomentAccumulator: bad sample size");
  }
  const RealVector f = features(sample);
  sum_ += f;
  sum_outer_.selfadjointView<Eigen::Lower>().rankUpdate(f);
  ++n_;
}

Matrix MatrixMomentAccumulator::mean() const {
  const auto n = static_cast<Eigen::Index>(dim_);
  const RealVector mu = sum_ / static_cast<double>(n_);
  Matrix out(n, n);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < n; ++i) out(i, i) = mu(k++);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      out(i, j) = Complex(mu(k), mu(k + 1));
      out(j, i) = std::conj(out(i, j));
      k += 2;
    }
  return out;
}

MomentTest MatrixMomentAccumulator::compare(const Matrix& expected) const {
  MomentTest t;
  t.samples = n_;
  if (n_ < 2) return t;
  const double n = static_cast<double>(n_);
  const RealVector mu = sum_ / n;
  Eigen::MatrixXd outer = sum_outer_.selfadjointView<Eigen::Lower>();
  Eigen::MatrixXd cov = (outer - n * mu * mu.transpose()) / (n - 1.0);
  cov = 0.5 * (cov + cov.transpose()).eval();
  const RealVector dev = mu - features(expected);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  const RealVector& lambda = solver.eigenvalues();
  const double top = lambda.maxCoeff();
  double null_sq = 0.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    const double proj = solver.eigenvectors().col(i).dot(dev);
    if (lambda(i) > 1e-10 * top) {
      t.chi2 += n * proj * proj / lambda(i);
      ++t.dof;
    } else {
      null_sq += proj * proj;
    }
  }
  t.null_residual = std::sqrt(null_sq);
  return t;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw Error(Errc::BadParameter, "quantile of empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] * (1.0 - frac) + values[hi] * frac;
}

}  // namespace petzlab
