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

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace petzlab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Relative eigenvalue threshold below which an eigenvalue counts as zero.
inline constexpr double kSupportCutoff = 1e-10;
/// Relative tolerance on the anti-Hermitian part accepted by hermitian_eig.
inline constexpr double kHermitianTol = 1e-9;
/// Negative eigenvalues above -kNegativeTol * lambda_max are clamped to zero.
inline constexpr double kNegativeTol = 1e-8;

/// Spectral decomposition of a Hermitian matrix. Eigenvalues are sorted in
/// descending order and `vectors.col(i)` belongs to `values(i)`.
struct HermitianEig {
  RealVector values;
  Matrix vectors;

  Matrix reconstruct() const;
};

HermitianEig hermitian_eig(const Matrix& a);

/// Applies `f` to the spectrum of a PSD matrix. With `on_support` set,
/// eigenvalues at or below the support cutoff map to zero instead of f(0),
/// which gives pseudo-inverse and pseudo-log semantics.
Matrix hermitian_fn(const Matrix& a, const std::function<double(double)>& f,
                    bool on_support);

/// Same as hermitian_fn but reuses an existing decomposition.
Matrix hermitian_fn(const HermitianEig& eig,
                    const std::function<double(double)>& f, bool on_support);

Matrix support_projector(const Matrix& a);
Matrix support_projector(const HermitianEig& eig);

/// Number of eigenvalues above the relative support cutoff.
std::size_t numerical_rank(const HermitianEig& eig);

enum class Keep { A, B };

/// Partial trace over one factor of H_A (x) H_B.
Matrix partial_trace(const Matrix& x, Keep keep, std::size_t d_a,
                     std::size_t d_b);

/// Partial trace over an arbitrary set of tensor factors. `keep[i]` selects
/// whether factor i (dimension dims[i]) survives; factor order is preserved.
Matrix partial_trace(const Matrix& x, std::span<const std::size_t> dims,
                     const std::vector<bool>& keep);

Matrix kron(const Matrix& a, const Matrix& b);
Vector kron(const Vector& a, const Vector& b);

Matrix identity(std::size_t d);

/// Hilbert-Schmidt inner product tr(X^dagger Y).
Complex hs_inner(const Matrix& x, const Matrix& y);

double trace_norm(const Matrix& x);

/// Largest absolute entry; the norm used for all residual checks.
double max_abs(const Matrix& x);

bool all_finite(const Matrix& x);

void require_square(const Matrix& a, const char* what);

/// Spectral projector onto eigenvectors of a Hermitian `h` whose eigenvalue
/// is >= -tol.
Matrix nonnegative_projector(const Matrix& h, double tol);

double log2_safe(double x);

}  // namespace petzlab
