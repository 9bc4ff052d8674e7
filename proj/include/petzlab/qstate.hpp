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
#include <utility>

#include "petzlab/linalg.hpp"
#include "petzlab/rng.hpp"

namespace petzlab {

/// Normalized quantum state. Construction validates Hermiticity (1e-9),
/// positivity (eigenvalues >= -1e-9) and unit trace (1e-9) and stores the
/// Hermitian part.
class DensityMatrix {
 public:
  explicit DensityMatrix(const Matrix& mat);

  static DensityMatrix maximally_mixed(std::size_t d);
  static DensityMatrix diagonal(const RealVector& probabilities);

  std::size_t dim() const { return static_cast<std::size_t>(mat_.rows()); }
  const Matrix& mat() const { return mat_; }

  double purity() const { return (mat_ * mat_).trace().real(); }

 private:
  Matrix mat_;
};

/// Unit vector in C^dim.
class PureState {
 public:
  explicit PureState(Vector vec);

  std::size_t dim() const { return static_cast<std::size_t>(vec_.size()); }
  const Vector& vec() const { return vec_; }
  Matrix projector() const { return vec_ * vec_.adjoint(); }
  DensityMatrix density() const { return DensityMatrix(projector()); }

 private:
  Vector vec_;
};

/// Subspace given by an orthonormal basis (stored as matrix columns).
class Subspace {
 public:
  explicit Subspace(Matrix basis);

  static Subspace full(std::size_t d);

  std::size_t ambient_dim() const { return static_cast<std::size_t>(basis_.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(basis_.cols()); }
  const Matrix& basis() const { return basis_; }
  Matrix projector() const { return basis_ * basis_.adjoint(); }

 private:
  Matrix basis_;
};

/// F(rho, sigma) = ||sqrt(rho) sqrt(sigma)||_1. Either argument may be
/// sub-normalized; both must be PSD.
double fidelity(const Matrix& rho, const Matrix& sigma);
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Purification (I_R (x) sqrt(d rho)) |Phi> on R (x) A with R as the first
/// factor; tr_R of the result is rho.
PureState purify(const DensityMatrix& rho);

/// (1/sqrt(m)) sum_{i<m} |i>|i> inside C^{d_r} (x) C^{d_a}.
PureState max_entangled(std::size_t m, std::size_t d_r, std::size_t d_a);
inline PureState max_entangled(std::size_t d) { return max_entangled(d, d, d); }

PureState haar_state(std::size_t dim, RngStream& rng);
/// Haar unitary from the QR decomposition of a complex Ginibre matrix with
/// the phases of diag(R) absorbed into Q.
Matrix haar_unitary(std::size_t dim, RngStream& rng);
/// First m columns of a Haar unitary: an orthonormal basis of a Haar-random
/// m-dimensional subspace.
Matrix haar_isometry(std::size_t dim, std::size_t m, RngStream& rng);
/// Rank-m projector onto a Haar-random subspace.
Matrix haar_projector(std::size_t dim, std::size_t m, RngStream& rng);

/// Random mixed state: normalized Wishart matrix G G^dagger.
DensityMatrix random_density(std::size_t dim, RngStream& rng);

/// F_K = sum_ij |v_i><v_j| (x) |v_j><v_i| over the subspace basis.
Matrix flip_operator(const Subspace& sub);

/// (d F_ent + 1) / (d + 1).
double avg_from_ent_fidelity(double f_ent, std::size_t d);

/// Complex conjugate in the computational basis.
Matrix conjugate(const Matrix& x);

}  // namespace petzlab
