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

#include "petzlab/qstate.hpp"

#include <cmath>
#include <sstream>

#include "petzlab/error.hpp"

namespace petzlab {

namespace {

constexpr double kStateTol = 1e-9;

}  // namespace

DensityMatrix::DensityMatrix(const Matrix& mat) {
  require_square(mat, "DensityMatrix");
  if (!all_finite(mat)) throw Error(Errc::NonFinite, "DensityMatrix: NaN/Inf entry");
  if (max_abs(mat - mat.adjoint()) > kStateTol) {
    throw Error(Errc::NonHermitian, "DensityMatrix: not Hermitian");
  }
  mat_ = 0.5 * (mat + mat.adjoint());
  const double tr = mat_.trace().real();
  if (std::abs(tr - 1.0) > kStateTol) {
    std::ostringstream msg;
    msg << "DensityMatrix: trace " << tr << " != 1";
    throw Error(Errc::OutOfRange, msg.str());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(mat_, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues()(0) < -kStateTol) {
    throw Error(Errc::NotPSD, "DensityMatrix: negative eigenvalue");
  }
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t d) {
  return DensityMatrix(identity(d) / static_cast<double>(d));
}

DensityMatrix DensityMatrix::diagonal(const RealVector& probabilities) {
  return DensityMatrix(probabilities.cast<Complex>().asDiagonal().toDenseMatrix());
}

PureState::PureState(Vector vec) : vec_(std::move(vec)) {
  if (vec_.size() == 0) throw Error(Errc::DimensionMismatch, "PureState: empty vector");
  if (std::abs(vec_.norm() - 1.0) > 1e-10) {
    throw Error(Errc::OutOfRange, "PureState: vector not normalized");
  }
}

Subspace::Subspace(Matrix basis) : basis_(std::move(basis)) {
  if (basis_.cols() == 0 || basis_.cols() > basis_.rows()) {
    throw Error(Errc::DimensionMismatch, "Subspace: need 1 <= dim <= ambient dim");
  }
  const auto m = basis_.cols();
  if (max_abs(basis_.adjoint() * basis_ - Matrix::Identity(m, m)) > kStateTol) {
    throw Error(Errc::BadParameter, "Subspace: basis is not orthonormal");
  }
}

Subspace Subspace::full(std::size_t d) { return Subspace(identity(d)); }

double fidelity(const Matrix& rho, const Matrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    throw Error(Errc::DimensionMismatch, "fidelity: dimensions differ");
  }
  auto root = [](double x) { return std::sqrt(x); };
  const Matrix a = hermitian_fn(rho, root, false);
  const Matrix b = hermitian_fn(sigma, root, false);
  return trace_norm(a * b);
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return fidelity(rho.mat(), sigma.mat());
}

PureState purify(const DensityMatrix& rho) {
  const std::size_t d = rho.dim();
  const Matrix root = hermitian_fn(
      rho.mat() * static_cast<double>(d), [](double x) { return std::sqrt(x); }, false);
  const Vector phi = max_entangled(d).vec();
  Vector psi = kron(identity(d), root) * phi;
  // sqrt(d rho) is applied to a normalized MES, so |psi| = sqrt(tr rho) = 1
  // up to rounding; renormalize to keep the PureState invariant tight.
  psi /= psi.norm();
  return PureState(std::move(psi));
}

PureState max_entangled(std::size_t m, std::size_t d_r, std::size_t d_a) {
  if (m == 0 || m > d_r || m > d_a) {
    std::ostringstream msg;
    msg << "max_entangled: Schmidt rank " << m << " exceeds min(" << d_r << ", "
        << d_a << ")";
    throw Error(Errc::RankTooLarge, msg.str());
  }
  Vector v = Vector::Zero(static_cast<Eigen::Index>(d_r * d_a));
  const double amp = 1.0 / std::sqrt(static_cast<double>(m));
  for (std::size_t i = 0; i < m; ++i) v(static_cast<Eigen::Index>(i * d_a + i)) = amp;
  return PureState(std::move(v));
}

PureState haar_state(std::size_t dim, RngStream& rng) {
  Vector v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.complex_normal();
  v /= v.norm();
  return PureState(std::move(v));
}

Matrix haar_unitary(std::size_t dim, RngStream& rng) {
  const auto n = static_cast<Eigen::Index>(dim);
  Matrix g(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) g(i, j) = rng.complex_normal();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < n; ++j) {
    const Complex diag = r(j, j);
    const double mag = std::abs(diag);
    if (mag > 0.0) q.col(j) *= diag / mag;
  }
  return q;
}

Matrix haar_isometry(std::size_t dim, std::size_t m, RngStream& rng) {
  if (m == 0 || m > dim) throw Error(Errc::RankTooLarge, "haar_isometry: bad rank");
  return haar_unitary(dim, rng).leftCols(static_cast<Eigen::Index>(m));
}

Matrix haar_projector(std::size_t dim, std::size_t m, RngStream& rng) {
  const Matrix v = haar_isometry(dim, m, rng);
  return v * v.adjoint();
}

DensityMatrix random_density(std::size_t dim, RngStream& rng) {
  const auto n = static_cast<Eigen::Index>(dim);
  Matrix g(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) g(i, j) = rng.complex_normal();
  Matrix w = g * g.adjoint();
  w /= w.trace().real();
  return DensityMatrix(w);
}

Matrix flip_operator(const Subspace& sub) {
  const auto d = static_cast<Eigen::Index>(sub.ambient_dim());
  const auto m = static_cast<Eigen::Index>(sub.dim());
  const Matrix& v = sub.basis();
  Matrix f = Matrix::Zero(d * d, d * d);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const Vector left = kron(Vector(v.col(i)), Vector(v.col(j)));
      const Vector right = kron(Vector(v.col(j)), Vector(v.col(i)));
      f += left * right.adjoint();
    }
  }
  return f;
}

double avg_from_ent_fidelity(double f_ent, std::size_t d) {
  if (d < 1 || !(f_ent >= -1e-9 && f_ent <= 1.0 + 1e-9)) {
    std::ostringstream msg;
    msg << "avg_from_ent_fidelity: need 0 <= f_ent <= 1 and d >= 1, got f_ent = " << f_ent
        << ", d = " << d;
    throw Error(Errc::OutOfRange, msg.str());
  }
  const double dd = static_cast<double>(d);
  return (dd * f_ent + 1.0) / (dd + 1.0);
}

Matrix conjugate(const Matrix& x) { return x.conjugate(); }

}  // namespace petzlab
