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

#include "petzlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "petzlab/error.hpp"

namespace petzlab {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::NonSquare: return "NonSquare";
    case Errc::NonHermitian: return "NonHermitian";
    case Errc::NotPSD: return "NotPSD";
    case Errc::NonFinite: return "NonFinite";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::RankTooLarge: return "RankTooLarge";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::NotTracePreserving: return "NotTracePreserving";
    case Errc::NotUnitary: return "NotUnitary";
    case Errc::BadParameter: return "BadParameter";
    case Errc::BadParams: return "BadParams";
    case Errc::SupportViolation: return "SupportViolation";
    case Errc::RankDeficientRho: return "RankDeficientRho";
    case Errc::BadProjector: return "BadProjector";
    case Errc::EmptyCode: return "EmptyCode";
    case Errc::NotInvariant: return "NotInvariant";
    case Errc::ScaleLimit: return "ScaleLimit";
    case Errc::EpsilonHalf: return "EpsilonHalf";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

namespace {

// Scale against which the relative cutoffs are measured: lambda_max when
// positive, otherwise the largest magnitude so that negative matrices are
// still rejected.
double spectral_scale(const RealVector& values) {
  if (values.size() == 0) return 0.0;
  const double top = values(0);
  if (top > 0.0) return top;
  return values.cwiseAbs().maxCoeff();
}

void check_psd(const RealVector& values) {
  const double scale = spectral_scale(values);
  const double bottom = values(values.size() - 1);
  if (bottom < -kNegativeTol * scale) {
    std::ostringstream msg;
    msg << "eigenvalue " << bottom << " below -" << kNegativeTol
        << " * lambda_max (" << scale << ")";
    throw Error(Errc::NotPSD, msg.str());
  }
}

}  // namespace

void require_square(const Matrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    std::ostringstream msg;
    msg << what << ": expected a non-empty square matrix, got " << a.rows()
        << "x" << a.cols();
    throw Error(Errc::NonSquare, msg.str());
  }
}

double max_abs(const Matrix& x) {
  if (x.size() == 0) return 0.0;
  return x.cwiseAbs().maxCoeff();
}

bool all_finite(const Matrix& x) { return x.allFinite(); }

Matrix HermitianEig::reconstruct() const {
  return vectors * values.cast<Complex>().asDiagonal() * vectors.adjoint();
}

HermitianEig hermitian_eig(const Matrix& a) {
  require_square(a, "hermitian_eig");
  if (!all_finite(a)) throw Error(Errc::NonFinite, "hermitian_eig: NaN/Inf entry");
  const double scale = max_abs(a);
  const double skew = max_abs(a - a.adjoint());
  if (skew > kHermitianTol * scale) {
    std::ostringstream msg;
    msg << "hermitian_eig: ||A - A^dagger|| = " << skew << " exceeds tolerance";
    throw Error(Errc::NonHermitian, msg.str());
  }
  const Matrix sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw Error(Errc::NonFinite, "hermitian_eig: eigensolver did not converge");
  }
  HermitianEig out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

Matrix hermitian_fn(const HermitianEig& eig,
                    const std::function<double(double)>& f, bool on_support) {
  check_psd(eig.values);
  const double cutoff = kSupportCutoff * std::max(eig.values(0), 0.0);
  RealVector mapped(eig.values.size());
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    const double lambda = std::max(eig.values(i), 0.0);
    const bool zero = eig.values(i) <= cutoff;
    mapped(i) = (zero && on_support) ? 0.0 : f(zero ? 0.0 : lambda);
  }
  return eig.vectors * mapped.cast<Complex>().asDiagonal() *
         eig.vectors.adjoint();
}

Matrix hermitian_fn(const Matrix& a, const std::function<double(double)>& f,
                    bool on_support) {
  return hermitian_fn(hermitian_eig(a), f, on_support);
}

std::size_t numerical_rank(const HermitianEig& eig) {
  const double cutoff = kSupportCutoff * std::max(eig.values(0), 0.0);
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    if (eig.values(i) > cutoff) ++rank;
  }
  return rank;
}

Matrix support_projector(const HermitianEig& eig) {
  check_psd(eig.values);
  const std::size_t rank = numerical_rank(eig);
  const auto cols = eig.vectors.leftCols(static_cast<Eigen::Index>(rank));
  return cols * cols.adjoint();
}

Matrix support_projector(const Matrix& a) {
  return support_projector(hermitian_eig(a));
}

Matrix partial_trace(const Matrix& x, std::span<const std::size_t> dims,
                     const std::vector<bool>& keep) {
  require_square(x, "partial_trace");
  if (dims.size() != keep.size()) {
    throw Error(Errc::DimensionMismatch, "partial_trace: dims/keep size differ");
  }
  std::size_t total = 1;
  std::size_t kept = 1;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    total *= dims[i];
    if (keep[i]) kept *= dims[i];
  }
  if (static_cast<std::size_t>(x.rows()) != total) {
    std::ostringstream msg;
    msg << "partial_trace: matrix dimension " << x.rows()
        << " does not match product of factors " << total;
    throw Error(Errc::DimensionMismatch, msg.str());
  }
  const std::size_t traced = total / kept;
  const std::size_t parties = dims.size();

  // Composite index from (kept multi-index, traced multi-index).
  auto compose = [&](std::size_t k, std::size_t t) {
    std::size_t index = 0;
    std::size_t kr = k;
    std::size_t tr = t;
    std::vector<std::size_t> digits(parties);
    for (std::size_t i = parties; i-- > 0;) {
      if (keep[i]) {
        digits[i] = kr % dims[i];
        kr /= dims[i];
      } else {
        digits[i] = tr % dims[i];
        tr /= dims[i];
      }
    }
    for (std::size_t i = 0; i < parties; ++i) index = index * dims[i] + digits[i];
    return index;
  };

  std::vector<std::size_t> table(kept * traced);
  for (std::size_t k = 0; k < kept; ++k)
    for (std::size_t t = 0; t < traced; ++t) table[k * traced + t] = compose(k, t);

  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(kept),
                            static_cast<Eigen::Index>(kept));
  for (std::size_t r = 0; r < kept; ++r) {
    for (std::size_t c = 0; c < kept; ++c) {
      Complex acc = 0.0;
      for (std::size_t t = 0; t < traced; ++t) {
        acc += x(static_cast<Eigen::Index>(table[r * traced + t]),
                 static_cast<Eigen::Index>(table[c * traced + t]));
      }
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = acc;
    }
  }
  return out;
}

Matrix partial_trace(const Matrix& x, Keep keep, std::size_t d_a,
                     std::size_t d_b) {
  const std::size_t dims[] = {d_a, d_b};
  return partial_trace(x, dims, {keep == Keep::A, keep == Keep::B});
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

Matrix identity(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  return Matrix::Identity(n, n);
}

Complex hs_inner(const Matrix& x, const Matrix& y) {
  return (x.adjoint() * y).trace();
}

double trace_norm(const Matrix& x) {
  Eigen::JacobiSVD<Matrix> svd(x);
  return svd.singularValues().sum();
}

Matrix nonnegative_projector(const Matrix& h, double tol) {
  const HermitianEig eig = hermitian_eig(h);
  Eigen::Index count = 0;
  while (count < eig.values.size() && eig.values(count) >= -tol) ++count;
  const auto cols = eig.vectors.leftCols(count);
  return cols * cols.adjoint();
}

double log2_safe(double x) {
  if (x <= 0.0) return -std::numeric_limits<double>::infinity();
  return std::log2(x);
}

}  // namespace petzlab
