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

#include "petzlab/petz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "petzlab/entropy.hpp"
#include "petzlab/error.hpp"
#include "petzlab/parallel.hpp"
#include "petzlab/stats.hpp"

namespace petzlab {

namespace {

constexpr double kProjectorTol = 1e-9;

// Kraus operators D_l K_k of dec o ch.
std::vector<Matrix> composite_kraus(const Channel& ch, const Channel& dec) {
  if (dec.d_in() != ch.d_out() || dec.d_out() != ch.d_in()) {
    throw Error(Errc::DimensionMismatch, "decoder does not map the channel output back to its input");
  }
  std::vector<Matrix> out;
  out.reserve(ch.kraus().size() * dec.kraus().size());
  for (const auto& d : dec.kraus())
    for (const auto& k : ch.kraus()) out.push_back(d * k);
  return out;
}

}  // namespace

CodeSpec build_code(const DensityMatrix& rho, const Matrix& projector) {
  const std::size_t d = rho.dim();
  if (static_cast<std::size_t>(projector.rows()) != d ||
      projector.rows() != projector.cols()) {
    throw Error(Errc::BadProjector, "projector does not act on the input space");
  }
  const HermitianEig rho_eig = hermitian_eig(rho.mat());
  if (numerical_rank(rho_eig) < d) {
    std::ostringstream msg;
    msg << "input state has rank " << numerical_rank(rho_eig) << " < " << d
        << "; restrict the input space to supp rho first";
    throw Error(Errc::RankDeficientRho, msg.str());
  }
  if (!all_finite(projector) || max_abs(projector - projector.adjoint()) > kProjectorTol ||
      max_abs(projector * projector - projector) > kProjectorTol) {
    throw Error(Errc::BadProjector, "P is not an orthogonal projector");
  }
  const HermitianEig p_eig = hermitian_eig(projector);
  Eigen::Index m = 0;
  while (m < p_eig.values.size() && p_eig.values(m) > 0.5) ++m;
  if (m == 0) throw Error(Errc::BadProjector, "P is the zero projector");

  const Matrix sqrt_rho_tilde = hermitian_fn(
      rho_eig, [d](double x) { return std::sqrt(static_cast<double>(d) * x); }, false);
  const Matrix v = p_eig.vectors.leftCols(m);
  const Matrix p_clean = v * v.adjoint();
  const Matrix s = sqrt_rho_tilde * p_clean * sqrt_rho_tilde;
  // S^{-1/2} A = A (A^dagger A)^{-1/2} for A = sqrt(d rho) V; the right-hand
  // side only inverts an m x m full-rank matrix.
  const Matrix a = sqrt_rho_tilde * v;
  const Matrix gram = a.adjoint() * a;
  const Matrix w =
      a * hermitian_fn(gram, [](double x) { return 1.0 / std::sqrt(x); }, false);
  return CodeSpec{rho, p_clean, static_cast<std::size_t>(m), s, Subspace(w)};
}

PetzDecoder petz_decoder(const Channel& ch, const CodeSpec& code,
                         const std::optional<DensityMatrix>& completion) {
  if (code.m == 0) throw Error(Errc::EmptyCode, "code space is empty");
  if (ch.d_in() != code.rho.dim()) {
    throw Error(Errc::DimensionMismatch, "code and channel input dimensions differ");
  }
  const std::size_t d_in = ch.d_in();
  const std::size_t d_out = ch.d_out();
  const Matrix ns = apply(ch, code.s);
  const HermitianEig ns_eig = hermitian_eig(ns);
  const auto rank = static_cast<Eigen::Index>(numerical_rank(ns_eig));
  if (rank == 0) throw Error(Errc::EmptyCode, "N(S) vanishes");
  const Matrix ns_inv_sqrt =
      hermitian_fn(ns_eig, [](double x) { return 1.0 / std::sqrt(x); }, true);
  const Matrix s_sqrt = hermitian_fn(code.s, [](double x) { return std::sqrt(x); }, true);

  std::vector<Matrix> base_kraus;
  base_kraus.reserve(ch.kraus().size());
  for (const auto& k : ch.kraus()) base_kraus.push_back(s_sqrt * k.adjoint() * ns_inv_sqrt);
  Channel base(d_out, d_in, base_kraus, Channel::Kind::TraceNonIncreasing);

  const Matrix tau_mat = completion ? completion->mat() : Matrix(code.s / code.s.trace().real());
  if (static_cast<std::size_t>(tau_mat.rows()) != d_in) {
    throw Error(Errc::DimensionMismatch, "completion state has the wrong dimension");
  }
  if (!support_contained(tau_mat, code.s)) {
    throw Error(Errc::SupportViolation, "completion state is not supported on the code space");
  }
  DensityMatrix tau(tau_mat);

  std::vector<Matrix> total_kraus = std::move(base_kraus);
  const Eigen::Index off = static_cast<Eigen::Index>(d_out) - rank;
  if (off > 0) {
    const Matrix q = ns_eig.vectors.rightCols(off);
    const HermitianEig tau_eig = hermitian_eig(tau.mat());
    const auto tau_rank = static_cast<Eigen::Index>(numerical_rank(tau_eig));
    for (Eigen::Index j = 0; j < tau_rank; ++j) {
      const Vector t = std::sqrt(tau_eig.values(j)) * tau_eig.vectors.col(j);
      for (Eigen::Index l = 0; l < off; ++l) total_kraus.push_back(t * q.col(l).adjoint());
    }
  }
  Channel total(d_out, d_in, std::move(total_kraus));
  return PetzDecoder{std::move(base), std::move(tau), std::move(total)};
}

double ent_fidelity(const Channel& ch, const Channel& dec, const Subspace& code_space) {
  if (code_space.ambient_dim() != ch.d_in()) {
    throw Error(Errc::DimensionMismatch, "code space does not live in the channel input");
  }
  const std::size_t m = code_space.dim();
  if (m == 0) throw Error(Errc::DimensionMismatch, "code space is empty");
  const Matrix& w = code_space.basis();
  double acc = 0.0;
  for (const auto& e : composite_kraus(ch, dec)) acc += std::norm((w.adjoint() * e * w).trace());
  return acc / static_cast<double>(m * m);
}

McEstimate avg_fidelity_mc(const Channel& ch, const Channel& dec,
                           const Subspace& code_space, std::size_t trials,
                           RngStream& rng) {
  if (trials < 100) throw Error(Errc::BadParameter, "avg_fidelity_mc needs at least 100 trials");
  if (code_space.ambient_dim() != ch.d_in()) {
    throw Error(Errc::DimensionMismatch, "code space does not live in the channel input");
  }
  const std::vector<Matrix> kraus = composite_kraus(ch, dec);
  MeanAccumulator acc;
  for (std::size_t t = 0; t < trials; ++t) {
    const PureState g = haar_state(code_space.dim(), rng);
    const Vector phi = code_space.basis() * g.vec();
    double f = 0.0;
    for (const auto& e : kraus) f += std::norm(phi.dot(e * phi));
    acc.add(f);
  }
  return {acc.mean(), acc.stderr_of_mean()};
}

CodeExperiment random_code_experiment(const Channel& ch, const DensityMatrix& rho,
                                      std::size_t m, std::size_t samples,
                                      std::uint64_t seed, std::size_t threads) {
  const std::size_t d = ch.d_in();
  if (rho.dim() != d) throw Error(Errc::DimensionMismatch, "input state does not match the channel");
  if (m == 0 || m > d) throw Error(Errc::BadParameter, "code dimension m must be in [1, d]");
  if (samples == 0) throw Error(Errc::BadParameter, "need at least one code sample");

  auto make_code = [&](std::size_t i) {
    RngStream rng(seed, "code", i);
    return build_code(rho, haar_projector(d, m, rng));
  };
  std::vector<double> f(samples);
  parallel_for(samples, threads, [&](std::size_t i) {
    const CodeSpec code = make_code(i);
    const PetzDecoder dec = petz_decoder(ch, code);
    f[i] = ent_fidelity(ch, dec.total, code.code_basis);
  });

  double sum = 0.0;
  std::size_t best = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    sum += f[i];
    if (f[i] > f[best]) best = i;
  }
  return CodeExperiment{
      .f_ent = f,
      .mean = sum / static_cast<double>(samples),
      .min = *std::min_element(f.begin(), f.end()),
      .max = f[best],
      .q05 = quantile(f, 0.05),
      .q25 = quantile(f, 0.25),
      .median = quantile(f, 0.5),
      .q75 = quantile(f, 0.75),
      .q95 = quantile(f, 0.95),
      .best_index = best,
      .best_code = make_code(best),
  };
}

DephasingMap::DephasingMap(Matrix u, double leak) : u_(std::move(u)), leak_(leak) {
  require_square(u_, "DephasingMap");
  const double residual = max_abs(u_.adjoint() * u_ - identity(dim()));
  if (residual > 1e-9) {
    std::ostringstream msg;
    msg << "U is not unitary: |U^dagger U - I| = " << residual;
    throw Error(Errc::NotUnitary, msg.str());
  }
}

Matrix DephasingMap::clock() const {
  const std::size_t d = dim();
  Vector phases(static_cast<Eigen::Index>(d));
  for (std::size_t j = 0; j < d; ++j) {
    phases(static_cast<Eigen::Index>(j)) =
        std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(d));
  }
  return u_ * phases.asDiagonal() * u_.adjoint();
}

Matrix DephasingMap::apply(const Matrix& x) const {
  if (x.rows() != u_.rows() || x.cols() != u_.cols()) {
    throw Error(Errc::DimensionMismatch, "dephasing map applied to an operator of the wrong size");
  }
  // In the u-basis the pinching keeps the diagonal.
  const Matrix in_basis = u_.adjoint() * x * u_;
  Matrix diag = Matrix::Zero(x.rows(), x.cols());
  diag.diagonal() = in_basis.diagonal();
  const Matrix pinched = u_ * diag * u_.adjoint();
  if (leak_ == 0.0) return pinched;
  return pinched + leak_ * (x - pinched);
}

Matrix DephasingMap::apply_on_first(const Matrix& x, std::size_t d_b) const {
  const std::size_t d = dim();
  if (static_cast<std::size_t>(x.rows()) != d * d_b || x.rows() != x.cols()) {
    throw Error(Errc::DimensionMismatch, "dephasing map applied to an operator of the wrong size");
  }
  const Matrix big_u = kron(u_, identity(d_b));
  const Matrix in_basis = big_u.adjoint() * x * big_u;
  Matrix blocks = Matrix::Zero(x.rows(), x.cols());
  const auto nb = static_cast<Eigen::Index>(d_b);
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(d); ++i) {
    blocks.block(i * nb, i * nb, nb, nb) = in_basis.block(i * nb, i * nb, nb, nb);
  }
  const Matrix pinched = big_u * blocks * big_u.adjoint();
  if (leak_ == 0.0) return pinched;
  return pinched + leak_ * (x - pinched);
}

Matrix DephasingMap::clock_average(const Matrix& x) const {
  const Matrix z = clock();
  Matrix acc = Matrix::Zero(x.rows(), x.cols());
  Matrix zj = identity(dim());
  for (std::size_t j = 0; j < dim(); ++j) {
    acc += zj * x * zj.adjoint();
    zj = z * zj;
  }
  return acc / static_cast<double>(dim());
}

Matrix dephasing_map(const Matrix& u, const Matrix& x) { return DephasingMap(u).apply(x); }

Matrix clock_invariant_state(const DephasingMap& t, const Matrix& sigma0, std::size_t d_b) {
  if (static_cast<std::size_t>(sigma0.rows()) != t.dim() * d_b) {
    throw Error(Errc::DimensionMismatch, "clock_invariant_state: dimension mismatch");
  }
  const Matrix z = kron(t.clock(), identity(d_b));
  Matrix acc = Matrix::Zero(sigma0.rows(), sigma0.cols());
  Matrix zj = identity(static_cast<std::size_t>(sigma0.rows()));
  for (std::size_t j = 0; j < t.dim(); ++j) {
    acc += zj * sigma0 * zj.adjoint();
    zj = z * zj;
  }
  return acc / static_cast<double>(t.dim());
}

double verify_key_lemma(const Channel& lambda, const DephasingMap& t, const Matrix& sigma) {
  const std::size_t d = t.dim();
  if (lambda.d_in() != d) throw Error(Errc::DimensionMismatch, "CP map input must match U");
  const std::size_t d_b = lambda.d_out();
  if (static_cast<std::size_t>(sigma.rows()) != d * d_b) {
    throw Error(Errc::DimensionMismatch, "sigma must live on R (x) B");
  }
  const Matrix z = kron(t.clock(), identity(d_b));
  const double drift = max_abs(z * sigma * z.adjoint() - sigma);
  if (drift > 1e-8) {
    std::ostringstream msg;
    msg << "sigma is not invariant under Z_U (x) I (residual " << drift << ")";
    throw Error(Errc::NotInvariant, msg.str());
  }
  const Matrix out = apply_on_second(lambda, max_entangled(d).projector(), d);
  const Matrix dephased = t.apply_on_first(out, d_b);
  const double lhs = exp_collision(dephased, sigma);
  const double rhs = exp_collision(out, sigma) / static_cast<double>(d);
  return std::max(0.0, rhs - lhs);
}

}  // namespace petzlab
