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
#include <cstdint>
#include <optional>
#include <vector>

#include "petzlab/channel.hpp"
#include "petzlab/linalg.hpp"
#include "petzlab/qstate.hpp"
#include "petzlab/rng.hpp"

namespace petzlab {

/// Random code built from an input state rho and a rank-m projector P:
/// S = sqrt(d rho) P sqrt(d rho), code space supp S with orthonormal basis
/// w_i = S^{-1/2} sqrt(d rho) v_i where P = sum_i |v_i><v_i|.
struct CodeSpec {
  DensityMatrix rho;
  Matrix projector;
  std::size_t m;
  Matrix s;
  Subspace code_basis;
};

/// Throws RankDeficientRho if rho has eigenvalues at or below the support
/// cutoff and BadProjector if `projector` is not a non-zero orthogonal
/// projector on the input space.
CodeSpec build_code(const DensityMatrix& rho, const Matrix& projector);

/// Petz decoder for a code. `base` is X -> S^{1/2} N*(N(S)^{-1/2} X
/// N(S)^{-1/2}) S^{1/2}, trace preserving only on supp N(S); `total` adds
/// tr(X (I - Pi_{N(S)})) * completion_state and is CPTP.
struct PetzDecoder {
  Channel base;
  DensityMatrix completion_state;
  Channel total;
};

/// Uses S / tr S as completion state unless one is given; a given state must
/// live in supp S.
PetzDecoder petz_decoder(const Channel& ch, const CodeSpec& code,
                         const std::optional<DensityMatrix>& completion = std::nullopt);

/// <Phi^m| (id (x) dec o ch)(Phi^m) |Phi^m> with Phi^m maximally entangled
/// between an m-dimensional reference and the code space.
double ent_fidelity(const Channel& ch, const Channel& dec, const Subspace& code_space);

struct McEstimate {
  double mean = 0.0;
  double stderr_of_mean = 0.0;
};

/// Monte-Carlo average of <phi| dec o ch(phi) |phi> over Haar-random phi in
/// the code space. Requires trials >= 100.
McEstimate avg_fidelity_mc(const Channel& ch, const Channel& dec,
                           const Subspace& code_space, std::size_t trials,
                           RngStream& rng);

struct CodeExperiment {
  std::vector<double> f_ent;  // per sample, in sample order
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double q05 = 0.0;
  double q25 = 0.0;
  double median = 0.0;
  double q75 = 0.0;
  double q95 = 0.0;
  std::size_t best_index = 0;
  CodeSpec best_code;
};

/// Draws `samples` Haar projectors of rank m (stream (seed, "code", i) for
/// sample i), builds the code and its Petz decoder and records the exact
/// entanglement fidelity. Output does not depend on `threads`.
CodeExperiment random_code_experiment(const Channel& ch, const DensityMatrix& rho,
                                      std::size_t m, std::size_t samples,
                                      std::uint64_t seed, std::size_t threads);

/// Pinching in the basis u_i = U|i>. A non-zero `leak` mixes back a fraction
/// of the off-diagonal part and exists only as a negative control for the
/// lemma checks.
class DephasingMap {
 public:
  explicit DephasingMap(Matrix u, double leak = 0.0);

  std::size_t dim() const { return static_cast<std::size_t>(u_.rows()); }
  const Matrix& u() const { return u_; }
  /// Z_U |u_j> = exp(2 pi i j / d) |u_j>, j = 0..d-1.
  Matrix clock() const;

  Matrix apply(const Matrix& x) const;
  /// (T_U (x) id)(x) on H (x) C^{d_b}.
  Matrix apply_on_first(const Matrix& x, std::size_t d_b) const;
  /// (1/d) sum_j Z_U^j x Z_U^{-j}.
  Matrix clock_average(const Matrix& x) const;

 private:
  Matrix u_;
  double leak_;
};

/// Throws NotUnitary if U is not unitary within 1e-9.
Matrix dephasing_map(const Matrix& u, const Matrix& x);

/// (1/d) sum_j (Z_U^j (x) I) sigma0 (Z_U^{-j} (x) I) for sigma0 on H (x) C^{d_b}.
Matrix clock_invariant_state(const DephasingMap& t, const Matrix& sigma0,
                             std::size_t d_b);

/// max(0, exp D_2(id (x) L(Phi) || sigma) / d - exp D_2(T_U (x) L(Phi) || sigma))
/// for a CP map L. Throws NotInvariant unless (Z_U (x) I) sigma (Z_U (x) I)^dagger
/// equals sigma within 1e-8.
double verify_key_lemma(const Channel& lambda, const DephasingMap& t,
                        const Matrix& sigma);

}  // namespace petzlab
