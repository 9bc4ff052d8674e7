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
#include <limits>
#include <string>
#include <vector>

#include "petzlab/channel.hpp"
#include "petzlab/entropy.hpp"
#include "petzlab/qstate.hpp"

namespace petzlab {

/// Error split for the one-shot bound; requires 0 < delta_i < eps_i < 1.
struct OneShotParams {
  double eps1 = 0.0;
  double eps2 = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;

  /// Throws BadParams.
  void validate() const;
};

/// delta1 = eps1 - 1/sqrt(n), delta2 = eps2 - 1/n, with each gap capped at
/// half of eps_i so the split stays valid for small n.
OneShotParams proof_split(double eps1, double eps2, std::size_t n);

/// (eps1 + sqrt(tr rho^2 + eps2)) (1 + 1/d), d = dim of the input space.
double implied_epsilon(const OneShotParams& params, const DensityMatrix& rho);

struct OneShotResult {
  double bound_bits = 0.0;
  double term1 = 0.0;
  double term2 = 0.0;
  double implied_eps = 0.0;
  SpectrumValue ds1;
  SpectrumValue ds2;
};

/// min(term1, term2) with
///   term1 = D_s^{delta1}(id (x) N(Psi) || I (x) N(rho)) + log2((eps1-delta1)/(1-eps1))
///   term2 = D_s^{delta2}(Psi || I (x) rho) + log2((eps2-delta2)/(1-eps2)).
OneShotResult one_shot_rhs(const Channel& ch, const DensityMatrix& rho,
                           const OneShotParams& params);

struct OptimizerOptions {
  std::size_t restarts = 8;
  double tol_eta = 1e-6;
  std::size_t max_iters = 20000;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  /// Bloch-ball grid resolution for the qubit cross-check (0 disables).
  std::size_t bloch_grid = 24;
};

struct RestartTrace {
  std::string seed_kind;  // "maxmixed", "corner", "random"
  double start_value = 0.0;
  double final_value = 0.0;
  std::size_t evaluations = 0;
};

struct CoherentInfoResult {
  double ic_bits = 0.0;
  /// Distinct states (trace distance > 1e-4) within tol_eta of ic_bits; a
  /// finite stand-in for the argmax set, which can be a continuum.
  std::vector<DensityMatrix> argmax_states;
  std::vector<double> argmax_values;
  std::vector<double> per_state_variance;
  std::vector<RestartTrace> trace;
  double value_at_maxmixed = 0.0;
  /// Qubit inputs only: best value over the Bloch-ball grid (NaN otherwise).
  double bloch_grid_best = std::numeric_limits<double>::quiet_NaN();
};

/// Multistart Nelder-Mead over rho = A A^dagger / tr(A A^dagger). Throws
/// ScaleLimit for d_in > 8.
CoherentInfoResult maximize_coherent_info(const Channel& ch, const OptimizerOptions& opts);

/// Best coherent information over a Bloch-ball grid with `steps` radial and
/// 2*`steps` angular points (qubit inputs only).
double bloch_grid_max(const Channel& ch, std::size_t steps);

/// Min (eps < 1/2) or max (eps > 1/2) of the variance over the argmax set.
/// Throws EpsilonHalf at eps = 1/2.
double quantum_dispersion(double eps, const CoherentInfoResult& ic);

struct SecondOrderResult {
  std::size_t n = 0;
  double eps = 0.0;
  double ic = 0.0;
  double v_eps = 0.0;
  double bound_bits = 0.0;
  /// The O(log n) remainder is not included in bound_bits.
  bool caveat = true;
};

/// n I_c + sqrt(n V_eps) Phi^{-1}(eps).
SecondOrderResult second_order_bound(double eps, std::size_t n, const CoherentInfoResult& ic);
SecondOrderResult second_order_bound(const Channel& ch, double eps, std::size_t n,
                                     const OptimizerOptions& opts = {});

struct OrderingReport {
  std::size_t samples = 0;
  double best_f_ent = 0.0;
  double best_f_eg = 0.0;
  /// Largest f_ent - f_eg over individual samples.
  double worst_gap = 0.0;
  bool holds = false;
};

/// Compares entanglement transmission fidelity with entanglement generation
/// fidelity (input Phi^m pushed through encoder, channel and decoder) over
/// Haar-random codes at rho = pi with Petz decoders.
OrderingReport capacity_ordering_check(const Channel& ch, std::size_t m,
                                       std::size_t samples, std::uint64_t seed,
                                       std::size_t threads);

}  // namespace petzlab
