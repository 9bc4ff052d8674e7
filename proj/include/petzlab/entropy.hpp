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

#include <limits>

#include "petzlab/channel.hpp"
#include "petzlab/linalg.hpp"
#include "petzlab/qstate.hpp"

namespace petzlab {

/// An entropic quantity in bits. When `support_ok` is false the support
/// condition supp rho <= supp sigma failed and `bits` is +inf.
struct EntropyValue {
  double bits = 0.0;
  bool support_ok = true;

  static EntropyValue infinite() {
    return {std::numeric_limits<double>::infinity(), false};
  }
};

/// D_s^eps result. `non_monotone` is set when the scan saw
/// tr(rho {rho <= 2^g sigma}) decrease, or return to <= eps after first
/// exceeding it; `bits` is then the end of the monotone prefix.
struct SpectrumValue : EntropyValue {
  bool non_monotone = false;
};

/// Epsilon for the quantum dispersion; `minimize` selects the min branch
/// (eps < 1/2). Construction rejects eps = 1/2 with EpsilonHalf.
struct DispersionSpec {
  double epsilon;
  bool minimize;

  explicit DispersionSpec(double eps);
};

/// True when the support of `rho` lies inside the support of `sigma`.
bool support_contained(const Matrix& rho, const Matrix& sigma);

double von_neumann_entropy(const Matrix& rho);

/// D(rho||sigma) = tr rho (log rho - log sigma).
EntropyValue rel_entropy(const DensityMatrix& rho, const Matrix& sigma);

/// V(rho||sigma) = tr rho (log rho - log sigma)^2 - D^2. Throws
/// SupportViolation.
EntropyValue rel_entropy_variance(const DensityMatrix& rho, const Matrix& sigma);

/// tr(sigma^{-1/2} rho sigma^{-1/2} rho) with the inverse taken on supp
/// sigma. Works in linear scale on arbitrary PSD `rho` and never throws on
/// support violations.
double exp_collision(const Matrix& rho, const Matrix& sigma);

/// D_2(rho||sigma) = log2 exp_collision. Throws SupportViolation.
EntropyValue collision_D2(const DensityMatrix& rho, const Matrix& sigma);

/// log2 lambda_max(sigma^{-1/2} rho sigma^{-1/2}). Throws SupportViolation.
EntropyValue dmax(const DensityMatrix& rho, const Matrix& sigma);

/// tr(rho {rho <= 2^gamma sigma}), with {X <= Y} the projector onto the
/// non-negative eigenspace of Y - X.
double spectrum_tail(const Matrix& rho, const Matrix& sigma, double gamma);

/// D_s^eps(rho||sigma) = sup{gamma : spectrum_tail(gamma) <= eps}.
SpectrumValue ds_eps(const DensityMatrix& rho, const Matrix& sigma, double eps);

/// Standard normal CDF.
double normal_cdf(double x);
/// Inverse standard normal CDF; throws OutOfRange outside (0, 1).
double inv_normal_cdf(double p);

/// Output of id (x) ch on the purification of rho: omega_RB, with R first.
Matrix channel_output_state(const Channel& ch, const DensityMatrix& rho);

/// I_c(ch, rho) = D(omega_RB || I_R (x) omega_B).
double coherent_info(const Channel& ch, const DensityMatrix& rho);
/// H(ch(rho)) - H(ch^c(rho)); same value, cheaper.
double coherent_info_fast(const Channel& ch, const DensityMatrix& rho);
/// As above with a precomputed complementary channel.
double coherent_info_fast(const Channel& ch, const Channel& comp,
                          const DensityMatrix& rho);
/// V(omega_RB || I_R (x) omega_B).
double channel_variance(const Channel& ch, const DensityMatrix& rho);

}  // namespace petzlab
