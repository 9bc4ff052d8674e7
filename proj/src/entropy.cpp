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

#include "petzlab/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "petzlab/error.hpp"

namespace petzlab {

namespace {

// F(gamma) counts as exceeding eps only beyond this margin, so that values
// equal to eps up to rounding stay inside the feasible set.
constexpr double kTailSlack = 1e-12;

void require_same_dims(const Matrix& rho, const Matrix& sigma, const char* what) {
  require_square(sigma, what);
  if (rho.rows() != sigma.rows()) {
    std::ostringstream msg;
    msg << what << ": rho is " << rho.rows() << "-dimensional, sigma is "
        << sigma.rows() << "-dimensional";
    throw Error(Errc::DimensionMismatch, msg.str());
  }
}

double log2_on_support(double x) { return std::log2(x); }

Matrix pseudo_log2(const HermitianEig& eig) {
  return hermitian_fn(eig, log2_on_support, true);
}

Matrix pseudo_inv_sqrt(const Matrix& sigma) {
  return hermitian_fn(sigma, [](double x) { return 1.0 / std::sqrt(x); }, true);
}

void require_support(const Matrix& rho, const Matrix& sigma, const char* what) {
  if (!support_contained(rho, sigma)) {
    throw Error(Errc::SupportViolation,
                std::string(what) + ": supp rho is not contained in supp sigma");
  }
}

// log2 of the positive eigenvalues of sigma^{-1/2} rho sigma^{-1/2} on
// supp sigma, ascending and de-duplicated. These are the gammas at which
// 2^gamma sigma - rho changes inertia.
std::vector<double> spectrum_breakpoints(const Matrix& rho, const Matrix& sigma) {
  const HermitianEig se = hermitian_eig(sigma);
  const auto r = static_cast<Eigen::Index>(numerical_rank(se));
  std::vector<double> out;
  if (r == 0) return out;
  const Matrix v = se.vectors.leftCols(r);
  const RealVector scale = se.values.head(r).cwiseSqrt().cwiseInverse();
  const Matrix m = scale.cast<Complex>().asDiagonal() * (v.adjoint() * rho * v) *
                   scale.cast<Complex>().asDiagonal();
  const HermitianEig me = hermitian_eig(m);
  const double top = me.values(0);
  if (top <= 0.0) return out;
  for (Eigen::Index i = 0; i < me.values.size(); ++i) {
    if (me.values(i) > kSupportCutoff * top) out.push_back(std::log2(me.values(i)));
  }
  std::sort(out.begin(), out.end());
  std::vector<double> unique;
  for (double b : out) {
    if (unique.empty() || b - unique.back() > 1e-12) unique.push_back(b);
  }
  return unique;
}

}  // namespace

DispersionSpec::DispersionSpec(double eps) : epsilon(eps), minimize(eps < 0.5) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw Error(Errc::OutOfRange, "epsilon must lie in (0, 1)");
  }
  if (eps == 0.5) {
    throw Error(Errc::EpsilonHalf, "the dispersion is undefined at epsilon = 1/2");
  }
}

bool support_contained(const Matrix& rho, const Matrix& sigma) {
  require_same_dims(rho, sigma, "support_contained");
  const Matrix outside = identity(static_cast<std::size_t>(sigma.rows())) -
                         support_projector(sigma);
  const double leak = (outside * rho).trace().real();
  const double total = std::max(rho.trace().real(), 0.0);
  return leak <= 1e-9 * std::max(total, 1e-300);
}

double von_neumann_entropy(const Matrix& rho) {
  const HermitianEig eig = hermitian_eig(rho);
  const double cutoff = kSupportCutoff * std::max(eig.values(0), 0.0);
  double h = 0.0;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    const double p = eig.values(i);
    if (p > cutoff) h -= p * std::log2(p);
  }
  return h;
}

EntropyValue rel_entropy(const DensityMatrix& rho, const Matrix& sigma) {
  require_same_dims(rho.mat(), sigma, "rel_entropy");
  if (!support_contained(rho.mat(), sigma)) return EntropyValue::infinite();
  const double neg_entropy = -von_neumann_entropy(rho.mat());
  const Matrix log_sigma = pseudo_log2(hermitian_eig(sigma));
  const double cross = (rho.mat() * log_sigma).trace().real();
  return {neg_entropy - cross, true};
}

EntropyValue rel_entropy_variance(const DensityMatrix& rho, const Matrix& sigma) {
  require_same_dims(rho.mat(), sigma, "rel_entropy_variance");
  require_support(rho.mat(), sigma, "rel_entropy_variance");
  const Matrix diff = pseudo_log2(hermitian_eig(rho.mat())) -
                      pseudo_log2(hermitian_eig(sigma));
  const double d = (rho.mat() * diff).trace().real();
  const double second = (rho.mat() * diff * diff).trace().real();
  double v = second - d * d;
  // Cancellation noise in second - d^2 is of order eps * second.
  if (std::abs(v) <= 1e-13 * (1.0 + second)) v = 0.0;
  return {v, true};
}

double exp_collision(const Matrix& rho, const Matrix& sigma) {
  require_same_dims(rho, sigma, "exp_collision");
  const Matrix s = pseudo_inv_sqrt(sigma);
  return (s * rho * s * rho).trace().real();
}

EntropyValue collision_D2(const DensityMatrix& rho, const Matrix& sigma) {
  require_same_dims(rho.mat(), sigma, "collision_D2");
  require_support(rho.mat(), sigma, "collision_D2");
  return {std::log2(exp_collision(rho.mat(), sigma)), true};
}

EntropyValue dmax(const DensityMatrix& rho, const Matrix& sigma) {
  require_same_dims(rho.mat(), sigma, "dmax");
  require_support(rho.mat(), sigma, "dmax");
  const Matrix s = pseudo_inv_sqrt(sigma);
  const HermitianEig eig = hermitian_eig(s * rho.mat() * s);
  return {std::log2(eig.values(0)), true};
}

double spectrum_tail(const Matrix& rho, const Matrix& sigma, double gamma) {
  require_same_dims(rho, sigma, "spectrum_tail");
  const double scale = std::exp2(gamma);
  const double tol = 1e-12 * (max_abs(rho) + scale * max_abs(sigma));
  const Matrix proj = nonnegative_projector(scale * sigma - rho, tol);
  return (rho * proj).trace().real();
}

SpectrumValue ds_eps(const DensityMatrix& rho, const Matrix& sigma, double eps) {
  require_same_dims(rho.mat(), sigma, "ds_eps");
  if (!(eps > 0.0 && eps < 1.0)) throw Error(Errc::OutOfRange, "ds_eps: eps must lie in (0, 1)");
  const Matrix& r = rho.mat();
  auto tail = [&](double g) { return spectrum_tail(r, sigma, g); };
  auto exceeds = [&](double f) { return f > eps + kTailSlack; };

  std::vector<double> breaks = spectrum_breakpoints(r, sigma);
  if (breaks.empty()) breaks.push_back(0.0);
  const bool commuting =
      max_abs(r * sigma - sigma * r) <= 1e-12 * max_abs(r) * std::max(max_abs(sigma), 1e-300);

  std::vector<double> grid;
  const double first = breaks.front();
  const double last = breaks.back();
  if (commuting) {
    grid.push_back(first - 1.0);
  } else {
    for (double off : {64.0, 16.0, 4.0, 1.0, 0.25}) grid.push_back(first - off);
  }
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    grid.push_back(breaks[i]);
    if (i + 1 == breaks.size()) break;
    const double width = breaks[i + 1] - breaks[i];
    if (commuting) {
      grid.push_back(breaks[i] + 0.5 * width);
    } else {
      for (int k = 1; k < 8; ++k) grid.push_back(breaks[i] + width * k / 8.0);
    }
  }
  if (commuting) {
    grid.push_back(last + 1.0);
  } else {
    for (double off : {0.25, 1.0, 4.0, 16.0}) grid.push_back(last + off);
  }

  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = tail(grid[i]);

  SpectrumValue out;
  std::size_t hit = grid.size();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (exceeds(values[i])) {
      hit = i;
      break;
    }
  }
  if (hit == grid.size()) {
    out.bits = std::numeric_limits<double>::infinity();
    out.support_ok = false;
    return out;
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (values[i] < values[i - 1] - 1e-12) out.non_monotone = true;
    if (i > hit && !exceeds(values[i])) out.non_monotone = true;
  }

  double lo = 0.0;
  double hi = grid[hit];
  if (hit == 0) {
    bool found = false;
    double step = 64.0;
    lo = hi;
    for (int k = 0; k < 16 && !found; ++k) {
      lo -= step;
      step *= 2.0;
      found = !exceeds(tail(lo));
    }
    if (!found) {
      out.bits = -std::numeric_limits<double>::infinity();
      return out;
    }
  } else {
    lo = grid[hit - 1];
  }
  while (hi - lo > 5e-10) {
    const double mid = 0.5 * (lo + hi);
    if (exceeds(tail(mid))) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  out.bits = hi;
  for (double b : breaks) {
    if (std::abs(b - hi) <= 2e-9) out.bits = b;
  }
  return out;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double inv_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    std::ostringstream msg;
    msg << "inv_normal_cdf: probability " << p << " outside (0, 1)";
    throw Error(Errc::OutOfRange, msg.str());
  }
  if (p == 0.5) return 0.0;
  // 1 - p is exact for p >= 1/2, so the upper half is the mirrored lower half.
  if (p > 0.5) return -inv_normal_cdf(1.0 - p);

  // Acklam's rational approximation (relative error ~1e-9) on the lower half.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00, 2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double x = 0.0;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else {
    const double q = p - 0.5;
    const double t = q * q;
    x = (((((a[0] * t + a[1]) * t + a[2]) * t + a[3]) * t + a[4]) * t + a[5]) * q /
        (((((b[0] * t + b[1]) * t + b[2]) * t + b[3]) * t + b[4]) * t + 1.0);
  }
  // Halley steps against the erfc-based CDF.
  const double root_two_pi = std::sqrt(2.0 * std::numbers::pi);
  for (int it = 0; it < 2; ++it) {
    const double e = normal_cdf(x) - p;
    const double u = e * root_two_pi * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

Matrix channel_output_state(const Channel& ch, const DensityMatrix& rho) {
  if (rho.dim() != ch.d_in()) {
    std::ostringstream msg;
    msg << "input state is " << rho.dim() << "-dimensional, channel expects "
        << ch.d_in();
    throw Error(Errc::DimensionMismatch, msg.str());
  }
  const PureState psi = purify(rho);
  return apply_on_second(ch, psi.projector(), rho.dim());
}

namespace {

struct ConditionalPair {
  DensityMatrix joint;
  Matrix reference;
};

ConditionalPair conditional_pair(const Channel& ch, const DensityMatrix& rho) {
  const Matrix omega = channel_output_state(ch, rho);
  const Matrix omega_b = partial_trace(omega, Keep::B, rho.dim(), ch.d_out());
  return {DensityMatrix(omega), kron(identity(rho.dim()), omega_b)};
}

}  // namespace

double coherent_info(const Channel& ch, const DensityMatrix& rho) {
  const ConditionalPair pair = conditional_pair(ch, rho);
  return rel_entropy(pair.joint, pair.reference).bits;
}

double coherent_info_fast(const Channel& ch, const Channel& comp,
                          const DensityMatrix& rho) {
  if (rho.dim() != ch.d_in()) {
    throw Error(Errc::DimensionMismatch, "coherent_info: input dimension mismatch");
  }
  return von_neumann_entropy(apply(ch, rho.mat())) -
         von_neumann_entropy(apply(comp, rho.mat()));
}

double coherent_info_fast(const Channel& ch, const DensityMatrix& rho) {
  return coherent_info_fast(ch, complementary(ch), rho);
}

double channel_variance(const Channel& ch, const DensityMatrix& rho) {
  const ConditionalPair pair = conditional_pair(ch, rho);
  return rel_entropy_variance(pair.joint, pair.reference).bits;
}

}  // namespace petzlab
