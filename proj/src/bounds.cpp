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

#include "petzlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "petzlab/error.hpp"
#include "petzlab/parallel.hpp"
#include "petzlab/petz.hpp"

namespace petzlab {

void OneShotParams::validate() const {
  const double eps[] = {eps1, eps2};
  const double delta[] = {delta1, delta2};
  for (int i = 0; i < 2; ++i) {
    if (!(eps[i] > 0.0 && eps[i] < 1.0)) {
      std::ostringstream msg;
      msg << "eps" << i + 1 << " = " << eps[i] << " must lie in (0, 1)";
      throw Error(Errc::BadParams, msg.str());
    }
    if (!(delta[i] > 0.0)) {
      std::ostringstream msg;
      msg << "delta" << i + 1 << " = " << delta[i] << " must be positive";
      throw Error(Errc::BadParams, msg.str());
    }
    if (!(delta[i] < eps[i])) {
      std::ostringstream msg;
      msg << "delta must be below epsilon (delta" << i + 1 << " = " << delta[i]
          << ", eps" << i + 1 << " = " << eps[i] << ")";
      throw Error(Errc::BadParams, msg.str());
    }
  }
}

OneShotParams proof_split(double eps1, double eps2, std::size_t n) {
  if (n == 0) throw Error(Errc::BadParams, "number of copies must be >= 1");
  const double nn = static_cast<double>(n);
  OneShotParams p{eps1, eps2, eps1 - std::min(1.0 / std::sqrt(nn), 0.5 * eps1),
                  eps2 - std::min(1.0 / nn, 0.5 * eps2)};
  p.validate();
  return p;
}

double implied_epsilon(const OneShotParams& params, const DensityMatrix& rho) {
  const double d = static_cast<double>(rho.dim());
  return (params.eps1 + std::sqrt(rho.purity() + params.eps2)) * (1.0 + 1.0 / d);
}

OneShotResult one_shot_rhs(const Channel& ch, const DensityMatrix& rho,
                           const OneShotParams& params) {
  params.validate();
  if (ch.d_in() * ch.d_out() > kMaxTensorDim) {
    throw Error(Errc::ScaleLimit, "reference-output dimension " +
                                      std::to_string(ch.d_in() * ch.d_out()) + " exceeds " +
                                      std::to_string(kMaxTensorDim));
  }
  const Matrix omega = channel_output_state(ch, rho);
  const std::size_t d = rho.dim();
  const Matrix psi = purify(rho).projector();

  OneShotResult out;
  out.ds1 = ds_eps(DensityMatrix(omega), kron(identity(d), apply(ch, rho.mat())), params.delta1);
  out.ds2 = ds_eps(DensityMatrix(psi), kron(identity(d), rho.mat()), params.delta2);
  out.term1 = out.ds1.bits + std::log2((params.eps1 - params.delta1) / (1.0 - params.eps1));
  out.term2 = out.ds2.bits + std::log2((params.eps2 - params.delta2) / (1.0 - params.eps2));
  out.bound_bits = std::min(out.term1, out.term2);
  out.implied_eps = implied_epsilon(params, rho);
  return out;
}

namespace {

using Objective = std::function<double(const std::vector<double>&)>;

struct SimplexResult {
  std::vector<double> x;
  double f = 0.0;
  std::size_t evaluations = 0;
};

// Nelder-Mead with the dimension-adaptive coefficients of Gao and Han.
SimplexResult nelder_mead(const Objective& f, const std::vector<double>& x0,
                          double step, std::size_t max_evals) {
  const std::size_t n = x0.size();
  const double dn = static_cast<double>(n);
  const double alpha = 1.0;
  const double gamma = 1.0 + 2.0 / dn;
  const double rho = 0.75 - 1.0 / (2.0 * dn);
  const double sigma = 1.0 - 1.0 / dn;

  std::vector<std::vector<double>> pts(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += step;
  std::vector<double> vals(n + 1);
  std::size_t evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    return f(x);
  };
  for (std::size_t i = 0; i <= n; ++i) vals[i] = eval(pts[i]);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), trial(n), trial2(n);
  while (evals < max_evals) {
    for (std::size_t i = 0; i <= n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[n - 1];

    double spread = vals[worst] - vals[best];
    double diameter = 0.0;
    for (std::size_t i = 0; i <= n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        diameter = std::max(diameter, std::abs(pts[i][k] - pts[best][k]));
    if (spread <= 1e-15 * (1.0 + std::abs(vals[best])) && diameter <= 1e-9) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t k = 0; k < n; ++k) centroid[k] += pts[i][k] / dn;
    }
    for (std::size_t k = 0; k < n; ++k)
      trial[k] = centroid[k] + alpha * (centroid[k] - pts[worst][k]);
    const double f_r = eval(trial);
    if (f_r < vals[best]) {
      for (std::size_t k = 0; k < n; ++k)
        trial2[k] = centroid[k] + gamma * (trial[k] - centroid[k]);
      const double f_e = eval(trial2);
      if (f_e < f_r) {
        pts[worst] = trial2;
        vals[worst] = f_e;
      } else {
        pts[worst] = trial;
        vals[worst] = f_r;
      }
      continue;
    }
    if (f_r < vals[second]) {
      pts[worst] = trial;
      vals[worst] = f_r;
      continue;
    }
    const bool outside = f_r < vals[worst];
    for (std::size_t k = 0; k < n; ++k) {
      trial2[k] = outside ? centroid[k] + rho * (trial[k] - centroid[k])
                          : centroid[k] + rho * (pts[worst][k] - centroid[k]);
    }
    const double f_c = eval(trial2);
    if (f_c < (outside ? f_r : vals[worst])) {
      pts[worst] = trial2;
      vals[worst] = f_c;
      continue;
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t k = 0; k < n; ++k)
        pts[i][k] = pts[best][k] + sigma * (pts[i][k] - pts[best][k]);
      vals[i] = eval(pts[i]);
    }
  }
  const auto best_it = std::min_element(vals.begin(), vals.end());
  const auto idx = static_cast<std::size_t>(best_it - vals.begin());
  return {pts[idx], *best_it, evals};
}

DensityMatrix state_from_params(const std::vector<double>& x, std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  Matrix a(n, n);
  for (Eigen::Index i = 0; i < n * n; ++i) {
    a(i / n, i % n) = Complex(x[static_cast<std::size_t>(2 * i)],
                              x[static_cast<std::size_t>(2 * i + 1)]);
  }
  Matrix rho = a * a.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(0.5 * (rho + rho.adjoint()));
}

std::vector<double> params_from_matrix(const Matrix& a) {
  std::vector<double> x;
  x.reserve(static_cast<std::size_t>(2 * a.size()));
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      x.push_back(a(i, j).real());
      x.push_back(a(i, j).imag());
    }
  return x;
}

double trace_distance(const Matrix& a, const Matrix& b) { return 0.5 * trace_norm(a - b); }

}  // namespace

double bloch_grid_max(const Channel& ch, std::size_t steps) {
  if (ch.d_in() != 2) throw Error(Errc::DimensionMismatch, "Bloch grid needs a qubit input");
  if (steps == 0) throw Error(Errc::BadParameter, "Bloch grid needs at least one step");
  const Channel comp = complementary(ch);
  const Matrix x = (Matrix(2, 2) << 0, 1, 1, 0).finished();
  const Matrix y = (Matrix(2, 2) << 0, Complex(0, -1), Complex(0, 1), 0).finished();
  const Matrix z = (Matrix(2, 2) << 1, 0, 0, -1).finished();
  double best = coherent_info_fast(ch, comp, DensityMatrix::maximally_mixed(2));
  for (std::size_t ir = 1; ir <= steps; ++ir) {
    const double r = static_cast<double>(ir) / static_cast<double>(steps);
    for (std::size_t it = 0; it <= steps; ++it) {
      const double theta = std::numbers::pi * static_cast<double>(it) / static_cast<double>(steps);
      const std::size_t n_phi = (it == 0 || it == steps) ? 1 : 2 * steps;
      for (std::size_t ip = 0; ip < n_phi; ++ip) {
        const double phi = std::numbers::pi * static_cast<double>(ip) / static_cast<double>(steps);
        const Matrix rho = 0.5 * (identity(2) + r * (std::sin(theta) * std::cos(phi) * x +
                                                     std::sin(theta) * std::sin(phi) * y +
                                                     std::cos(theta) * z));
        best = std::max(best, coherent_info_fast(ch, comp, DensityMatrix(rho)));
      }
    }
  }
  return best;
}

CoherentInfoResult maximize_coherent_info(const Channel& ch, const OptimizerOptions& opts) {
  const std::size_t d = ch.d_in();
  if (d > 8) {
    std::ostringstream msg;
    msg << "coherent information optimizer supports d_in <= 8, got " << d;
    throw Error(Errc::ScaleLimit, msg.str());
  }
  const Channel comp = complementary(ch);
  auto ic = [&](const DensityMatrix& rho) { return coherent_info_fast(ch, comp, rho); };
  const Objective objective = [&](const std::vector<double>& x) {
    return -ic(state_from_params(x, d));
  };

  CoherentInfoResult result;
  const DensityMatrix pi = DensityMatrix::maximally_mixed(d);
  result.value_at_maxmixed = ic(pi);

  // Seeds: pi, the best computational-basis corner, then random matrices.
  std::vector<std::pair<std::string, Matrix>> seeds;
  seeds.emplace_back("maxmixed", identity(d));
  std::size_t best_corner = 0;
  double best_corner_value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < d; ++i) {
    RealVector p = RealVector::Zero(static_cast<Eigen::Index>(d));
    p(static_cast<Eigen::Index>(i)) = 1.0;
    const double v = ic(DensityMatrix::diagonal(p));
    if (v > best_corner_value) {
      best_corner_value = v;
      best_corner = i;
    }
  }
  Matrix corner = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  corner(static_cast<Eigen::Index>(best_corner), static_cast<Eigen::Index>(best_corner)) = 1.0;
  seeds.emplace_back("corner", corner);
  for (std::size_t r = 0; r < opts.restarts; ++r) {
    RngStream rng(opts.seed, "restart", r);
    Matrix a(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < a.size(); ++i) a(i / a.cols(), i % a.cols()) = rng.complex_normal();
    seeds.emplace_back("random", a);
  }

  std::vector<SimplexResult> finals(seeds.size());
  result.trace.resize(seeds.size());
  parallel_for(seeds.size(), opts.threads, [&](std::size_t s) {
    std::vector<double> x = params_from_matrix(seeds[s].second);
    const double start = objective(x);
    SimplexResult run = nelder_mead(objective, x, 0.25, opts.max_iters);
    std::size_t evals = run.evaluations;
    // Restarting from the best vertex unsticks collapsed simplices.
    for (int again = 0; again < 3 && evals < opts.max_iters; ++again) {
      SimplexResult next = nelder_mead(objective, run.x, 0.05, opts.max_iters - evals);
      evals += next.evaluations;
      const bool improved = next.f < run.f - 1e-13;
      if (next.f < run.f) run = std::move(next);
      if (!improved) break;
    }
    finals[s] = run;
    result.trace[s] = RestartTrace{seeds[s].first, -start, -run.f, evals};
  });

  struct Candidate {
    DensityMatrix rho;
    double value;
  };
  std::vector<Candidate> candidates;
  candidates.push_back({pi, result.value_at_maxmixed});
  for (const auto& run : finals) {
    const DensityMatrix rho = state_from_params(run.x, d);
    candidates.push_back({rho, ic(rho)});
  }
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& c : candidates) best = std::max(best, c.value);
  result.ic_bits = best;
  for (const auto& c : candidates) {
    if (c.value < best - opts.tol_eta) continue;
    bool distinct = true;
    for (const auto& kept : result.argmax_states) {
      if (trace_distance(kept.mat(), c.rho.mat()) <= 1e-4) {
        distinct = false;
        break;
      }
    }
    if (!distinct) continue;
    result.argmax_states.push_back(c.rho);
    result.argmax_values.push_back(c.value);
    result.per_state_variance.push_back(channel_variance(ch, c.rho));
  }
  if (d == 2 && opts.bloch_grid > 0) result.bloch_grid_best = bloch_grid_max(ch, opts.bloch_grid);
  return result;
}

double quantum_dispersion(double eps, const CoherentInfoResult& ic) {
  const DispersionSpec spec(eps);
  if (ic.per_state_variance.empty()) {
    throw Error(Errc::BadParameter, "no maximizers to take the dispersion over");
  }
  const auto [lo, hi] =
      std::minmax_element(ic.per_state_variance.begin(), ic.per_state_variance.end());
  return spec.minimize ? *lo : *hi;
}

SecondOrderResult second_order_bound(double eps, std::size_t n, const CoherentInfoResult& ic) {
  const double v = quantum_dispersion(eps, ic);
  if (n == 0) throw Error(Errc::BadParameter, "blocklength n must be >= 1");
  const double nn = static_cast<double>(n);
  SecondOrderResult out;
  out.n = n;
  out.eps = eps;
  out.ic = ic.ic_bits;
  out.v_eps = v;
  out.bound_bits = nn * ic.ic_bits + std::sqrt(nn * v) * inv_normal_cdf(eps);
  return out;
}

SecondOrderResult second_order_bound(const Channel& ch, double eps, std::size_t n,
                                     const OptimizerOptions& opts) {
  const DispersionSpec check(eps);
  (void)check;
  return second_order_bound(eps, n, maximize_coherent_info(ch, opts));
}

OrderingReport capacity_ordering_check(const Channel& ch, std::size_t m,
                                       std::size_t samples, std::uint64_t seed,
                                       std::size_t threads) {
  const std::size_t d = ch.d_in();
  if (d > 4) throw Error(Errc::ScaleLimit, "capacity ordering check supports d_in <= 4");
  if (m == 0 || m > d) throw Error(Errc::BadParameter, "code dimension m must be in [1, d]");
  const DensityMatrix pi = DensityMatrix::maximally_mixed(d);
  const Vector phi_m = max_entangled(m).vec();
  std::vector<double> f_ent(samples), f_eg(samples);
  parallel_for(samples, threads, [&](std::size_t i) {
    RngStream rng(seed, "ordering", i);
    const CodeSpec code = build_code(pi, haar_projector(d, m, rng));
    const PetzDecoder dec = petz_decoder(ch, code);
    f_ent[i] = ent_fidelity(ch, dec.total, code.code_basis);
    // Generation route: encode Phi^m explicitly and push the state through.
    const Vector encoded = kron(identity(m), code.code_basis.basis()) * phi_m;
    const Matrix sent = apply_on_second(ch, encoded * encoded.adjoint(), m);
    const Matrix received = apply_on_second(dec.total, sent, m);
    f_eg[i] = encoded.dot(received * encoded).real();
  });
  OrderingReport rep;
  rep.samples = samples;
  rep.worst_gap = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples; ++i) {
    rep.best_f_ent = std::max(rep.best_f_ent, f_ent[i]);
    rep.best_f_eg = std::max(rep.best_f_eg, f_eg[i]);
    rep.worst_gap = std::max(rep.worst_gap, f_ent[i] - f_eg[i]);
  }
  rep.holds = rep.best_f_eg >= rep.best_f_ent - 1e-9;
  return rep;
}

}  // namespace petzlab
