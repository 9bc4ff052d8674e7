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

#include "petzlab/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "petzlab/channel.hpp"
#include "petzlab/entropy.hpp"
#include "petzlab/error.hpp"
#include "petzlab/parallel.hpp"
#include "petzlab/petz.hpp"
#include "petzlab/qstate.hpp"
#include "petzlab/rng.hpp"
#include "petzlab/stats.hpp"

namespace petzlab {

namespace {

LemmaReport make_report(std::string id, std::size_t trials, double violation,
                        std::string detail) {
  return LemmaReport{std::move(id), trials, violation, violation <= kLemmaTolerance,
                     std::move(detail)};
}

double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

// (T_U (x) id)(Phi) = (1/d) sum_i u_i (x) conj(u_i), T_U = clock average,
// and T_U idempotent.
LemmaReport check_dephasing(const VerifyOptions& opts) {
  const std::array<std::size_t, 3> dims{2, 3, 4};
  std::vector<double> worst(dims.size() * opts.trials);
  parallel_for(worst.size(), opts.threads, [&](std::size_t idx) {
    const std::size_t d = dims[idx / opts.trials];
    RngStream rng(opts.seed, "verify/dephasing", idx);
    const DephasingMap t(haar_unitary(d, rng), opts.dephasing_leak);
    const Matrix phi = max_entangled(d).projector();
    Matrix expected = Matrix::Zero(static_cast<Eigen::Index>(d * d), static_cast<Eigen::Index>(d * d));
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(d); ++i) {
      const Vector u = t.u().col(i);
      expected += kron(Matrix(u * u.adjoint()), conjugate(u * u.adjoint()));
    }
    expected /= static_cast<double>(d);
    const double r1 = max_abs(t.apply_on_first(phi, d) - expected);
    const Matrix rho = random_density(d, rng).mat();
    const double r2 = max_abs(t.apply(rho) - t.clock_average(rho));
    const double r3 = max_abs(t.apply(t.apply(rho)) - t.apply(rho));
    worst[idx] = std::max({r1, r2, r3});
  });
  return make_report("dephasing-map", worst.size(), max_of(worst),
                     "pinching vs u (x) u* form, clock average, idempotence; d = 2,3,4");
}

// exp D2(T_U (x) L(Phi) || sigma) >= exp D2(id (x) L(Phi) || sigma) / d for
// CP maps L and Z_U-invariant sigma.
LemmaReport check_weak_monotonicity(const VerifyOptions& opts) {
  const std::array<std::size_t, 3> dims{2, 3, 4};
  std::vector<double> worst(dims.size() * opts.trials);
  parallel_for(worst.size(), opts.threads, [&](std::size_t idx) {
    const std::size_t d = dims[idx / opts.trials];
    RngStream rng(opts.seed, "verify/weak-monotonicity", idx);
    const std::size_t d_b = 2 + rng.next_u64() % 2;
    const std::size_t n_kraus = (d + d_b - 1) / d_b + rng.next_u64() % 3;
    const Channel base = random_channel(d, d_b, n_kraus, rng);
    const double scale = 0.25 + 4.0 * rng.uniform();
    std::vector<Matrix> kraus;
    for (const auto& k : base.kraus()) kraus.push_back(std::sqrt(scale) * k);
    const Channel lambda(d, d_b, std::move(kraus), Channel::Kind::CompletelyPositive);
    const DephasingMap t(haar_unitary(d, rng), opts.dephasing_leak);
    const Matrix sigma = clock_invariant_state(t, random_density(d * d_b, rng).mat(), d_b);
    // Relative violation so that the scale of L does not matter.
    const Matrix out = apply_on_second(lambda, max_entangled(d).projector(), d);
    const double ref = exp_collision(out, sigma) / static_cast<double>(d);
    worst[idx] = verify_key_lemma(lambda, t, sigma) / std::max(ref, 1e-300);
  });
  return make_report("weak-monotonicity", worst.size(), max_of(worst),
                     "random CP maps (scaled), Haar U, orbit-averaged sigma; d = 2,3,4; relative");
}

// Monte-Carlo average fidelity vs (m F_ent + 1)/(m + 1). The per-instance
// z-scores are pooled into one N(0,1) statistic; violation = max(0, |z| - 3).
LemmaReport check_avg_ent_fidelity(const VerifyOptions& opts) {
  const std::size_t instances = std::max<std::size_t>(opts.trials, 50);
  constexpr std::size_t kMcTrials = 400;
  std::vector<double> z(instances), exact_gap(instances);
  parallel_for(instances, opts.threads, [&](std::size_t idx) {
    RngStream rng(opts.seed, "verify/avg-ent-fidelity", idx);
    const std::size_t d = 2 + idx % 2;
    const std::size_t m = 2;
    const Channel ch = random_channel(d, d, 1 + rng.next_u64() % 3, rng);
    const DensityMatrix rho = random_density(d, rng);
    const CodeSpec code = build_code(rho, haar_projector(d, m, rng));
    const PetzDecoder dec = petz_decoder(ch, code);
    const double predicted =
        avg_from_ent_fidelity(ent_fidelity(ch, dec.total, code.code_basis), m);
    const McEstimate mc = avg_fidelity_mc(ch, dec.total, code.code_basis, kMcTrials, rng);
    if (mc.stderr_of_mean > 1e-12) {
      z[idx] = (mc.mean - predicted) / mc.stderr_of_mean;
    } else {
      exact_gap[idx] = std::abs(mc.mean - predicted);
    }
  });
  double pooled = 0.0;
  for (double v : z) pooled += v;
  pooled /= std::sqrt(static_cast<double>(instances));
  const double violation = std::max(std::max(0.0, std::abs(pooled) - 3.0), max_of(exact_gap));
  std::ostringstream detail;
  detail << "pooled z = " << pooled << " over " << instances << " codes, " << kMcTrials
         << " Haar states each";
  return make_report("avg-ent-fidelity", instances, violation, detail.str());
}

// D(rho_AB || I (x) rho_B) = -D(rho_AC || I (x) rho_C) and equal variances on
// random tripartite pure states.
LemmaReport check_duality(const VerifyOptions& opts) {
  std::vector<double> worst(opts.trials);
  parallel_for(opts.trials, opts.threads, [&](std::size_t idx) {
    RngStream rng(opts.seed, "verify/duality", idx);
    const std::array<std::size_t, 3> dims{2 + rng.next_u64() % 2, 2 + rng.next_u64() % 2,
                                          2 + rng.next_u64() % 2};
    const Matrix psi = haar_state(dims[0] * dims[1] * dims[2], rng).projector();
    auto conditional = [&](std::size_t other) {
      const std::vector<bool> keep_ax{true, other == 1, other == 2};
      const std::vector<bool> keep_x{false, other == 1, other == 2};
      const DensityMatrix joint(partial_trace(psi, dims, keep_ax));
      const Matrix marginal = partial_trace(psi, dims, keep_x);
      const Matrix ref = kron(identity(dims[0]), marginal);
      return std::pair{rel_entropy(joint, ref).bits, rel_entropy_variance(joint, ref).bits};
    };
    const auto [d_ab, v_ab] = conditional(1);
    const auto [d_ac, v_ac] = conditional(2);
    worst[idx] = std::max(std::abs(d_ab + d_ac), std::abs(v_ab - v_ac));
  });
  return make_report("duality", opts.trials, max_of(worst),
                     "random pure states on A(x)B(x)C, dims <= 3");
}

// exp D2 jointly convex: on mixtures of up to four pairs.
LemmaReport check_collision_convexity(const VerifyOptions& opts) {
  std::vector<double> worst(opts.trials);
  parallel_for(opts.trials, opts.threads, [&](std::size_t idx) {
    RngStream rng(opts.seed, "verify/collision-convexity", idx);
    const std::size_t d = 2 + rng.next_u64() % 3;
    const std::size_t k = 2 + rng.next_u64() % 3;
    std::vector<double> w(k);
    double total = 0.0;
    for (auto& x : w) total += (x = rng.uniform() + 1e-3);
    Matrix rho_mix = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    Matrix sigma_mix = rho_mix;
    double rhs = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double lambda = w[i] / total;
      const Matrix rho = random_density(d, rng).mat();
      const Matrix sigma = random_density(d, rng).mat();
      rho_mix += lambda * rho;
      sigma_mix += lambda * sigma;
      rhs += lambda * exp_collision(rho, sigma);
    }
    const double lhs = exp_collision(rho_mix, sigma_mix);
    worst[idx] = std::max(0.0, lhs - rhs - 1e-9 * rhs);
  });
  return make_report("collision-convexity", opts.trials, max_of(worst),
                     "mixtures of 2-4 random pairs, d = 2..4");
}

// exp D2(rho || l rho + (1-l) sigma) >= (1-eps) / (l + (1-l) 2^{-D_s^eps(rho||sigma)}).
LemmaReport check_collision_spectrum(const VerifyOptions& opts) {
  std::vector<double> worst(opts.trials);
  parallel_for(opts.trials, opts.threads, [&](std::size_t idx) {
    RngStream rng(opts.seed, "verify/collision-spectrum", idx);
    const std::size_t d = 2 + rng.next_u64() % 3;
    const DensityMatrix rho = random_density(d, rng);
    const Matrix sigma = (0.2 + 2.0 * rng.uniform()) * random_density(d, rng).mat();
    const double lambda = 0.02 + 0.96 * rng.uniform();
    const double eps = 0.02 + 0.96 * rng.uniform();
    const SpectrumValue ds = ds_eps(rho, sigma, eps);
    const double lhs = exp_collision(rho.mat(), lambda * rho.mat() + (1.0 - lambda) * sigma);
    const double rhs = (1.0 - eps) / (lambda + (1.0 - lambda) * std::exp2(-ds.bits));
    // D_s is resolved to ~1e-9 bits; allow the matching relative slack.
    worst[idx] = std::max(0.0, rhs - lhs - 1e-8 * rhs);
  });
  return make_report("collision-spectrum", opts.trials, max_of(worst),
                     "random (rho, sigma, lambda, eps), d = 2..4, slack 1e-8 relative");
}

// Flip operator identities (exact) and Haar second moments of states and
// rank-m projectors (chi^2 test on the sample mean).
LemmaReport check_flip_operator(const VerifyOptions& opts) {
  std::vector<double> exact(opts.trials);
  parallel_for(opts.trials, opts.threads, [&](std::size_t idx) {
    RngStream rng(opts.seed, "verify/flip-operator", idx);
    const std::size_t d = 2 + rng.next_u64() % 3;
    const std::size_t k = 1 + rng.next_u64() % d;
    const Subspace sub(haar_isometry(d, k, rng));
    const Matrix f = flip_operator(sub);
    // The same subspace in a rotated basis must give the same operator.
    const Subspace rotated(sub.basis() * haar_unitary(k, rng));
    double r = max_abs(flip_operator(rotated) - f);
    const Vector a = sub.basis() * haar_state(k, rng).vec();
    const Vector b = sub.basis() * haar_state(k, rng).vec();
    r = std::max(r, (f * kron(a, b) - kron(b, a)).cwiseAbs().maxCoeff());
    auto on_sub = [&] {
      Matrix g(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
      for (Eigen::Index i = 0; i < g.size(); ++i) g(i / g.cols(), i % g.cols()) = rng.complex_normal();
      return Matrix(sub.basis() * g * sub.basis().adjoint());
    };
    const Matrix x = on_sub();
    const Matrix y = on_sub();
    r = std::max(r, std::abs((x * y).trace() - (f * kron(x, y)).trace()));
    const Matrix pi = sub.projector();
    r = std::max(r, max_abs(f * f - kron(pi, pi)));
    exact[idx] = r;
  });

  struct MomentCase {
    std::size_t d;
    std::size_t m;  // 0 = pure states
  };
  const std::array<MomentCase, 5> cases{{{2, 0}, {3, 0}, {3, 1}, {3, 2}, {4, 2}}};
  std::vector<MomentTest> tests(cases.size());
  parallel_for(cases.size(), opts.threads, [&](std::size_t c) {
    const auto [d, m] = cases[c];
    RngStream rng(opts.seed, "verify/haar-moments", c);
    MatrixMomentAccumulator acc(d * d);
    for (std::size_t s = 0; s < opts.haar_samples; ++s) {
      const Matrix p = m == 0 ? haar_state(d, rng).projector() : haar_projector(d, m, rng);
      acc.add(kron(p, p));
    }
    const Subspace full = Subspace::full(d);
    const Matrix pp = kron(identity(d), identity(d));
    const Matrix f = flip_operator(full);
    const double dd = static_cast<double>(d);
    Matrix expected;
    if (m == 0) {
      expected = (pp + f) / (dd * (dd + 1.0));
    } else {
      const double mm = static_cast<double>(m);
      const double g1 = mm * (mm * dd - 1.0) / (dd * (dd * dd - 1.0));
      const double g2 = mm * (dd - mm) / (dd * (dd * dd - 1.0));
      expected = g1 * pp + g2 * f;
    }
    tests[c] = acc.compare(expected);
  });

  double violation = max_of(exact);
  std::ostringstream detail;
  detail << "exact identities max residual " << max_of(exact) << "; Haar moments";
  for (std::size_t c = 0; c < cases.size(); ++c) {
    violation = std::max(violation, tests[c].excess());
    detail << (c ? ", " : " ") << (cases[c].m == 0 ? "psi" : "P") << "(d=" << cases[c].d;
    if (cases[c].m) detail << ",m=" << cases[c].m;
    detail << ") chi2=" << tests[c].chi2 << "/" << tests[c].threshold();
  }
  return make_report("flip-operator", opts.trials + cases.size() * opts.haar_samples,
                     violation, detail.str());
}

}  // namespace

std::vector<LemmaReport> run_lemma_suite(const VerifyOptions& opts) {
  if (opts.trials < 20) throw Error(Errc::BadParameter, "verify needs at least 20 trials");
  if (opts.haar_samples < 1000) throw Error(Errc::BadParameter, "verify needs at least 1000 Haar samples");
  return {check_dephasing(opts),         check_weak_monotonicity(opts),
          check_avg_ent_fidelity(opts),  check_duality(opts),
          check_collision_convexity(opts), check_collision_spectrum(opts),
          check_flip_operator(opts)};
}

}  // namespace petzlab
