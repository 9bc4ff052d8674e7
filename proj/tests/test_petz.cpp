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

#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "petzlab/channel.hpp"
#include "petzlab/entropy.hpp"
#include "petzlab/error.hpp"
#include "petzlab/petz.hpp"

using namespace petzlab;

namespace {

Errc code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected petzlab::Error");
  return Errc::ParseError;
}

Matrix diag_projector(std::size_t d, std::size_t m) {
  Matrix p = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < m; ++i) p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
  return p;
}

Channel scaled(const Channel& ch, double factor) {
  std::vector<Matrix> kraus;
  for (const auto& k : ch.kraus()) kraus.push_back(std::sqrt(factor) * k);
  return Channel(ch.d_in(), ch.d_out(), kraus, Channel::Kind::CompletelyPositive);
}

}  // namespace

TEST_SUITE("petz") {
  TEST_CASE("build_code examples") {
    RngStream rng(5, "petz/build", 0);
    const Matrix p = haar_projector(3, 2, rng);
    const CodeSpec flat = build_code(DensityMatrix::maximally_mixed(3), p);
    CHECK(max_abs(flat.s - p) < 1e-12);
    CHECK(max_abs(flat.code_basis.projector() - p) < 1e-10);
    CHECK(flat.m == 2);

    const DensityMatrix rho = random_density(2, rng);
    const CodeSpec one = build_code(rho, haar_projector(2, 1, rng));
    CHECK(one.code_basis.dim() == 1);
    CHECK(std::abs(one.code_basis.basis().col(0).norm() - 1.0) < 1e-9);
    CHECK(numerical_rank(hermitian_eig(one.s)) == 1);

    const CodeSpec full = build_code(rho, identity(2));
    CHECK(max_abs(full.s - 2.0 * rho.mat()) < 1e-12);
    CHECK(max_abs(full.code_basis.projector() - identity(2)) < 1e-10);

    CHECK(code_of([] { build_code(DensityMatrix(oracle::diag({1, 0})), identity(2)); }) == Errc::RankDeficientRho);
    CHECK(code_of([&] { build_code(rho, 0.5 * identity(2)); }) == Errc::BadProjector);
    CHECK(code_of([&] { build_code(rho, Matrix::Zero(2, 2)); }) == Errc::BadProjector);
  }

  TEST_CASE("code basis invariants") {
    RngStream rng(5, "petz/code-invariants", 0);
    for (int t = 0; t < 20; ++t) {
      const std::size_t d = 2 + static_cast<std::size_t>(t % 3);
      const std::size_t m = 1 + rng.next_u64() % d;
      const DensityMatrix rho = random_density(d, rng);
      const Matrix p = haar_projector(d, m, rng);
      const CodeSpec code = build_code(rho, p);
      CHECK(numerical_rank(hermitian_eig(code.s)) == m);
      CHECK(max_abs(code.code_basis.projector() - support_projector(code.s)) < 1e-9);
      const Matrix w = code.code_basis.basis();
      CHECK(max_abs(w.adjoint() * w - identity(m)) < 1e-9);
      // S^{-1/2} sqrt(d rho) maps supp P isometrically.
      const Matrix root = hermitian_fn(static_cast<double>(d) * rho.mat(), [](double x) { return std::sqrt(x); }, false);
      const Matrix inv_root_s = hermitian_fn(code.s, [](double x) { return 1.0 / std::sqrt(x); }, true);
      const HermitianEig pe = hermitian_eig(p);
      for (std::size_t i = 0; i < m; ++i) {
        const Vector v = pe.vectors.col(static_cast<Eigen::Index>(i));
        CHECK(std::abs((inv_root_s * root * v).norm() - 1.0) < 1e-9);
      }
    }
  }

  TEST_CASE("Petz decoder is CPTP and recovers S") {
    RngStream rng(5, "petz/decoder", 0);
    for (int t = 0; t < 30; ++t) {
      const std::size_t d = 2 + static_cast<std::size_t>(t % 2);
      const Channel ch = random_channel(d, 2 + rng.next_u64() % 2, d, rng);
      const CodeSpec code = build_code(random_density(d, rng), haar_projector(d, 1 + rng.next_u64() % d, rng));
      const PetzDecoder dec = petz_decoder(ch, code);
      CHECK(dec.total.tp_residual() < 1e-8);
      CHECK(max_abs(petzlab::apply(dec.total, petzlab::apply(ch, code.s)) - code.s) < 1e-8);
      CHECK(max_abs(petzlab::apply(dec.base, petzlab::apply(ch, code.s)) - code.s) < 1e-8);
      const Matrix outside = identity(d) - code.code_basis.projector();
      const Matrix any = random_density(ch.d_out(), rng).mat();
      const Matrix decoded = petzlab::apply(dec.total, any);
      CHECK(std::abs(decoded.trace().real() - 1.0) < 1e-9);
      CHECK(max_abs(outside * decoded) < 1e-9);
    }
  }

  TEST_CASE("Petz decoder completion") {
    // Erasure of everything leaves N(S) rank one; the complement of its
    // support is routed to the completion state.
    const Channel ch = erasure_channel(1.0, 3);
    const CodeSpec code = build_code(DensityMatrix::maximally_mixed(3), diag_projector(3, 2));
    const PetzDecoder dec = petz_decoder(ch, code);
    const Matrix x = oracle::diag({1, 0, 0, 0});
    CHECK(max_abs(petzlab::apply(dec.total, x) - code.s / code.s.trace()) < 1e-10);
    const DensityMatrix custom(oracle::diag({1, 0, 0}));
    const PetzDecoder dec2 = petz_decoder(ch, code, custom);
    CHECK(max_abs(petzlab::apply(dec2.total, x) - custom.mat()) < 1e-10);
    CHECK(code_of([&] { petz_decoder(ch, code, DensityMatrix(oracle::diag({0, 0, 1}))); }) == Errc::SupportViolation);
    CHECK(code_of([&] { petz_decoder(identity_channel(2), code); }) == Errc::DimensionMismatch);
  }

  TEST_CASE("entanglement fidelity examples") {
    RngStream rng(5, "petz/fent", 0);
    for (std::size_t m : {1u, 2u, 3u}) {
      const CodeSpec code = build_code(random_density(3, rng), haar_projector(3, m, rng));
      const PetzDecoder dec = petz_decoder(identity_channel(3), code);
      CHECK(ent_fidelity(identity_channel(3), dec.total, code.code_basis) == doctest::Approx(1.0).epsilon(1e-10));
      const Channel gone = erasure_channel(1.0, 3);
      const PetzDecoder dec_gone = petz_decoder(gone, code);
      CHECK(ent_fidelity(gone, dec_gone.total, code.code_basis) <= 1.0 / static_cast<double>(m) + 1e-9);
    }
    CHECK(ent_fidelity(identity_channel(2), identity_channel(2), Subspace::full(2)) == doctest::Approx(1.0));
  }

  TEST_CASE("Monte-Carlo average fidelity") {
    RngStream rng(5, "petz/mc", 0);
    const McEstimate id = avg_fidelity_mc(identity_channel(2), identity_channel(2), Subspace::full(2), 200, rng);
    CHECK(id.mean == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(id.stderr_of_mean < 1e-12);

    const McEstimate dep = avg_fidelity_mc(depolarizing_channel(1.0), identity_channel(2), Subspace::full(2), 4000, rng);
    CHECK(std::abs(dep.mean - 0.5) < 3 * dep.stderr_of_mean + 1e-12);

    const Channel er = erasure_channel(0.5);
    const CodeSpec code = build_code(DensityMatrix::maximally_mixed(2), identity(2));
    const PetzDecoder dec = petz_decoder(er, code);
    const double f = ent_fidelity(er, dec.total, code.code_basis);
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
    const McEstimate mc = avg_fidelity_mc(er, dec.total, code.code_basis, 4000, rng);
    CHECK(std::abs(mc.mean - avg_from_ent_fidelity(f, 2)) < 3 * mc.stderr_of_mean + 1e-12);

    CHECK_THROWS_AS(avg_fidelity_mc(er, dec.total, code.code_basis, 99, rng), Error);
  }

  TEST_CASE("average and entanglement fidelity agree on random instances") {
    RngStream rng(5, "petz/lemma-a1", 0);
    double sum_diff = 0.0, sum_var = 0.0;
    int within = 0;
    const int instances = 50;
    for (int t = 0; t < instances; ++t) {
      const std::size_t d = 2 + static_cast<std::size_t>(t % 2);
      const std::size_t m = 1 + rng.next_u64() % d;
      const Channel ch = random_channel(d, d, 2, rng);
      const CodeSpec code = build_code(random_density(d, rng), haar_projector(d, m, rng));
      const PetzDecoder dec = petz_decoder(ch, code);
      const double predicted = avg_from_ent_fidelity(ent_fidelity(ch, dec.total, code.code_basis), m);
      const McEstimate mc = avg_fidelity_mc(ch, dec.total, code.code_basis, 400, rng);
      sum_diff += mc.mean - predicted;
      sum_var += mc.stderr_of_mean * mc.stderr_of_mean;
      if (std::abs(mc.mean - predicted) <= 3 * mc.stderr_of_mean + 1e-12) ++within;
    }
    CHECK(std::abs(sum_diff) / std::sqrt(sum_var) < 3.0);
    CHECK(within >= instances - 3);
  }

  TEST_CASE("random code experiments") {
    const CodeExperiment id = random_code_experiment(identity_channel(3), DensityMatrix::maximally_mixed(3), 2, 20, 11, 2);
    for (double f : id.f_ent) CHECK(std::abs(f - 1.0) < 1e-10);

    RngStream rng(5, "petz/experiment", 0);
    const CodeExperiment id2 = random_code_experiment(identity_channel(2), random_density(2, rng), 1, 10, 3, 1);
    for (double f : id2.f_ent) CHECK(std::abs(f - 1.0) < 1e-10);

    const CodeExperiment er = random_code_experiment(erasure_channel(0.999), DensityMatrix::maximally_mixed(2), 2, 50, 7, 2);
    CHECK(er.mean <= 0.51);

    const Channel deph = dephasing_channel(0.1);
    const CodeExperiment a = random_code_experiment(deph, DensityMatrix::maximally_mixed(2), 2, 200, 42, 1);
    const CodeExperiment b = random_code_experiment(deph, DensityMatrix::maximally_mixed(2), 2, 200, 42, 4);
    CHECK(a.f_ent == b.f_ent);
    CHECK(a.mean == b.mean);
    CHECK(a.min <= a.q05);
    CHECK(a.q05 <= a.median);
    CHECK(a.median <= a.q95);
    CHECK(a.q95 <= a.max);
    CHECK(a.f_ent[a.best_index] == a.max);
    const CodeExperiment c = random_code_experiment(deph, DensityMatrix::maximally_mixed(2), 2, 200, 43, 1);
    CHECK(a.f_ent != c.f_ent);
  }

  TEST_CASE("dephasing map identities") {
    const Matrix diag_rho = oracle::diag({0.3, 0.7});
    CHECK(max_abs(dephasing_map(identity(2), diag_rho) - diag_rho) < 1e-15);
    Matrix plus(2, 2);
    plus << 0.5, 0.5, 0.5, 0.5;
    CHECK(max_abs(dephasing_map(identity(2), plus) - identity(2) / 2.0) < 1e-15);
    CHECK(code_of([] { dephasing_map(2.0 * identity(2), identity(2)); }) == Errc::NotUnitary);

    RngStream rng(5, "petz/dephasing", 0);
    for (std::size_t d : {2u, 3u, 4u}) {
      for (int t = 0; t < 10; ++t) {
        const DephasingMap map(haar_unitary(d, rng));
        const Matrix x = oracle::random_matrix(d, d, rng);
        CHECK(max_abs(map.apply(map.apply(x)) - map.apply(x)) < 1e-10);
        CHECK(max_abs(map.apply(x) - map.clock_average(x)) < 1e-10);
        CHECK(max_abs(map.apply(x) - dephasing_map(map.u(), x)) < 1e-12);
        const Matrix z = map.clock();
        CHECK(max_abs(z * z.adjoint() - identity(d)) < 1e-12);

        Matrix expected = Matrix::Zero(static_cast<Eigen::Index>(d * d), static_cast<Eigen::Index>(d * d));
        for (std::size_t i = 0; i < d; ++i) {
          const Vector u = map.u().col(static_cast<Eigen::Index>(i));
          const Vector uu = kron(u, Vector(u.conjugate()));
          expected += uu * uu.adjoint() / static_cast<double>(d);
        }
        CHECK(max_abs(map.apply_on_first(max_entangled(d).projector(), d) - expected) < 1e-10);
      }
    }
  }

  TEST_CASE("weak monotonicity under dephasing") {
    const Matrix phi = max_entangled(2).projector();
    const DephasingMap flat(identity(2));
    const Matrix sigma = flat.apply_on_first(phi, 2);
    CHECK(verify_key_lemma(identity_channel(2), flat, sigma) <= 1e-9);

    RngStream rng(5, "petz/key-lemma", 0);
    for (std::size_t d : {2u, 3u}) {
      for (int t = 0; t < 100; ++t) {
        const std::size_t d_b = 2 + rng.next_u64() % 2;
        const std::size_t n_kraus = (d + d_b - 1) / d_b + rng.next_u64() % 2;
        const Channel lambda = random_channel(d, d_b, n_kraus, rng);
        const DephasingMap map(haar_unitary(d, rng));
        const Matrix s = clock_invariant_state(map, random_density(d * d_b, rng).mat(), d_b);
        CHECK(verify_key_lemma(lambda, map, s) <= 1e-8);
        if (t < 5) {
          CHECK(verify_key_lemma(scaled(lambda, 2.0), map, s) <= 1e-8);
          const Matrix out = apply_on_second(lambda, max_entangled(d).projector(), d);
          const Matrix out2 = apply_on_second(scaled(lambda, 2.0), max_entangled(d).projector(), d);
          CHECK(exp_collision(out2, s) == doctest::Approx(4.0 * exp_collision(out, s)).epsilon(1e-9));
        }
      }
    }

    const DephasingMap map(haar_unitary(2, rng));
    const Matrix not_invariant = random_density(4, rng).mat();
    CHECK(code_of([&] { verify_key_lemma(identity_channel(2), map, not_invariant); }) == Errc::NotInvariant);
  }
}
