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
#include "petzlab/error.hpp"
#include "petzlab/linalg.hpp"
#include "petzlab/qstate.hpp"

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

}  // namespace

TEST_SUITE("linalg") {
  TEST_CASE("hermitian_eig on diagonal inputs") {
    const HermitianEig eye = hermitian_eig(identity(2));
    CHECK(eye.values(0) == doctest::Approx(1.0));
    CHECK(eye.values(1) == doctest::Approx(1.0));

    Matrix z = Matrix::Zero(2, 2);
    z(0, 0) = 1.0;
    z(1, 1) = -1.0;
    const HermitianEig ez = hermitian_eig(z);
    CHECK(ez.values(0) == doctest::Approx(1.0));
    CHECK(ez.values(1) == doctest::Approx(-1.0));
  }

  TEST_CASE("hermitian_eig reconstructs random Hermitian matrices") {
    RngStream rng(1, "linalg/eig", 0);
    for (int t = 0; t < 20; ++t) {
      const Matrix a = oracle::random_hermitian(4, rng);
      const HermitianEig eig = hermitian_eig(a);
      CHECK(max_abs(eig.reconstruct() - a) < 1e-10 * max_abs(a));
      CHECK(max_abs(eig.vectors.adjoint() * eig.vectors - identity(4)) < 1e-10);
      for (Eigen::Index i = 1; i < 4; ++i) CHECK(eig.values(i - 1) >= eig.values(i));
    }
  }

  TEST_CASE("hermitian_eig rejects bad input") {
    Matrix skew = Matrix::Zero(2, 2);
    skew(0, 1) = 1.0;
    CHECK(code_of([&] { hermitian_eig(skew); }) == Errc::NonHermitian);
    CHECK(code_of([&] { hermitian_eig(Matrix::Zero(2, 3)); }) == Errc::NonSquare);
    Matrix nan = identity(2);
    nan(0, 0) = std::nan("");
    CHECK(code_of([&] { hermitian_eig(nan); }) == Errc::NonFinite);
  }

  TEST_CASE("hermitian_fn examples") {
    const Matrix s = hermitian_fn(oracle::diag({4, 9}), [](double x) { return std::sqrt(x); }, false);
    CHECK(max_abs(s - oracle::diag({2, 3})) < 1e-14);
    const Matrix inv = hermitian_fn(oracle::diag({4, 0}), [](double x) { return 1 / std::sqrt(x); }, true);
    CHECK(max_abs(inv - oracle::diag({0.5, 0})) < 1e-14);
    const Matrix lg = hermitian_fn(oracle::diag({0.5, 0.5}), [](double x) { return std::log2(x); }, false);
    CHECK(max_abs(lg - oracle::diag({-1, -1})) < 1e-14);
    CHECK(code_of([&] { hermitian_fn(oracle::diag({1, -0.1}), [](double x) { return x; }, false); }) ==
          Errc::NotPSD);
    // Tiny negative eigenvalues inside the tolerance are clamped, not rejected.
    CHECK_NOTHROW(hermitian_fn(oracle::diag({1, -1e-12}), [](double x) { return x; }, false));
  }

  TEST_CASE("square root and pseudo-inverse properties") {
    RngStream rng(1, "linalg/psd", 0);
    for (int t = 0; t < 20; ++t) {
      const Matrix g = oracle::random_matrix(4, 2 + t % 3, rng);
      const Matrix a = g * g.adjoint();  // rank-deficient for t % 3 < 2
      const Matrix r = hermitian_fn(a, [](double x) { return std::sqrt(x); }, false);
      CHECK(max_abs(r * r - a) < 1e-9 * max_abs(a));
      const Matrix inv = hermitian_fn(a, [](double x) { return 1 / x; }, true);
      CHECK(max_abs(a * inv - support_projector(a)) < 1e-9);
    }
  }

  TEST_CASE("support_projector examples") {
    CHECK(max_abs(support_projector(oracle::diag({3, 0})) - oracle::diag({1, 0})) < 1e-14);
    RngStream rng(1, "linalg/support", 0);
    CHECK(max_abs(support_projector(random_density(3, rng).mat()) - identity(3)) < 1e-10);
    const Matrix psi = haar_state(3, rng).projector();
    const Matrix p = support_projector(psi);
    CHECK(max_abs(p - psi) < 1e-10);
    CHECK(max_abs(p * p - p) < 1e-10);
  }

  TEST_CASE("partial_trace of products and the maximally entangled state") {
    RngStream rng(1, "linalg/ptrace", 0);
    const Matrix rho = random_density(2, rng).mat();
    const Matrix sigma = 3.0 * random_density(2, rng).mat();
    CHECK(max_abs(partial_trace(kron(rho, sigma), Keep::A, 2, 2) - 3.0 * rho) < 1e-12);
    CHECK(max_abs(partial_trace(kron(rho, sigma), Keep::B, 2, 2) - sigma) < 1e-12);
    const Matrix phi = max_entangled(2).projector();
    CHECK(max_abs(partial_trace(phi, Keep::A, 2, 2) - identity(2) / 2.0) < 1e-12);
    CHECK(max_abs(partial_trace(phi, Keep::A, 2, 2) - partial_trace(phi, Keep::B, 2, 2)) < 1e-12);
    CHECK_THROWS_AS(partial_trace(phi, Keep::A, 3, 2), Error);
  }

  TEST_CASE("partial_trace is linear and trace preserving") {
    RngStream rng(1, "linalg/ptrace-linear", 0);
    for (int t = 0; t < 10; ++t) {
      const Matrix x = oracle::random_matrix(6, 6, rng);
      const Matrix y = oracle::random_matrix(6, 6, rng);
      const Complex a(0.3, -1.2), b(2.0, 0.5);
      const Matrix lhs = partial_trace(a * x + b * y, Keep::A, 2, 3);
      const Matrix rhs = a * partial_trace(x, Keep::A, 2, 3) + b * partial_trace(y, Keep::A, 2, 3);
      CHECK(max_abs(lhs - rhs) < 1e-12);
      CHECK(std::abs(partial_trace(x, Keep::B, 2, 3).trace() - x.trace()) < 1e-12);
    }
  }

  TEST_CASE("multi-factor partial_trace agrees with two-factor form") {
    RngStream rng(1, "linalg/ptrace-multi", 0);
    const Matrix a = random_density(2, rng).mat();
    const Matrix b = random_density(3, rng).mat();
    const Matrix c = random_density(2, rng).mat();
    const Matrix abc = kron(kron(a, b), c);
    const std::size_t dims[] = {2, 3, 2};
    CHECK(max_abs(partial_trace(abc, dims, {true, false, true}) - kron(a, c)) < 1e-12);
    CHECK(max_abs(partial_trace(abc, dims, {false, true, false}) - b) < 1e-12);
    const Matrix x = oracle::random_matrix(12, 12, rng);
    CHECK(max_abs(partial_trace(x, dims, {true, true, false}) -
                  partial_trace(x, Keep::A, 6, 2)) < 1e-12);
  }

  TEST_CASE("nonnegative_projector keeps the zero eigenspace") {
    const Matrix p = nonnegative_projector(oracle::diag({2, 0, -1}), 1e-12);
    CHECK(max_abs(p - oracle::diag({1, 1, 0})) < 1e-14);
  }
}
