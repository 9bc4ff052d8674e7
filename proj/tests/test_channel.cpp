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
#include <cstdio>
#include <fstream>

#include "oracles.hpp"
#include "petzlab/channel.hpp"
#include "petzlab/entropy.hpp"
#include "petzlab/error.hpp"

using namespace petzlab;

namespace {

Matrix plus_state() {
  Matrix p(2, 2);
  p << 0.5, 0.5, 0.5, 0.5;
  return p;
}

std::vector<Channel> zoo(RngStream& rng) {
  return {identity_channel(3),         erasure_channel(0.3),      erasure_channel(0.5, 3),
          dephasing_channel(0.2),      depolarizing_channel(0.4), depolarizing_channel(0.7, 3),
          random_channel(2, 3, 2, rng), random_channel(3, 2, 4, rng)};
}

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

TEST_SUITE("channel") {
  TEST_CASE("constructors give CPTP channels") {
    RngStream rng(3, "channel/zoo", 0);
    for (const auto& ch : zoo(rng)) CHECK(ch.tp_residual() < 1e-9);
    CHECK(code_of([] { Channel(2, 2, {0.5 * identity(2)}); }) == Errc::NotTracePreserving);
    CHECK(code_of([] { Channel(2, 2, {identity(3)}); }) == Errc::DimensionMismatch);
    CHECK(code_of([] { erasure_channel(1.5); }) == Errc::BadParameter);
    CHECK(code_of([] { dephasing_channel(-0.1); }) == Errc::BadParameter);
  }

  TEST_CASE("apply examples") {
    RngStream rng(3, "channel/apply", 0);
    const DensityMatrix rho = random_density(2, rng);
    CHECK(max_abs(petzlab::apply(identity_channel(2), rho.mat()) - rho.mat()) < 1e-15);
    CHECK(max_abs(petzlab::apply(erasure_channel(1.0), rho.mat()) - oracle::diag({0, 0, 1})) < 1e-15);
    CHECK(max_abs(petzlab::apply(dephasing_channel(0.5), plus_state()) - identity(2) / 2.0) < 1e-15);
    CHECK(max_abs(petzlab::apply(dephasing_channel(0.0), rho.mat()) - rho.mat()) < 1e-15);
    const HermitianEig out = hermitian_eig(petzlab::apply(erasure_channel(0.5), identity(2) / 2.0));
    CHECK(out.values(0) == doctest::Approx(0.5));
    CHECK(out.values(1) == doctest::Approx(0.25));
    CHECK(out.values(2) == doctest::Approx(0.25));
    CHECK_THROWS_AS(petzlab::apply(identity_channel(2), identity(3)), Error);
  }

  TEST_CASE("erasure(0) is an isometric embedding") {
    const Channel ch = erasure_channel(0.0);
    RngStream rng(3, "channel/erasure0", 0);
    const Matrix rho = random_density(2, rng).mat();
    CHECK(max_abs(petzlab::apply(ch, rho).topLeftCorner(2, 2) - rho) < 1e-15);
    CHECK(std::abs(petzlab::apply(ch, rho)(2, 2)) < 1e-15);
  }

  TEST_CASE("apply preserves trace and positivity") {
    RngStream rng(3, "channel/apply-tp", 0);
    for (const auto& ch : zoo(rng)) {
      const DensityMatrix rho = random_density(ch.d_in(), rng);
      const Matrix out = petzlab::apply(ch, rho.mat());
      CHECK(std::abs(out.trace().real() - 1.0) < 1e-10);
      CHECK(hermitian_eig(out).values.minCoeff() > -1e-12);
    }
  }

  TEST_CASE("adjoint duality and unitality") {
    RngStream rng(3, "channel/adjoint", 0);
    for (const auto& ch : zoo(rng)) {
      CHECK(max_abs(adjoint_apply(ch, identity(ch.d_out())) - identity(ch.d_in())) < 1e-10);
      for (int t = 0; t < 100; ++t) {
        const Matrix x = oracle::random_matrix(ch.d_in(), ch.d_in(), rng);
        const Matrix y = oracle::random_matrix(ch.d_out(), ch.d_out(), rng);
        CHECK(std::abs(hs_inner(petzlab::apply(ch, x), y) - hs_inner(x, adjoint_apply(ch, y))) < 1e-9);
      }
    }
    const Matrix y = oracle::random_matrix(2, 2, rng);
    CHECK(max_abs(adjoint_apply(identity_channel(2), y) - y) < 1e-15);
  }

  TEST_CASE("Stinespring isometry") {
    RngStream rng(3, "channel/stinespring", 0);
    const StinespringIsometry id = stinespring(identity_channel(2));
    CHECK(id.d_e == 1);
    CHECK(max_abs(id.v - identity(2)) < 1e-15);
    CHECK(stinespring(dephasing_channel(0.3)).d_e == 2);
    for (const auto& ch : zoo(rng)) {
      const StinespringIsometry iso = stinespring(ch);
      CHECK(max_abs(iso.v.adjoint() * iso.v - identity(ch.d_in())) < 1e-9);
      const Matrix rho = random_density(ch.d_in(), rng).mat();
      const Matrix big = iso.v * rho * iso.v.adjoint();
      CHECK(max_abs(partial_trace(big, Keep::A, iso.d_b, iso.d_e) - petzlab::apply(ch, rho)) < 1e-10);
    }
    const Channel sub(2, 2, {0.5 * identity(2)}, Channel::Kind::TraceNonIncreasing);
    CHECK(code_of([&] { stinespring(sub); }) == Errc::NotTracePreserving);
  }

  TEST_CASE("complementary channel") {
    RngStream rng(3, "channel/complementary", 0);
    const Channel c_id = complementary(identity_channel(2));
    CHECK(c_id.d_out() == 1);
    CHECK(std::abs(petzlab::apply(c_id, random_density(2, rng).mat())(0, 0) - 1.0) < 1e-12);

    for (const auto& ch : zoo(rng)) {
      const Channel comp = complementary(ch);
      CHECK(comp.tp_residual() < 1e-9);
      const StinespringIsometry iso = stinespring(ch);
      const Matrix rho = random_density(ch.d_in(), rng).mat();
      const Matrix big = iso.v * rho * iso.v.adjoint();
      CHECK(max_abs(partial_trace(big, Keep::B, iso.d_b, iso.d_e) - petzlab::apply(comp, rho)) < 1e-10);
    }

    // The 50-50 erasure channel is symmetric: both outputs share a spectrum.
    const Channel er = erasure_channel(0.5);
    const Channel er_c = complementary(er);
    for (int t = 0; t < 10; ++t) {
      const Matrix rho = random_density(2, rng).mat();
      const HermitianEig a = hermitian_eig(petzlab::apply(er, rho));
      const HermitianEig b = hermitian_eig(petzlab::apply(er_c, rho));
      CHECK((a.values - b.values).cwiseAbs().maxCoeff() < 1e-10);
    }
  }

  TEST_CASE("Choi state") {
    CHECK(max_abs(choi(identity_channel(2)).mat() - max_entangled(2).projector()) < 1e-15);
    CHECK(max_abs(choi(depolarizing_channel(1.0)).mat() - identity(4) / 4.0) < 1e-15);
    RngStream rng(3, "channel/choi", 0);
    for (const auto& ch : zoo(rng)) {
      const Matrix j = choi(ch).mat();
      CHECK(max_abs(partial_trace(j, Keep::A, ch.d_in(), ch.d_out()) -
                    identity(ch.d_in()) / static_cast<double>(ch.d_in())) < 1e-10);
      const Channel back = channel_from_choi(j, ch.d_in(), ch.d_out());
      for (int t = 0; t < 5; ++t) {
        const Matrix rho = random_density(ch.d_in(), rng).mat();
        CHECK(max_abs(petzlab::apply(back, rho) - petzlab::apply(ch, rho)) < 1e-8);
      }
    }
  }

  TEST_CASE("compose and tensor") {
    RngStream rng(3, "channel/tensor", 0);
    const Channel a = random_channel(2, 2, 2, rng);
    const Channel b = random_channel(2, 3, 2, rng);
    const Matrix rho = random_density(2, rng).mat();
    const Matrix sigma = random_density(2, rng).mat();
    CHECK(max_abs(petzlab::apply(tensor(a, b), kron(rho, sigma)) - kron(petzlab::apply(a, rho), petzlab::apply(b, sigma))) < 1e-10);
    CHECK(max_abs(petzlab::apply(compose(b, a), rho) - petzlab::apply(b, petzlab::apply(a, rho))) < 1e-12);
    const Channel sq = tensor_power(dephasing_channel(0.1), 3);
    CHECK(sq.d_in() == 8);
    CHECK(sq.tp_residual() < 1e-12);
    CHECK(code_of([] { tensor_power(erasure_channel(0.5), 6); }) == Errc::ScaleLimit);
  }

  TEST_CASE("make_channel parses specs") {
    CHECK(make_channel("erasure:0.5").d_out() == 3);
    CHECK(make_channel("erasure:0.5:3").d_out() == 4);
    CHECK(make_channel("identity:4").d_in() == 4);
    CHECK(make_channel("depolarizing:0.2:3").d_in() == 3);
    CHECK(make_channel("dephasing:0.1").kraus().size() == 2);
    CHECK(code_of([] { make_channel("teleport:0.1"); }) == Errc::ParseError);
    CHECK(code_of([] { make_channel("erasure:abc"); }) == Errc::ParseError);
    CHECK(code_of([] { make_channel("erasure"); }) == Errc::ParseError);
    CHECK(code_of([] { make_channel("dephasing:2"); }) == Errc::BadParameter);
    CHECK(code_of([] { make_channel("@/nonexistent/file.json"); }) == Errc::ParseError);
  }

  TEST_CASE("JSON round trip through a spec file") {
    RngStream rng(3, "channel/json", 0);
    const Channel ch = random_channel(2, 3, 2, rng);
    const std::string path = "petzlab_test_channel.json";
    {
      std::ofstream f(path);
      f << channel_to_json(ch);
    }
    const Channel back = make_channel("@" + path);
    std::remove(path.c_str());
    REQUIRE(back.kraus().size() == ch.kraus().size());
    for (std::size_t k = 0; k < ch.kraus().size(); ++k) CHECK(max_abs(back.kraus()[k] - ch.kraus()[k]) == 0.0);
    CHECK(code_of([] { channel_from_json("{\"d_in\": 2}"); }) == Errc::ParseError);
    CHECK(code_of([] { channel_from_json("not json"); }) == Errc::ParseError);
    CHECK(code_of([] {
      channel_from_json(R"({"d_in":1,"d_out":1,"kraus":[[[[0.5,0]]]]})");
    }) == Errc::NotTracePreserving);
  }
}
