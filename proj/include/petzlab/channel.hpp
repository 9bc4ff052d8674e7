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
#include <string>
#include <string_view>
#include <vector>

#include "petzlab/linalg.hpp"
#include "petzlab/qstate.hpp"
#include "petzlab/rng.hpp"

namespace petzlab {

/// Largest tensor-power dimension that tensor() will materialize.
inline constexpr std::size_t kMaxTensorDim = 256;

/// Completely positive map in Kraus form, K_k : C^{d_in} -> C^{d_out}.
/// Trace-preserving channels satisfy sum_k K_k^dagger K_k = I (1e-9); the
/// TraceNonIncreasing kind only requires sum_k K_k^dagger K_k <= I and is
/// used for internal building blocks such as the bare Petz map.
class Channel {
 public:
  enum class Kind { TracePreserving, TraceNonIncreasing, CompletelyPositive };

  Channel(std::size_t d_in, std::size_t d_out, std::vector<Matrix> kraus,
          Kind kind = Kind::TracePreserving);

  std::size_t d_in() const { return d_in_; }
  std::size_t d_out() const { return d_out_; }
  const std::vector<Matrix>& kraus() const { return kraus_; }
  Kind kind() const { return kind_; }

  /// max |sum_k K_k^dagger K_k - I|.
  double tp_residual() const;

 private:
  std::size_t d_in_;
  std::size_t d_out_;
  std::vector<Matrix> kraus_;
  Kind kind_;
};

struct StinespringIsometry {
  std::size_t d_in;
  std::size_t d_b;
  std::size_t d_e;
  /// (d_b * d_e) x d_in, output index b * d_e + e.
  Matrix v;
};

/// sum_k K rho K^dagger on an arbitrary operator of the input space.
Matrix apply(const Channel& ch, const Matrix& x);
DensityMatrix apply(const Channel& ch, const DensityMatrix& rho);

/// sum_k K^dagger Y K.
Matrix adjoint_apply(const Channel& ch, const Matrix& y);

/// Applies `ch` to factor B of an operator on C^{d_a} (x) H_B.
Matrix apply_on_second(const Channel& ch, const Matrix& x, std::size_t d_a);
/// Applies `ch` to factor A of an operator on H_A (x) C^{d_b}.
Matrix apply_on_first(const Channel& ch, const Matrix& x, std::size_t d_b);

StinespringIsometry stinespring(const Channel& ch);
Channel complementary(const Channel& ch);

/// (id (x) ch)(Phi_{A'A}).
DensityMatrix choi(const Channel& ch);
/// Rebuilds a Kraus representation from a Choi state.
Channel channel_from_choi(const Matrix& choi_state, std::size_t d_in,
                          std::size_t d_out);

/// Composition `second` after `first`.
Channel compose(const Channel& second, const Channel& first);

/// Kraus-level tensor product; refuses products beyond kMaxTensorDim.
Channel tensor(const Channel& a, const Channel& b);
Channel tensor_power(const Channel& ch, std::size_t n);

Channel identity_channel(std::size_t d);
/// rho -> (1-p) rho (+) 0 + p tr(rho) |e><e| with |e> the extra basis vector.
Channel erasure_channel(double p, std::size_t d = 2);
/// Qubit rho -> (1-p) rho + p Z rho Z.
Channel dephasing_channel(double p);
/// rho -> (1-p) rho + p tr(rho) I/d.
Channel depolarizing_channel(double p, std::size_t d = 2);

/// Random channel from a Haar-random Stinespring isometry.
Channel random_channel(std::size_t d_in, std::size_t d_out, std::size_t n_kraus,
                       RngStream& rng);

/// Builds a channel from "name:params" (erasure:p[:d], dephasing:p,
/// depolarizing:p[:d], identity:d) or "@path.json".
Channel make_channel(std::string_view spec);

/// Channel spec file: {"d_in": int, "d_out": int, "kraus": [matrix...]} with
/// each matrix a list of d_out rows of d_in [re, im] pairs.
Channel channel_from_json(const std::string& text);
std::string channel_to_json(const Channel& ch);

}  // namespace petzlab
