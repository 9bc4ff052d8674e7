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

#include <cstdint>
#include <random>
#include <string_view>

#include "petzlab/linalg.hpp"

namespace petzlab {

/// Reproducible random stream keyed by (master_seed, purpose tag, index).
/// Two streams with the same key produce the same sequence no matter which
/// thread or in which order they are created.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::string_view tag,
            std::uint64_t index);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal via Box-Muller; platform independent.
  double normal();
  /// Complex normal with E|z|^2 = 1.
  Complex complex_normal();
  std::uint64_t next_u64() { return engine_(); }

  /// Derives an independent child stream.
  RngStream child(std::string_view tag, std::uint64_t index) const;

 private:
  explicit RngStream(std::uint64_t key);

  std::uint64_t key_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace petzlab
