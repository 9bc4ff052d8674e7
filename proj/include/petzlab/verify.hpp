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
#include <string>
#include <vector>

namespace petzlab {

/// Outcome of one numerical lemma check; pass iff max_violation <= 1e-7.
struct LemmaReport {
  std::string lemma_id;
  std::size_t trials = 0;
  double max_violation = 0.0;
  bool pass = false;
  std::string detail;
};

inline constexpr double kLemmaTolerance = 1e-7;

struct VerifyOptions {
  std::uint64_t seed = 0;
  /// Random instances per dimension (at least 20).
  std::size_t trials = 100;
  std::size_t threads = 1;
  /// Samples for the Haar moment checks.
  std::size_t haar_samples = 100000;
  /// Negative control: mixes this fraction of the off-diagonal part back
  /// into the dephasing map.
  double dephasing_leak = 0.0;
};

/// Runs the seven checks in a fixed order: dephasing-map,
/// weak-monotonicity, avg-ent-fidelity, duality, collision-convexity,
/// collision-spectrum, flip-operator.
std::vector<LemmaReport> run_lemma_suite(const VerifyOptions& opts);

}  // namespace petzlab
