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

#include <stdexcept>
#include <string>
#include <string_view>

namespace petzlab {

enum class Errc {
  NonSquare,
  NonHermitian,
  NotPSD,
  NonFinite,
  DimensionMismatch,
  RankTooLarge,
  OutOfRange,
  NotTracePreserving,
  NotUnitary,
  BadParameter,
  BadParams,
  SupportViolation,
  RankDeficientRho,
  BadProjector,
  EmptyCode,
  NotInvariant,
  ScaleLimit,
  EpsilonHalf,
  ParseError,
};

std::string_view errc_name(Errc code);

/// Single exception type for the library; `code()` tells callers which
/// contract was broken.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace petzlab
