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

#include "petzlab/channel.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "petzlab/error.hpp"

namespace petzlab {

namespace {

constexpr double kCptpTol = 1e-9;

Matrix kraus_sum(const std::vector<Matrix>& kraus, std::size_t d_in) {
  Matrix acc = Matrix::Zero(static_cast<Eigen::Index>(d_in),
                            static_cast<Eigen::Index>(d_in));
  for (const auto& k : kraus) acc += k.adjoint() * k;
  return acc;
}

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream msg;
    msg << what << ": parameter " << p << " outside [0, 1]";
    throw Error(Errc::BadParameter, msg.str());
  }
}

}  // namespace

Channel::Channel(std::size_t d_in, std::size_t d_out, std::vector<Matrix> kraus,
                 Kind kind)
    : d_in_(d_in), d_out_(d_out), kraus_(std::move(kraus)), kind_(kind) {
  if (d_in_ == 0 || d_out_ == 0) {
    throw Error(Errc::DimensionMismatch, "Channel: dimensions must be positive");
  }
  if (kraus_.empty()) throw Error(Errc::BadParameter, "Channel: no Kraus operators");
  for (const auto& k : kraus_) {
    if (static_cast<std::size_t>(k.rows()) != d_out_ ||
        static_cast<std::size_t>(k.cols()) != d_in_) {
      std::ostringstream msg;
      msg << "Channel: Kraus operator is " << k.rows() << "x" << k.cols()
          << ", expected " << d_out_ << "x" << d_in_;
      throw Error(Errc::DimensionMismatch, msg.str());
    }
    if (!all_finite(k)) throw Error(Errc::NonFinite, "Channel: NaN/Inf in Kraus operator");
  }
  switch (kind_) {
    case Kind::TracePreserving:
      if (tp_residual() > kCptpTol) {
        std::ostringstream msg;
        msg << "Channel: |sum K^dagger K - I| = " << tp_residual();
        throw Error(Errc::NotTracePreserving, msg.str());
      }
      break;
    case Kind::TraceNonIncreasing: {
      const Matrix gap = identity(d_in_) - kraus_sum(kraus_, d_in_);
      Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (gap + gap.adjoint()),
                                                   Eigen::EigenvaluesOnly);
      if (solver.eigenvalues()(0) < -kCptpTol) {
        throw Error(Errc::NotTracePreserving, "Channel: trace increasing");
      }
      break;
    }
    case Kind::CompletelyPositive:
      break;
  }
}

double Channel::tp_residual() const {
  return max_abs(kraus_sum(kraus_, d_in_) - identity(d_in_));
}

Matrix apply(const Channel& ch, const Matrix& x) {
  if (static_cast<std::size_t>(x.rows()) != ch.d_in() || x.rows() != x.cols()) {
    throw Error(Errc::DimensionMismatch, "apply: operator does not match channel input");
  }
  const auto d = static_cast<Eigen::Index>(ch.d_out());
  Matrix out = Matrix::Zero(d, d);
  for (const auto& k : ch.kraus()) out.noalias() += k * x * k.adjoint();
  return out;
}

DensityMatrix apply(const Channel& ch, const DensityMatrix& rho) {
  return DensityMatrix(apply(ch, rho.mat()));
}

Matrix adjoint_apply(const Channel& ch, const Matrix& y) {
  if (static_cast<std::size_t>(y.rows()) != ch.d_out() || y.rows() != y.cols()) {
    throw Error(Errc::DimensionMismatch, "adjoint_apply: operator does not match channel output");
  }
  const auto d = static_cast<Eigen::Index>(ch.d_in());
  Matrix out = Matrix::Zero(d, d);
  for (const auto& k : ch.kraus()) out.noalias() += k.adjoint() * y * k;
  return out;
}

Matrix apply_on_second(const Channel& ch, const Matrix& x, std::size_t d_a) {
  if (static_cast<std::size_t>(x.rows()) != d_a * ch.d_in()) {
    throw Error(Errc::DimensionMismatch, "apply_on_second: dimension mismatch");
  }
  const Matrix eye = identity(d_a);
  const auto d = static_cast<Eigen::Index>(d_a * ch.d_out());
  Matrix out = Matrix::Zero(d, d);
  for (const auto& k : ch.kraus()) {
    const Matrix big = kron(eye, k);
    out.noalias() += big * x * big.adjoint();
  }
  return out;
}

Matrix apply_on_first(const Channel& ch, const Matrix& x, std::size_t d_b) {
  if (static_cast<std::size_t>(x.rows()) != d_b * ch.d_in()) {
    throw Error(Errc::DimensionMismatch, "apply_on_first: dimension mismatch");
  }
  const Matrix eye = identity(d_b);
  const auto d = static_cast<Eigen::Index>(d_b * ch.d_out());
  Matrix out = Matrix::Zero(d, d);
  for (const auto& k : ch.kraus()) {
    const Matrix big = kron(k, eye);
    out.noalias() += big * x * big.adjoint();
  }
  return out;
}

StinespringIsometry stinespring(const Channel& ch) {
  if (ch.kind() != Channel::Kind::TracePreserving) {
    throw Error(Errc::NotTracePreserving, "stinespring: channel is not CPTP");
  }
  StinespringIsometry iso{ch.d_in(), ch.d_out(), ch.kraus().size(), {}};
  const auto d_e = static_cast<Eigen::Index>(iso.d_e);
  iso.v = Matrix::Zero(static_cast<Eigen::Index>(iso.d_b) * d_e,
                       static_cast<Eigen::Index>(iso.d_in));
  for (Eigen::Index k = 0; k < d_e; ++k) {
    const Matrix& kr = ch.kraus()[static_cast<std::size_t>(k)];
    for (Eigen::Index b = 0; b < kr.rows(); ++b) iso.v.row(b * d_e + k) = kr.row(b);
  }
  return iso;
}

Channel complementary(const Channel& ch) {
  const StinespringIsometry iso = stinespring(ch);
  const auto d_e = static_cast<Eigen::Index>(iso.d_e);
  std::vector<Matrix> kraus;
  kraus.reserve(iso.d_b);
  for (Eigen::Index b = 0; b < static_cast<Eigen::Index>(iso.d_b); ++b) {
    kraus.push_back(iso.v.middleRows(b * d_e, d_e));
  }
  return Channel(iso.d_in, iso.d_e, std::move(kraus));
}

DensityMatrix choi(const Channel& ch) {
  const PureState phi = max_entangled(ch.d_in());
  return DensityMatrix(apply_on_second(ch, phi.projector(), ch.d_in()));
}

Channel channel_from_choi(const Matrix& choi_state, std::size_t d_in,
                          std::size_t d_out) {
  if (static_cast<std::size_t>(choi_state.rows()) != d_in * d_out) {
    throw Error(Errc::DimensionMismatch, "channel_from_choi: dimension mismatch");
  }
  const HermitianEig eig = hermitian_eig(choi_state * static_cast<double>(d_in));
  const std::size_t rank = numerical_rank(eig);
  std::vector<Matrix> kraus;
  for (std::size_t k = 0; k < rank; ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    const double weight = std::sqrt(eig.values(kk));
    Matrix op(static_cast<Eigen::Index>(d_out), static_cast<Eigen::Index>(d_in));
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(d_in); ++i)
      for (Eigen::Index b = 0; b < static_cast<Eigen::Index>(d_out); ++b)
        op(b, i) = weight * eig.vectors(i * static_cast<Eigen::Index>(d_out) + b, kk);
    kraus.push_back(std::move(op));
  }
  return Channel(d_in, d_out, std::move(kraus));
}

Channel compose(const Channel& second, const Channel& first) {
  if (second.d_in() != first.d_out()) {
    throw Error(Errc::DimensionMismatch, "compose: output/input dimensions differ");
  }
  std::vector<Matrix> kraus;
  kraus.reserve(second.kraus().size() * first.kraus().size());
  for (const auto& a : second.kraus())
    for (const auto& b : first.kraus()) kraus.push_back(a * b);
  const bool tp = second.kind() == Channel::Kind::TracePreserving &&
                  first.kind() == Channel::Kind::TracePreserving;
  const bool cp_only = second.kind() == Channel::Kind::CompletelyPositive ||
                       first.kind() == Channel::Kind::CompletelyPositive;
  const auto kind = tp ? Channel::Kind::TracePreserving
                       : (cp_only ? Channel::Kind::CompletelyPositive
                                  : Channel::Kind::TraceNonIncreasing);
  return Channel(first.d_in(), second.d_out(), std::move(kraus), kind);
}

Channel tensor(const Channel& a, const Channel& b) {
  const std::size_t d_in = a.d_in() * b.d_in();
  const std::size_t d_out = a.d_out() * b.d_out();
  if (d_in > kMaxTensorDim || d_out > kMaxTensorDim) {
    std::ostringstream msg;
    msg << "tensor: product dimension " << std::max(d_in, d_out)
        << " exceeds limit " << kMaxTensorDim;
    throw Error(Errc::ScaleLimit, msg.str());
  }
  std::vector<Matrix> kraus;
  kraus.reserve(a.kraus().size() * b.kraus().size());
  for (const auto& ka : a.kraus())
    for (const auto& kb : b.kraus()) kraus.push_back(kron(ka, kb));
  const bool tp = a.kind() == Channel::Kind::TracePreserving &&
                  b.kind() == Channel::Kind::TracePreserving;
  return Channel(d_in, d_out, std::move(kraus),
                 tp ? Channel::Kind::TracePreserving
                    : Channel::Kind::CompletelyPositive);
}

Channel tensor_power(const Channel& ch, std::size_t n) {
  if (n == 0) throw Error(Errc::BadParameter, "tensor_power: n must be >= 1");
  Channel out = ch;
  for (std::size_t i = 1; i < n; ++i) out = tensor(out, ch);
  return out;
}

Channel identity_channel(std::size_t d) {
  if (d == 0) throw Error(Errc::BadParameter, "identity_channel: d must be >= 1");
  return Channel(d, d, {identity(d)});
}

Channel erasure_channel(double p, std::size_t d) {
  check_probability(p, "erasure");
  if (d == 0) throw Error(Errc::BadParameter, "erasure: d must be >= 1");
  const auto n = static_cast<Eigen::Index>(d);
  std::vector<Matrix> kraus;
  Matrix keep = Matrix::Zero(n + 1, n);
  keep.topRows(n) = std::sqrt(1.0 - p) * Matrix::Identity(n, n);
  kraus.push_back(keep);
  for (Eigen::Index j = 0; j < n; ++j) {
    Matrix erase = Matrix::Zero(n + 1, n);
    erase(n, j) = std::sqrt(p);
    kraus.push_back(erase);
  }
  return Channel(d, d + 1, std::move(kraus));
}

Channel dephasing_channel(double p) {
  check_probability(p, "dephasing");
  Matrix z = Matrix::Zero(2, 2);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  return Channel(2, 2, {std::sqrt(1.0 - p) * identity(2), std::sqrt(p) * z});
}

Channel depolarizing_channel(double p, std::size_t d) {
  check_probability(p, "depolarizing");
  if (d == 0) throw Error(Errc::BadParameter, "depolarizing: d must be >= 1");
  const auto n = static_cast<Eigen::Index>(d);
  std::vector<Matrix> kraus{std::sqrt(1.0 - p) * identity(d)};
  const double w = std::sqrt(p / static_cast<double>(d));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      Matrix op = Matrix::Zero(n, n);
      op(i, j) = w;
      kraus.push_back(op);
    }
  return Channel(d, d, std::move(kraus));
}

Channel random_channel(std::size_t d_in, std::size_t d_out, std::size_t n_kraus,
                       RngStream& rng) {
  const Matrix v = haar_isometry(d_out * n_kraus, d_in, rng);
  const auto ne = static_cast<Eigen::Index>(n_kraus);
  std::vector<Matrix> kraus(n_kraus, Matrix(static_cast<Eigen::Index>(d_out),
                                            static_cast<Eigen::Index>(d_in)));
  for (Eigen::Index b = 0; b < static_cast<Eigen::Index>(d_out); ++b)
    for (Eigen::Index k = 0; k < ne; ++k)
      kraus[static_cast<std::size_t>(k)].row(b) = v.row(b * ne + k);
  return Channel(d_in, d_out, std::move(kraus));
}

namespace {

double parse_number(const std::string& text, std::string_view spec) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw Error(Errc::ParseError,
                "channel spec '" + std::string(spec) + "': bad number '" + text + "'");
  }
  return value;
}

std::size_t parse_dim(const std::string& text, std::string_view spec) {
  const double v = parse_number(text, spec);
  if (v < 1.0 || v != std::floor(v) || v > static_cast<double>(kMaxTensorDim)) {
    throw Error(Errc::BadParameter,
                "channel spec '" + std::string(spec) + "': bad dimension '" + text + "'");
  }
  return static_cast<std::size_t>(v);
}

}  // namespace

Channel make_channel(std::string_view spec) {
  if (!spec.empty() && spec.front() == '@') {
    const std::string path(spec.substr(1));
    std::ifstream in(path);
    if (!in) throw Error(Errc::ParseError, "cannot open channel file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return channel_from_json(buffer.str());
  }
  std::vector<std::string> parts;
  std::string current;
  for (char c : spec) {
    if (c == ':') {
      parts.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  parts.push_back(current);
  const std::string& name = parts[0];
  auto arity = [&](std::size_t lo, std::size_t hi) {
    if (parts.size() - 1 < lo || parts.size() - 1 > hi) {
      throw Error(Errc::ParseError, "channel spec '" + std::string(spec) +
                                        "': wrong number of parameters");
    }
  };
  if (name == "identity") {
    arity(0, 1);
    return identity_channel(parts.size() > 1 ? parse_dim(parts[1], spec) : 2);
  }
  if (name == "erasure") {
    arity(1, 2);
    const std::size_t d = parts.size() > 2 ? parse_dim(parts[2], spec) : 2;
    return erasure_channel(parse_number(parts[1], spec), d);
  }
  if (name == "dephasing") {
    arity(1, 1);
    return dephasing_channel(parse_number(parts[1], spec));
  }
  if (name == "depolarizing") {
    arity(1, 2);
    const std::size_t d = parts.size() > 2 ? parse_dim(parts[2], spec) : 2;
    return depolarizing_channel(parse_number(parts[1], spec), d);
  }
  throw Error(Errc::ParseError, "unknown channel '" + name + "'");
}

Channel channel_from_json(const std::string& text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, std::string("channel file: ") + e.what());
  }
  try {
    const auto d_in = doc.at("d_in").get<std::size_t>();
    const auto d_out = doc.at("d_out").get<std::size_t>();
    std::vector<Matrix> kraus;
    for (const auto& jm : doc.at("kraus")) {
      if (jm.size() != d_out) throw Error(Errc::ParseError, "channel file: wrong row count");
      Matrix k(static_cast<Eigen::Index>(d_out), static_cast<Eigen::Index>(d_in));
      for (std::size_t r = 0; r < d_out; ++r) {
        const auto& row = jm.at(r);
        if (row.size() != d_in) throw Error(Errc::ParseError, "channel file: wrong column count");
        for (std::size_t c = 0; c < d_in; ++c) {
          const auto& z = row.at(c);
          if (z.size() != 2) throw Error(Errc::ParseError, "channel file: entries must be [re, im]");
          k(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
              Complex(z.at(0).get<double>(), z.at(1).get<double>());
        }
      }
      kraus.push_back(std::move(k));
    }
    return Channel(d_in, d_out, std::move(kraus));
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, std::string("channel file: ") + e.what());
  }
}

std::string channel_to_json(const Channel& ch) {
  using nlohmann::json;
  json doc;
  doc["d_in"] = ch.d_in();
  doc["d_out"] = ch.d_out();
  json list = json::array();
  for (const auto& k : ch.kraus()) {
    json jm = json::array();
    for (Eigen::Index r = 0; r < k.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < k.cols(); ++c)
        row.push_back(json::array({k(r, c).real(), k(r, c).imag()}));
      jm.push_back(std::move(row));
    }
    list.push_back(std::move(jm));
  }
  doc["kraus"] = std::move(list);
  return doc.dump();
}

}  // namespace petzlab
