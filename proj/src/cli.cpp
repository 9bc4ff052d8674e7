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

#include "petzlab/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "petzlab/bounds.hpp"
#include "petzlab/channel.hpp"
#include "petzlab/entropy.hpp"
#include "petzlab/error.hpp"
#include "petzlab/petz.hpp"
#include "petzlab/verify.hpp"

namespace petzlab {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kCompletion = "code-state S/tr(S)";

struct Globals {
  std::optional<std::uint64_t> seed;
  std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
  std::string out_path;
  std::string format;
};

// Thrown for invalid command-line input detected after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string hex64(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << v;
  return s.str();
}

std::uint64_t resolve_seed(const Globals& g) {
  if (g.seed) return *g.seed;
  if (const char* env = std::getenv("PETZLAB_SEED")) {
    std::uint64_t v = 0;
    const std::string_view text(env);
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
      throw UsageError("PETZLAB_SEED is not an unsigned 64-bit integer");
    }
    return v;
  }
  return 0;
}

Channel load_channel(const std::string& spec) {
  try {
    return make_channel(spec);
  } catch (const Error& e) {
    throw UsageError(std::string("--channel: ") + e.what());
  }
}

Json metadata(const std::string& command, std::uint64_t seed, const std::string& spec,
              const Channel* ch) {
  Json meta;
  meta["version"] = kVersion;
  meta["command"] = command;
  meta["seed"] = seed;
  if (ch) {
    meta["channel"] = spec;
    meta["channel_hash"] = hex64(fnv1a64(channel_to_json(*ch)));
  } else {
    meta["channel"] = nullptr;
    meta["channel_hash"] = nullptr;
  }
  meta["petz_completion"] = kCompletion;
  return meta;
}

class Table {
 public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  std::string csv(const Json& meta) const {
    std::string s = "# " + meta.dump() + "\n";
    s += join(header_);
    for (const auto& r : rows_) s += join(r);
    return s;
  }

 private:
  static std::string join(const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) s += ',';
      s += csv_field(cells[i]);
    }
    return s + "\n";
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::string json_text(const Json& j) { return j.dump(2) + "\n"; }

void emit(const Globals& g, const std::string& text, std::ostream& out) {
  if (g.out_path.empty() || g.out_path == "-") {
    out << text;
    return;
  }
  std::ofstream file(g.out_path, std::ios::binary);
  if (!file) throw UsageError("cannot open output file '" + g.out_path + "'");
  file << text;
}

std::string format_or(const Globals& g, const char* fallback) {
  return g.format.empty() ? fallback : g.format;
}

DensityMatrix input_state(const std::string& which, const Channel& ch, std::uint64_t seed,
                          std::size_t threads) {
  if (which == "maxmixed") return DensityMatrix::maximally_mixed(ch.d_in());
  OptimizerOptions opts;
  opts.seed = seed;
  opts.threads = threads;
  opts.bloch_grid = 0;
  return maximize_coherent_info(ch, opts).argmax_states.front();
}

DensityMatrix tensor_power_state(const DensityMatrix& rho, std::size_t n) {
  Matrix m = rho.mat();
  for (std::size_t i = 1; i < n; ++i) {
    if (static_cast<std::size_t>(m.rows()) * rho.dim() > kMaxTensorDim) {
      throw Error(Errc::ScaleLimit, "input state tensor power exceeds dimension limit");
    }
    m = kron(m, rho.mat());
  }
  return DensityMatrix(m);
}

// ---- bound ---------------------------------------------------------------

struct BoundArgs {
  std::string channel;
  double eps = 0.0;
  std::vector<std::size_t> n;
  std::size_t restarts = 8;
};

std::string run_bound(const Globals& g, const BoundArgs& a) {
  const std::uint64_t seed = resolve_seed(g);
  const Channel ch = load_channel(a.channel);
  const DispersionSpec spec(a.eps);
  (void)spec;
  OptimizerOptions opts;
  opts.seed = seed;
  opts.threads = g.threads;
  opts.restarts = a.restarts;
  const CoherentInfoResult ic = maximize_coherent_info(ch, opts);
  const Json meta = metadata("bound", seed, a.channel, &ch);
  Table table({"n", "eps", "I_c", "V_eps", "bound_bits", "caveat"});
  Json rows = Json::array();
  for (std::size_t n : a.n) {
    const SecondOrderResult r = second_order_bound(a.eps, n, ic);
    table.add({std::to_string(r.n), number(r.eps), number(r.ic), number(r.v_eps),
               number(r.bound_bits), "O(log n) omitted"});
    rows.push_back(Json{{"n", r.n}, {"eps", r.eps}, {"I_c", r.ic}, {"V_eps", r.v_eps},
                        {"bound_bits", r.bound_bits}, {"caveat", "O(log n) omitted"}});
  }
  if (format_or(g, "csv") == "csv") return table.csv(meta);
  Json doc;
  doc["metadata"] = meta;
  doc["argmax_states"] = ic.argmax_states.size();
  doc["rows"] = rows;
  return json_text(doc);
}

// ---- oneshot -------------------------------------------------------------

struct OneShotArgs {
  std::string channel;
  std::optional<double> eps1, eps2, delta1, delta2;
  std::string split;
  std::size_t copies = 1;
  std::string state = "maxmixed";
};

Json spectrum_json(const SpectrumValue& v) {
  Json j;
  j["bits"] = v.bits;
  j["support_ok"] = v.support_ok;
  j["non_monotone"] = v.non_monotone;
  return j;
}

std::string run_oneshot(const Globals& g, const OneShotArgs& a) {
  const std::uint64_t seed = resolve_seed(g);
  const Channel single = load_channel(a.channel);
  if (!a.eps1 || !a.eps2) throw UsageError("oneshot needs --eps1 and --eps2");
  OneShotParams params;
  if (a.split == "proof") {
    if (a.delta1 || a.delta2) throw UsageError("--split proof fixes delta1/delta2; drop --delta1/--delta2");
    params = proof_split(*a.eps1, *a.eps2, a.copies);
  } else if (a.split.empty()) {
    if (!a.delta1 || !a.delta2) throw UsageError("give --delta1 and --delta2, or --split proof");
    params = OneShotParams{*a.eps1, *a.eps2, *a.delta1, *a.delta2};
  } else {
    throw UsageError("unknown --split '" + a.split + "' (known: proof)");
  }
  params.validate();
  const DensityMatrix rho1 = input_state(a.state, single, seed, g.threads);
  const Channel ch = tensor_power(single, a.copies);
  const DensityMatrix rho = tensor_power_state(rho1, a.copies);
  const OneShotResult r = one_shot_rhs(ch, rho, params);

  const Json meta = metadata("oneshot", seed, a.channel, &single);
  if (format_or(g, "json") == "csv") {
    Table table({"copies", "eps1", "eps2", "delta1", "delta2", "term1", "term2",
                 "bound_bits", "implied_eps"});
    table.add({std::to_string(a.copies), number(params.eps1), number(params.eps2),
               number(params.delta1), number(params.delta2), number(r.term1),
               number(r.term2), number(r.bound_bits), number(r.implied_eps)});
    return table.csv(meta);
  }
  Json doc;
  doc["metadata"] = meta;
  doc["copies"] = a.copies;
  doc["state"] = a.state;
  doc["eps1"] = params.eps1;
  doc["eps2"] = params.eps2;
  doc["delta1"] = params.delta1;
  doc["delta2"] = params.delta2;
  doc["term1"] = r.term1;
  doc["term2"] = r.term2;
  doc["bound_bits"] = r.bound_bits;
  doc["selected"] = r.term1 <= r.term2 ? "term1" : "term2";
  doc["implied_eps"] = r.implied_eps;
  doc["ds_delta1"] = spectrum_json(r.ds1);
  doc["ds_delta2"] = spectrum_json(r.ds2);
  return json_text(doc);
}

// ---- simulate ------------------------------------------------------------

struct SimulateArgs {
  std::string channel;
  std::optional<std::size_t> m;
  std::size_t samples = 200;
  std::string state = "maxmixed";
  std::string summary_path;
  std::size_t mc_trials = 0;
};

Json matrix_json(const Matrix& x) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < x.cols(); ++j) row.push_back(Json::array({x(i, j).real(), x(i, j).imag()}));
    rows.push_back(row);
  }
  return rows;
}

std::string run_simulate(const Globals& g, const SimulateArgs& a, std::ostream& err) {
  const std::uint64_t seed = resolve_seed(g);
  const Channel ch = load_channel(a.channel);
  const std::size_t m = a.m.value_or(ch.d_in());
  if (m == 0 || m > ch.d_in()) throw UsageError("--m must lie in [1, d_in]");
  if (a.samples == 0) throw UsageError("--samples must be positive");
  const DensityMatrix rho = input_state(a.state, ch, seed, g.threads);
  const CodeExperiment ex = random_code_experiment(ch, rho, m, a.samples, seed, g.threads);

  Json summary;
  summary["samples"] = a.samples;
  summary["m"] = m;
  summary["state"] = a.state;
  summary["mean"] = ex.mean;
  summary["min"] = ex.min;
  summary["max"] = ex.max;
  summary["q05"] = ex.q05;
  summary["q25"] = ex.q25;
  summary["median"] = ex.median;
  summary["q75"] = ex.q75;
  summary["q95"] = ex.q95;
  summary["best_index"] = ex.best_index;
  summary["best_code_basis"] = matrix_json(ex.best_code.code_basis.basis());
  if (a.mc_trials > 0) {
    if (a.mc_trials < 100) throw UsageError("--mc-trials must be 0 or at least 100");
    const PetzDecoder dec = petz_decoder(ch, ex.best_code);
    RngStream rng(seed, "simulate/mc", 0);
    const McEstimate mc = avg_fidelity_mc(ch, dec.total, ex.best_code.code_basis, a.mc_trials, rng);
    const double predicted = avg_from_ent_fidelity(ex.f_ent[ex.best_index], m);
    const double z = mc.stderr_of_mean > 0 ? (mc.mean - predicted) / mc.stderr_of_mean : 0.0;
    summary["avg_fidelity_mc"] = Json{{"trials", a.mc_trials}, {"mean", mc.mean},
                                      {"stderr", mc.stderr_of_mean},
                                      {"predicted_from_f_ent", predicted}, {"z", z}};
    if (std::abs(z) > 3.0) err << "warning: Monte-Carlo average fidelity deviates by " << z << " sigma\n";
  }

  const Json meta = metadata("simulate", seed, a.channel, &ch);
  if (!a.summary_path.empty()) {
    Json doc;
    doc["metadata"] = meta;
    doc["summary"] = summary;
    std::ofstream file(a.summary_path, std::ios::binary);
    if (!file) throw UsageError("cannot open summary file '" + a.summary_path + "'");
    file << json_text(doc);
  }
  if (format_or(g, "csv") == "csv") {
    Table table({"sample_idx", "F_ent"});
    for (std::size_t i = 0; i < ex.f_ent.size(); ++i) table.add({std::to_string(i), number(ex.f_ent[i])});
    return table.csv(meta);
  }
  Json doc;
  doc["metadata"] = meta;
  doc["f_ent"] = ex.f_ent;
  doc["summary"] = summary;
  return json_text(doc);
}

// ---- verify --------------------------------------------------------------

struct VerifyArgs {
  std::size_t trials = 100;
  std::size_t haar_samples = 100000;
  double leak = 0.0;
};

std::string run_verify(const Globals& g, const VerifyArgs& a, bool& all_pass) {
  const std::uint64_t seed = resolve_seed(g);
  if (a.trials < 20) throw UsageError("--trials must be at least 20");
  VerifyOptions opts;
  opts.seed = seed;
  opts.trials = a.trials;
  opts.threads = g.threads;
  opts.haar_samples = a.haar_samples;
  opts.dephasing_leak = a.leak;
  const std::vector<LemmaReport> reports = run_lemma_suite(opts);
  all_pass = std::all_of(reports.begin(), reports.end(), [](const LemmaReport& r) { return r.pass; });

  Json meta = metadata("verify", seed, "", nullptr);
  if (a.leak != 0.0) meta["dephasing_leak"] = a.leak;
  if (format_or(g, "csv") == "csv") {
    Table table({"lemma_id", "trials", "max_violation", "pass", "detail"});
    for (const auto& r : reports) {
      table.add({r.lemma_id, std::to_string(r.trials), number(r.max_violation),
                 r.pass ? "true" : "false", r.detail});
    }
    return table.csv(meta);
  }
  Json doc;
  doc["metadata"] = meta;
  Json list = Json::array();
  for (const auto& r : reports) {
    list.push_back(Json{{"lemma_id", r.lemma_id}, {"trials", r.trials},
                        {"max_violation", r.max_violation}, {"pass", r.pass},
                        {"detail", r.detail}});
  }
  doc["reports"] = list;
  doc["all_pass"] = all_pass;
  return json_text(doc);
}

// ---- erasure-case --------------------------------------------------------

struct ErasureArgs {
  std::vector<double> eps{0.25, 0.75};
  std::vector<std::size_t> n{100, 400, 1600, 10000};
};

std::string run_erasure_case(const Globals& g, const ErasureArgs& a, std::ostream& err) {
  const std::uint64_t seed = resolve_seed(g);
  const std::string spec = "erasure:0.5";
  const Channel ch = make_channel(spec);
  OptimizerOptions opts;
  opts.seed = seed;
  opts.threads = g.threads;
  const CoherentInfoResult ic = maximize_coherent_info(ch, opts);

  const Json meta = metadata("erasure-case", seed, spec, &ch);
  Table table({"eps", "n", "bound_bits", "regime"});
  Json rows = Json::array();
  for (double eps : a.eps) {
    if (eps == 0.5) {
      err << "warning: skipping eps = 0.5 (dispersion undefined there)\n";
      continue;
    }
    for (std::size_t n : a.n) {
      const SecondOrderResult r = second_order_bound(eps, n, ic);
      const char* regime = eps < 0.5 ? "O(1)" : "√n";
      table.add({number(eps), std::to_string(n), number(r.bound_bits), regime});
      rows.push_back(Json{{"eps", eps}, {"n", n}, {"bound_bits", r.bound_bits}, {"regime", regime}});
    }
  }
  if (format_or(g, "csv") == "csv") return table.csv(meta);
  Json doc;
  doc["metadata"] = meta;
  doc["I_c"] = ic.ic_bits;
  doc["rows"] = rows;
  return json_text(doc);
}

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::BadParams:
    case Errc::BadParameter:
    case Errc::EpsilonHalf:
    case Errc::ParseError:
    case Errc::OutOfRange:
    case Errc::ScaleLimit:
      return kExitUsage;
    default:
      return kExitNumeric;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Petz-decoder random coding, one-shot and second-order bounds", "petzlab"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);

  Globals g;
  app.add_option("--seed", g.seed, "Master seed (default: $PETZLAB_SEED, else 0)");
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out_path, "Output file (default: standard output)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  BoundArgs bound;
  auto* cmd_bound = app.add_subcommand("bound", "Second-order achievability bound over n");
  cmd_bound->add_option("--channel", bound.channel, "name:params or @file.json")->required();
  cmd_bound->add_option("--eps", bound.eps, "Error tolerance in (0,1), not 1/2")->required();
  cmd_bound->add_option("--n", bound.n, "Blocklengths, comma separated")->required()->delimiter(',');
  cmd_bound->add_option("--restarts", bound.restarts, "Random optimizer restarts");

  OneShotArgs oneshot;
  auto* cmd_oneshot = app.add_subcommand("oneshot", "One-shot achievability bound");
  cmd_oneshot->add_option("--channel", oneshot.channel, "name:params or @file.json")->required();
  cmd_oneshot->add_option("--eps1", oneshot.eps1, "eps1");
  cmd_oneshot->add_option("--eps2", oneshot.eps2, "eps2");
  cmd_oneshot->add_option("--delta1", oneshot.delta1, "delta1 < eps1");
  cmd_oneshot->add_option("--delta2", oneshot.delta2, "delta2 < eps2");
  cmd_oneshot->add_option("--split", oneshot.split, "Named delta preset (proof)");
  cmd_oneshot->add_option("--copies", oneshot.copies, "Channel uses n")->check(CLI::PositiveNumber);
  cmd_oneshot->add_option("--state", oneshot.state, "Input state")
      ->check(CLI::IsMember({"maxmixed", "optimal"}));

  SimulateArgs simulate;
  auto* cmd_simulate = app.add_subcommand("simulate", "Random codes with Petz decoding");
  cmd_simulate->add_option("--channel", simulate.channel, "name:params or @file.json")->required();
  cmd_simulate->add_option("--m", simulate.m, "Code dimension (default d_in)");
  cmd_simulate->add_option("--samples", simulate.samples, "Number of random codes");
  cmd_simulate->add_option("--state", simulate.state, "Input state")
      ->check(CLI::IsMember({"maxmixed", "optimal"}));
  cmd_simulate->add_option("--summary", simulate.summary_path, "Write summary JSON here");
  cmd_simulate->add_option("--mc-trials", simulate.mc_trials,
                           "Monte-Carlo average-fidelity cross-check on the best code");

  VerifyArgs verify;
  auto* cmd_verify = app.add_subcommand("verify", "Numerical lemma suite");
  cmd_verify->add_option("--trials", verify.trials, "Random instances per check");
  cmd_verify->add_option("--haar-samples", verify.haar_samples, "Samples per Haar moment check");
  cmd_verify->add_option("--dephasing-leak", verify.leak,
                         "Negative control: corrupt the dephasing map");

  ErasureArgs erasure;
  auto* cmd_erasure = app.add_subcommand("erasure-case", "50-50 erasure channel bound table");
  cmd_erasure->add_option("--eps", erasure.eps, "Error tolerances")->delimiter(',');
  cmd_erasure->add_option("--n", erasure.n, "Blocklengths")->delimiter(',');

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    std::string text;
    int code = kExitOk;
    if (*cmd_bound) {
      text = run_bound(g, bound);
    } else if (*cmd_oneshot) {
      text = run_oneshot(g, oneshot);
    } else if (*cmd_simulate) {
      text = run_simulate(g, simulate, err);
    } else if (*cmd_verify) {
      bool pass = true;
      text = run_verify(g, verify, pass);
      if (!pass) {
        err << "verify: at least one check failed\n";
        code = kExitVerifyFailed;
      }
    } else if (*cmd_erasure) {
      text = run_erasure_case(g, erasure, err);
    }
    emit(g, text, out);
    return code;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace petzlab
