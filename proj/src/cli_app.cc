// Copyright 2026 The cqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "cqc/cli_app.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "cqc/dense_oracle.h"
#include "cqc/errors.h"
#include "cqc/injection_site.h"
#include "cqc/landscape.h"
#include "cqc/memory_experiment.h"
#include "cqc/noise_thresholds.h"
#include "cqc/peps_sampler.h"
#include "cqc/rhg_lattice.h"
#include "cqc/saw_census.h"
#include "cqc/stabilizer_engine.h"
#include "json.hpp"

namespace cqc::cli {

namespace {

using nlohmann::json;

const std::array<std::string_view, 7> kCommands = {"census",   "thresholds",   "landscape", "simulate",
                                                   "verify",   "oracle-check", "reproduce"};

// Published chain counts by length (index 0 unused).
constexpr std::array<std::uint64_t, 15> kReferencePrimal = {0, 1, 0, 0, 7, 0, 106, 0, 1520, 0, 24220, 0, 409208, 0, 7165474};
constexpr std::array<std::uint64_t, 15> kReferenceDual = {0,     0,      0,      4,       8,       52,       200,     1060,
                                                          4084,  23128,  90636,  507936,  2039320, 11220284, 45854572};
constexpr double kReferenceCrossing = 0.0144;
constexpr double kReferenceCrossingTolerance = 0.002;

std::string hex64(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << v;
  return s.str();
}

std::string number(double v) {
  std::ostringstream s;
  s << std::setprecision(12) << v;
  return s.str();
}

bool is_command(std::string_view s) { return std::find(kCommands.begin(), kCommands.end(), s) != kCommands.end(); }

struct Context {
  std::ostream& out;
  std::ostream& err;
  bool quiet = false;
  unsigned threads = 0;
  std::string command;
  json config = json::object();
  std::optional<std::uint64_t> seed;

  std::string config_hash() const { return hex64(fnv1a64(config.dump())); }

  json envelope(json result) const {
    json j;
    j["schema_version"] = kReportSchemaVersion;
    j["command"] = command;
    j["geometry_version"] = kInjectionGeometryVersion;
    j["config"] = config;
    j["config_hash"] = config_hash();
    j["seed"] = seed ? json(*seed) : json(nullptr);
    j["result"] = std::move(result);
    return j;
  }

  std::string csv_preamble() const {
    return "# cqc schema_version=" + std::to_string(kReportSchemaVersion) + " command=" + command +
           " config_hash=" + config_hash() + " geometry_version=" + kInjectionGeometryVersion +
           " seed=" + (seed ? std::to_string(*seed) : std::string("none")) + "\n";
  }

  void emit(const std::string& path, const std::string& text) const {
    if (path.empty()) {
      out << text;
      if (!text.empty() && text.back() != '\n') out << '\n';
      return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot write output file " + path);
    f << text;
    if (!text.empty() && text.back() != '\n') f << '\n';
    if (!f) throw ConfigError("cannot write output file " + path);
  }

  void emit_json(const std::string& path, json result) const { emit(path, envelope(std::move(result)).dump(2)); }
};

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read " + path);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::string scalar_token(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number() || v.is_boolean()) return v.dump();
  throw ConfigError("config values must be scalars or arrays of scalars");
}

// Splices the values of a --config JSON file in right after the command token, so that
// flags given on the command line (which come later) take precedence.
std::vector<std::string> merge_config_file(std::vector<std::string> args) {
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw ConfigError("--config needs a file");
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (!path) return args;
  json j;
  try {
    j = json::parse(read_file(*path));
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + *path + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");

  auto cmd = std::find_if(args.begin(), args.end(), [](const std::string& s) { return is_command(s); });
  if (cmd == args.end()) {
    if (!j.contains("command") || !j["command"].is_string()) throw ConfigError("no command given");
    args.insert(args.begin(), j["command"].get<std::string>());
    cmd = args.begin();
  } else if (j.contains("command") && j["command"] != *cmd) {
    throw ConfigError("config file is for command " + j["command"].dump() + ", not " + *cmd);
  }
  bool has_positional = cmd + 1 != args.end() && !(cmd + 1)->empty() && (*(cmd + 1))[0] != '-';
  std::vector<std::string> tokens;
  for (const auto& [key, v] : j.items()) {
    if (key == "command" || v.is_null()) continue;
    if (key == "manifest") {
      if (!has_positional) tokens.insert(tokens.begin(), scalar_token(v));
      continue;
    }
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    if (v.is_boolean()) {
      if (v.get<bool>()) tokens.push_back(flag);
    } else if (v.is_array()) {
      tokens.push_back(flag);
      for (const auto& e : v) tokens.push_back(scalar_token(e));
    } else {
      tokens.push_back(flag);
      tokens.push_back(scalar_token(v));
    }
  }
  args.insert(cmd + 1, tokens.begin(), tokens.end());
  return args;
}

// ---- census helpers -------------------------------------------------------

WalkCensus run_census(const Context& c, ChainKind kind, int max_len, bool reference = false, int hard_cap = 16,
                      bool allow_above_cap = false) {
  if (max_len < 1) throw ConfigError("max-len must be >= 1");
  auto site = injection_site(build_lattice(census_lattice_dims(max_len), Boundary::kOpen));
  if (reference) return enumerate_chains_reference(site, kind, max_len);
  EnumerationOptions opts;
  opts.hard_cap = hard_cap;
  opts.allow_above_cap = allow_above_cap;
  opts.workers = c.threads;
  auto mutex = std::make_shared<std::mutex>();
  if (!c.quiet) {
    std::string label = std::string(to_string(kind));
    std::ostream* err = &c.err;
    auto last = std::make_shared<std::size_t>(0);
    opts.progress = [mutex, last, err, label, max_len](std::size_t done, std::size_t total) {
      std::lock_guard lock(*mutex);
      std::size_t pct = total ? done * 100 / total : 100;
      if (pct == *last && done != total) return;
      *last = pct;
      *err << "\rcensus " << label << " L<=" << max_len << ": " << pct << "%" << std::flush;
      if (done == total) *err << "\n";
    };
  }
  return enumerate_chains(site, kind, max_len, opts);
}

// Error polynomials from a census file, or from fresh enumeration up to census_len.
ErrorPolynomials census_polynomials(const Context& c, const std::string& census_path, int census_len) {
  std::optional<WalkCensus> primal, dual;
  if (!census_path.empty()) {
    std::string text = read_file(census_path);
    auto first = text.find_first_not_of(" \t\r\n");
    std::vector<WalkCensus> all;
    if (first != std::string::npos && text[first] == '{') {
      // Accept both a bare census and a `cqc census --format json` report.
      json j;
      try {
        j = json::parse(text);
      } catch (const json::parse_error& e) {
        throw ConfigError("census file " + census_path + ": " + e.what());
      }
      all = census_from_json(j.contains("result") ? j["result"].dump() : text);
    } else {
      all = census_from_csv(text);
    }
    for (auto& w : all) (w.kind == ChainKind::kPrimal ? primal : dual) = w;
    if (!primal || !dual) throw ConfigError("census file must contain both primal and dual counts");
  } else {
    primal = run_census(c, ChainKind::kPrimal, census_len);
    dual = run_census(c, ChainKind::kDual, census_len);
  }
  return census_to_polynomials(*primal, *dual, std::min(primal->max_len, dual->max_len));
}

double resolve_q_limit(const Context& c, const std::string& spec, const std::string& census_path, int census_len) {
  if (spec == "depth4") return solve_depth4_boundary(census_polynomials(c, census_path, census_len)).solved_value;
  if (spec == "octahedron") return distillation_threshold();
  double v = 0;
  try {
    std::size_t used = 0;
    v = std::stod(spec, &used);
    if (used != spec.size()) throw std::invalid_argument(spec);
  } catch (const std::exception&) {
    throw ConfigError("q-limit must be depth4, octahedron or a number, got '" + spec + "'");
  }
  if (!(v >= 0 && v <= 0.5)) throw ConfigError("q-limit outside [0, 1/2]");
  return v;
}

json report_json(const ThresholdReport& r) {
  json j;
  j["name"] = r.name;
  j["solved_value"] = r.solved_value;
  j["published_value"] = r.published_value ? json(*r.published_value) : json(nullptr);
  j["method"] = r.method == SolveMethod::kClosedForm ? "closed-form" : "root-find";
  j["residual"] = r.residual;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

ThresholdReport distillation_report() {
  ThresholdReport r;
  r.name = "magic-state-distillation";
  r.solved_value = distillation_threshold();
  r.method = SolveMethod::kClosedForm;
  return r;
}

// ---- commands ----------------------------------------------------------------

struct CensusParams {
  int max_len = 12;
  std::string kind = "both";
  bool reference = false;
  int hard_cap = 16;
  bool allow_above_cap = false;
  std::string format = "csv";
  std::string out;
};

int do_census(Context& c, const CensusParams& p) {
  c.config.update({{"max_len", p.max_len}, {"kind", p.kind}, {"reference", p.reference}, {"format", p.format}});
  std::vector<ChainKind> kinds;
  if (p.kind == "both") {
    kinds = {ChainKind::kPrimal, ChainKind::kDual};
  } else {
    kinds = {chain_kind_from_string(p.kind)};
  }
  std::vector<WalkCensus> result;
  for (auto k : kinds) result.push_back(run_census(c, k, p.max_len, p.reference, p.hard_cap, p.allow_above_cap));
  if (p.format == "csv") {
    c.emit(p.out, c.csv_preamble() + census_to_csv(result));
  } else {
    c.emit_json(p.out, json::parse(census_to_json(result)));
  }
  return kExitOk;
}

struct ThresholdParams {
  bool all = false;
  int census_len = 10;
  std::string census;
  std::string reconstruction = "ps-plus-higher-orders";
  int max_k = 3;
  std::string format = "json";
  std::string out;
};

int do_thresholds(Context& c, const ThresholdParams& p) {
  c.config.update({{"all", p.all}, {"census_len", p.census_len}, {"census", p.census}, {"format", p.format}});
  if (p.all) c.config.update({{"reconstruction", p.reconstruction}, {"max_k", p.max_k}});
  auto polys = census_polynomials(c, p.census, p.census_len);
  std::vector<ThresholdReport> reports = {dephasing_topological_threshold(), distillation_report(),
                                          solve_depth4_boundary(polys)};
  if (p.all) {
    for (int k = 1; k <= p.max_k; ++k) reports.push_back(solve_topological_threshold(k));
    auto depol = solve_depolarizing_threshold(depol_reconstruction_from_string(p.reconstruction), polys);
    reports.push_back(depol.quantum_side);
    reports.push_back(depol.classical_side);
  }
  if (p.format == "csv") {
    std::ostringstream s;
    s << c.csv_preamble() << "name,solved_value,published_value,method,residual\n";
    for (const auto& r : reports) {
      s << r.name << ',' << number(r.solved_value) << ',' << (r.published_value ? number(*r.published_value) : "") << ','
        << (r.method == SolveMethod::kClosedForm ? "closed-form" : "root-find") << ',' << number(r.residual) << '\n';
    }
    c.emit(p.out, s.str());
  } else {
    json arr = json::array();
    for (const auto& r : reports) arr.push_back(report_json(r));
    c.emit_json(p.out, {{"thresholds", arr}, {"polynomial_degree", polys.truncation_degree}});
  }
  return kExitOk;
}

struct LandscapeParams {
  int phi_points = 91;
  int q_points = 101;
  std::string q_limit = "depth4";
  int census_len = 10;
  std::string census;
  double constant = 0.6;
  std::string format = "csv";
  std::string out;
  std::string curves_out;
};

Landscape build_landscape(const Context& c, const LandscapeParams& p, double* limit_out = nullptr) {
  if (p.phi_points < 1 || p.q_points < 1) throw ConfigError("grid sizes must be positive");
  LandscapeOptions opts(resolve_q_limit(c, p.q_limit, p.census, p.census_len));
  opts.intractable_constant = p.constant;
  if (limit_out) *limit_out = opts.q_limit;
  auto phi = uniform_grid(0, std::numbers::pi / 4, static_cast<std::size_t>(p.phi_points));
  auto q = uniform_grid(0, 0.5, static_cast<std::size_t>(p.q_points));
  return compute_landscape(phi, q, opts);
}

json landscape_result(const Landscape& l) {
  json j = json::parse(landscape_json(l));
  j["phi_grid"] = l.phi_grid;
  j["q_grid"] = l.q_grid;
  json classes = json::array();
  for (auto k : l.classes) classes.push_back(to_string(k));
  j["classes"] = classes;
  return j;
}

int do_landscape(Context& c, const LandscapeParams& p) {
  c.config.update({{"phi_points", p.phi_points},
                   {"q_points", p.q_points},
                   {"q_limit", p.q_limit},
                   {"census_len", p.census_len},
                   {"census", p.census},
                   {"constant", p.constant},
                   {"format", p.format}});
  auto l = build_landscape(c, p);
  if (p.format == "csv") {
    c.emit(p.out, c.csv_preamble() + landscape_csv(l));
    if (!p.curves_out.empty()) c.emit_json(p.curves_out, json::parse(landscape_json(l)));
  } else {
    c.emit_json(p.out, landscape_result(l));
  }
  return kExitOk;
}

struct SimulateParams {
  std::string engine = "rhg";
  std::vector<int> dims = {4, 4, 4};
  std::string boundary = "periodic";
  double q = 0.05;
  std::uint64_t shots = 10000;
  std::uint64_t seed = 1;
  bool randomize = false;
  int rows = 2;
  int cols = 2;
  double theta = std::numbers::pi / 4;
  double alpha = 0;
  std::string mode = "stabilizer-mixture";
  bool compare = false;
  std::string method = "markov-chain";
  std::uint64_t trials = 20000;
  std::string format = "json";
  std::string out;
};

Dims dims_of(const std::vector<int>& d) {
  if (d.size() != 3) throw ConfigError("dims needs three values");
  return {d[0], d[1], d[2]};
}

std::string bit_string(std::size_t k, std::size_t n) {
  std::string s(n, '0');
  for (std::size_t j = 0; j < n; ++j) s[j] = (k >> j) & 1 ? '1' : '0';
  return s;
}

int do_simulate(Context& c, const SimulateParams& p) {
  c.seed = p.seed;
  c.config.update({{"engine", p.engine}, {"seed", p.seed}, {"q", p.q}, {"format", p.format}});
  if (p.engine == "rhg") {
    c.config.update({{"dims", p.dims}, {"boundary", p.boundary}, {"shots", p.shots}, {"randomize", p.randomize}});
    auto lattice = std::make_shared<RhgLattice>(build_lattice(dims_of(p.dims), boundary_from_string(p.boundary)));
    CircuitRun run;
    run.lattice = lattice;
    run.noise.assign(lattice->num_qubits(), PauliChannel::dephasing(p.q));
    run.seed = p.seed;
    run.randomize_inputs = p.randomize;
    auto summary = run_shots(run, p.shots, c.threads);
    c.emit_json(p.out, {{"num_qubits", lattice->num_qubits()},
                        {"num_cells", lattice->cells().size()},
                        {"shots", summary.shots},
                        {"mean_syndrome", summary.mean_syndrome},
                        {"stderr_syndrome", summary.stderr_syndrome},
                        {"expected_syndrome", expected_parity(p.q)}});
    return kExitOk;
  }
  if (p.engine == "memory") {
    c.config.update({{"dims", p.dims}, {"trials", p.trials}, {"method", p.method}});
    auto lattice = build_lattice(dims_of(p.dims), Boundary::kPeriodic);
    MemoryOptions opts;
    opts.method = memory_method_from_string(p.method);
    auto r = postselected_memory_experiment(lattice, p.q, p.trials, p.seed, opts);
    c.emit_json(p.out, {{"method", to_string(r.method)},
                        {"trials", r.trials},
                        {"accepted", r.accepted},
                        {"postselect_rate", r.postselect_rate},
                        {"logical_error_rate", std::isnan(r.logical_error_rate) ? json(nullptr) : json(r.logical_error_rate)},
                        {"logical_stderr", std::isnan(r.logical_stderr) ? json(nullptr) : json(r.logical_stderr)},
                        {"zero_accepted", r.zero_accepted}});
    return kExitOk;
  }
  if (p.engine == "peps") {
    c.config.update({{"rows", p.rows},
                     {"cols", p.cols},
                     {"theta", p.theta},
                     {"alpha", p.alpha},
                     {"mode", p.mode},
                     {"shots", p.shots},
                     {"compare", p.compare}});
    auto lattice = SiteLattice::grid(p.rows, p.cols, p.theta, p.q, p.alpha);
    auto mode = sampler_mode_from_string(p.mode);
    const std::size_t n = lattice.num_sites();
    GeneralCircuitSampler sampler(lattice, mode);
    auto hist = sample_histogram(sampler, p.shots, p.seed, c.threads);
    std::optional<std::vector<double>> exact;
    if (p.compare) exact = exact_distribution(lattice);
    if (p.format == "csv") {
      std::ostringstream s;
      s << c.csv_preamble() << "outcome,count" << (exact ? ",exact_probability" : "") << '\n';
      for (std::size_t k = 0; k < hist.size(); ++k) {
        s << bit_string(k, n) << ',' << hist[k];
        if (exact) s << ',' << number((*exact)[k]);
        s << '\n';
      }
      c.emit(p.out, s.str());
    } else {
      json counts = json::object();
      for (std::size_t k = 0; k < hist.size(); ++k) {
        if (hist[k]) counts[bit_string(k, n)] = hist[k];
      }
      json result = {{"sites", n},
                     {"shots", p.shots},
                     {"counts", counts},
                     {"q_input", sampler.noise().q_input},
                     {"q_bond", sampler.noise().q_bond}};
      if (exact) {
        auto cmp = compare_with_dense(lattice, mode, p.shots, p.seed, c.threads);
        result["total_variation"] = cmp.tv;
        result["sampling_floor"] = cmp.sampling_floor;
      }
      c.emit_json(p.out, result);
    }
    return kExitOk;
  }
  throw ConfigError("unknown engine '" + p.engine + "' (rhg, peps, memory)");
}

struct VerifyParams {
  double mean = 0;
  std::int64_t cells = 0;
  double delta = 1e-6;
  std::string noise = "dephasing";
  std::string out;
};

int do_verify(Context& c, const VerifyParams& p) {
  c.config.update({{"mean", p.mean}, {"cells", p.cells}, {"delta", p.delta}, {"noise", p.noise}});
  auto v = single_shot_verdict(p.mean, p.cells, p.delta, noise_class_from_string(p.noise));
  c.emit_json(p.out, {{"verdict", v.quantum_side ? "quantum_side" : "inconclusive"},
                      {"deviation", v.deviation},
                      {"threshold", v.threshold},
                      {"margin", v.margin}});
  return kExitOk;
}

struct OracleParams {
  std::string kind = "stabilizer";
  std::size_t circuits = 200;
  std::size_t max_qubits = 10;
  std::size_t max_depth = 12;
  std::uint64_t seed = 1;
  double tolerance = -1;  // per kind default
  int rows = 2;
  int cols = 2;
  double theta = std::numbers::pi / 4;
  double q = 0.0;
  double alpha = 0;
  std::string mode = "stabilizer-mixture";
  std::uint64_t shots = 100000;
  std::string out;
};

int do_oracle_check(Context& c, const OracleParams& p) {
  c.seed = p.seed;
  c.config.update({{"kind", p.kind}, {"seed", p.seed}});
  if (p.kind == "stabilizer") {
    double tol = p.tolerance < 0 ? 1e-9 : p.tolerance;
    c.config.update({{"circuits", p.circuits}, {"max_qubits", p.max_qubits}, {"max_depth", p.max_depth}, {"tolerance", tol}});
    auto r = stabilizer_oracle_check(p.circuits, p.max_qubits, p.max_depth, p.seed);
    bool pass = r.max_deviation <= tol;
    c.emit_json(p.out, {{"circuits", r.circuits},
                        {"qubits_checked", r.qubits_checked},
                        {"max_deviation", r.max_deviation},
                        {"pass", pass}});
    return pass ? kExitOk : kExitComputation;
  }
  if (p.kind == "peps") {
    double tol = p.tolerance < 0 ? 0.01 : p.tolerance;
    c.config.update({{"rows", p.rows},
                     {"cols", p.cols},
                     {"theta", p.theta},
                     {"q", p.q},
                     {"alpha", p.alpha},
                     {"mode", p.mode},
                     {"shots", p.shots},
                     {"tolerance", tol}});
    auto lattice = SiteLattice::grid(p.rows, p.cols, p.theta, p.q, p.alpha);
    auto cmp = compare_with_dense(lattice, sampler_mode_from_string(p.mode), p.shots, p.seed, c.threads);
    bool pass = cmp.tv < tol;
    c.emit_json(p.out, {{"shots", cmp.shots},
                        {"total_variation", cmp.tv},
                        {"sampling_floor", cmp.sampling_floor},
                        {"pass", pass}});
    return pass ? kExitOk : kExitComputation;
  }
  throw ConfigError("unknown oracle-check kind '" + p.kind + "' (stabilizer, peps)");
}

struct ReproduceParams {
  std::string manifest;
  int max_len = 12;
  std::uint64_t shots = 100000;
  std::uint64_t seed = 1;
  std::string grid_out;
  std::string out;
};

int reproduce_table1(Context& c, const ReproduceParams& p) {
  if (p.max_len < 1 || p.max_len > 14) throw ConfigError("table1 covers lengths 1..14");
  json cells = json::array();
  std::size_t mismatches = 0;
  for (auto kind : {ChainKind::kPrimal, ChainKind::kDual}) {
    auto census = run_census(c, kind, p.max_len);
    const auto& ref = kind == ChainKind::kPrimal ? kReferencePrimal : kReferenceDual;
    for (int l = 1; l <= p.max_len; ++l) {
      auto got = census.count(l);
      bool ok = got == ref[l];
      mismatches += !ok;
      cells.push_back({{"kind", to_string(kind)},
                       {"length", l},
                       {"count", got},
                       {"reference", ref[l]},
                       {"delta", static_cast<std::int64_t>(got) - static_cast<std::int64_t>(ref[l])},
                       {"match", ok}});
    }
  }
  c.emit_json(p.out, {{"match", mismatches == 0}, {"mismatches", mismatches}, {"cells", cells}});
  return mismatches == 0 ? kExitOk : kExitComputation;
}

json check(std::string name, double value, double lo, double hi) {
  return {{"name", std::move(name)}, {"value", value}, {"lo", lo}, {"hi", hi}, {"pass", value >= lo && value <= hi}};
}

int finish_checks(Context& c, const std::string& out, json checks, json extra = json::object()) {
  bool pass = std::all_of(checks.begin(), checks.end(), [](const json& j) { return j["pass"].get<bool>(); });
  extra["checks"] = std::move(checks);
  extra["pass"] = pass;
  c.emit_json(out, extra);
  return pass ? kExitOk : kExitComputation;
}

int reproduce_thresholds(Context& c, const ReproduceParams& p) {
  auto polys = census_polynomials(c, "", p.max_len);
  double q6 = dephasing_topological_threshold().solved_value;
  double qd = distillation_threshold();
  double root = solve_depth4_boundary(polys).solved_value;
  json checks = json::array({check("dephasing-topological", q6, 1.0 / 6 - 1e-9, 1.0 / 6 + 1e-9),
                             check("magic-state-distillation", qd, 0.14644660940672624 - 1e-12, 0.14644660940672624 + 1e-12),
                             check("depth-four-boundary", root, 0.131, 0.137)});
  return finish_checks(c, p.out, checks, {{"polynomial_degree", polys.truncation_degree}});
}

int reproduce_fig5(Context& c, const ReproduceParams& p) {
  LandscapeParams lp;
  lp.census_len = p.max_len;
  double limit = 0;
  auto l = build_landscape(c, lp, &limit);
  if (!p.grid_out.empty()) c.emit(p.grid_out, c.csv_preamble() + landscape_csv(l));
  json checks = json::array({check("stabilizer-curve-at-zero", stabilizer_curve(0), 0.146447 - 1e-4, 0.146447 + 1e-4),
                             check("classical-crossing-phi", l.crossing.phi, kReferenceCrossing - kReferenceCrossingTolerance,
                                   kReferenceCrossing + kReferenceCrossingTolerance)});
  return finish_checks(c, p.out, checks, {{"q_limit", limit}, {"curves", json::parse(landscape_json(l))}});
}

int reproduce_parity(Context& c, const ReproduceParams& p) {
  auto lattice = std::make_shared<RhgLattice>(build_lattice({4, 4, 4}, Boundary::kPeriodic));
  json checks = json::array();
  for (double q : {0.05, 0.134, 0.25}) {
    CircuitRun run;
    run.lattice = lattice;
    run.noise.assign(lattice->num_qubits(), PauliChannel::dephasing(q));
    run.seed = p.seed;
    auto s = run_shots(run, p.shots, c.threads);
    double expected = expected_parity(q);
    json j = check("parity-q=" + number(q), s.mean_syndrome, expected - 3 * s.stderr_syndrome,
                   expected + 3 * s.stderr_syndrome);
    j["expected"] = expected;
    j["stderr"] = s.stderr_syndrome;
    checks.push_back(j);
  }
  return finish_checks(c, p.out, checks);
}

int do_reproduce(Context& c, const ReproduceParams& p) {
  c.config.update({{"manifest", p.manifest}});
  if (p.manifest == "table1" || p.manifest == "thresholds" || p.manifest == "fig5") {
    c.config["max_len"] = p.max_len;
  }
  if (p.manifest == "table1") return reproduce_table1(c, p);
  if (p.manifest == "thresholds") return reproduce_thresholds(c, p);
  if (p.manifest == "fig5") return reproduce_fig5(c, p);
  if (p.manifest == "parity-mc") {
    c.seed = p.seed;
    c.config.update({{"shots", p.shots}, {"seed", p.seed}});
    return reproduce_parity(c, p);
  }
  throw ConfigError("unknown manifest '" + p.manifest + "' (table1, thresholds, fig5, parity-mc)");
}

int fail(std::ostream& err, int code, std::string_view kind, std::string_view message) {
  json j = {{"error", {{"kind", kind}, {"message", message}}}, {"exit_code", code}};
  err << j.dump() << '\n';
  return code;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Noisy commuting-circuit toolkit", "cqc"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.fallthrough();
  Context ctx{out, err, false, 0, {}, json::object(), std::nullopt};
  app.add_option("--threads", ctx.threads, "Worker threads (0: available parallelism)");
  app.add_flag("--quiet", ctx.quiet, "No progress output on stderr");
  app.add_option("--config", "JSON config file; command-line flags override its values");

  CensusParams census;
  auto* c_census = app.add_subcommand("census", "Enumerate error chains around the injection site");
  c_census->add_option("--max-len", census.max_len, "Longest chain length")->capture_default_str();
  c_census->add_option("--kind", census.kind, "primal, dual or both")->capture_default_str();
  c_census->add_flag("--reference", census.reference, "Use the plain DFS enumerator");
  c_census->add_option("--hard-cap", census.hard_cap, "Refuse lengths above this")->capture_default_str();
  c_census->add_flag("--allow-above-cap", census.allow_above_cap, "Lift the hard cap");
  c_census->add_option("--format", census.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  c_census->add_option("--out", census.out, "Output file (default: stdout)");

  ThresholdParams thr;
  auto* c_thr = app.add_subcommand("thresholds", "Noise thresholds");
  c_thr->add_flag("--all", thr.all, "Include the topological and depolarizing thresholds");
  c_thr->add_option("--census-len", thr.census_len, "Chain length for the error polynomials")->capture_default_str();
  c_thr->add_option("--census", thr.census, "Census CSV/JSON file to use instead of enumerating");
  c_thr->add_option("--reconstruction", thr.reconstruction)->capture_default_str();
  c_thr->add_option("--max-k", thr.max_k, "Largest distillation level for topological thresholds")->capture_default_str();
  c_thr->add_option("--format", thr.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  c_thr->add_option("--out", thr.out);

  LandscapeParams land;
  auto* c_land = app.add_subcommand("landscape", "Classify the (phi, q) plane");
  c_land->add_option("--phi-points", land.phi_points)->capture_default_str();
  c_land->add_option("--q-points", land.q_points)->capture_default_str();
  c_land->add_option("--q-limit", land.q_limit, "depth4, octahedron or a number")->capture_default_str();
  c_land->add_option("--census-len", land.census_len)->capture_default_str();
  c_land->add_option("--census", land.census);
  c_land->add_option("--constant", land.constant, "Intractable-region constant")->capture_default_str();
  c_land->add_option("--format", land.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  c_land->add_option("--out", land.out);
  c_land->add_option("--curves-out", land.curves_out, "JSON curve file (csv format only)");

  SimulateParams sim;
  auto* c_sim = app.add_subcommand("simulate", "Sample noisy circuits");
  c_sim->add_option("--engine", sim.engine, "rhg, peps or memory")->capture_default_str();
  c_sim->add_option("--dims", sim.dims)->expected(3)->capture_default_str();
  c_sim->add_option("--boundary", sim.boundary)->capture_default_str();
  c_sim->add_option("--q", sim.q, "Dephasing rate")->capture_default_str();
  c_sim->add_option("--shots", sim.shots)->capture_default_str();
  c_sim->add_option("--seed", sim.seed)->capture_default_str();
  c_sim->add_flag("--randomize", sim.randomize, "Randomized input compilation");
  c_sim->add_option("--rows", sim.rows)->capture_default_str();
  c_sim->add_option("--cols", sim.cols)->capture_default_str();
  c_sim->add_option("--theta", sim.theta)->capture_default_str();
  c_sim->add_option("--alpha", sim.alpha)->capture_default_str();
  c_sim->add_option("--mode", sim.mode)->capture_default_str();
  c_sim->add_flag("--compare", sim.compare, "Compare against the dense oracle");
  c_sim->add_option("--method", sim.method)->capture_default_str();
  c_sim->add_option("--trials", sim.trials)->capture_default_str();
  c_sim->add_option("--format", sim.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  c_sim->add_option("--out", sim.out);

  VerifyParams ver;
  auto* c_ver = app.add_subcommand("verify", "Single-shot verification verdict");
  c_ver->add_option("--mean", ver.mean, "Observed mean unit-cell syndrome")->required();
  c_ver->add_option("--cells", ver.cells, "Number of unit cells")->required();
  c_ver->add_option("--delta", ver.delta, "Confidence parameter")->capture_default_str();
  c_ver->add_option("--noise", ver.noise, "dephasing or depolarizing")->capture_default_str();
  c_ver->add_option("--out", ver.out);

  OracleParams orc;
  auto* c_orc = app.add_subcommand("oracle-check", "Compare simulators against the dense oracle");
  c_orc->add_option("--kind", orc.kind, "stabilizer or peps")->capture_default_str();
  c_orc->add_option("--circuits", orc.circuits)->capture_default_str();
  c_orc->add_option("--max-qubits", orc.max_qubits)->capture_default_str();
  c_orc->add_option("--max-depth", orc.max_depth)->capture_default_str();
  c_orc->add_option("--seed", orc.seed)->capture_default_str();
  c_orc->add_option("--tolerance", orc.tolerance, "Default 1e-9 (stabilizer) or 0.01 (peps)");
  c_orc->add_option("--rows", orc.rows)->capture_default_str();
  c_orc->add_option("--cols", orc.cols)->capture_default_str();
  c_orc->add_option("--theta", orc.theta)->capture_default_str();
  c_orc->add_option("--q", orc.q)->capture_default_str();
  c_orc->add_option("--alpha", orc.alpha)->capture_default_str();
  c_orc->add_option("--mode", orc.mode)->capture_default_str();
  c_orc->add_option("--shots", orc.shots)->capture_default_str();
  c_orc->add_option("--out", orc.out);

  ReproduceParams rep;
  auto* c_rep = app.add_subcommand("reproduce", "Re-run a pinned configuration and diff against references");
  c_rep->add_option("manifest", rep.manifest, "table1, thresholds, fig5 or parity-mc")->required();
  c_rep->add_option("--max-len", rep.max_len)->capture_default_str();
  c_rep->add_option("--shots", rep.shots)->capture_default_str();
  c_rep->add_option("--seed", rep.seed)->capture_default_str();
  c_rep->add_option("--grid-out", rep.grid_out, "Landscape CSV (fig5)");
  c_rep->add_option("--out", rep.out);

  try {
    auto args = merge_config_file(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    return fail(err, kExitConfig, "config_error", e.what());
  } catch (const ConfigError& e) {
    return fail(err, kExitConfig, "config_error", e.what());
  }

  try {
    auto* sub = app.get_subcommands().front();
    // Fail before a long computation rather than after it.
    for (const char* flag : {"--out", "--curves-out", "--grid-out"}) {
      const auto* opt = sub->get_option_no_throw(flag);
      if (opt == nullptr || opt->count() == 0) continue;
      auto path = opt->as<std::string>();
      std::ofstream probe(path, std::ios::app);
      if (!probe) throw ConfigError("cannot write output file " + path);
    }
    ctx.command = sub->get_name();
    ctx.config["command"] = ctx.command;
    if (sub == c_census) return do_census(ctx, census);
    if (sub == c_thr) return do_thresholds(ctx, thr);
    if (sub == c_land) return do_landscape(ctx, land);
    if (sub == c_sim) return do_simulate(ctx, sim);
    if (sub == c_ver) return do_verify(ctx, ver);
    if (sub == c_orc) return do_oracle_check(ctx, orc);
    return do_reproduce(ctx, rep);
  } catch (const ConfigError& e) {
    return fail(err, kExitConfig, "config_error", e.what());
  } catch (const ResourceGuardError& e) {
    return fail(err, kExitResource, "resource_guard", e.what());
  } catch (const std::exception& e) {
    return fail(err, kExitComputation, "computation_error", e.what());
  }
}

}  // namespace cqc::cli
