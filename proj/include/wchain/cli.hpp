// Copyright 2026 The wchain Authors
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

// Command-line front end: curve, ensemble, scan and verify.
//
// Exit codes: 0 success, 1 failed check or runtime error, 2 usage error.

#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wchain/asymptotics.hpp"
#include "wchain/errors.hpp"
#include "wchain/evolve.hpp"
#include "wchain/metrics.hpp"
#include "wchain/model.hpp"
#include "wchain/optimize.hpp"
#include "wchain/stochastic.hpp"
#include "wchain/verify.hpp"

namespace wchain::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kUsage = 2 };

struct Context {
  std::ostream& out;
  std::ostream& err;
  HamiltonianBuilder builder = default_builder;
};

/// 12 significant digits.
inline std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

/// Writes via a temporary file and a rename, so readers never see a partial file.
inline void write_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ArgumentError("cannot open " + tmp.string() + " for writing");
    f << content;
    f.flush();
    if (!f) {
      std::filesystem::remove(tmp);
      throw Error("write to " + tmp.string() + " failed");
    }
  }
  std::filesystem::rename(tmp, target);
}

inline void emit(const Context& ctx, const std::string& out_path, const std::string& csv) {
  if (out_path.empty() || out_path == "-")
    ctx.out << csv;
  else
    write_atomic(out_path, csv);
}

/// Splits "a,b,c"; empty input or "none" gives an empty list.
inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  if (s.empty() || s == "none") return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

/// `key = value` lines from a config file as `--key=value` arguments.
inline std::vector<std::string> config_args(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot read config file " + path);
  CLI::ConfigTOML parser;
  std::vector<std::string> args;
  for (const auto& item : parser.from_config(in)) {
    if (item.name == "++" || item.name == "--") continue;  // section markers
    std::string value;
    for (std::size_t i = 0; i < item.inputs.size(); ++i) value += (i ? "," : "") + item.inputs[i];
    args.push_back("--" + item.name + "=" + value);
  }
  return args;
}

struct ChainOptions {
  int n = 100;
  int m = 1;
  int mb = 0;  // 0: same as m
  std::optional<double> jm_eff;
  std::optional<double> jm;
  double j = 1.0;

  void add_to(CLI::App& app) {
    app.add_option("--n", n, "wire length N")->capture_default_str();
    app.add_option("--m", m, "Alice branches M")->capture_default_str();
    app.add_option("--mb", mb, "Bob branches (default: M)");
    auto* eff = app.add_option("--jm-eff", jm_eff,
                               "wire coupling in units of the effective end coupling; sets J_A = 1/sqrt(M), "
                               "J_B = 1/sqrt(M~)");
    auto* raw = app.add_option("--jm", jm, "raw wire coupling J_m, branches use --j");
    eff->excludes(raw);
    app.add_option("--j", j, "branch coupling used with --jm")->capture_default_str();
  }

  ChainSpec spec() const {
    const int m_bob = mb == 0 ? m : mb;
    if (m < 1 || m_bob < 1) throw ArgumentError("branch counts must be >= 1");
    if (jm_eff)
      return ChainSpec::uniform(n, m, m_bob, 1.0 / std::sqrt(m), 1.0 / std::sqrt(m_bob), *jm_eff);
    if (jm) return ChainSpec::uniform(n, m, m_bob, j, j, *jm);
    throw ArgumentError("one of --jm-eff or --jm is required");
  }
};

inline int cmd_curve(const Context& ctx, const ChainOptions& chain, double t_max, double dt, bool asym,
                     const std::string& out_path) {
  if (!(t_max >= 0.0)) throw ArgumentError("--t-max must be >= 0");
  if (!(dt > 0.0)) throw ArgumentError("--dt must be > 0");
  const ChainSpec spec = chain.spec();
  std::optional<AsymptoticRegime> regime;
  if (asym) {
    const ChainSpec eff = to_effective_linear(spec);
    if (std::abs(eff.j_alice.front() - eff.j_bob.front()) > 1e-12 * std::abs(eff.j_alice.front()))
      throw ArgumentError("--asymptotic needs equal effective end couplings");
    regime = AsymptoticRegime{spec.n_chain, eff.j_alice.front(), spec.j_wire.front()};
    regime->validate();
    if (auto w = regime_warning(*regime)) ctx.err << "warning: " << *w << "\n";
  }
  const Evolution ev(build_hamiltonian(spec), w_initial_state(spec));
  const auto rows = static_cast<long>(std::floor(t_max / dt + 1e-9)) + 1;
  std::ostringstream csv;
  csv << "t,fidelity_bob,fidelity_alice" << (regime ? ",fidelity_asymptotic" : "") << "\n";
  for (long k = 0; k < rows; ++k) {
    const double t = static_cast<double>(k) * dt;
    const AmplitudeVector c = ev.at(t);
    csv << num(t) << "," << num(fidelity_w(c, spec)) << "," << num(fidelity_alice(c, spec));
    if (regime) csv << "," << num(asymptotic_fidelity(*regime, t));
    csv << "\n";
  }
  emit(ctx, out_path, csv.str());
  return kOk;
}

struct EnsembleOptions {
  std::string kind = "static";
  std::string targets = "alice,bob,wire";
  std::string noise;
  double p_min = 0.0;
  double p_max = 0.0;
  double p_step = 0.002;
  int realizations = 100;
  int segments = 10;
  std::uint64_t seed = 1;
  double t_max = 0.0;
  std::string out;
};

inline PerturbationSpec perturbation_from(const EnsembleOptions& o) {
  PerturbationSpec p;
  if (o.kind == "static")
    p.kind = TemporalKind::Static;
  else if (o.kind == "dynamic")
    p.kind = TemporalKind::Dynamic;
  else if (o.kind == "fluctuating")
    p.kind = TemporalKind::Fluctuating;
  else
    throw ArgumentError("--kind must be static, dynamic or fluctuating");
  p.couplings = CouplingTargets::none();
  for (const auto& t : split_list(o.targets)) {
    if (t == "alice") p.couplings.alice_bonds = true;
    else if (t == "bob") p.couplings.bob_bonds = true;
    else if (t == "wire") p.couplings.wire_bonds = true;
    else throw ArgumentError("unknown coupling target '" + t + "' (alice, bob, wire)");
  }
  for (const auto& t : split_list(o.noise)) {
    if (t == "zz") p.noise.zz = true;
    else if (t == "field") p.noise.field = true;
    else throw ArgumentError("unknown noise target '" + t + "' (zz, field)");
  }
  p.n_segments = o.segments;
  p.seed = o.seed;
  p.validate();
  return p;
}

inline int cmd_ensemble(const Context& ctx, const ChainOptions& chain, const EnsembleOptions& o, unsigned threads) {
  const ChainSpec spec = chain.spec();
  const PerturbationSpec pert = perturbation_from(o);
  if (!(o.t_max > 0.0)) throw ArgumentError("--t-max must be > 0");
  if (o.realizations < 1) throw ArgumentError("--realizations must be >= 1");
  const auto grid = p_range(o.p_min, o.p_max, o.p_step);
  const EnsembleResult r = run_ensemble(spec, pert, o.t_max, o.realizations, grid, threads);
  std::ostringstream csv;
  csv << "p,mean_fidelity,std_fidelity,mean_cw,mean_cmin,realizations\n";
  for (const auto& pt : r.points)
    csv << num(pt.p) << "," << num(pt.mean_fidelity) << "," << num(pt.std_fidelity) << "," << num(pt.mean_cw) << ","
        << num(pt.mean_cmin) << "," << pt.realization_count << "\n";
  emit(ctx, o.out, csv.str());
  return kOk;
}

struct ScanOptionsCli {
  int n = 100;
  double jm_max = 5.0;
  double jm_step = 0.01;
  double t_bound = 60.0;
  double t_step = 0.05;
  double j_end = 1.0;
  bool refine = false;
  std::string out;
};

inline int cmd_scan(const Context& ctx, const ScanOptionsCli& o, unsigned threads) {
  if (!(o.jm_step > 0.0) || !(o.t_step > 0.0)) throw ArgumentError("--jm-step and --t-step must be > 0");
  const int jm_steps = std::max(1, static_cast<int>(std::lround(o.jm_max / o.jm_step)));
  const int t_steps = std::max(1, static_cast<int>(std::lround(o.t_bound / o.t_step)));
  ScanOptions so;
  so.refine = o.refine;
  so.threads = threads;
  so.j_end = o.j_end;
  const ScanResult r = scan_optimal(o.n, o.jm_max, jm_steps, o.t_bound, t_steps, so);
  if (!o.out.empty()) {
    std::ostringstream csv;
    csv << "jm,t,fidelity\n";
    for (const auto& s : r.samples) csv << num(s.jm) << "," << num(s.t) << "," << num(s.fidelity) << "\n";
    write_atomic(o.out, csv.str());
  }
  ctx.out << "best_jm,best_t,best_fidelity\n"
          << num(r.best_jm) << "," << num(r.best_t) << "," << num(r.best_fidelity) << "\n";
  return kOk;
}

inline int cmd_verify(const Context& ctx) {
  const VerifyReport rep = run_verify(ctx.builder);
  for (const auto& c : rep.checks)
    if (!c.passed) ctx.err << "failed " << c.name << " (" << c.detail << ")\n";
  if (rep.passed()) {
    ctx.out << "PASS (" << rep.checks.size() << " checks)\n";
    return kOk;
  }
  const auto names = rep.failed_names();
  ctx.out << "FAIL:";
  for (std::size_t i = 0; i < names.size(); ++i) ctx.out << (i ? ", " : " ") << names[i];
  ctx.out << "\n";
  return kCheckFailed;
}

/// Parses `args` (without the program name) and runs the chosen subcommand.
inline int run(std::vector<std::string> args, const Context& ctx) {
  // A config file contributes --key=value arguments ahead of the real ones,
  // so flags given on the command line take precedence.
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    std::size_t span = 0;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      span = 2;
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      span = 1;
    }
    if (span == 0) continue;
    try {
      const auto extra = config_args(path);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + span));
      const std::size_t at = args.empty() ? 0 : 1;  // after the subcommand name
      args.insert(args.begin() + static_cast<std::ptrdiff_t>(std::min(at, args.size())), extra.begin(), extra.end());
    } catch (const Error& e) {
      ctx.err << "error: " << e.what() << "\n";
      return kUsage;
    }
    break;
  }

  CLI::App app{"Transfer of W states through branched XX spin chains"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.add_option("--config", "file of key = value lines mirroring the flags");
  unsigned threads = 0;

  ChainOptions curve_chain;
  double t_max = 0.0;
  double dt = 0.05;
  bool asym = false;
  std::string curve_out;
  auto* curve = app.add_subcommand("curve", "fidelity against time for the ordered chain");
  curve_chain.add_to(*curve);
  curve->add_option("--t-max", t_max, "last time")->required();
  curve->add_option("--dt", dt, "time step")->capture_default_str();
  curve->add_flag("--asymptotic", asym, "add the large-J_m closed form as a column");
  curve->add_option("--out", curve_out, "output CSV (default stdout)");
  curve->add_option("--threads", threads, "worker cap, 0 = all cores");

  ChainOptions ens_chain;
  EnsembleOptions ens;
  auto* ensemble = app.add_subcommand("ensemble", "disorder/noise averages at t_max");
  ens_chain.add_to(*ensemble);
  ensemble->add_option("--kind", ens.kind, "static, dynamic or fluctuating")->capture_default_str();
  ensemble->add_option("--targets", ens.targets, "perturbed couplings: alice,bob,wire or none")->capture_default_str();
  ensemble->add_option("--noise", ens.noise, "noise terms: zz,field (default none)");
  ensemble->add_option("--p-min", ens.p_min)->capture_default_str();
  ensemble->add_option("--p-max", ens.p_max)->capture_default_str();
  ensemble->add_option("--p-step", ens.p_step)->capture_default_str();
  ensemble->add_option("--realizations", ens.realizations)->capture_default_str();
  ensemble->add_option("--segments", ens.segments, "segments for time-dependent kinds")->capture_default_str();
  ensemble->add_option("--seed", ens.seed)->capture_default_str();
  ensemble->add_option("--t-max", ens.t_max, "read-out time")->required();
  ensemble->add_option("--out", ens.out, "output CSV (default stdout)");
  ensemble->add_option("--threads", threads, "worker cap, 0 = all cores");

  ScanOptionsCli sc;
  auto* scan = app.add_subcommand("scan", "grid search for the best J_m and read-out time");
  scan->add_option("--n", sc.n, "wire length N")->capture_default_str();
  scan->add_option("--jm-max", sc.jm_max, "upper bound on J_m")->capture_default_str();
  scan->add_option("--jm-step", sc.jm_step)->capture_default_str();
  scan->add_option("--t-bound", sc.t_bound, "time window")->capture_default_str();
  scan->add_option("--t-step", sc.t_step)->capture_default_str();
  scan->add_option("--j-end", sc.j_end, "effective end coupling")->capture_default_str();
  scan->add_flag("--refine", sc.refine, "local refinement around the grid optimum");
  scan->add_option("--out", sc.out, "per-J_m samples CSV");
  scan->add_option("--threads", threads, "worker cap, 0 = all cores");

  auto* verify = app.add_subcommand("verify", "cross-check against the full-space reference");
  verify->add_option("--threads", threads, "unused; accepted for uniformity");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, ctx.out, ctx.err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (curve->parsed()) return cmd_curve(ctx, curve_chain, t_max, dt, asym, curve_out);
    if (ensemble->parsed()) return cmd_ensemble(ctx, ens_chain, ens, threads);
    if (scan->parsed()) return cmd_scan(ctx, sc, threads);
    if (verify->parsed()) return cmd_verify(ctx);
  } catch (const SpecError& e) {
    ctx.err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ArgumentError& e) {
    ctx.err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const MappingError& e) {
    ctx.err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    ctx.err << "error: " << e.what() << "\n";
    return kCheckFailed;
  }
  return kUsage;
}

inline int run(int argc, const char* const* argv, const Context& ctx) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(std::move(args), ctx);
}

}  // namespace wchain::cli
