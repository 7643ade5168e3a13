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

// Self-check: the fast single-excitation path against the full-space oracle
// and a handful of structural invariants, on small built-in configurations.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "wchain/evolve.hpp"
#include "wchain/metrics.hpp"
#include "wchain/model.hpp"
#include "wchain/oracle.hpp"
#include "wchain/stochastic.hpp"

namespace wchain {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
  }
  std::vector<std::string> failed_names() const {
    std::vector<std::string> out;
    for (const auto& c : checks)
      if (!c.passed && std::find(out.begin(), out.end(), c.name) == out.end()) out.push_back(c.name);
    return out;
  }
};

/// Hamiltonian constructor under test; replaceable for fault injection.
using HamiltonianBuilder = std::function<SingleExcitationHamiltonian(const ChainSpec&, const NoiseField*)>;

inline SingleExcitationHamiltonian default_builder(const ChainSpec& spec, const NoiseField* noise) {
  return build_hamiltonian(spec, noise);
}

namespace detail {

inline ChainSpec random_spec(std::mt19937_64& rng, int n, int ma, int mb) {
  std::uniform_real_distribution<double> j(0.3, 2.0);
  ChainSpec s = ChainSpec::uniform(n, ma, mb, 1.0, 1.0, 1.0);
  for (auto* list : {&s.j_alice, &s.j_bob, &s.j_wire})
    for (double& v : *list) v = j(rng);
  return s;
}

inline NoiseField random_noise(std::mt19937_64& rng, const ChainSpec& spec) {
  std::uniform_real_distribution<double> d(-0.5, 0.5);
  NoiseField f;
  for (const auto& b : bonds(spec)) f.delta_bonds[b] = d(rng);
  for (int j = 0; j < spec.dim(); ++j) f.h_sites[site_at(spec, j)] = d(rng);
  return f;
}

inline double max_abs_diff(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace detail

inline VerifyReport run_verify(const HamiltonianBuilder& build = default_builder) {
  VerifyReport rep;
  auto record = [&](const std::string& name, double err, double tol, const std::string& where) {
    rep.checks.push_back({name, err <= tol, where + ": error " + detail::fmt(err) + " (tol " + detail::fmt(tol) + ")"});
  };

  std::mt19937_64 rng(20260101);
  struct Shape {
    int n, ma, mb;
  };
  const std::vector<Shape> shapes{{2, 1, 1}, {2, 2, 1}, {3, 2, 2}, {4, 2, 2}, {3, 3, 2}, {2, 3, 3}};
  for (const auto& sh : shapes) {
    const std::string where = "N=" + std::to_string(sh.n) + " M=" + std::to_string(sh.ma) +
                              " M~=" + std::to_string(sh.mb);
    const ChainSpec spec = detail::random_spec(rng, sh.n, sh.ma, sh.mb);
    const NoiseField noise = detail::random_noise(rng, spec);

    const auto h_plain = oracle::full_hamiltonian(spec);
    const auto h_noisy = oracle::full_hamiltonian(spec, &noise);
    record("hamiltonian-block",
           (build(spec, nullptr).matrix() - oracle::single_excitation_block(h_plain, spec)).cwiseAbs().maxCoeff(),
           1e-12, where);
    record("noise-diagonal",
           (build(spec, &noise).matrix() - oracle::single_excitation_block(h_noisy, spec)).cwiseAbs().maxCoeff(),
           1e-12, where);

    const double t = 1.7;
    const auto psi = oracle::propagate(h_noisy, oracle::initial_state(spec), t);
    const AmplitudeVector c = propagate(build(spec, &noise), w_initial_state(spec), t);
    record("excitation-conservation", oracle::weight_outside_single(psi), 1e-12, where);
    record("evolution", detail::max_abs_diff(c.values(), oracle::single_excitation_amplitudes(psi, spec.dim())),
           1e-9, where);
    record("norm", std::abs(c.norm_squared() - 1.0), 1e-10, where);

    const auto om = oracle::metrics(psi, spec);
    record("reduced-state", (reduce_to_bob(c, spec).matrix - om.rho_bob.matrix).cwiseAbs().maxCoeff(), 1e-9, where);
    record("fidelity", std::abs(fidelity_w(c, spec) - om.fidelity), 1e-9, where);
    if (spec.m_bob >= 2) {
      double err = 0.0;
      for (int i = 1; i <= spec.m_bob; ++i)
        for (int j = i + 1; j <= spec.m_bob; ++j)
          err = std::max(err, std::abs(concurrence_pair(c, spec, i, j) - om.pair_concurrence(i - 1, j - 1)));
      err = std::max(err, std::abs(concurrence_w(c, spec) - om.cw));
      err = std::max(err, std::abs(concurrence_min(c, spec) - om.cmin));
      record("concurrence", err, 1e-9, where);
    }
  }

  // Branched chain against its effective linear chain.
  for (int ma = 1; ma <= 3; ++ma)
    for (int mb = 1; mb <= 3; ++mb) {
      const ChainSpec spec = ChainSpec::uniform(6, ma, mb, 1.0 / std::sqrt(ma), 1.0 / std::sqrt(mb), 2.0);
      const ChainSpec lin = to_effective_linear(spec);
      const double t = 3.1;
      const double fb = fidelity_w(propagate(build(spec, nullptr), w_initial_state(spec), t), spec);
      const double fl = fidelity_w(propagate(build(lin, nullptr), w_initial_state(lin), t), lin);
      record("effective-mapping", std::abs(fb - fl), 1e-10,
             "M=" + std::to_string(ma) + " M~=" + std::to_string(mb));
    }

  // Bipartite hopping: eigenvalues come in +-E pairs.
  {
    const ChainSpec spec = detail::random_spec(rng, 7, 3, 2);
    const Spectrum s = diagonalize(build(spec, nullptr).matrix());
    const Eigen::Index n = s.values.size();
    double err = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) err = std::max(err, std::abs(s.values(k) + s.values(n - 1 - k)));
    record("spectrum-pairing", err, 1e-10, "N=7 M=3 M~=2");
  }

  // A ten-segment perturbed schedule against piecewise full-space evolution.
  {
    const ChainSpec spec = ChainSpec::uniform(2, 2, 2, 0.7, 0.7, 1.0);
    PerturbationSpec pert;
    pert.kind = TemporalKind::Fluctuating;
    pert.strength_p = 0.1;
    pert.noise = NoiseTargets::all();
    pert.seed = 7;
    const auto params = perturbed_parameters(spec, {}, pert, 4.0, 3);
    Schedule sched;
    std::vector<oracle::FullSegment> full;
    for (const auto& p : params) {
      sched.add(build(p.spec, &p.noise), p.duration);
      full.push_back({p.spec, p.noise, p.duration});
    }
    const AmplitudeVector c = propagate_schedule(sched, w_initial_state(spec));
    const auto psi = oracle::full_evolve_schedule(full, oracle::initial_state(spec));
    record("schedule", detail::max_abs_diff(c.values(), oracle::single_excitation_amplitudes(psi, spec.dim())), 1e-9,
           "N=2 M=2 M~=2, 10 segments");
  }

  // Ensemble results must not depend on the worker count.
  {
    const ChainSpec spec = ChainSpec::uniform(6, 2, 2, 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 1.5);
    PerturbationSpec pert;
    pert.kind = TemporalKind::Fluctuating;
    pert.seed = 11;
    const std::vector<double> ps{0.0, 0.05};
    const auto a = run_ensemble(spec, pert, 5.0, 8, ps, 1);
    const auto b = run_ensemble(spec, pert, 5.0, 8, ps, 3);
    double err = 0.0;
    for (std::size_t k = 0; k < ps.size(); ++k)
      err = std::max({err, std::abs(a.points[k].mean_fidelity - b.points[k].mean_fidelity),
                      std::abs(a.points[k].std_fidelity - b.points[k].std_fidelity)});
    record("determinism", err, 0.0, "1 vs 3 workers");
  }
  return rep;
}

}  // namespace wchain
