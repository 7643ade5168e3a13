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

// Random coupling disorder and random z-noise, and Monte Carlo ensembles over
// them.
//
// Couplings are perturbed multiplicatively, J -> J (1 + delta), and noise
// terms additively, Delta -> Delta + delta, h -> h + delta, with delta uniform
// on [-p, p]. Time-dependent kinds split [0, t_total] into equal segments and
// perturb the previous segment's values at each boundary, so the parameters
// perform a random walk.
//
// Random slots within a segment stream:
//   [0, B)          coupling of bond b
//   [B, 2B)         sigma^z sigma^z strength of bond b
//   [2B, 2B + D)    field on site position j
// A shared (dynamic) delta reuses the draw of the first slot of its group.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "wchain/errors.hpp"
#include "wchain/evolve.hpp"
#include "wchain/metrics.hpp"
#include "wchain/model.hpp"
#include "wchain/parallel.hpp"
#include "wchain/rng.hpp"

namespace wchain {

enum class TemporalKind { Static, Dynamic, Fluctuating };

struct CouplingTargets {
  bool alice_bonds = false;
  bool bob_bonds = false;
  bool wire_bonds = false;

  static constexpr CouplingTargets all() { return {true, true, true}; }
  static constexpr CouplingTargets none() { return {}; }
  bool any() const { return alice_bonds || bob_bonds || wire_bonds; }
};

struct NoiseTargets {
  bool zz = false;
  bool field = false;

  static constexpr NoiseTargets all() { return {true, true}; }
  static constexpr NoiseTargets none() { return {}; }
  bool any() const { return zz || field; }
};

struct PerturbationSpec {
  TemporalKind kind = TemporalKind::Static;
  double strength_p = 0.0;
  CouplingTargets couplings = CouplingTargets::all();
  NoiseTargets noise = NoiseTargets::none();
  int n_segments = 10;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(strength_p >= 0.0) || !std::isfinite(strength_p))
      throw ArgumentError("strength_p must be finite and >= 0");
    if (n_segments < 1) throw ArgumentError("n_segments must be >= 1");
    if (!couplings.any() && !noise.any()) throw ArgumentError("no perturbation target selected");
  }

  /// Number of Hamiltonian segments a schedule uses.
  int segment_count() const { return kind == TemporalKind::Static ? 1 : n_segments; }
};

inline const char* to_string(TemporalKind k) {
  switch (k) {
    case TemporalKind::Static:
      return "static";
    case TemporalKind::Dynamic:
      return "dynamic";
    case TemporalKind::Fluctuating:
      return "fluctuating";
  }
  return "?";
}

namespace detail {

inline bool targets_bond(const ChainSpec& spec, const CouplingTargets& t, int index) {
  if (index < spec.m_alice) return t.alice_bonds;
  if (index < spec.m_alice + spec.n_chain - 1) return t.wire_bonds;
  return t.bob_bonds;
}

}  // namespace detail

/// Copy of `spec` with every targeted coupling scaled by (1 + delta).
inline ChainSpec perturb_couplings(const ChainSpec& spec, const PerturbationSpec& pert,
                                   const SegmentStream& stream) {
  ChainSpec out = spec;
  const int n_bonds = spec.bond_count();
  int first = -1;
  for (int b = 0; b < n_bonds; ++b) {
    if (!detail::targets_bond(spec, pert.couplings, b)) continue;
    if (first < 0) first = b;
    const int slot = pert.kind == TemporalKind::Dynamic ? first : b;
    const double factor = 1.0 + pert.strength_p * stream.symmetric(static_cast<std::uint64_t>(slot));
    if (b < spec.m_alice) {
      out.j_alice[static_cast<std::size_t>(b)] *= factor;
    } else if (b < spec.m_alice + spec.n_chain - 1) {
      out.j_wire[static_cast<std::size_t>(b - spec.m_alice)] *= factor;
    } else {
      out.j_bob[static_cast<std::size_t>(b - spec.m_alice - spec.n_chain + 1)] *= factor;
    }
  }
  return out;
}

/// Copy of `noise` with delta added to every targeted term. The zz target
/// covers all bonds of the chain, the field target all sites.
inline NoiseField perturb_noise(const NoiseField& noise, const ChainSpec& spec, const PerturbationSpec& pert,
                                const SegmentStream& stream) {
  NoiseField out = noise;
  if (!pert.noise.any()) return out;
  const auto n_bonds = static_cast<std::uint64_t>(spec.bond_count());
  const std::uint64_t zz_base = n_bonds;
  const std::uint64_t field_base = 2 * n_bonds;
  const bool shared = pert.kind == TemporalKind::Dynamic;
  const std::uint64_t shared_slot = pert.noise.zz ? zz_base : field_base;
  auto delta = [&](std::uint64_t slot) {
    return pert.strength_p * stream.symmetric(shared ? shared_slot : slot);
  };
  if (pert.noise.zz) {
    const auto all = bonds(spec);
    for (std::uint64_t b = 0; b < n_bonds; ++b) out.delta_bonds[all[b]] += delta(zz_base + b);
  }
  if (pert.noise.field) {
    for (int j = 0; j < spec.dim(); ++j)
      out.h_sites[site_at(spec, j)] += delta(field_base + static_cast<std::uint64_t>(j));
  }
  return out;
}

/// Chain and noise parameters held during one segment.
struct SegmentParameters {
  ChainSpec spec;
  NoiseField noise;
  double duration = 0.0;
};

/// Parameters of every segment of one realization of `pert` over [0, t_total].
inline std::vector<SegmentParameters> perturbed_parameters(const ChainSpec& spec, const NoiseField& noise_baseline,
                                                           const PerturbationSpec& pert, double t_total,
                                                           std::uint64_t realization = 0) {
  spec.validate();
  pert.validate();
  noise_baseline.validate(spec);
  if (!(t_total > 0.0) || !std::isfinite(t_total)) throw ArgumentError("t_total must be finite and > 0");
  const int segments = pert.segment_count();
  const double tau = t_total / segments;
  std::vector<SegmentParameters> out;
  out.reserve(static_cast<std::size_t>(segments));
  ChainSpec cur = spec;
  NoiseField cur_noise = noise_baseline;
  for (int s = 0; s < segments; ++s) {
    const SegmentStream stream(pert.seed, realization, static_cast<std::uint64_t>(s));
    if (pert.couplings.any()) cur = perturb_couplings(cur, pert, stream);
    cur_noise = perturb_noise(cur_noise, cur, pert, stream);
    out.push_back({cur, cur_noise, tau});
  }
  return out;
}

/// Piecewise-constant Hamiltonian for one realization of `pert` over [0, t_total].
inline Schedule build_perturbed_schedule(const ChainSpec& spec, const NoiseField& noise_baseline,
                                         const PerturbationSpec& pert, double t_total,
                                         std::uint64_t realization = 0) {
  Schedule schedule;
  for (const auto& seg : perturbed_parameters(spec, noise_baseline, pert, t_total, realization))
    schedule.add(build_hamiltonian(seg.spec, seg.noise), seg.duration);
  return schedule;
}

struct EnsemblePoint {
  double p = 0.0;
  double mean_fidelity = 0.0;
  double std_fidelity = 0.0;
  double mean_cw = std::numeric_limits<double>::quiet_NaN();
  double mean_cmin = std::numeric_limits<double>::quiet_NaN();
  int realization_count = 0;
};

struct EnsembleResult {
  std::vector<double> p_values;
  std::vector<EnsemblePoint> points;  // one per p value, same order
};

namespace detail {

/// Pairwise sum; fixed association order for a given length.
inline double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

inline double mean_of(const std::vector<double>& x) {
  return pairwise_sum(x.data(), x.size()) / static_cast<double>(x.size());
}

/// Sample standard deviation (n - 1); zero for a single value.
inline double std_of(const std::vector<double>& x, double mean) {
  if (x.size() < 2) return 0.0;
  std::vector<double> sq(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) sq[i] = (x[i] - mean) * (x[i] - mean);
  return std::sqrt(pairwise_sum(sq.data(), sq.size()) / static_cast<double>(x.size() - 1));
}

}  // namespace detail

/// Fidelity and concurrences at t_max, averaged over `n_realizations`
/// schedules for each p. Realization r uses the same random numbers for
/// every p. `threads` = 0 uses all cores; the result does not depend on it.
inline EnsembleResult run_ensemble(const ChainSpec& spec, const PerturbationSpec& pert, double t_max,
                                   int n_realizations, const std::vector<double>& p_grid,
                                   unsigned threads = 0, const NoiseField& noise_baseline = {}) {
  spec.validate();
  pert.validate();
  if (n_realizations < 1) throw ArgumentError("n_realizations must be >= 1");
  if (p_grid.empty()) throw ArgumentError("p_grid is empty");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ArgumentError("t_max must be finite and > 0");
  for (double p : p_grid)
    if (!(p >= 0.0) || !std::isfinite(p)) throw ArgumentError("p values must be finite and >= 0");

  const AmplitudeVector c0 = w_initial_state(spec);
  const std::size_t n_r = static_cast<std::size_t>(n_realizations);
  const std::size_t total = p_grid.size() * n_r;
  std::vector<Snapshot> snaps(total);
  parallel_for(total, threads, [&](std::size_t i) {
    PerturbationSpec local = pert;
    local.strength_p = p_grid[i / n_r];
    const Schedule sched = build_perturbed_schedule(spec, noise_baseline, local, t_max, i % n_r);
    snaps[i] = snapshot(propagate_schedule(sched, c0), spec);
  });

  EnsembleResult out;
  out.p_values = p_grid;
  std::vector<double> f(n_r), cw(n_r), cmin(n_r);
  for (std::size_t k = 0; k < p_grid.size(); ++k) {
    for (std::size_t r = 0; r < n_r; ++r) {
      const Snapshot& s = snaps[k * n_r + r];
      f[r] = s.fidelity;
      cw[r] = s.cw;
      cmin[r] = s.cmin;
    }
    EnsemblePoint pt;
    pt.p = p_grid[k];
    pt.realization_count = n_realizations;
    pt.mean_fidelity = detail::mean_of(f);
    pt.std_fidelity = detail::std_of(f, pt.mean_fidelity);
    if (spec.m_bob >= 2) {
      pt.mean_cw = detail::mean_of(cw);
      pt.mean_cmin = detail::mean_of(cmin);
    }
    out.points.push_back(pt);
  }
  return out;
}

/// p_min, p_min + step, ..., up to p_max inclusive (with rounding slack).
inline std::vector<double> p_range(double p_min, double p_max, double step) {
  if (!(p_min >= 0.0) || !(p_max >= p_min)) throw ArgumentError("need 0 <= p_min <= p_max");
  if (p_max == p_min) return {p_min};
  if (!(step > 0.0)) throw ArgumentError("p step must be > 0");
  const auto n = static_cast<long>(std::floor((p_max - p_min) / step + 1e-9));
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n + 1));
  for (long k = 0; k <= n; ++k) out.push_back(p_min + static_cast<double>(k) * step);
  return out;
}

}  // namespace wchain
