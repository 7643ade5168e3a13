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

// Grid search for the uniform wire coupling J_m and read-out time that
// maximise the fidelity of the ordered effective linear chain.
//
// The grid is jm_i = jm_max i / jm_steps (i = 1..jm_steps) and
// t_k = t_max k / t_steps (k = 1..t_steps). For each jm the best t on the
// grid is kept; the overall winner is ordered by (F desc, jm asc, t asc).

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "wchain/errors.hpp"
#include "wchain/evolve.hpp"
#include "wchain/model.hpp"
#include "wchain/parallel.hpp"

namespace wchain {

struct ScanSample {
  double jm = 0.0;
  double t = 0.0;  // best time on the grid for this jm
  double fidelity = 0.0;
};

struct ScanResult {
  double best_jm = 0.0;
  double best_t = 0.0;
  double best_fidelity = 0.0;
  std::vector<ScanSample> samples;  // one per jm, ascending
};

struct ScanOptions {
  bool refine = false;
  int refine_points = 20;  // per axis, across +-1 coarse step
  unsigned threads = 0;
  double j_end = 1.0;
};

/// Transfer amplitude <N+2| exp(-iHt) |1> of a linear chain, reusable over t.
class EndToEnd {
 public:
  explicit EndToEnd(const ChainSpec& linear) {
    if (!linear.is_linear()) throw ArgumentError("EndToEnd needs a linear chain");
    const Spectrum s = diagonalize(build_hamiltonian(linear).matrix());
    energies_ = s.values;
    weights_ = s.vectors.row(s.vectors.rows() - 1).transpose().cwiseProduct(s.vectors.row(0).transpose());
  }

  double fidelity(double t) const {
    std::complex<double> a = 0.0;
    for (Eigen::Index k = 0; k < energies_.size(); ++k) a += weights_(k) * std::polar(1.0, -energies_(k) * t);
    return std::norm(a);
  }

 private:
  Eigen::VectorXd energies_;
  Eigen::VectorXd weights_;
};

namespace detail {

inline bool better(const ScanSample& a, const ScanSample& b) {
  if (a.fidelity != b.fidelity) return a.fidelity > b.fidelity;
  if (a.jm != b.jm) return a.jm < b.jm;
  return a.t < b.t;
}

inline ScanSample best_on_time_grid(int n_wire, double j_end, double jm, double t_lo, double t_hi, int t_steps,
                                    bool include_lo) {
  const EndToEnd e(ChainSpec::linear(n_wire, j_end, jm));
  ScanSample best{jm, 0.0, -1.0};
  for (int k = include_lo ? 0 : 1; k <= t_steps; ++k) {
    const double t = t_lo + (t_hi - t_lo) * k / t_steps;
    const ScanSample s{jm, t, e.fidelity(t)};
    if (better(s, best)) best = s;
  }
  return best;
}

}  // namespace detail

inline ScanResult scan_optimal(int n_wire, double jm_max, int jm_steps, double t_max_bound, int t_steps,
                               const ScanOptions& opt = {}) {
  if (n_wire < 2) throw ArgumentError("scan_optimal: n_wire must be >= 2");
  if (!(jm_max > 0.0) || !(t_max_bound > 0.0) || !std::isfinite(jm_max) || !std::isfinite(t_max_bound))
    throw ArgumentError("scan_optimal: bounds must be finite and positive");
  if (jm_steps < 1 || t_steps < 1) throw ArgumentError("scan_optimal: empty grid");
  if (!(opt.j_end > 0.0)) throw ArgumentError("scan_optimal: j_end must be positive");

  ScanResult out;
  out.samples.resize(static_cast<std::size_t>(jm_steps));
  parallel_for(out.samples.size(), opt.threads, [&](std::size_t i) {
    const double jm = jm_max * static_cast<double>(i + 1) / jm_steps;
    out.samples[i] = detail::best_on_time_grid(n_wire, opt.j_end, jm, 0.0, t_max_bound, t_steps, false);
  });
  ScanSample best = out.samples.front();
  for (const auto& s : out.samples)
    if (detail::better(s, best)) best = s;

  if (opt.refine && opt.refine_points >= 1) {
    const double djm = jm_max / jm_steps;
    const double dt = t_max_bound / t_steps;
    const double jm_lo = std::max(best.jm - djm, djm * 1e-3);
    const double jm_hi = std::min(best.jm + djm, jm_max);
    const double t_lo = std::max(best.t - dt, 0.0);
    const double t_hi = std::min(best.t + dt, t_max_bound);
    const int n = opt.refine_points;
    std::vector<ScanSample> fine(static_cast<std::size_t>(n) + 1);
    parallel_for(fine.size(), opt.threads, [&](std::size_t i) {
      const double jm = jm_lo + (jm_hi - jm_lo) * static_cast<double>(i) / n;
      fine[i] = detail::best_on_time_grid(n_wire, opt.j_end, jm, t_lo, t_hi, n, true);
    });
    for (const auto& s : fine)
      if (s.fidelity > best.fidelity) best = s;
  }

  out.best_jm = best.jm;
  out.best_t = best.t;
  out.best_fidelity = best.fidelity;
  return out;
}

}  // namespace wchain
