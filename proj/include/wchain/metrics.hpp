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

// Figures of merit for the state arriving at Bob's branches.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "wchain/errors.hpp"
#include "wchain/evolve.hpp"
#include "wchain/model.hpp"

namespace wchain {

/// Reduced state of Bob's qubits in the basis {|0..0>, |1_{B_1}>, ..., |1_{B_M~}>}.
struct BobDensityMatrix {
  Eigen::MatrixXcd matrix;

  int dim() const { return static_cast<int>(matrix.rows()); }
};

namespace detail {

inline void check_dim(const AmplitudeVector& c, const ChainSpec& spec) {
  if (c.dim() != spec.dim())
    throw ArgumentError("state dimension " + std::to_string(c.dim()) + " does not match chain dimension " +
                        std::to_string(spec.dim()));
}

inline Eigen::VectorXcd bob_block(const AmplitudeVector& c, const ChainSpec& spec) {
  check_dim(c, spec);
  return c.values().segment(spec.m_alice + spec.n_chain, spec.m_bob);
}

inline Eigen::VectorXcd alice_block(const AmplitudeVector& c, const ChainSpec& spec) {
  check_dim(c, spec);
  return c.values().head(spec.m_alice);
}

inline void check_pair_metric(const ChainSpec& spec) {
  if (spec.m_bob < 2)
    throw UndefinedMetricError("pairwise concurrence needs at least two Bob qubits, chain has " +
                               std::to_string(spec.m_bob));
}

}  // namespace detail

inline BobDensityMatrix reduce_to_bob(const AmplitudeVector& c, const ChainSpec& spec) {
  const Eigen::VectorXcd b = detail::bob_block(c, spec);
  const int m = spec.m_bob;
  BobDensityMatrix rho{Eigen::MatrixXcd::Zero(m + 1, m + 1)};
  rho.matrix.bottomRightCorner(m, m) = b * b.adjoint();
  rho.matrix(0, 0) = 1.0 - b.squaredNorm();
  return rho;
}

/// <W_M~| rho_B |W_M~> = |sum_q c_{B_q}|^2 / M~.
inline double fidelity_w(const AmplitudeVector& c, const ChainSpec& spec) {
  const Eigen::VectorXcd b = detail::bob_block(c, spec);
  return std::norm(b.sum()) / static_cast<double>(spec.m_bob);
}

inline double fidelity_alice(const AmplitudeVector& c, const ChainSpec& spec) {
  const Eigen::VectorXcd a = detail::alice_block(c, spec);
  return std::norm(a.sum()) / static_cast<double>(spec.m_alice);
}

/// C_ij = 2 |c_{B_i} c_{B_j}|, Bob indices 1-based.
inline double concurrence_pair(const AmplitudeVector& c, const ChainSpec& spec, int i, int j) {
  detail::check_pair_metric(spec);
  if (i == j) throw ArgumentError("concurrence_pair: indices must differ");
  if (i < 1 || j < 1 || i > spec.m_bob || j > spec.m_bob)
    throw ArgumentError("concurrence_pair: Bob index out of range 1.." + std::to_string(spec.m_bob));
  const int base = spec.m_alice + spec.n_chain - 1;
  return 2.0 * std::abs(c[base + i]) * std::abs(c[base + j]);
}

/// Geometric mean of all C_ij, i < j. Zero as soon as one pair is zero.
inline double concurrence_w(const AmplitudeVector& c, const ChainSpec& spec) {
  detail::check_pair_metric(spec);
  const Eigen::VectorXcd b = detail::bob_block(c, spec);
  // log C_ij = log 2 + log|c_i| + log|c_j|; each |c_i| shows up in M~-1 pairs.
  const int m = spec.m_bob;
  double log_sum = 0.0;
  for (int q = 0; q < m; ++q) {
    const double a = std::abs(b(q));
    if (a == 0.0) return 0.0;
    log_sum += std::log(a);
  }
  const double pairs = 0.5 * m * (m - 1);
  return std::exp(std::log(2.0) + log_sum * (m - 1) / pairs);
}

inline double concurrence_min(const AmplitudeVector& c, const ChainSpec& spec) {
  detail::check_pair_metric(spec);
  const Eigen::VectorXcd b = detail::bob_block(c, spec);
  // The smallest pair is formed by the two smallest moduli.
  double lo = std::numeric_limits<double>::infinity();
  double next = std::numeric_limits<double>::infinity();
  for (int q = 0; q < spec.m_bob; ++q) {
    const double a = std::abs(b(q));
    if (a < lo) {
      next = lo;
      lo = a;
    } else if (a < next) {
      next = a;
    }
  }
  return 2.0 * lo * next;
}

/// The three ensemble observables at one instant. Concurrences are NaN when
/// Bob has a single qubit.
struct Snapshot {
  double fidelity = 0.0;
  double cw = std::numeric_limits<double>::quiet_NaN();
  double cmin = std::numeric_limits<double>::quiet_NaN();
};

inline Snapshot snapshot(const AmplitudeVector& c, const ChainSpec& spec) {
  Snapshot s;
  s.fidelity = fidelity_w(c, spec);
  if (spec.m_bob >= 2) {
    s.cw = concurrence_w(c, spec);
    s.cmin = concurrence_min(c, spec);
  }
  return s;
}

}  // namespace wchain
