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

// Brute-force reference in the full 2^n Hilbert space.
//
// Nothing here uses the single-excitation reduction: the Hamiltonian is
// assembled by applying Pauli strings to every computational basis ket,
// states are evolved with a Taylor series, and reduced states come from an
// explicit partial trace. Qubit q of the canonical site order is bit q of the
// basis index, 1 meaning excited.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "wchain/errors.hpp"
#include "wchain/metrics.hpp"
#include "wchain/model.hpp"

namespace wchain::oracle {

using cd = std::complex<double>;
using FullState = Eigen::VectorXcd;
using FullOperator = Eigen::SparseMatrix<cd>;

inline constexpr int kMaxQubits = 14;

enum class Pauli { X, Y, Z };

/// Pauli matrix on qubit q applied to basis ket s: returns (s', amplitude).
inline std::pair<std::uint64_t, cd> apply_pauli(Pauli p, int q, std::uint64_t s) {
  const std::uint64_t mask = std::uint64_t{1} << q;
  const bool one = (s & mask) != 0;
  switch (p) {
    case Pauli::X:
      return {s ^ mask, 1.0};
    case Pauli::Y:
      return {s ^ mask, one ? cd(0.0, -1.0) : cd(0.0, 1.0)};
    case Pauli::Z:
      return {s, one ? -1.0 : 1.0};
  }
  return {s, 0.0};
}

inline void check_size(const ChainSpec& spec) {
  spec.validate();
  if (spec.dim() > kMaxQubits)
    throw ResourceError("oracle refuses " + std::to_string(spec.dim()) + " qubits (limit " +
                        std::to_string(kMaxQubits) + ")");
}

/// Full H = sum J (XX + YY) + sum Delta ZZ + sum h (1 - Z).
inline FullOperator full_hamiltonian(const ChainSpec& spec, const NoiseField* noise = nullptr) {
  check_size(spec);
  if (noise != nullptr) noise->validate(spec);
  const int n = spec.dim();
  const std::uint64_t size = std::uint64_t{1} << n;

  struct Term {
    cd coef;
    std::vector<std::pair<Pauli, int>> ops;  // applied right to left
  };
  std::vector<Term> terms;
  const auto all = bonds(spec);
  for (int b = 0; b < static_cast<int>(all.size()); ++b) {
    const int i = position(spec, all[static_cast<std::size_t>(b)].first);
    const int k = position(spec, all[static_cast<std::size_t>(b)].second);
    const double j = coupling(spec, b);
    terms.push_back({j, {{Pauli::X, i}, {Pauli::X, k}}});
    terms.push_back({j, {{Pauli::Y, i}, {Pauli::Y, k}}});
  }
  if (noise != nullptr) {
    for (const auto& [bond, delta] : noise->delta_bonds)
      terms.push_back({delta, {{Pauli::Z, position(spec, bond.first)}, {Pauli::Z, position(spec, bond.second)}}});
    for (const auto& [site, h] : noise->h_sites) {
      terms.push_back({h, {}});
      terms.push_back({-h, {{Pauli::Z, position(spec, site)}}});
    }
  }

  std::vector<Eigen::Triplet<cd>> trip;
  trip.reserve(static_cast<std::size_t>(size) * (terms.size() / 2 + 1));
  for (std::uint64_t s = 0; s < size; ++s) {
    for (const auto& term : terms) {
      std::uint64_t out = s;
      cd amp = term.coef;
      for (auto it = term.ops.rbegin(); it != term.ops.rend(); ++it) {
        const auto [next, a] = apply_pauli(it->first, it->second, out);
        out = next;
        amp *= a;
      }
      if (amp != cd(0.0)) trip.emplace_back(static_cast<int>(out), static_cast<int>(s), amp);
    }
  }
  FullOperator h(static_cast<Eigen::Index>(size), static_cast<Eigen::Index>(size));
  h.setFromTriplets(trip.begin(), trip.end());
  h.prune(cd(0.0));
  return h;
}

/// <1_k|H|1_j> read off the full operator.
inline Eigen::MatrixXd single_excitation_block(const FullOperator& h, const ChainSpec& spec) {
  const int d = spec.dim();
  Eigen::MatrixXd out(d, d);
  for (int k = 0; k < d; ++k)
    for (int j = 0; j < d; ++j) {
      const cd v = h.coeff(Eigen::Index{1} << k, Eigen::Index{1} << j);
      out(k, j) = v.real();
    }
  return out;
}

/// |W>_A (x) |0...0>, built by applying X to the vacuum.
inline FullState initial_state(const ChainSpec& spec) {
  check_size(spec);
  FullState psi = FullState::Zero(Eigen::Index{1} << spec.dim());
  const double a = 1.0 / std::sqrt(static_cast<double>(spec.m_alice));
  for (int p = 0; p < spec.m_alice; ++p) {
    const auto [s, amp] = apply_pauli(Pauli::X, p, 0);
    psi(static_cast<Eigen::Index>(s)) += a * amp;
  }
  return psi;
}

/// Embeds single-excitation amplitudes as a full state.
inline FullState embed(const AmplitudeVector& c) {
  if (c.dim() > kMaxQubits) throw ResourceError("oracle embed: too many qubits");
  FullState psi = FullState::Zero(Eigen::Index{1} << c.dim());
  for (int j = 0; j < c.dim(); ++j) psi(Eigen::Index{1} << j) = c[j];
  return psi;
}

/// exp(-iHt) psi by a Taylor series on sub-steps with ||H||_1 dt <= 0.5.
inline FullState propagate(const FullOperator& h, const FullState& psi, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw ArgumentError("oracle propagate: time must be finite and >= 0");
  if (t == 0.0) return psi;
  double norm1 = 0.0;
  for (Eigen::Index col = 0; col < h.outerSize(); ++col) {
    double s = 0.0;
    for (FullOperator::InnerIterator it(h, col); it; ++it) s += std::abs(it.value());
    norm1 = std::max(norm1, s);
  }
  const int steps = std::max(1, static_cast<int>(std::ceil(norm1 * t / 0.5)));
  const double dt = t / steps;
  constexpr int kTerms = 40;
  FullState cur = psi;
  for (int s = 0; s < steps; ++s) {
    FullState term = cur;
    FullState sum = cur;
    for (int k = 1; k <= kTerms; ++k) {
      term = (h * term) * cd(0.0, -dt / k);
      sum += term;
    }
    cur = sum;
  }
  return cur;
}

inline FullState full_evolve(const ChainSpec& spec, const NoiseField* noise, double t) {
  return propagate(full_hamiltonian(spec, noise), initial_state(spec), t);
}

/// One constant stretch of a piecewise Hamiltonian.
struct FullSegment {
  ChainSpec spec;
  NoiseField noise;
  double duration = 0.0;
};

inline FullState full_evolve_schedule(const std::vector<FullSegment>& segments, const FullState& psi0) {
  if (segments.empty()) throw ArgumentError("oracle schedule is empty");
  FullState psi = psi0;
  for (const auto& seg : segments) psi = propagate(full_hamiltonian(seg.spec, &seg.noise), psi, seg.duration);
  return psi;
}

/// Weight outside the one-excitation kets.
inline double weight_outside_single(const FullState& psi) {
  double w = 0.0;
  for (Eigen::Index s = 0; s < psi.size(); ++s)
    if (std::popcount(static_cast<std::uint64_t>(s)) != 1) w += std::norm(psi(s));
  return w;
}

/// Coefficients of |1_j>, in canonical order.
inline Eigen::VectorXcd single_excitation_amplitudes(const FullState& psi, int n_qubits) {
  Eigen::VectorXcd c(n_qubits);
  for (int j = 0; j < n_qubits; ++j) c(j) = psi(Eigen::Index{1} << j);
  return c;
}

/// Tr_{others} |psi><psi| for the listed qubits. Bit r of the result index is
/// kept[r].
inline Eigen::MatrixXcd partial_trace(const FullState& psi, int n_qubits, const std::vector<int>& kept) {
  const int k = static_cast<int>(kept.size());
  std::uint64_t kept_mask = 0;
  for (int q : kept) kept_mask |= std::uint64_t{1} << q;
  std::vector<int> rest;
  for (int q = 0; q < n_qubits; ++q)
    if ((kept_mask >> q & 1U) == 0) rest.push_back(q);

  auto compose = [&](std::uint64_t sub, std::uint64_t env) {
    std::uint64_t s = 0;
    for (int r = 0; r < k; ++r)
      if (sub >> r & 1U) s |= std::uint64_t{1} << kept[static_cast<std::size_t>(r)];
    for (std::size_t r = 0; r < rest.size(); ++r)
      if (env >> r & 1U) s |= std::uint64_t{1} << rest[r];
    return static_cast<Eigen::Index>(s);
  };

  const std::uint64_t n_sub = std::uint64_t{1} << k;
  const std::uint64_t n_env = std::uint64_t{1} << rest.size();
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n_sub), static_cast<Eigen::Index>(n_sub));
  for (std::uint64_t e = 0; e < n_env; ++e)
    for (std::uint64_t a = 0; a < n_sub; ++a) {
      const cd pa = psi(compose(a, e));
      if (pa == cd(0.0)) continue;
      for (std::uint64_t b = 0; b < n_sub; ++b)
        rho(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) += pa * std::conj(psi(compose(b, e)));
    }
  return rho;
}

inline std::vector<int> bob_qubits(const ChainSpec& spec) {
  std::vector<int> q;
  for (int b = 1; b <= spec.m_bob; ++b) q.push_back(position(spec, SiteIndex::bob(b)));
  return q;
}

/// Full 2^M~ reduced state of Bob's qubits.
inline Eigen::MatrixXcd partial_trace_bob_full(const FullState& psi, const ChainSpec& spec) {
  check_size(spec);
  return partial_trace(psi, spec.dim(), bob_qubits(spec));
}

/// Bob's reduced state restricted to {vacuum, |1_{B_q}>}.
inline BobDensityMatrix partial_trace_bob(const FullState& psi, const ChainSpec& spec) {
  const Eigen::MatrixXcd full = partial_trace_bob_full(psi, spec);
  const int m = spec.m_bob;
  std::vector<Eigen::Index> idx{0};
  for (int q = 0; q < m; ++q) idx.push_back(Eigen::Index{1} << q);
  BobDensityMatrix out{Eigen::MatrixXcd(m + 1, m + 1)};
  for (int a = 0; a <= m; ++a)
    for (int b = 0; b <= m; ++b) out.matrix(a, b) = full(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]);
  return out;
}

/// Wootters concurrence of a two-qubit density matrix. The lambdas are the
/// singular values of Psi^T (Y (x) Y) Psi with rho = Psi Psi^dagger, which
/// avoids square roots of near-zero eigenvalues.
inline double wootters_concurrence(const Eigen::Matrix4cd& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho);
  Eigen::Matrix4cd psi = es.eigenvectors();
  for (int k = 0; k < 4; ++k) psi.col(k) *= std::sqrt(std::max(0.0, es.eigenvalues()(k)));
  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  // sigma^y (x) sigma^y in the basis |00>, |01>, |10>, |11>.
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const Eigen::Matrix4cd tau = psi.transpose() * yy * psi;
  Eigen::JacobiSVD<Eigen::Matrix4cd> svd(tau);
  const Eigen::Vector4d l = svd.singularValues();  // descending
  return std::max(0.0, l(0) - l(1) - l(2) - l(3));
}

/// Metrics recomputed from the full state.
struct Metrics {
  Eigen::VectorXcd amplitudes;
  BobDensityMatrix rho_bob;
  double fidelity = 0.0;
  Eigen::MatrixXd pair_concurrence;  // (i, j) 0-based Bob indices, diagonal unused
  double cw = 0.0;
  double cmin = 0.0;
};

inline Metrics metrics(const FullState& psi, const ChainSpec& spec) {
  check_size(spec);
  Metrics m;
  m.amplitudes = single_excitation_amplitudes(psi, spec.dim());
  m.rho_bob = partial_trace_bob(psi, spec);

  // <W|rho|W> over the full Bob space.
  const Eigen::MatrixXcd full = partial_trace_bob_full(psi, spec);
  Eigen::VectorXcd w = Eigen::VectorXcd::Zero(full.rows());
  for (int q = 0; q < spec.m_bob; ++q) w(Eigen::Index{1} << q) = 1.0 / std::sqrt(static_cast<double>(spec.m_bob));
  m.fidelity = std::real(w.dot(full * w));

  const int mb = spec.m_bob;
  m.pair_concurrence = Eigen::MatrixXd::Zero(mb, mb);
  if (mb >= 2) {
    const auto bq = bob_qubits(spec);
    double log_sum = 0.0;
    bool zero = false;
    m.cmin = 1e300;
    int pairs = 0;
    for (int i = 0; i < mb; ++i)
      for (int j = i + 1; j < mb; ++j) {
        const Eigen::Matrix4cd rho = partial_trace(psi, spec.dim(), {bq[static_cast<std::size_t>(i)], bq[static_cast<std::size_t>(j)]});
        const double c = wootters_concurrence(rho);
        m.pair_concurrence(i, j) = m.pair_concurrence(j, i) = c;
        m.cmin = std::min(m.cmin, c);
        if (c <= 0.0) zero = true;
        else log_sum += std::log(c);
        ++pairs;
      }
    m.cw = zero ? 0.0 : std::exp(log_sum / pairs);
  }
  return m;
}

}  // namespace wchain::oracle
