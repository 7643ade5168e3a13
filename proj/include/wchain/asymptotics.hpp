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

// Closed forms for the effective (N+2)-site linear chain when the wire
// coupling J_m dominates the end coupling J.
//
// Sites of the effective chain are numbered 1..N+2 in the comments below and
// stored 0-based. With E = -4 J_m cos(theta) the uniform N-site wire has
// det(H_N - E) = (2 J_m)^N sin((N+1) theta) / sin(theta). Only the modes with
// |E| << J_m carry weight on both end sites, and keeping just those gives
//
//   F(t) ~ sin^2(2 (J/J_m) J t)          N even
//   F(t) ~ sin^4(2 J t / sqrt(N+1))      N odd
//
// with Alice's fidelity given by the matching cos^2 / cos^4.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wchain/errors.hpp"

namespace wchain {

enum class Parity { Even, Odd };

struct AsymptoticRegime {
  int n_wire = 2;
  double j_end = 1.0;
  double j_wire = 100.0;

  Parity parity() const { return n_wire % 2 == 0 ? Parity::Even : Parity::Odd; }
  double ratio() const { return j_wire / j_end; }
  int sites() const { return n_wire + 2; }

  void validate() const {
    if (n_wire < 2) throw ArgumentError("asymptotic regime needs n_wire >= 2");
    if (!(j_end > 0.0) || !(j_wire > 0.0)) throw ArgumentError("couplings must be positive");
    if (ratio() < 1.0) throw ArgumentError("closed forms assume j_wire >= j_end");
  }
};

inline constexpr double kAsymptoticWarnRatio = 10.0;

/// Warning text when J_m/J is below `threshold`, otherwise nothing.
inline std::optional<std::string> regime_warning(const AsymptoticRegime& r,
                                                 double threshold = kAsymptoticWarnRatio) {
  if (r.ratio() >= threshold) return std::nullopt;
  return "J_m/J = " + std::to_string(r.ratio()) + " is below " + std::to_string(threshold) +
         "; closed-form fidelities are unreliable here";
}

/// Argument of the sine in the closed forms at time t.
inline double asymptotic_phase(const AsymptoticRegime& r, double t) {
  if (r.parity() == Parity::Even) return 2.0 * (r.j_end / r.j_wire) * r.j_end * t;
  return 2.0 * r.j_end * t / std::sqrt(static_cast<double>(r.n_wire + 1));
}

inline double asymptotic_fidelity(const AsymptoticRegime& r, double t) {
  if (t < 0.0) throw ArgumentError("asymptotic_fidelity: t must be >= 0");
  const double s = std::sin(asymptotic_phase(r, t));
  return r.parity() == Parity::Even ? s * s : s * s * s * s;
}

inline double asymptotic_fidelity_alice(const AsymptoticRegime& r, double t) {
  if (t < 0.0) throw ArgumentError("asymptotic_fidelity_alice: t must be >= 0");
  const double c = std::cos(asymptotic_phase(r, t));
  return r.parity() == Parity::Even ? c * c : c * c * c * c;
}

/// First time at which the closed form reaches 1.
inline double asymptotic_peak_time(const AsymptoticRegime& r) {
  const double half_pi = 0.5 * std::numbers::pi;
  if (r.parity() == Parity::Even) return half_pi / (2.0 * (r.j_end / r.j_wire) * r.j_end);
  return half_pi * std::sqrt(static_cast<double>(r.n_wire + 1)) / (2.0 * r.j_end);
}

/// det(H_N - E) for the uniform n-site wire at E = -4 j_wire cos(theta).
inline double characteristic_poly_wire(int n, double theta, double j_wire) {
  if (n < 1) throw ArgumentError("characteristic_poly_wire: n must be >= 1");
  const double s = std::sin(theta);
  if (std::abs(s) <= 1e-12)
    throw ArgumentError("characteristic_poly_wire: theta is a multiple of pi, parameterisation is singular");
  return std::pow(2.0 * j_wire, n) * std::sin((n + 1) * theta) / s;
}

/// Leading-order spectrum of the effective chain, ascending. Bulk levels are
/// the bare wire's -4 J_m cos(k pi/(N+1)); the edge pair is -+2J^2/J_m (N even)
/// or -+4J/sqrt(N+1) (N odd, where the bulk also holds an exact zero).
inline std::vector<double> approx_eigenvalues(const AsymptoticRegime& r) {
  r.validate();
  const int n = r.n_wire;
  std::vector<double> e;
  e.reserve(static_cast<std::size_t>(n + 2));
  for (int k = 1; k <= n; ++k)
    e.push_back(-4.0 * r.j_wire * std::cos(k * std::numbers::pi / (n + 1)));
  // Odd N: the central bulk level is zero analytically.
  if (n % 2 == 1) e[static_cast<std::size_t>((n - 1) / 2)] = 0.0;
  const double edge = r.parity() == Parity::Even
                          ? 2.0 * r.j_end * r.j_end / r.j_wire
                          : 4.0 * r.j_end / std::sqrt(static_cast<double>(n + 1));
  e.push_back(-edge);
  e.push_back(edge);
  std::sort(e.begin(), e.end());
  return e;
}

/// Edge eigenvalue E_1: the negative level of smallest magnitude.
inline double approx_edge_eigenvalue(const AsymptoticRegime& r) {
  r.validate();
  return r.parity() == Parity::Even ? -2.0 * r.j_end * r.j_end / r.j_wire
                                    : -4.0 * r.j_end / std::sqrt(static_cast<double>(r.n_wire + 1));
}

struct EdgeMode {
  double energy = 0.0;
  Eigen::VectorXd vector;  // unit norm over the N+2 sites
};

/// Leading-order eigenvectors of the modes with |E| << J_m: two for even N
/// (E_1, E_{N+2}), three for odd N (E_1, E_{N+2}, and the zero mode).
///
/// The relative sign of the two end sites follows from the recurrence
/// 2 J_m (a_{j-1} + a_{j+1}) = E a_j and depends on N mod 4.
inline std::vector<EdgeMode> approx_edge_eigenvectors(const AsymptoticRegime& r) {
  r.validate();
  const int n = r.n_wire;
  const int d = n + 2;
  const double e1 = approx_edge_eigenvalue(r);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::vector<EdgeMode> modes;
  if (r.parity() == Parity::Even) {
    // a_{N+2} = (-1)^{(N-2)/2} a_1 for E_1, opposite for E_{N+2}.
    const double s = ((n - 2) / 2) % 2 == 0 ? 1.0 : -1.0;
    Eigen::VectorXd lo = Eigen::VectorXd::Zero(d);
    lo(0) = inv_sqrt2;
    lo(d - 1) = s * inv_sqrt2;
    Eigen::VectorXd hi = Eigen::VectorXd::Zero(d);
    hi(0) = inv_sqrt2;
    hi(d - 1) = -s * inv_sqrt2;
    modes.push_back({e1, lo});
    modes.push_back({-e1, hi});
    return modes;
  }
  // Odd N. E_{1} and E_{N+2} put weight 2/sqrt(N+1) cos(j pi/2) on the even
  // wire sites j (1-based over the whole chain) and 1/2 on the ends.
  const double s = ((n + 1) / 2) % 2 == 0 ? -1.0 : 1.0;
  const double w = 2.0 / std::sqrt(static_cast<double>(n + 1));
  Eigen::VectorXd lo = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd hi = Eigen::VectorXd::Zero(d);
  lo(0) = 0.5;
  hi(0) = 0.5;
  lo(d - 1) = 0.5 * s;
  hi(d - 1) = 0.5 * s;
  for (int j = 2; j <= n + 1; j += 2) {
    const double v = 0.5 * w * ((j / 2) % 2 == 0 ? 1.0 : -1.0);  // cos(j pi/2)
    lo(j - 1) = v;
    hi(j - 1) = -v;
  }
  // Zero mode: a_{N+2} = (-1)^{(N-3)/2} a_1, wire weight O(J/J_m) dropped.
  const double sc = ((n - 3) / 2) % 2 == 0 ? 1.0 : -1.0;
  Eigen::VectorXd mid = Eigen::VectorXd::Zero(d);
  mid(0) = inv_sqrt2;
  mid(d - 1) = sc * inv_sqrt2;
  modes.push_back({e1, lo});
  modes.push_back({-e1, hi});
  modes.push_back({0.0, mid});
  return modes;
}

/// |sum_k exp(-i E_k t) <1_{N+2}|E_k><E_k|1_1>|^2 restricted to `modes`.
inline double fidelity_from_modes(const std::vector<EdgeMode>& modes, double t) {
  std::complex<double> amp = 0.0;
  for (const auto& m : modes) {
    const auto d = m.vector.size();
    amp += std::polar(1.0, -m.energy * t) * m.vector(0) * m.vector(d - 1);
  }
  return std::norm(amp);
}

}  // namespace wchain
