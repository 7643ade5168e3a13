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

// Helpers shared by the test suites. Nothing here calls the library's
// eigensolver-based propagator.

#pragma once

#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "wchain/evolve.hpp"
#include "wchain/model.hpp"

namespace wchain::testing {

/// exp(-i H t) c0 by Pade scaling-and-squaring.
inline Eigen::VectorXcd expm_propagate(const Eigen::MatrixXd& h, const Eigen::VectorXcd& c0, double t) {
  const Eigen::MatrixXcd a = std::complex<double>(0.0, -t) * h.cast<std::complex<double>>();
  return a.exp() * c0;
}

inline ChainSpec random_spec(std::mt19937_64& rng, int n, int ma, int mb, double lo = 0.3, double hi = 2.0) {
  std::uniform_real_distribution<double> j(lo, hi);
  ChainSpec s = ChainSpec::uniform(n, ma, mb, 1.0, 1.0, 1.0);
  for (auto* list : {&s.j_alice, &s.j_bob, &s.j_wire})
    for (double& v : *list) v = j(rng);
  return s;
}

inline NoiseField random_noise(std::mt19937_64& rng, const ChainSpec& spec, double scale = 0.5) {
  std::uniform_real_distribution<double> d(-scale, scale);
  NoiseField f;
  for (const auto& b : bonds(spec)) f.delta_bonds[b] = d(rng);
  for (int j = 0; j < spec.dim(); ++j) f.h_sites[site_at(spec, j)] = d(rng);
  return f;
}

inline AmplitudeVector random_state(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = {g(rng), g(rng)};
  return AmplitudeVector::normalized(v);
}

/// Branched chain whose effective linear image has end couplings 1.
inline ChainSpec branched_chain(int n, int ma, int mb, double jm) {
  return ChainSpec::uniform(n, ma, mb, 1.0 / std::sqrt(ma), 1.0 / std::sqrt(mb), jm);
}

}  // namespace wchain::testing
