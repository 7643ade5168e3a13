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

// Geometry of the branched XX chain and its single-excitation Hamiltonian.
//
// Sites are laid out canonically as
//
//   A_1 .. A_M | 1 .. N | B_1 .. B_M~
//
// Every Alice branch couples to wire site 1, every Bob branch to wire site N,
// and the wire is a nearest-neighbour chain. Energies are in units of the
// reference coupling with hbar = 1.

#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wchain/errors.hpp"

namespace wchain {

enum class Role { Alice, Wire, Bob };

/// One qubit of the branched chain. `number` is 1-based within its role.
struct SiteIndex {
  Role role = Role::Wire;
  int number = 1;

  static constexpr SiteIndex alice(int p) { return {Role::Alice, p}; }
  static constexpr SiteIndex wire(int j) { return {Role::Wire, j}; }
  static constexpr SiteIndex bob(int q) { return {Role::Bob, q}; }

  auto operator<=>(const SiteIndex&) const = default;
};

/// Unordered pair of sites; always stored with `first < second`.
struct Bond {
  SiteIndex first;
  SiteIndex second;

  static Bond between(SiteIndex a, SiteIndex b) {
    if (b < a) std::swap(a, b);
    return {a, b};
  }

  auto operator<=>(const Bond&) const = default;
};

struct ChainSpec {
  int n_chain = 2;
  int m_alice = 1;
  int m_bob = 1;
  std::vector<double> j_alice;
  std::vector<double> j_bob;
  std::vector<double> j_wire;

  /// All branch couplings equal per side and a uniform wire.
  static ChainSpec uniform(int n_chain, int m_alice, int m_bob, double j_alice, double j_bob,
                           double j_wire) {
    ChainSpec s;
    s.n_chain = n_chain;
    s.m_alice = m_alice;
    s.m_bob = m_bob;
    s.j_alice.assign(static_cast<std::size_t>(std::max(m_alice, 0)), j_alice);
    s.j_bob.assign(static_cast<std::size_t>(std::max(m_bob, 0)), j_bob);
    s.j_wire.assign(static_cast<std::size_t>(std::max(n_chain - 1, 0)), j_wire);
    s.validate();
    return s;
  }

  /// Strictly linear chain of n_chain + 2 sites (one branch per side).
  static ChainSpec linear(int n_chain, double j_end, double j_wire) {
    return uniform(n_chain, 1, 1, j_end, j_end, j_wire);
  }

  void validate() const {
    if (n_chain < 2) throw SpecError("n_chain must be >= 2, got " + std::to_string(n_chain));
    if (m_alice < 1) throw SpecError("m_alice must be >= 1, got " + std::to_string(m_alice));
    if (m_bob < 1) throw SpecError("m_bob must be >= 1, got " + std::to_string(m_bob));
    if (j_alice.size() != static_cast<std::size_t>(m_alice))
      throw SpecError("j_alice has " + std::to_string(j_alice.size()) + " entries, expected " +
                      std::to_string(m_alice));
    if (j_bob.size() != static_cast<std::size_t>(m_bob))
      throw SpecError("j_bob has " + std::to_string(j_bob.size()) + " entries, expected " +
                      std::to_string(m_bob));
    if (j_wire.size() != static_cast<std::size_t>(n_chain - 1))
      throw SpecError("j_wire has " + std::to_string(j_wire.size()) + " entries, expected " +
                      std::to_string(n_chain - 1));
    for (const auto* list : {&j_alice, &j_bob, &j_wire})
      for (double j : *list)
        if (!std::isfinite(j)) throw SpecError("coupling constants must be finite");
  }

  int dim() const { return n_chain + m_alice + m_bob; }
  int bond_count() const { return m_alice + (n_chain - 1) + m_bob; }

  bool is_linear() const { return m_alice == 1 && m_bob == 1; }

  bool operator==(const ChainSpec&) const = default;
};

/// Canonical linear position of a site (column of the amplitude vector).
inline int position(const ChainSpec& spec, SiteIndex s) {
  switch (s.role) {
    case Role::Alice:
      return s.number - 1;
    case Role::Wire:
      return spec.m_alice + s.number - 1;
    case Role::Bob:
      return spec.m_alice + spec.n_chain + s.number - 1;
  }
  return -1;
}

inline SiteIndex site_at(const ChainSpec& spec, int pos) {
  if (pos < spec.m_alice) return SiteIndex::alice(pos + 1);
  if (pos < spec.m_alice + spec.n_chain) return SiteIndex::wire(pos - spec.m_alice + 1);
  return SiteIndex::bob(pos - spec.m_alice - spec.n_chain + 1);
}

inline bool has_site(const ChainSpec& spec, SiteIndex s) {
  switch (s.role) {
    case Role::Alice:
      return s.number >= 1 && s.number <= spec.m_alice;
    case Role::Wire:
      return s.number >= 1 && s.number <= spec.n_chain;
    case Role::Bob:
      return s.number >= 1 && s.number <= spec.m_bob;
  }
  return false;
}

/// Bonds in canonical order: Alice branches, wire bonds, Bob branches. The
/// index into this list is the bond's identity elsewhere in the library.
inline std::vector<Bond> bonds(const ChainSpec& spec) {
  std::vector<Bond> out;
  out.reserve(static_cast<std::size_t>(spec.bond_count()));
  for (int p = 1; p <= spec.m_alice; ++p)
    out.push_back(Bond::between(SiteIndex::alice(p), SiteIndex::wire(1)));
  for (int j = 1; j < spec.n_chain; ++j)
    out.push_back(Bond::between(SiteIndex::wire(j), SiteIndex::wire(j + 1)));
  for (int q = 1; q <= spec.m_bob; ++q)
    out.push_back(Bond::between(SiteIndex::wire(spec.n_chain), SiteIndex::bob(q)));
  return out;
}

inline bool is_bond(const ChainSpec& spec, const Bond& b) {
  if (!has_site(spec, b.first) || !has_site(spec, b.second)) return false;
  const SiteIndex& a = b.first;
  const SiteIndex& c = b.second;
  // Role ordering is Alice < Wire < Bob, so `a` never has a later role than `c`.
  if (a.role == Role::Alice) return c == SiteIndex::wire(1);
  if (c.role == Role::Bob) return a == SiteIndex::wire(spec.n_chain);
  return a.role == Role::Wire && c.role == Role::Wire && c.number == a.number + 1;
}

/// Coupling of bond `index` in the canonical bond order.
inline double coupling(const ChainSpec& spec, int index) {
  if (index < spec.m_alice) return spec.j_alice[static_cast<std::size_t>(index)];
  index -= spec.m_alice;
  if (index < spec.n_chain - 1) return spec.j_wire[static_cast<std::size_t>(index)];
  index -= spec.n_chain - 1;
  return spec.j_bob[static_cast<std::size_t>(index)];
}

/// sigma^z sigma^z strengths per bond and z-field strengths per site. Missing
/// entries are zero.
struct NoiseField {
  std::map<Bond, double> delta_bonds;
  std::map<SiteIndex, double> h_sites;

  bool empty() const { return delta_bonds.empty() && h_sites.empty(); }

  void validate(const ChainSpec& spec) const {
    for (const auto& [b, v] : delta_bonds) {
      if (!is_bond(spec, b)) throw ValidationError("noise references a bond the chain does not have");
      if (!std::isfinite(v)) throw ValidationError("noise strengths must be finite");
    }
    for (const auto& [s, v] : h_sites) {
      if (!has_site(spec, s)) throw ValidationError("noise references a site the chain does not have");
      if (!std::isfinite(v)) throw ValidationError("noise strengths must be finite");
    }
  }
};

namespace detail {
struct Spectrum;
struct SpectrumCache {
  std::once_flag once;
  std::shared_ptr<const Spectrum> value;
};
}  // namespace detail

/// Real symmetric matrix <1_k|H|1_j> over the canonical sites. Immutable; the
/// eigendecomposition is computed once on first use and shared by copies.
class SingleExcitationHamiltonian {
 public:
  explicit SingleExcitationHamiltonian(Eigen::MatrixXd matrix)
      : matrix_(std::make_shared<const Eigen::MatrixXd>(std::move(matrix))),
        cache_(std::make_shared<detail::SpectrumCache>()) {
    if (matrix_->rows() != matrix_->cols()) throw ArgumentError("Hamiltonian matrix must be square");
  }

  int dim() const { return static_cast<int>(matrix_->rows()); }
  const Eigen::MatrixXd& matrix() const { return *matrix_; }

  /// Shared decomposition cache; see evolve.hpp.
  detail::SpectrumCache& cache() const { return *cache_; }

 private:
  std::shared_ptr<const Eigen::MatrixXd> matrix_;
  std::shared_ptr<detail::SpectrumCache> cache_;
};

/// Diagonal contribution of H_zz + H_z to the single-excitation sector.
///
/// sigma^z_i sigma^z_k is +1 on |1_j> unless j is one of i, k, where it is -1;
/// h_j (1 - sigma^z_j) is 2 h_j on the excited site and 0 elsewhere.
inline Eigen::VectorXd noise_diagonal(const ChainSpec& spec, const NoiseField& noise) {
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(spec.dim());
  for (const auto& [bond, delta] : noise.delta_bonds) {
    diag.array() += delta;
    diag(position(spec, bond.first)) -= 2.0 * delta;
    diag(position(spec, bond.second)) -= 2.0 * delta;
  }
  for (const auto& [site, h] : noise.h_sites) diag(position(spec, site)) += 2.0 * h;
  return diag;
}

inline SingleExcitationHamiltonian build_hamiltonian(const ChainSpec& spec,
                                                     const NoiseField* noise = nullptr) {
  spec.validate();
  const int d = spec.dim();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, d);
  const auto all = bonds(spec);
  for (int b = 0; b < static_cast<int>(all.size()); ++b) {
    const int i = position(spec, all[static_cast<std::size_t>(b)].first);
    const int k = position(spec, all[static_cast<std::size_t>(b)].second);
    const double v = 2.0 * coupling(spec, b);
    h(i, k) = v;
    h(k, i) = v;
  }
  if (noise != nullptr && !noise->empty()) {
    noise->validate(spec);
    h.diagonal() = noise_diagonal(spec, *noise);
  }
  return SingleExcitationHamiltonian(std::move(h));
}

inline SingleExcitationHamiltonian build_hamiltonian(const ChainSpec& spec, const NoiseField& noise) {
  return build_hamiltonian(spec, &noise);
}

namespace detail {
inline bool all_equal(const std::vector<double>& v) {
  for (double x : v)
    if (x != v.front()) return false;
  return true;
}
}  // namespace detail

/// Collapse a permutation-symmetric branched chain onto the (N+2)-site linear
/// chain with end couplings sqrt(M) J_A and sqrt(M~) J_B.
inline ChainSpec to_effective_linear(const ChainSpec& spec) {
  spec.validate();
  if (!detail::all_equal(spec.j_alice) || !detail::all_equal(spec.j_bob))
    throw MappingError("effective linear chain needs equal couplings on every branch of a side");
  if (spec.is_linear()) return spec;
  ChainSpec out = spec;
  out.m_alice = 1;
  out.m_bob = 1;
  out.j_alice = {std::sqrt(static_cast<double>(spec.m_alice)) * spec.j_alice.front()};
  out.j_bob = {std::sqrt(static_cast<double>(spec.m_bob)) * spec.j_bob.front()};
  return out;
}

/// Inverse of to_effective_linear: spread each end coupling over the requested
/// number of branches.
inline ChainSpec from_effective_linear(const ChainSpec& linear, int m_alice, int m_bob) {
  linear.validate();
  if (!linear.is_linear()) throw MappingError("input chain is not strictly linear");
  if (m_alice < 1 || m_bob < 1) throw SpecError("branch counts must be >= 1");
  if (m_alice == 1 && m_bob == 1) return linear;
  ChainSpec out = linear;
  out.m_alice = m_alice;
  out.m_bob = m_bob;
  out.j_alice.assign(static_cast<std::size_t>(m_alice),
                     linear.j_alice.front() / std::sqrt(static_cast<double>(m_alice)));
  out.j_bob.assign(static_cast<std::size_t>(m_bob),
                   linear.j_bob.front() / std::sqrt(static_cast<double>(m_bob)));
  return out;
}

}  // namespace wchain
