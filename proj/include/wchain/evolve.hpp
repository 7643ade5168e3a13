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

// Exact single-excitation time evolution.
//
// H_1 = V diag(E) V^T is diagonalised once per Hamiltonian and
// c(t) = V exp(-i E t) V^T c(0) is evaluated from the cached spectrum.

#pragma once

#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <lapacke.h>

#include "wchain/errors.hpp"
#include "wchain/model.hpp"

namespace wchain {

namespace detail {

struct Spectrum {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // column k belongs to values(k)
};

}  // namespace detail

using Spectrum = detail::Spectrum;

/// Dense symmetric eigendecomposition (LAPACK dsyevd).
inline Spectrum diagonalize(const Eigen::MatrixXd& h) {
  if (h.rows() != h.cols()) throw ArgumentError("diagonalize: matrix must be square");
  if (!h.allFinite()) throw NumericError("diagonalize: matrix has non-finite entries");
  const auto n = static_cast<lapack_int>(h.rows());
  Spectrum s;
  s.vectors = h;
  s.values.resize(n);
  if (n == 0) return s;
  const lapack_int info =
      LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', n, s.vectors.data(), n, s.values.data());
  if (info != 0) throw NumericError("dsyevd failed with info = " + std::to_string(info));
  return s;
}

/// Cached spectrum of `h`; computed on first call, thread-safe.
inline const Spectrum& spectrum_of(const SingleExcitationHamiltonian& h) {
  auto& cache = h.cache();
  std::call_once(cache.once,
                 [&] { cache.value = std::make_shared<const Spectrum>(diagonalize(h.matrix())); });
  return *cache.value;
}

/// Unit-norm complex amplitudes c_j over the canonical sites.
class AmplitudeVector {
 public:
  static constexpr double kNormTolerance = 1e-10;

  explicit AmplitudeVector(Eigen::VectorXcd values) : values_(std::move(values)) {
    const double n2 = values_.squaredNorm();
    if (!std::isfinite(n2) || std::abs(n2 - 1.0) > kNormTolerance)
      throw ArgumentError("amplitude vector is not normalised (|c|^2 = " + std::to_string(n2) + ")");
  }

  static AmplitudeVector normalized(Eigen::VectorXcd values) {
    const double n = values.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw ArgumentError("cannot normalise a zero vector");
    return AmplitudeVector(values / n);
  }

  int dim() const { return static_cast<int>(values_.size()); }
  const Eigen::VectorXcd& values() const { return values_; }
  std::complex<double> operator[](int i) const { return values_(i); }
  double norm_squared() const { return values_.squaredNorm(); }

 private:
  Eigen::VectorXcd values_;
};

/// Alice holds |W> = (|10..0> + ... + |0..01>)/sqrt(M); every other qubit is |0>.
inline AmplitudeVector w_initial_state(const ChainSpec& spec) {
  spec.validate();
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(spec.dim());
  const double a = 1.0 / std::sqrt(static_cast<double>(spec.m_alice));
  for (int p = 0; p < spec.m_alice; ++p) c(p) = a;
  return AmplitudeVector(std::move(c));
}

/// Backward applies exp(+iHt), undoing a forward step of the same length.
enum class Direction { Forward, Backward };

namespace detail {

inline Eigen::VectorXcd project(const Eigen::MatrixXd& v, const Eigen::VectorXcd& c) {
  Eigen::VectorXd re = v.transpose() * c.real();
  Eigen::VectorXd im = v.transpose() * c.imag();
  Eigen::VectorXcd out(re.size());
  out.real() = re;
  out.imag() = im;
  return out;
}

inline Eigen::VectorXcd apply_phases(const Spectrum& s, const Eigen::VectorXcd& coeff, double t,
                                     Direction dir) {
  const double sign = dir == Direction::Forward ? -1.0 : 1.0;
  Eigen::VectorXcd phased(coeff.size());
  for (Eigen::Index k = 0; k < coeff.size(); ++k)
    phased(k) = coeff(k) * std::polar(1.0, sign * s.values(k) * t);
  Eigen::VectorXcd out(phased.size());
  out.real() = s.vectors * phased.real();
  out.imag() = s.vectors * phased.imag();
  return out;
}

}  // namespace detail

inline AmplitudeVector propagate(const SingleExcitationHamiltonian& h, const AmplitudeVector& c0,
                                 double t, Direction dir = Direction::Forward) {
  if (h.dim() != c0.dim())
    throw ArgumentError("propagate: Hamiltonian has dimension " + std::to_string(h.dim()) +
                        ", state has " + std::to_string(c0.dim()));
  if (!(t >= 0.0) || !std::isfinite(t)) throw ArgumentError("propagate: time must be finite and >= 0");
  if (t == 0.0) return c0;
  const Spectrum& s = spectrum_of(h);
  return AmplitudeVector(detail::apply_phases(s, detail::project(s.vectors, c0.values()), t, dir));
}

/// Repeated evaluation of c(t) from one initial state, for fidelity curves.
class Evolution {
 public:
  Evolution(const SingleExcitationHamiltonian& h, const AmplitudeVector& c0)
      : spectrum_(&spectrum_of(h)), keep_alive_(h), c0_(c0) {
    if (h.dim() != c0.dim()) throw ArgumentError("Evolution: dimension mismatch");
    coeff_ = detail::project(spectrum_->vectors, c0.values());
  }

  AmplitudeVector at(double t) const {
    if (!(t >= 0.0) || !std::isfinite(t)) throw ArgumentError("Evolution: time must be finite and >= 0");
    if (t == 0.0) return c0_;
    return AmplitudeVector(detail::apply_phases(*spectrum_, coeff_, t, Direction::Forward));
  }

  /// c_site(t) without forming the whole vector.
  std::complex<double> amplitude(int site, double t) const {
    std::complex<double> sum = 0.0;
    for (Eigen::Index k = 0; k < coeff_.size(); ++k)
      sum += spectrum_->vectors(site, k) * coeff_(k) * std::polar(1.0, -spectrum_->values(k) * t);
    return sum;
  }

 private:
  const Spectrum* spectrum_;
  SingleExcitationHamiltonian keep_alive_;
  AmplitudeVector c0_;
  Eigen::VectorXcd coeff_;
};

struct Segment {
  SingleExcitationHamiltonian hamiltonian;
  double duration = 0.0;
};

/// Piecewise-constant Hamiltonian sequence.
class Schedule {
 public:
  void add(SingleExcitationHamiltonian h, double duration) {
    if (!(duration >= 0.0) || !std::isfinite(duration))
      throw ArgumentError("segment " + std::to_string(segments_.size()) +
                          ": duration must be finite and >= 0");
    if (!segments_.empty() && h.dim() != segments_.front().hamiltonian.dim())
      throw ArgumentError("segment " + std::to_string(segments_.size()) + ": dimension " +
                          std::to_string(h.dim()) + " differs from segment 0 (" +
                          std::to_string(segments_.front().hamiltonian.dim()) + ")");
    segments_.push_back({std::move(h), duration});
  }

  const std::vector<Segment>& segments() const { return segments_; }
  std::size_t size() const { return segments_.size(); }
  bool empty() const { return segments_.empty(); }

  double total_duration() const {
    double t = 0.0;
    for (const auto& s : segments_) t += s.duration;
    return t;
  }

 private:
  std::vector<Segment> segments_;
};

inline AmplitudeVector propagate_schedule(const Schedule& schedule, const AmplitudeVector& c0) {
  if (schedule.empty()) throw ArgumentError("propagate_schedule: schedule is empty");
  AmplitudeVector c = c0;
  const auto& segs = schedule.segments();
  for (std::size_t i = 0; i < segs.size(); ++i) {
    if (segs[i].hamiltonian.dim() != c.dim())
      throw ArgumentError("segment " + std::to_string(i) + ": dimension " +
                          std::to_string(segs[i].hamiltonian.dim()) + " does not match state dimension " +
                          std::to_string(c.dim()));
    c = propagate(segs[i].hamiltonian, c, segs[i].duration);
  }
  return c;
}

}  // namespace wchain
