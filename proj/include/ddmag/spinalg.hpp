// Copyright 2026 The ddmag Authors
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

#pragma once

// Collective spin-J algebra in the Jz eigenbasis.
//
// Basis ordering is fixed: index k = 0 .. 2J holds the amplitude of
// |J, m = J - k>. All operators are tridiagonal in this basis.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "ddmag/types.hpp"

namespace ddmag {

using cplx = std::complex<double>;

class SpinMagnitude {
 public:
  /// Spin J = twice_j / 2; requires twice_j >= 1.
  explicit SpinMagnitude(int twice_j);
  /// Accepts integer and half-integer J >= 1/2.
  static SpinMagnitude from_value(double j);

  int twice() const { return twice_j_; }
  double value() const { return 0.5 * twice_j_; }
  std::size_t dim() const { return static_cast<std::size_t>(twice_j_) + 1; }
  double m(std::size_t k) const { return value() - static_cast<double>(k); }
  double casimir() const { return value() * (value() + 1.0); }

  friend bool operator==(SpinMagnitude a, SpinMagnitude b) { return a.twice_j_ == b.twice_j_; }

 private:
  int twice_j_;
};

/// Hermitian tridiagonal matrix. The subdiagonal is conj(upper).
struct TridiagonalOp {
  std::vector<double> diag;  // empty means zero diagonal
  std::vector<cplx> upper;   // <k|H|k+1>, size dim-1
  double spectral_bound = 0.0;

  std::size_t dim() const { return upper.size() + 1; }
  void apply(std::span<const cplx> in, std::span<cplx> out) const;
};

struct SpinOperators {
  SpinMagnitude spin;
  TridiagonalOp jx;
  TridiagonalOp jy;
  TridiagonalOp jz;
  std::vector<double> m;       // m_k = J - k
  std::vector<double> ladder;  // <k-1|J+|k>; ladder[0] = 0

  /// n.J for an arbitrary (not necessarily unit) vector n.
  TridiagonalOp along(const Vec3& n) const;
};

SpinOperators make_operators(SpinMagnitude j);

/// Shared immutable operator set for `j`; built on first use.
const SpinOperators& operators_for(SpinMagnitude j);

class SpinState {
 public:
  SpinState(SpinMagnitude j, std::vector<cplx> amplitudes);

  /// Jz eigenstate |J, m>.
  static SpinState basis(SpinMagnitude j, double m);

  SpinMagnitude spin() const { return j_; }
  std::size_t dim() const { return amp_.size(); }
  std::span<const cplx> amplitudes() const { return amp_; }
  std::span<cplx> data() { return amp_; }
  double norm() const;

 private:
  SpinMagnitude j_;
  std::vector<cplx> amp_;
};

/// First moments and symmetrised second moments <(Ja Jb + Jb Ja)/2>.
struct Moments {
  double norm = 0.0;
  Vec3 mean;
  double xx = 0.0, yy = 0.0, zz = 0.0, xy = 0.0, xz = 0.0, yz = 0.0;

  double second(Axis a, Axis b) const;
  double covariance(Axis a, Axis b) const { return second(a, b) - mean[a] * mean[b]; }
  double variance(Axis a) const { return covariance(a, a); }
  /// Variance of u.J for a unit vector u.
  double variance_along(const Vec3& u) const;
};

/// One pass over the amplitudes; no normalisation check.
Moments moments(const SpinState& psi);

/// Throws InvalidArgument when | |psi| - 1 | > 1e-9.
void require_normalized(const SpinState& psi);

double expectation(const SpinState& psi, Axis a);
double variance(const SpinState& psi, Axis a);

cplx overlap(const SpinState& a, const SpinState& b);
/// |<a|b>|^2
double fidelity(const SpinState& a, const SpinState& b);

/// exp(-i pi Jx) |psi>, applied exactly: |J,m> -> exp(-i pi J) |J,-m>.
SpinState apply_pi_pulse_x(const SpinState& psi);
void apply_pi_pulse_x_inplace(SpinState& psi);

/// exp(-i angle Jz) |psi>.
SpinState rotate_z(const SpinState& psi, double angle);
void rotate_z_inplace(SpinState& psi, double angle);

/// Scratch vectors for the Chebyshev propagator; reuse across calls.
struct PropagatorWorkspace {
  std::vector<cplx> prev, cur, next, acc;
};

/// exp(-i t H) |psi> by a Chebyshev expansion with Bessel coefficients,
/// H tridiagonal with |spectrum| <= h.spectral_bound.
SpinState propagate(const TridiagonalOp& h, const SpinState& psi, double t);
void propagate_inplace(const TridiagonalOp& h, double t, SpinState& psi,
                       PropagatorWorkspace& ws);

/// exp(-i angle n.J) for a fixed axis, factored as
///   Rz(alpha) Ry(beta) Rz(angle) Ry(-beta) Rz(-alpha)
/// with beta <= pi/2. The z rotations are exact diagonal phases; only the
/// two tilts use the polynomial propagator, whose cost scales with beta*J.
class RotationOperator {
 public:
  RotationOperator(SpinMagnitude j, const Vec3& axis, double angle);

  void apply(SpinState& psi, PropagatorWorkspace& ws) const;
  SpinState operator()(const SpinState& psi) const;

  double tilt() const { return beta_; }

 private:
  SpinMagnitude j_;
  double beta_ = 0.0;
  std::vector<cplx> pre_, mid_, post_;  // mid_ alone when beta_ == 0
  std::vector<cplx> tilt_in_, tilt_out_; // Chebyshev coefficients
};

/// exp(-i dt H) |psi> with H = -c2p J^2 + gamma field.J. The Casimir term is
/// a global phase on a fixed-J multiplet and is dropped; c2p is accepted so
/// callers can state it. Throws InvalidArgument for dt < 0 or a non-finite
/// field, NumericalError if the norm drifts by more than 1e-10.
SpinState evolve_segment(const SpinState& psi, const Vec3& field, double c2p,
                         double dt, double gamma = kGamma);

}  // namespace ddmag
