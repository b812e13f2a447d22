// Copyright 2026 The qmono Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Entanglement monotones and three-qubit polynomial invariants.
//
// Every catalog function accepts an arbitrary (possibly perturbed or
// unnormalized) operator so that derivative checks can probe it off the
// state manifold. Physical preconditions are enforced only by the named
// public entry points (entropy_of_entanglement, phi_abc, ...).

#ifndef QMONO_MONOTONES_HPP_
#define QMONO_MONOTONES_HPP_

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qmono/qcore.hpp"

namespace qmono {

//=========================================================================
// Basic monotones
//=========================================================================

double norm_monotone(const DensityMatrix& rho);

// Tr(ρ_part^2).
double local_purity(const DensityMatrix& rho, std::span<const int> part);

// -Tr(ρ_part log2 ρ_part), no purity check.
double marginal_entropy(const DensityMatrix& rho, std::span<const int> part);

// marginal_entropy for pure ρ; throws DomainError when Tr ρ^2 < 1 - 1e-8.
double entropy_of_entanglement(const DensityMatrix& rho, std::span<const int> part);

//=========================================================================
// Three-qubit invariants
//=========================================================================

// Permutation of {0, .., n-1} in one-line notation: perm[m] = σ(m).
using Permutation = std::vector<int>;

struct InvariantValue {
  double value = 0.0;
  double imag = 0.0;  // imaginary residue discarded from the complex sum
};

// Brute-force contraction
//   Σ Π_m α_{i_m j_m k_m} α*_{i_m j_σ(m) k_τ(m)}
// over all index tuples. Requires a 3-qubit state and degree <= 3.
InvariantValue polynomial_invariant(const PureState& psi, const Permutation& sigma,
                                    const Permutation& tau);

// Raw 12-index ε-contraction c; I5 = |c|^2.
Complex i5_contraction_exhaustive(const PureState& psi);
// Same contraction through the 2x2 slices A_k = α_{··k}:
// B(k,l) = Σ ε ε (A_k)(A_l), c = Σ ε_{k1k3} ε_{k2k4} B(k1,k2) B(k3,k4).
Complex i5_contraction_sliced(const PureState& psi);

// I5 as a quartic polynomial of the density matrix; equals |c|^2 on pure states.
double i5_from_density(const Matrix& rho);

struct KempeRoutes {
  double ab = 0.0, ac = 0.0, bc = 0.0;
};

// 3Tr{ρ_XY(ρ_X⊗ρ_Y)} - Trρ_X^3 - Trρ_Y^3 for XY = AB, AC, BC.
KempeRoutes kempe_i4_three_ways(const DensityMatrix& rho);

// 69 - Tr X^3 - 3Tr ρ_AB^2 with X = 2ρ_AB + ρ_A⊗I + I⊗ρ_B, from a two-qubit
// operator; marginals are taken from the same ρ_AB. With check_positive the
// X >= 0 property is asserted (DomainError otherwise).
double phi_from_rho_ab(const Matrix& rho_ab, bool check_positive = false);
double phi_abc(const DensityMatrix& rho);
double phi_abc(const PureState& psi);

// Tr{X^3} expansion and the partial-trace identities used to derive φ.
struct ExpansionCheck {
  double tr_x3_direct = 0.0;
  double tr_x3_expanded = 0.0;
  double max_residual = 0.0;
};
ExpansionCheck trx3_expansion_check(const PureState& psi);

// 3 - (I1 + I2 + I3) I4. Conjectured only.
double sigma_abc(const DensityMatrix& rho);
double sigma_abc(const PureState& psi);

struct InvariantSet {
  double i1 = 0.0, i2 = 0.0, i3 = 0.0, i4 = 0.0, i5 = 0.0;
  double tau_ab_c = 0.0, tau_ac_b = 0.0, tau_bc_a = 0.0, tau_abc = 0.0;
  double phi = 0.0;
  double sigma = 0.0;
  double max_imag_residual = 0.0;
};

InvariantSet three_qubit_invariants(const PureState& psi);

// τ_ABC(GHZ) as produced by 2√I5; the 3-tangle of GHZ is 1, so this is the
// calibration factor between the stored contraction and the literature value.
double tangle_calibration_factor();

//=========================================================================
// Catalog
//=========================================================================

enum class Direction { decreasing, increasing };
enum class Domain { pure_only, mixed };

const char* to_string(Direction d);
const char* to_string(Domain d);

struct MonotoneDescriptor {
  std::string name;
  std::function<double(const DensityMatrix&)> evaluate;
  Direction direction = Direction::decreasing;
  Domain domain = Domain::pure_only;
  // False where derivatives are ill-conditioned. Empty means always smooth.
  std::function<bool(const DensityMatrix&)> smooth_on;
  // Distance to the edge of the function's domain, used to cap finite
  // difference steps. Empty means unbounded.
  std::function<double(const DensityMatrix&)> domain_margin;
  bool conjectured = false;
  SystemShape shape = SystemShape::qubits(3);

  bool is_smooth(const DensityMatrix& rho) const { return !smooth_on || smooth_on(rho); }
  double margin(const DensityMatrix& rho) const;
};

// norm, purity_A, entropy_A, tau_AB_C, tau_AC_B, tau_BC_A, tau_ABC,
// phi_ABC, sigma_ABC.
const std::vector<MonotoneDescriptor>& catalog();
std::optional<MonotoneDescriptor> find_monotone(const std::string& name);
std::vector<std::string> catalog_names();

// Copy of `d` with the direction overridden (negative controls).
MonotoneDescriptor relabeled(const MonotoneDescriptor& d, Direction direction);

}  // namespace qmono

#endif  // QMONO_MONOTONES_HPP_
