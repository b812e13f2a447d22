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

// Weak-measurement decomposition of two-outcome generalized measurements.
//
// A positive pair (P1, P2), P1^2 + P2^2 = I, is realized as a random walk
// on the curve
//
//   M(x) = sqrt((I + tanh(x) Δ) / 2),   Δ = P2^2 - P1^2,
//
// starting at x = 0 and moving x -> x ± step with the weak two-outcome
// measurement M(x, ±step). The walk stops once |x| >= cutoff. Outcome 1
// corresponds to x -> -inf (M(x) -> P1), outcome 2 to x -> +inf.

#ifndef QMONO_WEAKMEAS_HPP_
#define QMONO_WEAKMEAS_HPP_

#include <cstdint>
#include <vector>

#include "qmono/qcore.hpp"
#include "qmono/sampling.hpp"

namespace qmono {

struct WalkConfig {
  double step = 0.05;
  double cutoff = 7.254328619;  // atanh(1 - 1e-6)
  std::int64_t max_steps = 10'000'000;
  double p_floor = kProbabilityFloor;

  // step in (0, 0.2], cutoff > step.
  void validate() const;
  // K such that the absorbing lattice sites are x = ±K·step.
  int lattice_half_width() const;
  // 1 - tanh(K·step): the finite-cutoff truncation scale.
  double truncation() const;

  static WalkConfig with_truncation(double step, double truncation_tol);
};

enum class WalkOutcome { unabsorbed = 0, first = 1, second = 2 };

struct WalkResult {
  WalkOutcome outcome = WalkOutcome::unabsorbed;
  double final_x = 0.0;
  std::int64_t steps_taken = 0;
  DensityMatrix final_state;
  double log_weight = 0.0;  // Σ log p over the sampled steps
};

struct PolarDecomposition {
  Matrix p1, p2, u1, u2;
};

// M_i = U_i P_i with P_i = sqrt(M_i† M_i). Throws DomainError when
// M1†M1 + M2†M2 != I within 1e-10.
PolarDecomposition polar_reduce(const Matrix& m1, const Matrix& m2);

// Convenience: the reduced measurement with its polar unitaries attached.
TwoOutcomeMeasurement measurement_from_kraus(const SystemShape& shape, int target,
                                             const Matrix& m1, const Matrix& m2);

Matrix curve_operator(double x, const Matrix& delta);

struct StepOperators {
  Matrix plus, minus;
  double c_plus = 0.5, c_minus = 0.5;
};

// M(x, ±eps) = sqrt(C± (I + tanh(x ± eps) Δ) / (I + tanh(x) Δ)),
// C± = (1 ± tanh(eps) tanh(x)) / 2. The quotient is taken in the common
// eigenbasis of numerator and denominator.
StepOperators step_operators(double x, double eps, const Matrix& delta,
                             double p_floor = kProbabilityFloor);

// One sampled walk with the full state updated after every weak step.
WalkResult run_walk(const DensityMatrix& rho, const TwoOutcomeMeasurement& meas,
                    const WalkConfig& config, Rng& rng);

// Same walk process, optionally recording f(state) after every step
// (used by loccsim trajectory trials). Empty function records nothing.
WalkResult run_walk(const DensityMatrix& rho, const TwoOutcomeMeasurement& meas,
                    const WalkConfig& config, Rng& rng,
                    const std::function<void(std::int64_t, double, const DensityMatrix&)>& observer);

struct WalkCounts {
  std::int64_t first = 0;
  std::int64_t second = 0;
  std::int64_t unabsorbed = 0;
  std::int64_t trials() const { return first + second + unabsorbed; }
  double p1() const { return trials() ? static_cast<double>(first) / trials() : 0.0; }
};

// Monte Carlo outcome counts for `trials` walks. Trial t draws from
// Rng::derive(seed, t). Because the walk state at lattice site k is always
// ∝ M(kε) ρ M(kε), the per-site step probabilities are tabulated once and
// each trial only tracks its lattice position; trajectories coincide with
// run_walk for the same generator.
WalkCounts run_walk_counts(const DensityMatrix& rho, const TwoOutcomeMeasurement& meas,
                           const WalkConfig& config, std::int64_t trials, std::uint64_t seed);

struct WalkProbabilities {
  double p1 = 0.0;
  double p2 = 0.0;
  double residual_mass = 0.0;  // probability still on interior sites
  std::int64_t sweeps = 0;
};

// Exact absorption probabilities by dynamic programming over the lattice,
// propagating the unnormalized post-measurement operators of the target
// subsystem through every path. Throws std::length_error if the lattice
// exceeds ~1e5 tree nodes (2 K^2 > 1e5).
WalkProbabilities exact_walk_probabilities(const DensityMatrix& rho,
                                           const TwoOutcomeMeasurement& meas,
                                           const WalkConfig& config,
                                           double mass_tol = 1e-14);

struct TrotterResult {
  Matrix step_unitary;  // exp(iH/n), embedded
  Matrix composed;      // step_unitary^n
  Matrix raw_product;   // (I + iH/n)^n, embedded
  Matrix exact;         // exp(iH), embedded
  double raw_deviation = 0.0;       // ||raw_product - exact||
  double composed_deviation = 0.0;  // ||composed - exact||
};

TrotterResult trotter_unitary(const LocalHermitian& h, int n);

}  // namespace qmono

#endif  // QMONO_WEAKMEAS_HPP_
