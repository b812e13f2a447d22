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

// Differential monotonicity conditions, evaluated by finite differences for
// an arbitrary function of the density matrix.
//
//   LU:          Tr{f'(ρ) i[ε,ρ]} = 0
//   measurement: ¼ Tr{f'(ρ) [[ε,ρ],ε]} + Tr{f''(ρ) D⊗D} <= 0,
//                D = Tr(ερ)ρ - ½{ε,ρ}
//   convexity:   Tr{f''(ρ) σ⊗σ} >= 0 for traceless Hermitian σ
//
// and cross-checked against exact evaluations of
//   F(ρ,ε) = f(e^{iε} ρ e^{-iε}) - f(ρ)
//   G(ρ,ε) = p1 f(M1ρM1/p1) + p2 f(M2ρM2/p2) - f(ρ),  M1,2 = sqrt((I ± ε)/2).
//
// Measurement values are reported per unit ||ε||^2 (operator norm).

#ifndef QMONO_DIFFCHECK_HPP_
#define QMONO_DIFFCHECK_HPP_

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qmono/monotones.hpp"
#include "qmono/qcore.hpp"

namespace qmono {

using StateFunction = std::function<double(const DensityMatrix&)>;
using AmplitudeFunction = std::function<double(const Vector&)>;

struct CheckConfig {
  int n_states = 200;
  int n_directions = 20;
  double fd_step = 1e-4;    // first-order differences
  double fd_step2 = 1e-2;   // second-order differences
  double eps_norm = 0.1;
  double tol_zero = 1e-8;   // relative to scale = max(1, |f(ρ)|)
  double tol_sign = 1e-7;
  bool richardson = true;
  double g_time = 0.02;     // G is sampled at g_time and g_time / 2
  std::uint64_t seed = 0;

  void validate() const;  // throws std::invalid_argument
};

struct FdResult {
  double value = 0.0;
  bool ok = true;  // false when a probe left the function's domain
};

// Directional finite difference of order 1 or 2 along `a`. The direction is
// normalized before probing and the result rescaled by ||a||_F^order. The
// step is capped at 0.05·margin when a finite domain margin is given.
FdResult fd_directional(const StateFunction& f, const DensityMatrix& rho, const Matrix& a,
                        double h, int order, bool richardson = true,
                        double margin = std::numeric_limits<double>::infinity());

// Building blocks on full-size operators.
Matrix measurement_direction(const Matrix& rho, const Matrix& eps);  // D
Matrix double_commutator(const Matrix& rho, const Matrix& eps);      // [[ε,ρ],ε]

// Exact F(ρ, ε) and G(ρ, ε) for an embedded local ε with ||ε|| < 1.
double f_function(const StateFunction& f, const DensityMatrix& rho, const Matrix& eps);
double g_function(const StateFunction& f, const DensityMatrix& rho, const Matrix& eps);

struct FdSteps {
  double h1 = 1e-4;
  double h2 = 1e-2;
  bool richardson = true;
  double margin = std::numeric_limits<double>::infinity();
};

struct LuValue {
  double fd_value = 0.0;     // derivative along i[ε,ρ]
  double exact_value = 0.0;  // F(ρ, ε) at finite ε
  bool ok = true;
};
LuValue lu_condition(const StateFunction& f, const DensityMatrix& rho, const LocalHermitian& eps,
                     const FdSteps& steps = {});

struct MeasurementValue {
  double first_term = 0.0;   // ¼ Tr{f' [[ε,ρ],ε]}
  double second_term = 0.0;  // Tr{f'' D⊗D}
  double lhs = 0.0;
  double g_ratio = 0.0;      // G(ρ, tε)/t^2 extrapolated to t -> 0
  bool ok = true;
};
MeasurementValue measurement_condition(const StateFunction& f, const DensityMatrix& rho,
                                       const LocalHermitian& eps, const FdSteps& steps = {},
                                       double g_time = 0.02);

// Second directional derivative along σ (any Hermitian, usually traceless).
FdResult convexity_condition(const StateFunction& f, const DensityMatrix& rho, const Matrix& sigma,
                             const FdSteps& steps = {});

struct AmplitudeConditions {
  // d/dh f(α + h iεα): the difference of the two sides of the amplitude LU
  // identity, times -i.
  double lu_residual = 0.0;
  // Σ ∂²f/∂α∂α (εα - <ε>α)(εα - <ε>α) + c.c.
  double meas_lhs = 0.0;
  bool ok = true;
};
AmplitudeConditions pure_amplitude_conditions(const AmplitudeFunction& f, const PureState& psi,
                                              const LocalHermitian& eps, const FdSteps& steps = {});

AmplitudeFunction amplitude_form(const StateFunction& f, const SystemShape& shape);

// Closed forms used as independent oracles.
double purity_hessian_closed_form(const Matrix& y_part);                     // 2 Tr Y^2
double entropy_hessian_commuting_form(const Matrix& rho_part, const Matrix& y_part);  // -Tr ρ^-1 Y^2 / ln 2
double entropy_hessian_spectral_form(const Matrix& rho_part, const Matrix& y_part);   // exact, / ln 2

enum class SampleClass { pass, violation, ill_conditioned };
const char* to_string(SampleClass c);

struct ConditionSample {
  int state_id = 0;
  int direction_id = 0;
  int target = 0;
  double scale = 1.0;
  double lu_value = 0.0;
  double lu_exact = 0.0;
  double meas_value = 0.0;
  std::optional<double> convexity_value;
  double g_exact_ratio = 0.0;
  SampleClass classification = SampleClass::pass;
};

struct CheckReport {
  std::string monotone;
  std::string direction;
  std::string domain;
  bool conjectured = false;
  CheckConfig config;
  std::int64_t total = 0;
  std::int64_t passed = 0;
  std::int64_t violations = 0;
  std::int64_t ill_conditioned = 0;
  double worst_violation = 0.0;        // largest excess over tolerance
  double max_abs_lu = 0.0;
  double max_cross_discrepancy = 0.0;  // max |lhs - g_ratio|
  std::int64_t cross_failures = 0;     // samples with |lhs - g| > max(1e-4, 1e-3|lhs|)
  std::optional<double> fitted_factor;  // least-squares lhs / g_ratio
  double min_lhs = 0.0, max_lhs = 0.0;
  std::vector<ConditionSample> samples;
};

CheckReport run_check(const MonotoneDescriptor& descriptor, const CheckConfig& config);

}  // namespace qmono

#endif  // QMONO_DIFFCHECK_HPP_
