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

#ifndef QMONO_QCORE_HPP_
#define QMONO_QCORE_HPP_

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace qmono {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Raised when an input leaves the mathematical domain of an operation
// (non-PSD argument under a square root, non-pure state for a pure-only
// quantity, measurement completeness violated, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kPsdClamp = 1e-10;
inline constexpr double kProbabilityFloor = 1e-12;

//=========================================================================
// Tensor-product structure
//=========================================================================

// Ordered subsystem dimensions. Amplitudes and matrix indices are flattened
// row-major over subsystems: subsystem 0 is the slowest-varying index, so
// |i_0 i_1 ... i_{n-1}> sits at i_0*d_1*...*d_{n-1} + ... + i_{n-1}.
class SystemShape {
 public:
  explicit SystemShape(std::vector<int> dims);

  static SystemShape qubits(int n);

  const std::vector<int>& dims() const { return dims_; }
  int num_subsystems() const { return static_cast<int>(dims_.size()); }
  int dim(int subsystem) const;
  int total_dim() const { return total_; }

  // Shape of the listed subsystems, in their original order.
  SystemShape restrict_to(std::span<const int> keep) const;

  bool operator==(const SystemShape& other) const = default;

 private:
  std::vector<int> dims_;
  int total_ = 1;
};

class DensityMatrix;

class PureState {
 public:
  // Requires unit norm within 1e-12 unless `allow_unnormalized` is set
  // (post-measurement intermediates).
  PureState(SystemShape shape, Vector amplitudes, bool allow_unnormalized = false);

  static PureState normalized(SystemShape shape, Vector amplitudes);

  const SystemShape& shape() const { return shape_; }
  const Vector& amplitudes() const { return amplitudes_; }
  double norm() const { return amplitudes_.norm(); }

  DensityMatrix density() const;

 private:
  SystemShape shape_;
  Vector amplitudes_;
};

// Complex square matrix over a SystemShape. Construction only checks the
// size so that perturbed or unnormalized operators can flow through the
// monotone evaluators; `validate()` enforces the physical invariants.
class DensityMatrix {
 public:
  DensityMatrix(SystemShape shape, Matrix matrix);

  static DensityMatrix from_pure(const PureState& psi);

  const SystemShape& shape() const { return shape_; }
  const Matrix& matrix() const { return matrix_; }
  int dim() const { return static_cast<int>(matrix_.rows()); }

  double trace() const { return matrix_.trace().real(); }
  double purity() const;

  // Hermitian within herm_tol, eigenvalues >= -eig_tol, trace in (0, 1+1e-12].
  void validate(double herm_tol = kHermitianTol, double eig_tol = kPsdClamp) const;
  bool is_valid(double herm_tol = kHermitianTol, double eig_tol = kPsdClamp) const;

  DensityMatrix normalized() const;

 private:
  SystemShape shape_;
  Matrix matrix_;
};

// Hermitian operator supported on one subsystem (acts as block ⊗ I).
class LocalHermitian {
 public:
  LocalHermitian(SystemShape shape, int target, Matrix block);

  const SystemShape& shape() const { return shape_; }
  int target() const { return target_; }
  const Matrix& block() const { return block_; }
  double norm_bound() const { return norm_bound_; }

  Matrix embedded() const;

 private:
  SystemShape shape_;
  int target_;
  Matrix block_;
  double norm_bound_;
};

// Positive commuting pair with P1^2 + P2^2 = I on one subsystem, plus the
// optional polar unitaries applied after the corresponding outcome.
class TwoOutcomeMeasurement {
 public:
  TwoOutcomeMeasurement(SystemShape shape, int target, Matrix p1, Matrix p2,
                        std::optional<Matrix> u1 = std::nullopt,
                        std::optional<Matrix> u2 = std::nullopt);

  const SystemShape& shape() const { return shape_; }
  int target() const { return target_; }
  const Matrix& p1() const { return p1_; }
  const Matrix& p2() const { return p2_; }
  const std::optional<Matrix>& u1() const { return u1_; }
  const std::optional<Matrix>& u2() const { return u2_; }

  // P2^2 - P1^2, the generator of the walk curve.
  Matrix delta() const;

  // Full Kraus operator U_i P_i (or P_i) for outcome 1 or 2, embedded.
  Matrix kraus(int outcome) const;

 private:
  SystemShape shape_;
  int target_;
  Matrix p1_, p2_;
  std::optional<Matrix> u1_, u2_;
};

//=========================================================================
// Operations
//=========================================================================

Matrix tensor_product(const Matrix& a, const Matrix& b);

// Reduced operator on `keep` (any order, deduplicated, reported in original
// subsystem order). Works on arbitrary, not necessarily physical, operators.
Matrix partial_trace(const Matrix& op, const SystemShape& shape, std::span<const int> keep);
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);

// Indices of subsystems not in `part`.
std::vector<int> complement(const SystemShape& shape, std::span<const int> part);

Matrix embed_local(const Matrix& block, const SystemShape& shape, int target);
Matrix embed_local(const LocalHermitian& op);

enum class BracketKind { commutator, anticommutator };
Matrix bracket(const Matrix& a, const Matrix& b, BracketKind kind);

enum class MatrixFunction { sqrt, log, exp, cube };

// Spectral calculus on a Hermitian matrix. For sqrt/log, eigenvalues in
// [-clamp, 0) are treated as 0 and anything below -clamp throws DomainError;
// for log, eigenvalues <= clamp contribute 0 (the 0·log 0 = 0 convention
// used by entropies).
Matrix herm_matrix_function(const Matrix& h, MatrixFunction fn, double clamp = kPsdClamp);

// V f(Λ) V† for an arbitrary real-valued spectral function.
Matrix apply_spectral(const Matrix& h, const std::function<double(double)>& fn);

// exp(i h) for Hermitian h.
Matrix unitary_exp(const Matrix& h);

struct KrausBranch {
  std::optional<DensityMatrix> state;  // empty when probability < p_floor
  double probability = 0.0;
};

// (M ρ M† / p, p) with p = Tr(M†M ρ).
KrausBranch apply_kraus(const DensityMatrix& rho, const Matrix& m,
                        double p_floor = kProbabilityFloor);

double operator_norm(const Matrix& m);
double hermiticity_residual(const Matrix& m);
Eigen::VectorXd hermitian_eigenvalues(const Matrix& h);

}  // namespace qmono

#endif  // QMONO_QCORE_HPP_
