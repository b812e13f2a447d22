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

#include "qmono/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qmono {

namespace {

constexpr double kMeasurementTol = 1e-10;

std::vector<int> normalize_index_set(const SystemShape& shape, std::span<const int> keep) {
  std::vector<int> out(keep.begin(), keep.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty()) throw std::invalid_argument("partial_trace: empty subsystem set");
  for (int s : out) {
    if (s < 0 || s >= shape.num_subsystems()) {
      std::ostringstream msg;
      msg << "subsystem index " << s << " out of range for " << shape.num_subsystems()
          << " subsystems";
      throw std::invalid_argument(msg.str());
    }
  }
  return out;
}

void require_square(const Matrix& m, int dim, const char* what) {
  if (m.rows() != dim || m.cols() != dim) {
    std::ostringstream msg;
    msg << what << ": expected " << dim << "x" << dim << ", got " << m.rows() << "x" << m.cols();
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

//-------------------------------------------------------------------------
// SystemShape
//-------------------------------------------------------------------------

SystemShape::SystemShape(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw std::invalid_argument("SystemShape: no subsystems");
  for (int d : dims_) {
    if (d < 2) throw std::invalid_argument("SystemShape: every dimension must be >= 2");
    total_ *= d;
  }
}

SystemShape SystemShape::qubits(int n) { return SystemShape(std::vector<int>(n, 2)); }

int SystemShape::dim(int subsystem) const {
  if (subsystem < 0 || subsystem >= num_subsystems()) {
    throw std::invalid_argument("SystemShape::dim: subsystem index out of range");
  }
  return dims_[subsystem];
}

SystemShape SystemShape::restrict_to(std::span<const int> keep) const {
  std::vector<int> idx = normalize_index_set(*this, keep);
  std::vector<int> dims;
  dims.reserve(idx.size());
  for (int s : idx) dims.push_back(dims_[s]);
  return SystemShape(std::move(dims));
}

//-------------------------------------------------------------------------
// States and operators
//-------------------------------------------------------------------------

PureState::PureState(SystemShape shape, Vector amplitudes, bool allow_unnormalized)
    : shape_(std::move(shape)), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != shape_.total_dim()) {
    throw std::invalid_argument("PureState: amplitude count does not match shape");
  }
  if (!allow_unnormalized && std::abs(amplitudes_.norm() - 1.0) > 1e-12) {
    throw DomainError("PureState: amplitudes are not normalized");
  }
}

PureState PureState::normalized(SystemShape shape, Vector amplitudes) {
  const double n = amplitudes.norm();
  if (n == 0.0) throw DomainError("PureState: zero vector");
  return PureState(std::move(shape), amplitudes / n);
}

DensityMatrix PureState::density() const { return DensityMatrix::from_pure(*this); }

DensityMatrix::DensityMatrix(SystemShape shape, Matrix matrix)
    : shape_(std::move(shape)), matrix_(std::move(matrix)) {
  require_square(matrix_, shape_.total_dim(), "DensityMatrix");
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  const Vector& a = psi.amplitudes();
  return DensityMatrix(psi.shape(), a * a.adjoint());
}

double DensityMatrix::purity() const {
  // Tr(ρ²) = Σ |ρ_ij|² for Hermitian ρ.
  return matrix_.cwiseAbs2().sum();
}

void DensityMatrix::validate(double herm_tol, double eig_tol) const {
  if (hermiticity_residual(matrix_) > herm_tol) {
    throw DomainError("DensityMatrix: not Hermitian");
  }
  const double tr = trace();
  if (!(tr > 0.0) || tr > 1.0 + 1e-12) throw DomainError("DensityMatrix: trace outside (0, 1]");
  if (hermitian_eigenvalues(matrix_).minCoeff() < -eig_tol) {
    throw DomainError("DensityMatrix: negative eigenvalue");
  }
}

bool DensityMatrix::is_valid(double herm_tol, double eig_tol) const {
  try {
    validate(herm_tol, eig_tol);
    return true;
  } catch (const DomainError&) {
    return false;
  }
}

DensityMatrix DensityMatrix::normalized() const {
  const double tr = trace();
  if (!(tr > 0.0)) throw DomainError("DensityMatrix: cannot normalize zero trace");
  return DensityMatrix(shape_, matrix_ / tr);
}

LocalHermitian::LocalHermitian(SystemShape shape, int target, Matrix block)
    : shape_(std::move(shape)), target_(target), block_(std::move(block)) {
  require_square(block_, shape_.dim(target_), "LocalHermitian");
  if (hermiticity_residual(block_) > kHermitianTol) {
    throw DomainError("LocalHermitian: block is not Hermitian");
  }
  norm_bound_ = operator_norm(block_);
}

Matrix LocalHermitian::embedded() const { return embed_local(block_, shape_, target_); }

TwoOutcomeMeasurement::TwoOutcomeMeasurement(SystemShape shape, int target, Matrix p1,
                                             Matrix p2, std::optional<Matrix> u1,
                                             std::optional<Matrix> u2)
    : shape_(std::move(shape)),
      target_(target),
      p1_(std::move(p1)),
      p2_(std::move(p2)),
      u1_(std::move(u1)),
      u2_(std::move(u2)) {
  const int d = shape_.dim(target_);
  require_square(p1_, d, "TwoOutcomeMeasurement P1");
  require_square(p2_, d, "TwoOutcomeMeasurement P2");
  if (hermiticity_residual(p1_) > kMeasurementTol || hermiticity_residual(p2_) > kMeasurementTol) {
    throw DomainError("TwoOutcomeMeasurement: operators must be Hermitian");
  }
  const Matrix id = Matrix::Identity(d, d);
  if ((p1_ * p1_ + p2_ * p2_ - id).cwiseAbs().maxCoeff() > kMeasurementTol) {
    throw DomainError("TwoOutcomeMeasurement: P1^2 + P2^2 != I");
  }
  if ((p1_ * p2_ - p2_ * p1_).cwiseAbs().maxCoeff() > kMeasurementTol) {
    throw DomainError("TwoOutcomeMeasurement: P1 and P2 do not commute");
  }
  for (const Matrix* p : {&p1_, &p2_}) {
    const Eigen::VectorXd ev = hermitian_eigenvalues(*p);
    if (ev.minCoeff() < -kMeasurementTol || ev.maxCoeff() > 1.0 + kMeasurementTol) {
      throw DomainError("TwoOutcomeMeasurement: operators must satisfy 0 <= P <= I");
    }
  }
  for (const auto* u : {&u1_, &u2_}) {
    if (!u->has_value()) continue;
    require_square(**u, d, "TwoOutcomeMeasurement unitary");
    if (((**u).adjoint() * (**u) - id).cwiseAbs().maxCoeff() > kMeasurementTol) {
      throw DomainError("TwoOutcomeMeasurement: polar part is not unitary");
    }
  }
}

Matrix TwoOutcomeMeasurement::delta() const { return p2_ * p2_ - p1_ * p1_; }

Matrix TwoOutcomeMeasurement::kraus(int outcome) const {
  if (outcome != 1 && outcome != 2) throw std::invalid_argument("kraus: outcome must be 1 or 2");
  const Matrix& p = outcome == 1 ? p1_ : p2_;
  const std::optional<Matrix>& u = outcome == 1 ? u1_ : u2_;
  return embed_local(u ? Matrix(*u * p) : p, shape_, target_);
}

//-------------------------------------------------------------------------
// Operations
//-------------------------------------------------------------------------

Matrix tensor_product(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

std::vector<int> complement(const SystemShape& shape, std::span<const int> part) {
  std::vector<int> out;
  for (int s = 0; s < shape.num_subsystems(); ++s) {
    if (std::find(part.begin(), part.end(), s) == part.end()) out.push_back(s);
  }
  return out;
}

Matrix partial_trace(const Matrix& op, const SystemShape& shape, std::span<const int> keep) {
  require_square(op, shape.total_dim(), "partial_trace");
  const std::vector<int> kept = normalize_index_set(shape, keep);
  const int n = shape.num_subsystems();
  std::vector<bool> is_kept(n, false);
  for (int s : kept) is_kept[s] = true;

  int kept_dim = 1;
  for (int s : kept) kept_dim *= shape.dim(s);
  const int rest_dim = shape.total_dim() / kept_dim;

  // groups[r][a]: full index whose kept digits encode a and remaining digits r.
  std::vector<int> groups(static_cast<size_t>(rest_dim) * kept_dim);
  std::vector<int> digits(n);
  for (int full = 0; full < shape.total_dim(); ++full) {
    int rem = full;
    for (int s = n - 1; s >= 0; --s) {
      digits[s] = rem % shape.dim(s);
      rem /= shape.dim(s);
    }
    int a = 0, r = 0;
    for (int s = 0; s < n; ++s) {
      if (is_kept[s]) {
        a = a * shape.dim(s) + digits[s];
      } else {
        r = r * shape.dim(s) + digits[s];
      }
    }
    groups[static_cast<size_t>(r) * kept_dim + a] = full;
  }

  Matrix out = Matrix::Zero(kept_dim, kept_dim);
  for (int r = 0; r < rest_dim; ++r) {
    const int* g = &groups[static_cast<size_t>(r) * kept_dim];
    for (int a = 0; a < kept_dim; ++a) {
      for (int b = 0; b < kept_dim; ++b) out(a, b) += op(g[a], g[b]);
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  return DensityMatrix(rho.shape().restrict_to(keep), partial_trace(rho.matrix(), rho.shape(), keep));
}

Matrix embed_local(const Matrix& block, const SystemShape& shape, int target) {
  const int d = shape.dim(target);
  require_square(block, d, "embed_local");
  int left = 1, right = 1;
  for (int s = 0; s < target; ++s) left *= shape.dim(s);
  for (int s = target + 1; s < shape.num_subsystems(); ++s) right *= shape.dim(s);

  const int total = shape.total_dim();
  Matrix out = Matrix::Zero(total, total);
  for (int l = 0; l < left; ++l) {
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        const Complex v = block(i, j);
        if (v == Complex(0.0)) continue;
        const int row0 = (l * d + i) * right;
        const int col0 = (l * d + j) * right;
        for (int r = 0; r < right; ++r) out(row0 + r, col0 + r) = v;
      }
    }
  }
  return out;
}

Matrix embed_local(const LocalHermitian& op) { return op.embedded(); }

Matrix bracket(const Matrix& a, const Matrix& b, BracketKind kind) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("bracket: size mismatch");
  }
  return kind == BracketKind::commutator ? Matrix(a * b - b * a) : Matrix(a * b + b * a);
}

Eigen::VectorXd hermitian_eigenvalues(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

Matrix apply_spectral(const Matrix& h, const std::function<double(double)>& fn) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  const Matrix& v = solver.eigenvectors();
  Eigen::VectorXd mapped = solver.eigenvalues().unaryExpr(fn);
  return v * mapped.cast<Complex>().asDiagonal() * v.adjoint();
}

Matrix herm_matrix_function(const Matrix& h, MatrixFunction fn, double clamp) {
  if (h.rows() != h.cols()) throw std::invalid_argument("herm_matrix_function: not square");
  if (hermiticity_residual(h) > 1e-10 * std::max(1.0, h.cwiseAbs().maxCoeff())) {
    throw DomainError("herm_matrix_function: matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  Eigen::VectorXd ev = solver.eigenvalues();
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    double& l = ev[k];
    switch (fn) {
      case MatrixFunction::sqrt:
        if (l < -clamp) throw DomainError("herm_matrix_function: sqrt of negative eigenvalue");
        l = std::sqrt(std::max(l, 0.0));
        break;
      case MatrixFunction::log:
        if (l < -clamp) throw DomainError("herm_matrix_function: log of negative eigenvalue");
        l = l <= clamp ? 0.0 : std::log(l);
        break;
      case MatrixFunction::exp:
        l = std::exp(l);
        break;
      case MatrixFunction::cube:
        l = l * l * l;
        break;
    }
  }
  const Matrix& v = solver.eigenvectors();
  return v * ev.cast<Complex>().asDiagonal() * v.adjoint();
}

Matrix unitary_exp(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  const Matrix& v = solver.eigenvectors();
  Vector phases = solver.eigenvalues().unaryExpr([](double l) { return std::polar(1.0, l); });
  return v * phases.asDiagonal() * v.adjoint();
}

KrausBranch apply_kraus(const DensityMatrix& rho, const Matrix& m, double p_floor) {
  require_square(m, rho.dim(), "apply_kraus");
  Matrix out = m * rho.matrix() * m.adjoint();
  const double p = out.trace().real();
  if (p < p_floor) return KrausBranch{std::nullopt, std::max(p, 0.0)};
  return KrausBranch{DensityMatrix(rho.shape(), out / p), p};
}

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double hermiticity_residual(const Matrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace qmono
