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

#include "qmono/sampling.hpp"

#include <cmath>

namespace qmono {

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  // splitmix64 finalizer over a combined word.
  std::uint64_t z = a + 0x9E3779B97F4A7C15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Rng Rng::derive(std::uint64_t master, std::uint64_t index) {
  return Rng(mix_seed(master, index));
}

Rng Rng::derive(std::uint64_t master, std::uint64_t index, std::uint64_t sub) {
  return Rng(mix_seed(mix_seed(master, index), sub));
}

namespace sample {

namespace {

Matrix ginibre(int rows, int cols, Rng& rng) {
  Matrix g(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) g(i, j) = rng.complex_normal();
  }
  return g;
}

Matrix random_hermitian(int dim, Rng& rng) {
  Matrix g = ginibre(dim, dim, rng);
  return (g + g.adjoint()) / 2.0;
}

}  // namespace

PureState haar_pure(const SystemShape& shape, Rng& rng) {
  Vector v(shape.total_dim());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.complex_normal();
  return PureState::normalized(shape, v);
}

DensityMatrix ginibre_mixed(const SystemShape& shape, Rng& rng, int rank) {
  const int n = shape.total_dim();
  const int k = rank <= 0 ? n : rank;
  Matrix g = ginibre(n, k, rng);
  Matrix rho = g * g.adjoint();
  rho = (rho + rho.adjoint()) / 2.0;
  return DensityMatrix(shape, rho / rho.trace().real());
}

Matrix haar_unitary(int dim, Rng& rng) {
  Matrix g = ginibre(dim, dim, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    const double a = std::abs(d);
    if (a > 0.0) q.col(j) *= d / a;
  }
  return q;
}

Matrix hermitian_direction(int dim, double norm_bound, Rng& rng) {
  if (!(norm_bound > 0.0)) throw std::invalid_argument("hermitian_direction: norm_bound must be > 0");
  Matrix h = random_hermitian(dim, rng);
  h *= norm_bound / operator_norm(h);
  return (h + h.adjoint()) / 2.0;
}

Matrix traceless_direction(int dim, double norm_bound, Rng& rng) {
  if (!(norm_bound > 0.0)) throw std::invalid_argument("traceless_direction: norm_bound must be > 0");
  Matrix h = random_hermitian(dim, rng);
  h -= (h.trace() / static_cast<double>(dim)) * Matrix::Identity(dim, dim);
  h *= norm_bound / operator_norm(h);
  return (h + h.adjoint()) / 2.0;
}

std::pair<Matrix, Matrix> positive_pair(int dim, Rng& rng) {
  const Matrix v = haar_unitary(dim, rng);
  Eigen::VectorXd lambda(dim);
  for (int k = 0; k < dim; ++k) lambda[k] = rng.uniform();
  Matrix p1 = v * lambda.cast<Complex>().asDiagonal() * v.adjoint();
  p1 = (p1 + p1.adjoint()) / 2.0;
  const Matrix id = Matrix::Identity(dim, dim);
  Matrix rest = id - p1 * p1;
  rest = (rest + rest.adjoint()) / 2.0;
  Matrix p2 = herm_matrix_function(rest, MatrixFunction::sqrt);
  return {p1, p2};
}

LocalHermitian local_hermitian(const SystemShape& shape, int target, double norm_bound, Rng& rng) {
  return LocalHermitian(shape, target, hermitian_direction(shape.dim(target), norm_bound, rng));
}

TwoOutcomeMeasurement measurement(const SystemShape& shape, int target, Rng& rng,
                                  bool with_unitaries) {
  auto [p1, p2] = positive_pair(shape.dim(target), rng);
  if (!with_unitaries) return TwoOutcomeMeasurement(shape, target, p1, p2);
  Matrix u1 = haar_unitary(shape.dim(target), rng);
  Matrix u2 = haar_unitary(shape.dim(target), rng);
  return TwoOutcomeMeasurement(shape, target, p1, p2, u1, u2);
}

}  // namespace sample
}  // namespace qmono
