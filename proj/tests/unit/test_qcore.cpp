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

#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "qmono/qcore.hpp"
#include "qmono/sampling.hpp"

namespace qmono {
namespace {

const Complex I(0.0, 1.0);

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0, -I, I, 0;
  return m;
}
Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

DensityMatrix bell() {
  Vector v = Vector::Zero(4);
  v[0] = v[3] = 1.0 / std::sqrt(2.0);
  return PureState(SystemShape::qubits(2), v).density();
}

TEST(SystemShape, RejectsBadDims) {
  EXPECT_THROW(SystemShape({}), std::invalid_argument);
  EXPECT_THROW(SystemShape({2, 0}), std::invalid_argument);
  EXPECT_EQ(SystemShape({2, 3, 2}).total_dim(), 12);
}

TEST(PureState, RejectsUnnormalizedUnlessAllowed) {
  Vector v = Vector::Zero(2);
  v[0] = 2.0;
  EXPECT_THROW(PureState(SystemShape({2}), v), DomainError);
  EXPECT_NO_THROW(PureState(SystemShape({2}), v, true));
  EXPECT_NEAR(PureState::normalized(SystemShape({2}), v).norm(), 1.0, 1e-15);
}

TEST(DensityMatrix, ValidateCatchesNonHermitianAndNegative) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(0, 1) = 0.3;
  EXPECT_FALSE(DensityMatrix(SystemShape({2}), m).is_valid());
  m(0, 1) = 0.0;
  m(0, 0) = 1.5;
  m(1, 1) = -0.5;
  EXPECT_FALSE(DensityMatrix(SystemShape({2}), m).is_valid());
}

TEST(TensorProduct, Examples) {
  EXPECT_TRUE(tensor_product(Matrix::Identity(2, 2), Matrix::Identity(2, 2)).isApprox(Matrix::Identity(4, 4)));
  Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  Matrix want = Matrix::Zero(4, 4);
  want(1, 1) = 1.0;
  EXPECT_EQ(tensor_product(p0, p1), want);

  Vector v = Vector::Zero(4);
  v[0] = v[3] = 1.0;
  const Vector zz = tensor_product(pauli_z(), pauli_z()) * v;
  EXPECT_LT((zz - v).norm(), 1e-15);
}

TEST(PartialTrace, ProductStateGivesFactor) {
  Rng rng(3);
  const SystemShape one({2});
  const DensityMatrix a = sample::ginibre_mixed(one, rng);
  const DensityMatrix b = sample::ginibre_mixed(SystemShape({3}), rng);
  const Matrix ab = tensor_product(a.matrix(), b.matrix());
  const int keep = 0;
  EXPECT_LT((partial_trace(ab, SystemShape({2, 3}), std::span(&keep, 1)) - a.matrix()).norm(), 1e-14);
}

TEST(PartialTrace, BellMarginalIsMaximallyMixed) {
  const int keep = 1;
  const DensityMatrix r = partial_trace(bell(), std::span(&keep, 1));
  EXPECT_LT((r.matrix() - Matrix::Identity(2, 2) / 2.0).norm(), 1e-15);
}

TEST(PartialTrace, KeepAllIsIdentityAndKeepSetIsUnordered) {
  Rng rng(5);
  const SystemShape shape({2, 3, 2});
  const DensityMatrix rho = sample::ginibre_mixed(shape, rng);
  const std::vector<int> all{0, 1, 2};
  EXPECT_EQ(partial_trace(rho.matrix(), shape, all), rho.matrix());
  EXPECT_EQ(partial_trace(rho.matrix(), shape, std::vector<int>{1, 0}),
            partial_trace(rho.matrix(), shape, std::vector<int>{0, 1}));
  EXPECT_THROW(partial_trace(rho.matrix(), shape, std::vector<int>{3}), std::invalid_argument);
  EXPECT_THROW(partial_trace(rho.matrix(), shape, std::vector<int>{}), std::invalid_argument);
}

// Against an explicit index loop over the flattened (i j k) layout.
TEST(PartialTrace, MatchesIndexLoopOracle) {
  Rng rng(9);
  const SystemShape shape({2, 3, 2});
  const Matrix rho = sample::ginibre_mixed(shape, rng).matrix();
  Matrix want = Matrix::Zero(4, 4);  // keep {0, 2}
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k)
      for (int i2 = 0; i2 < 2; ++i2)
        for (int k2 = 0; k2 < 2; ++k2)
          for (int j = 0; j < 3; ++j) want(2 * i + k, 2 * i2 + k2) += rho(6 * i + 2 * j + k, 6 * i2 + 2 * j + k2);
  EXPECT_LT((partial_trace(rho, shape, std::vector<int>{0, 2}) - want).norm(), 1e-14);
}

TEST(PartialTrace, PureTripartiteCubicIdentity) {
  const SystemShape shape = SystemShape::qubits(3);
  for (int s = 0; s < 20; ++s) {
    Rng rng = Rng::derive(77, s);
    const Matrix rho = sample::haar_pure(shape, rng).density().matrix();
    const Matrix ab = partial_trace(rho, shape, std::vector<int>{0, 1});
    const Matrix c = partial_trace(rho, shape, std::vector<int>{2});
    EXPECT_NEAR((ab * ab * ab).trace().real(), (c * c * c).trace().real(), 1e-12);
  }
}

TEST(EmbedLocal, Examples) {
  const SystemShape two = SystemShape::qubits(2);
  EXPECT_EQ(embed_local(pauli_x(), two, 0), tensor_product(pauli_x(), Matrix::Identity(2, 2)));
  EXPECT_EQ(embed_local(Matrix::Identity(2, 2), two, 1), Matrix::Identity(4, 4));
  const Matrix z3 = embed_local(pauli_z(), SystemShape::qubits(3), 2);
  for (int r = 0; r < 8; ++r) {
    for (int c = 0; c < 8; ++c) {
      const double want = r == c ? (r % 2 == 0 ? 1.0 : -1.0) : 0.0;
      EXPECT_EQ(z3(r, c), Complex(want, 0.0)) << r << "," << c;
    }
  }
  EXPECT_THROW(embed_local(Matrix::Identity(3, 3), two, 0), std::invalid_argument);
}

TEST(Bracket, PauliAlgebra) {
  EXPECT_EQ(bracket(pauli_x(), pauli_x(), BracketKind::commutator), Matrix::Zero(2, 2));
  EXPECT_LT((bracket(pauli_x(), pauli_y(), BracketKind::commutator) - 2.0 * I * pauli_z()).norm(), 1e-15);
  Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  EXPECT_EQ(bracket(p0, p1, BracketKind::anticommutator), Matrix::Zero(2, 2));
}

TEST(MatrixFunction, Examples) {
  EXPECT_LT((herm_matrix_function(Matrix::Identity(3, 3), MatrixFunction::sqrt) - Matrix::Identity(3, 3)).norm(), 1e-15);
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 4.0;
  d(1, 1) = 9.0;
  Matrix want = Matrix::Zero(2, 2);
  want(0, 0) = 2.0;
  want(1, 1) = 3.0;
  EXPECT_LT((herm_matrix_function(d, MatrixFunction::sqrt) - want).norm(), 1e-14);
  EXPECT_LT((unitary_exp(Matrix::Zero(2, 2)) - Matrix::Identity(2, 2)).norm(), 1e-15);
}

TEST(MatrixFunction, SqrtSquaresBackAndLogFailsOnNegative) {
  Rng rng(12);
  const Matrix p = sample::ginibre_mixed(SystemShape({4}), rng).matrix();
  const Matrix s = herm_matrix_function(p, MatrixFunction::sqrt);
  EXPECT_LT((s * s - p).norm(), 1e-13);
  Matrix neg = Matrix::Identity(2, 2);
  neg(1, 1) = -0.1;
  EXPECT_THROW(herm_matrix_function(neg, MatrixFunction::log), DomainError);
  EXPECT_THROW(herm_matrix_function(pauli_x() + I * pauli_z(), MatrixFunction::sqrt), DomainError);
}

TEST(MatrixFunction, UnitaryExpMatchesPauliClosedForm) {
  const double t = 0.7;
  const Matrix u = unitary_exp(t * pauli_x());  // exp(i t X) = cos t I + i sin t X
  EXPECT_LT((u - (std::cos(t) * Matrix::Identity(2, 2) + I * std::sin(t) * pauli_x())).norm(), 1e-15);
}

TEST(ApplyKraus, Examples) {
  const DensityMatrix b = bell();
  const KrausBranch id = apply_kraus(b, Matrix::Identity(4, 4));
  EXPECT_DOUBLE_EQ(id.probability, 1.0);
  EXPECT_LT((id.state->matrix() - b.matrix()).norm(), 1e-15);

  Vector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  Matrix p0 = Matrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  const KrausBranch proj = apply_kraus(PureState(SystemShape({2}), plus).density(), p0);
  EXPECT_NEAR(proj.probability, 0.5, 1e-15);
  EXPECT_LT((proj.state->matrix() - p0).norm(), 1e-15);

  Rng rng(4);
  const Matrix u = sample::haar_unitary(4, rng);
  const KrausBranch rot = apply_kraus(b, u);
  EXPECT_NEAR(rot.probability, 1.0, 1e-14);
  EXPECT_LT((rot.state->matrix() - u * b.matrix() * u.adjoint()).norm(), 1e-14);
}

TEST(ApplyKraus, BranchBelowFloorIsEmpty) {
  Matrix p1 = Matrix::Zero(2, 2);
  p1(1, 1) = 1.0;
  Vector zero = Vector::Zero(2);
  zero[0] = 1.0;
  const KrausBranch k = apply_kraus(PureState(SystemShape({2}), zero).density(), p1);
  EXPECT_FALSE(k.state.has_value());
  EXPECT_EQ(k.probability, 0.0);
}

TEST(ApplyKraus, ProbabilitiesOfCompleteSetSumToOne) {
  const SystemShape shape = SystemShape::qubits(2);
  for (int s = 0; s < 20; ++s) {
    Rng rng = Rng::derive(31, s);
    const DensityMatrix rho = sample::ginibre_mixed(shape, rng);
    const TwoOutcomeMeasurement m = sample::measurement(shape, s % 2, rng);
    const Matrix k1 = m.kraus(1);
    const Matrix k2 = m.kraus(2);
    EXPECT_LT((k1.adjoint() * k1 + k2.adjoint() * k2 - Matrix::Identity(4, 4)).norm(), 1e-12);
    EXPECT_NEAR(apply_kraus(rho, k1).probability + apply_kraus(rho, k2).probability, 1.0, 1e-12);
  }
}

TEST(Sampling, DeterministicForFixedSeed) {
  const SystemShape shape = SystemShape::qubits(3);
  Rng a(42), b(42);
  EXPECT_EQ(sample::haar_pure(shape, a).amplitudes(), sample::haar_pure(shape, b).amplitudes());
  EXPECT_EQ(sample::ginibre_mixed(shape, a).matrix(), sample::ginibre_mixed(shape, b).matrix());
  Rng c = Rng::derive(42, 7), d = Rng::derive(42, 7), e = Rng::derive(42, 8);
  const double x = c.uniform();
  EXPECT_EQ(x, d.uniform());
  EXPECT_NE(x, e.uniform());
}

TEST(Sampling, ConstructionContracts) {
  for (int s = 0; s < 20; ++s) {
    Rng rng = Rng::derive(8, s);
    const Matrix h = sample::hermitian_direction(3, 0.4, rng);
    EXPECT_LE(hermiticity_residual(h), 1e-14);
    EXPECT_NEAR(operator_norm(h), 0.4, 1e-12);
    const Matrix t = sample::traceless_direction(4, 1.0, rng);
    EXPECT_NEAR(std::abs(t.trace()), 0.0, 1e-14);
    const auto [p1, p2] = sample::positive_pair(3, rng);
    EXPECT_LE((p1 * p1 + p2 * p2 - Matrix::Identity(3, 3)).norm(), 1e-12);
    EXPECT_GE(hermitian_eigenvalues(p1).minCoeff(), -1e-14);
    const Matrix u = sample::haar_unitary(3, rng);
    EXPECT_LE((u.adjoint() * u - Matrix::Identity(3, 3)).norm(), 1e-13);
    const DensityMatrix rho = sample::ginibre_mixed(SystemShape({2, 2}), rng);
    EXPECT_TRUE(rho.is_valid());
    EXPECT_NEAR(rho.trace(), 1.0, 1e-14);
  }
}

TEST(Sampling, UniformIntCoversRange) {
  Rng rng(1);
  std::array<int, 3> seen{};
  for (int i = 0; i < 300; ++i) ++seen.at(rng.uniform_int(0, 2));
  for (int c : seen) EXPECT_GT(c, 50);
}

}  // namespace
}  // namespace qmono
