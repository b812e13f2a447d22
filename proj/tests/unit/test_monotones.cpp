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

#include <cmath>

#include "qmono/monotones.hpp"
#include "qmono/sampling.hpp"
#include "qmono/states.hpp"

namespace qmono {
namespace {

const SystemShape kThree = SystemShape::qubits(3);

PureState state(const char* name) { return *named_state(name); }

std::vector<int> part(std::initializer_list<int> p) { return p; }

PureState random_lu(const PureState& psi, Rng& rng) {
  Matrix u = embed_local(sample::haar_unitary(2, rng), kThree, 0);
  u = embed_local(sample::haar_unitary(2, rng), kThree, 1) * u;
  u = embed_local(sample::haar_unitary(2, rng), kThree, 2) * u;
  return PureState(kThree, u * psi.amplitudes());
}

TEST(Norm, Examples) {
  Rng rng(1);
  const DensityMatrix rho = sample::ginibre_mixed(kThree, rng);
  EXPECT_NEAR(norm_monotone(rho), 1.0, 1e-14);
  EXPECT_NEAR(norm_monotone(DensityMatrix(kThree, 0.3 * rho.matrix())), 0.3, 1e-14);
  const TwoOutcomeMeasurement m = sample::measurement(kThree, 1, rng);
  const Matrix k = m.kraus(1);
  EXPECT_LE(norm_monotone(DensityMatrix(kThree, k * rho.matrix() * k.adjoint())), 1.0);
}

TEST(LocalPurity, Examples) {
  EXPECT_NEAR(local_purity(state("product").density(), part({0})), 1.0, 1e-15);
  EXPECT_NEAR(local_purity(state("bell").density(), part({0})), 0.5, 1e-15);
  EXPECT_NEAR(local_purity(state("ghz").density(), part({0})), 0.5, 1e-15);
  EXPECT_NEAR(local_purity(state("ghz").density(), part({0, 1})), 0.5, 1e-15);
}

TEST(Entropy, Examples) {
  EXPECT_NEAR(entropy_of_entanglement(state("product").density(), part({0})), 0.0, 1e-12);
  EXPECT_NEAR(entropy_of_entanglement(state("bell").density(), part({1})), 1.0, 1e-14);
  const double h = 2.0 / 3.0 * std::log2(1.5) + 1.0 / 3.0 * std::log2(3.0);
  EXPECT_NEAR(entropy_of_entanglement(state("w").density(), part({0})), h, 1e-14);
}

TEST(Entropy, RejectsMixedInput) {
  Rng rng(2);
  EXPECT_THROW(entropy_of_entanglement(sample::ginibre_mixed(kThree, rng), part({0})), DomainError);
  EXPECT_NO_THROW(marginal_entropy(sample::ginibre_mixed(kThree, rng), part({0})));
}

TEST(PolynomialInvariant, IdentityPermutationsGiveNormPower) {
  Rng rng(3);
  const PureState psi = sample::haar_pure(kThree, rng);
  EXPECT_NEAR(polynomial_invariant(psi, {0, 1}, {0, 1}).value, 1.0, 1e-13);
  EXPECT_NEAR(polynomial_invariant(psi, {0, 1, 2}, {0, 1, 2}).value, 1.0, 1e-13);
}

TEST(PolynomialInvariant, FixtureValues) {
  EXPECT_NEAR(polynomial_invariant(state("product"), {1, 0}, {0, 1}).value, 1.0, 1e-15);
  EXPECT_NEAR(polynomial_invariant(state("ghz"), {1, 2, 0}, {2, 0, 1}).value, 0.25, 1e-15);
}

TEST(Invariants, ProductFixture) {
  const InvariantSet s = three_qubit_invariants(state("product"));
  for (double v : {s.i1, s.i2, s.i3, s.i4}) EXPECT_NEAR(v, 1.0, 1e-14);
  for (double v : {s.i5, s.tau_ab_c, s.tau_ac_b, s.tau_bc_a, s.tau_abc, s.phi, s.sigma}) {
    EXPECT_NEAR(v, 0.0, 1e-12);
  }
}

TEST(Invariants, GhzFixture) {
  const InvariantSet s = three_qubit_invariants(state("ghz"));
  for (double v : {s.i1, s.i2, s.i3}) EXPECT_NEAR(v, 0.5, 1e-14);
  EXPECT_NEAR(s.i4, 0.25, 1e-14);
  EXPECT_NEAR(s.i5, 0.25, 1e-14);
  for (double v : {s.tau_ab_c, s.tau_ac_b, s.tau_bc_a, s.tau_abc}) EXPECT_NEAR(v, 1.0, 1e-13);
  EXPECT_NEAR(s.phi, 49.5, 1e-12);
  EXPECT_NEAR(s.sigma, 21.0 / 8.0, 1e-13);
  EXPECT_NEAR(tangle_calibration_factor(), 1.0, 1e-13);
}

TEST(Invariants, WFixture) {
  const InvariantSet s = three_qubit_invariants(state("w"));
  for (double v : {s.i1, s.i2, s.i3}) EXPECT_NEAR(v, 5.0 / 9.0, 1e-14);
  EXPECT_NEAR(s.i4, 2.0 / 9.0, 1e-14);
  EXPECT_NEAR(s.i5, 0.0, 1e-14);
  EXPECT_NEAR(s.tau_abc, 0.0, 1e-7);
  EXPECT_NEAR(s.phi, 136.0 / 3.0, 1e-12);
  EXPECT_NEAR(s.sigma, 71.0 / 27.0, 1e-13);
}

TEST(Invariants, KempeRoutesOnFixtures) {
  const std::pair<const char*, double> cases[] = {{"product", 1.0}, {"ghz", 0.25}, {"w", 2.0 / 9.0}};
  for (const auto& [name, want] : cases) {
    const KempeRoutes k = kempe_i4_three_ways(state(name).density());
    EXPECT_NEAR(k.ab, want, 1e-14) << name;
    EXPECT_NEAR(k.ac, want, 1e-14) << name;
    EXPECT_NEAR(k.bc, want, 1e-14) << name;
  }
}

TEST(Invariants, KempeRoutesAgreeOnHaarStates) {
  for (int s = 0; s < 1000; ++s) {
    Rng rng = Rng::derive(41, s);
    const PureState psi = sample::haar_pure(kThree, rng);
    const KempeRoutes k = kempe_i4_three_ways(psi.density());
    ASSERT_NEAR(k.ab, k.ac, 1e-12);
    ASSERT_NEAR(k.ab, k.bc, 1e-12);
    const InvariantValue p = polynomial_invariant(psi, {1, 2, 0}, {2, 0, 1});
    ASSERT_NEAR(k.ab, p.value, 1e-12);
    ASSERT_LT(std::abs(p.imag), 1e-12);
  }
}

TEST(Invariants, I5RoutesAgree) {
  for (int s = 0; s < 50; ++s) {
    Rng rng = Rng::derive(43, s);
    const PureState psi = sample::haar_pure(kThree, rng);
    const Complex a = i5_contraction_exhaustive(psi);
    const Complex b = i5_contraction_sliced(psi);
    EXPECT_LT(std::abs(a - b), 1e-14);
    EXPECT_NEAR(i5_from_density(psi.density().matrix()), std::norm(a), 1e-13);
  }
}

// |c|^2 for the 12-index contraction equals the squared Cayley
// hyperdeterminant times 4 for three qubits; checked against an explicit
// formula on random states.
TEST(Invariants, I5MatchesHyperdeterminant) {
  for (int s = 0; s < 20; ++s) {
    Rng rng = Rng::derive(47, s);
    const Vector a = sample::haar_pure(kThree, rng).amplitudes();
    const Complex d1 = a[0] * a[0] * a[7] * a[7] + a[1] * a[1] * a[6] * a[6] + a[2] * a[2] * a[5] * a[5] +
                       a[4] * a[4] * a[3] * a[3];
    const Complex d2 = a[0] * a[7] * a[3] * a[4] + a[0] * a[7] * a[5] * a[2] + a[0] * a[7] * a[6] * a[1] +
                       a[3] * a[4] * a[5] * a[2] + a[3] * a[4] * a[6] * a[1] + a[5] * a[2] * a[6] * a[1];
    const Complex d3 = a[0] * a[6] * a[5] * a[3] + a[7] * a[1] * a[2] * a[4];
    const Complex hyper = d1 - 2.0 * d2 + 4.0 * d3;
    const double tangle = 4.0 * std::abs(hyper);
    const double tau = three_qubit_invariants(PureState(kThree, a)).tau_abc;
    EXPECT_NEAR(tau, tangle, 1e-12);
  }
}

TEST(Invariants, PartialTraceIdentities) {
  for (int s = 0; s < 100; ++s) {
    Rng rng = Rng::derive(53, s);
    const PureState psi = sample::haar_pure(kThree, rng);
    const Matrix rho = psi.density().matrix();
    const Matrix ab = partial_trace(rho, kThree, part({0, 1}));
    const Matrix c = partial_trace(rho, kThree, part({2}));
    EXPECT_NEAR((ab * ab).trace().real(), (c * c).trace().real(), 1e-12);
    EXPECT_NEAR((ab * ab * ab).trace().real(), (c * c * c).trace().real(), 1e-12);
    EXPECT_LE(trx3_expansion_check(psi).max_residual, 1e-10);
  }
}

TEST(Invariants, TrX3ExpansionFixtures) {
  const ExpansionCheck p = trx3_expansion_check(state("product"));
  EXPECT_NEAR(p.tr_x3_direct, 66.0, 1e-12);
  EXPECT_LE(p.max_residual, 1e-12);
  const ExpansionCheck g = trx3_expansion_check(state("ghz"));
  EXPECT_NEAR(g.tr_x3_direct, 18.0, 1e-12);
  EXPECT_LE(g.max_residual, 1e-12);
}

TEST(Phi, VanishesOnProductStates) {
  const SystemShape one({2});
  for (int s = 0; s < 100; ++s) {
    Rng rng = Rng::derive(59, s);
    Vector v = sample::haar_pure(one, rng).amplitudes();
    for (int q = 1; q < 3; ++q) {
      const Vector w = sample::haar_pure(one, rng).amplitudes();
      Vector next(v.size() * 2);
      for (Eigen::Index i = 0; i < v.size(); ++i) next.segment(2 * i, 2) = v[i] * w;
      v = next;
    }
    EXPECT_NEAR(phi_abc(PureState(kThree, v)), 0.0, 1e-10);
  }
}

TEST(Phi, NonNegativeAndLocalUnitaryInvariant) {
  for (int s = 0; s < 200; ++s) {
    Rng rng = Rng::derive(61, s);
    const PureState psi = sample::haar_pure(kThree, rng);
    const double phi = phi_abc(psi);
    EXPECT_GE(phi, -1e-10);
    EXPECT_NEAR(phi_abc(random_lu(psi, rng)), phi, 1e-10);
  }
  Rng rng(62);
  EXPECT_NEAR(phi_abc(random_lu(state("ghz"), rng)), 49.5, 1e-10);
}

TEST(Phi, CheckedPureRouteRejectsBadRhoAB) {
  Matrix bad = Matrix::Zero(4, 4);  // X(0,0) = -2
  bad(0, 0) = -1.0;
  bad(1, 1) = 1.0;
  bad(2, 2) = 1.0;
  EXPECT_THROW(phi_from_rho_ab(bad, true), DomainError);
}

TEST(Sigma, InvariantFormula) {
  for (int s = 0; s < 50; ++s) {
    Rng rng = Rng::derive(67, s);
    const PureState psi = sample::haar_pure(kThree, rng);
    const InvariantSet v = three_qubit_invariants(psi);
    EXPECT_NEAR(v.sigma, 3.0 - (v.i1 + v.i2 + v.i3) * v.i4, 1e-12);
  }
}

TEST(Catalog, NamesAndDescriptors) {
  const std::vector<std::string> want{"norm",     "purity_A", "entropy_A", "tau_AB_C", "tau_AC_B",
                                      "tau_BC_A", "tau_ABC",  "phi_ABC",   "sigma_ABC"};
  EXPECT_EQ(catalog_names(), want);
  EXPECT_EQ(find_monotone("purity_A")->direction, Direction::increasing);
  EXPECT_EQ(find_monotone("norm")->domain, Domain::mixed);
  EXPECT_TRUE(find_monotone("sigma_ABC")->conjectured);
  EXPECT_FALSE(find_monotone("nope").has_value());
  const MonotoneDescriptor r = relabeled(*find_monotone("purity_A"), Direction::decreasing);
  EXPECT_EQ(r.direction, Direction::decreasing);
  EXPECT_NE(r.name, "purity_A");
}

TEST(Catalog, TanglesMatchPurities) {
  Rng rng(71);
  const DensityMatrix rho = sample::haar_pure(kThree, rng).density();
  const double pc = local_purity(rho, part({2}));
  EXPECT_NEAR(find_monotone("tau_AB_C")->evaluate(rho), 2.0 * (1.0 - pc), 1e-14);
}

TEST(Catalog, EntropySmoothnessFollowsMarginalRank) {
  const MonotoneDescriptor e = *find_monotone("entropy_A");
  EXPECT_FALSE(e.is_smooth(state("product").density()));
  EXPECT_TRUE(e.is_smooth(state("ghz").density()));
  EXPECT_NEAR(e.margin(state("ghz").density()), 0.5, 1e-14);
}

}  // namespace
}  // namespace qmono
