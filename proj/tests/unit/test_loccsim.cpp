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

#include "qmono/loccsim.hpp"
#include "qmono/report.hpp"
#include "qmono/sampling.hpp"
#include "qmono/states.hpp"

namespace qmono {
namespace {

const SystemShape kTwo = SystemShape::qubits(2);
const SystemShape kThree = SystemShape::qubits(3);

MonotoneDescriptor two_qubit(const std::string& name, std::function<double(const DensityMatrix&)> f,
                             Direction dir, Domain dom) {
  MonotoneDescriptor d{name, std::move(f), dir, dom};
  d.shape = kTwo;
  return d;
}

const int kA = 0;
MonotoneDescriptor trace2() { return two_qubit("norm", norm_monotone, Direction::decreasing, Domain::mixed); }
MonotoneDescriptor entropy2() {
  return two_qubit("S_A", [](const DensityMatrix& r) { return marginal_entropy(r, std::span(&kA, 1)); },
                   Direction::decreasing, Domain::pure_only);
}
MonotoneDescriptor purity2() {
  return two_qubit("I_A", [](const DensityMatrix& r) { return local_purity(r, std::span(&kA, 1)); },
                   Direction::increasing, Domain::pure_only);
}

TwoOutcomeMeasurement projective_on(int target) {
  Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  return TwoOutcomeMeasurement(kTwo, target, p0, p1);
}

DensityMatrix basis2(int index) {
  Vector v = Vector::Zero(4);
  v[index] = 1.0;
  return PureState(kTwo, v).density();
}

TEST(SingleStep, NormIsUnchanged) {
  for (int s = 0; s < 20; ++s) {
    Rng rng = Rng::derive(1, s);
    const TrialRecord r = single_step_trial(trace2(), sample::ginibre_mixed(kTwo, rng),
                                            sample::measurement(kTwo, s % 2, rng));
    EXPECT_NEAR(r.delta, 0.0, 1e-14);
    EXPECT_NEAR(r.probability_sum, 1.0, 1e-10);
    EXPECT_EQ(r.status, TrialStatus::pass);
  }
}

TEST(SingleStep, ProjectiveMeasurementDestroysBellEntanglement) {
  const TrialRecord r = single_step_trial(entropy2(), named_state("bell")->density(), projective_on(0));
  EXPECT_NEAR(r.before, 1.0, 1e-14);
  EXPECT_NEAR(r.after_avg, 0.0, 1e-12);
  EXPECT_NEAR(r.delta, -1.0, 1e-12);
  ASSERT_EQ(r.branches.size(), 2u);
  EXPECT_NEAR(r.branches[0].probability, 0.5, 1e-15);
  EXPECT_EQ(r.status, TrialStatus::pass);
}

TEST(SingleStep, PurityNeverDecreasesOnAverage) {
  for (int s = 0; s < 500; ++s) {
    Rng rng = Rng::derive(2, s);
    const TrialRecord r = single_step_trial(purity2(), sample::haar_pure(kTwo, rng).density(),
                                            sample::measurement(kTwo, s % 2, rng));
    ASSERT_GE(r.delta, -1e-12);
    ASSERT_EQ(r.status, TrialStatus::pass);
  }
}

TEST(SingleStep, ZeroProbabilityBranchIsDropped) {
  const TrialRecord r = single_step_trial(trace2(), basis2(0), projective_on(0));
  EXPECT_TRUE(r.single_branch);
  EXPECT_EQ(r.branches.size(), 1u);
}

TEST(Chain, DepthThreeHasEightOutcomes) {
  Rng rng(3);
  const DensityMatrix rho = sample::haar_pure(kThree, rng).density();
  std::vector<TwoOutcomeMeasurement> chain;
  for (int t = 0; t < 3; ++t) chain.push_back(sample::measurement(kThree, t, rng));
  const TrialRecord r = chained_measurement_trial(*find_monotone("phi_ABC"), rho, chain);
  EXPECT_EQ(r.branches.size(), 8u);
  EXPECT_NEAR(r.probability_sum, 1.0, 1e-10);
  EXPECT_EQ(r.status, TrialStatus::pass);
  chain.push_back(chain.front());
  EXPECT_THROW(chained_measurement_trial(*find_monotone("phi_ABC"), rho, chain), std::invalid_argument);
}

TEST(Chain, ConjecturedMonotoneIsExploratory) {
  Rng rng(4);
  const TrialRecord r = single_step_trial(*find_monotone("sigma_ABC"), sample::haar_pure(kThree, rng).density(),
                                          sample::measurement(kThree, 0, rng));
  EXPECT_EQ(r.status, TrialStatus::exploratory);
}

TEST(Mixing, SingletonAndNorm) {
  Rng rng(5);
  const DensityMatrix a = sample::ginibre_mixed(kTwo, rng);
  EXPECT_EQ(mixing_trial(purity2(), {{1.0, a}}).delta, 0.0);
  const TrialRecord r = mixing_trial(trace2(), {{0.3, a}, {0.7, sample::ginibre_mixed(kTwo, rng)}});
  EXPECT_NEAR(r.delta, 0.0, 1e-15);
}

TEST(Mixing, PurityCounterexample) {
  const TrialRecord r = mixing_trial(purity2(), {{0.5, basis2(0)}, {0.5, basis2(3)}});
  EXPECT_DOUBLE_EQ(r.before, 1.0);
  EXPECT_DOUBLE_EQ(r.after_avg, 0.5);
  EXPECT_DOUBLE_EQ(r.delta, -0.5);
  EXPECT_THROW(mixing_trial(purity2(), {{0.5, basis2(0)}, {0.4, basis2(3)}}), std::invalid_argument);
}

TEST(Channel, UnitaryIsLocalUnitaryInvariant) {
  Rng rng(6);
  const DensityMatrix rho = sample::haar_pure(kThree, rng).density();
  const Matrix u = embed_local(sample::haar_unitary(2, rng), kThree, 1);
  const TrialRecord r = channel_trial(*find_monotone("phi_ABC"), rho, {u}, false);
  EXPECT_LE(std::abs(r.delta), 1e-10);
}

TEST(Channel, MeasureAndForgetPreservesNorm) {
  Rng rng(7);
  const TwoOutcomeMeasurement m = sample::measurement(kTwo, 0, rng);
  const TrialRecord r = channel_trial(trace2(), sample::ginibre_mixed(kTwo, rng),
                                      {m.kraus(1), m.kraus(2)}, false);
  EXPECT_NEAR(r.delta, 0.0, 1e-14);
}

TEST(Channel, IncompleteKrausNeedsPostselection) {
  Rng rng(8);
  const DensityMatrix rho = sample::ginibre_mixed(kTwo, rng);
  const Matrix k = projective_on(0).kraus(1);
  EXPECT_THROW(channel_trial(trace2(), rho, {k}, false), DomainError);
  const TrialRecord r = channel_trial(trace2(), rho, {k}, true);
  EXPECT_TRUE(r.postselected);
  EXPECT_LT(r.probability_sum, 1.0);
  EXPECT_THROW(channel_trial(trace2(), rho, {2.0 * k}, true), DomainError);
}

// Dephasing A of a Bell state: S_A of the marginal is unchanged while the
// state becomes separable, so S_A alone does not witness mixed-state
// entanglement. Recorded, not asserted as a violation.
TEST(Channel, DephasingBellKeepsMarginalEntropy) {
  MonotoneDescriptor s = entropy2();
  s.domain = Domain::mixed;
  const TwoOutcomeMeasurement z = projective_on(0);
  const TrialRecord r = channel_trial(s, named_state("bell")->density(),
                                      {z.kraus(1), z.kraus(2)}, false);
  EXPECT_NEAR(r.before, 1.0, 1e-14);
  EXPECT_NEAR(r.after_avg, 1.0, 1e-12);
}

TEST(Trajectory, NormConstantAlongWalk) {
  Rng rng(9);
  WalkConfig c;
  c.step = 0.2;
  c.cutoff = 3.0;
  const TrajectoryRecord t = walk_trajectory_trial(trace2(), sample::ginibre_mixed(kTwo, rng),
                                                   sample::measurement(kTwo, 1, rng), c, rng);
  ASSERT_GT(t.values.size(), 1u);
  for (double v : t.values) EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(WalkAverage, BellEntropyMatchesOneShot) {
  WalkConfig c;
  c.step = 0.2;
  c.cutoff = 4.0;
  const WalkAverage w = walk_average(entropy2(), named_state("bell")->density(), projective_on(0), c, 10000, 10);
  EXPECT_NEAR(w.one_shot, 0.0, 1e-12);
  EXPECT_TRUE(w.consistent) << w.mean << " vs " << w.one_shot << " tol " << w.tolerance;
}

TEST(WalkAverage, ErrorShrinksLikeInverseRoot) {
  Rng rng(11);
  const DensityMatrix rho = sample::haar_pure(kTwo, rng).density();
  const TwoOutcomeMeasurement m = sample::measurement(kTwo, 0, rng);
  WalkConfig c;
  c.step = 0.2;
  c.cutoff = 4.0;
  const WalkAverage a = walk_average(purity2(), rho, m, c, 2000, 12);
  const WalkAverage b = walk_average(purity2(), rho, m, c, 8000, 12);
  EXPECT_TRUE(a.consistent);
  EXPECT_TRUE(b.consistent);
  EXPECT_NEAR(a.std_error / b.std_error, 2.0, 0.3);
}

TEST(WalkAverage, TrivialMeasurementLeavesValue) {
  const double r = 1.0 / std::sqrt(2.0);
  const TwoOutcomeMeasurement sym(kTwo, 0, Matrix::Identity(2, 2) * r, Matrix::Identity(2, 2) * r);
  Rng rng(13);
  const DensityMatrix rho = sample::haar_pure(kTwo, rng).density();
  WalkConfig c;
  c.step = 0.2;
  c.cutoff = 3.0;
  const WalkAverage w = walk_average(entropy2(), rho, sym, c, 500, 14);
  EXPECT_NEAR(w.mean, entropy2().evaluate(rho), 1e-10);
}

CampaignConfig small_campaign() {
  CampaignConfig c;
  c.n_trials = 40;
  c.seed = 21;
  c.mix = {{"measurement", 0.4}, {"walk", 0.15}, {"unitary", 0.15}, {"channel", 0.15}, {"mixing", 0.15}};
  c.walk.step = 0.2;
  c.walk.cutoff = 3.0;
  return c;
}

TEST(Campaign, CatalogHasNoViolations) {
  const SimReport r = run_campaign(small_campaign());
  EXPECT_EQ(r.total_violations, 0);
  ASSERT_EQ(r.monotones.size(), catalog().size());
  for (const auto& s : r.monotones) {
    EXPECT_EQ(s.trials, 40) << s.name;
    if (s.name == "sigma_ABC") EXPECT_EQ(s.passed + s.violations, 0);
  }
}

TEST(Campaign, EmptyMixGivesEmptyReport) {
  CampaignConfig c = small_campaign();
  c.mix.clear();
  const SimReport r = run_campaign(c);
  EXPECT_TRUE(r.records.empty());
  EXPECT_EQ(r.total_violations, 0);
}

TEST(Campaign, ProbabilitiesClose) {
  const SimReport r = run_campaign(small_campaign());
  for (const auto& rec : r.records) {
    if (rec.postselected || rec.operation == "mixing") continue;
    if (rec.single_branch) continue;
    EXPECT_NEAR(rec.probability_sum, 1.0, 1e-10) << rec.operation;
  }
}

TEST(Campaign, DeterministicBytes) {
  const std::string a = canonical_json(to_json(run_campaign(small_campaign()), true));
  const std::string b = canonical_json(to_json(run_campaign(small_campaign()), true));
  EXPECT_EQ(a, b);
}

TEST(Campaign, MislabeledPurityViolates) {
  CampaignConfig c = small_campaign();
  c.mix = {{"measurement", 1.0}};
  c.n_trials = 200;
  c.monotones = {"purity_A"};
  const SimReport ok = run_campaign(c);
  EXPECT_EQ(ok.total_violations, 0);
  int bad = 0;
  const MonotoneDescriptor wrong = relabeled(*find_monotone("purity_A"), Direction::decreasing);
  for (int t = 0; t < 200; ++t) {
    Rng rng = Rng::derive(22, t);
    bad += single_step_trial(wrong, sample::haar_pure(kThree, rng).density(), sample::measurement(kThree, t % 3, rng))
               .status == TrialStatus::violation;
  }
  EXPECT_GT(bad, 0);
}

TEST(CampaignConfig, Validation) {
  CampaignConfig c = small_campaign();
  c.monotones = {"bogus"};
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = small_campaign();
  c.mix["teleport"] = 1.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = small_campaign();
  c.chain_depth = 4;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace qmono
