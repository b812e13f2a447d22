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

// Integrated monotonicity trials: concrete local operations applied to
// states, with every outcome branch evaluated exactly.

#ifndef QMONO_LOCCSIM_HPP_
#define QMONO_LOCCSIM_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qmono/monotones.hpp"
#include "qmono/qcore.hpp"
#include "qmono/sampling.hpp"
#include "qmono/weakmeas.hpp"

namespace qmono {

inline constexpr double kTrialViolationTol = 1e-9;  // relative to max(1, |f(ρ)|)

struct BranchValue {
  double probability = 0.0;
  double value = 0.0;
};

enum class TrialStatus { pass, violation, exploratory, sampled };
const char* to_string(TrialStatus s);

struct TrialRecord {
  std::string monotone;
  std::string operation;
  std::int64_t trial = 0;
  int target = 0;
  double before = 0.0;
  double after_avg = 0.0;  // Σ p_j f(ρ_j) over recorded branches
  double delta = 0.0;      // after_avg - before
  std::vector<BranchValue> branches;
  double probability_sum = 0.0;
  bool postselected = false;
  bool single_branch = false;  // some branch fell below p_floor
  TrialStatus status = TrialStatus::pass;
};

// Pass/violation from the descriptor's direction; `tol` is relative.
TrialStatus classify_delta(const MonotoneDescriptor& f, double before, double delta,
                           double tol = kTrialViolationTol);

// Both branches of a two-outcome measurement, evaluated exactly.
TrialRecord single_step_trial(const MonotoneDescriptor& f, const DensityMatrix& rho,
                              const TwoOutcomeMeasurement& meas, double p_floor = kProbabilityFloor);

// A sequence of two-outcome measurements applied to every branch of the
// previous one (at most 3, giving up to 8 outcomes).
TrialRecord chained_measurement_trial(const MonotoneDescriptor& f, const DensityMatrix& rho,
                                      const std::vector<TwoOutcomeMeasurement>& chain,
                                      double p_floor = kProbabilityFloor);

// Σ p_k f(ρ_k) vs f(Σ p_k ρ_k); delta = f(mix) - Σ p_k f(ρ_k).
TrialRecord mixing_trial(const MonotoneDescriptor& f,
                         const std::vector<std::pair<double, DensityMatrix>>& ensemble);

// Applies ρ -> Σ M_k ρ M_k† (full-size Kraus operators). With postselect the
// output is renormalized and Σ M†M <= I suffices; otherwise Σ M†M = I is
// required within 1e-10.
TrialRecord channel_trial(const MonotoneDescriptor& f, const DensityMatrix& rho,
                          const std::vector<Matrix>& kraus, bool postselect);

struct TrajectoryRecord {
  WalkResult walk;
  std::vector<double> values;  // f after every step, values[0] = f(ρ)
};

TrajectoryRecord walk_trajectory_trial(const MonotoneDescriptor& f, const DensityMatrix& rho,
                                       const TwoOutcomeMeasurement& meas, const WalkConfig& config,
                                       Rng& rng);

struct WalkAverage {
  std::int64_t walks = 0;
  std::int64_t unabsorbed = 0;
  double mean = 0.0;       // mean of f(final state) over absorbed walks
  double std_error = 0.0;
  double one_shot = 0.0;   // single_step_trial average
  double tolerance = 0.0;  // 3σ + truncation allowance
  bool consistent = false;
};

// Final-outcome-averaged f over `walks` sampled walks (walk i uses
// Rng::derive(seed, i)) compared with the one-shot measurement average.
WalkAverage walk_average(const MonotoneDescriptor& f, const DensityMatrix& rho,
                         const TwoOutcomeMeasurement& meas, const WalkConfig& config,
                         std::int64_t walks, std::uint64_t seed);

//-------------------------------------------------------------------------
// Campaigns
//-------------------------------------------------------------------------

enum class EnsembleKind { haar_pure, ginibre_mixed, product_pure };

struct CampaignConfig {
  std::int64_t n_trials = 1000;
  std::uint64_t seed = 0;
  std::vector<int> shape{2, 2, 2};
  EnsembleKind ensemble = EnsembleKind::haar_pure;
  // Operation weights; keys: measurement, walk, unitary, channel, mixing.
  std::map<std::string, double> mix;
  WalkConfig walk;
  int chain_depth = 3;          // measurement chains have depth 1..chain_depth
  int mixing_components = 2;
  int trotter_steps = 16;
  bool postselect = false;
  std::vector<std::string> monotones = catalog_names();
  bool keep_records = true;

  void validate() const;  // throws std::invalid_argument
};

struct MonotoneSummary {
  std::string name;
  std::string direction;
  std::string domain;
  bool conjectured = false;
  std::int64_t trials = 0;
  std::int64_t passed = 0;
  std::int64_t violations = 0;
  std::int64_t exploratory = 0;
  std::int64_t sampled = 0;
  double worst_violation = 0.0;  // largest excess over the relative threshold
  double min_delta = 0.0;
  double max_delta = 0.0;
  std::map<std::string, std::int64_t> by_operation;
};

struct SimReport {
  CampaignConfig config;
  std::vector<MonotoneSummary> monotones;
  std::vector<TrialRecord> records;
  std::int64_t total_violations = 0;
};

SimReport run_campaign(const CampaignConfig& config);

}  // namespace qmono

#endif  // QMONO_LOCCSIM_HPP_
