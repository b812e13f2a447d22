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

#include "qmono/loccsim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace qmono {

namespace {

constexpr double kClosureTol = 1e-10;
constexpr double kPureTol = 1e-10;

const std::set<std::string> kOperationKinds{"channel", "measurement", "mixing", "unitary", "walk"};
const std::set<std::string> kShapeGeneric{"norm", "purity_A", "entropy_A"};

bool is_pure(const DensityMatrix& rho) {
  const double tr = rho.trace();
  return std::abs(rho.purity() - tr * tr) <= kPureTol * std::max(1.0, tr * tr);
}

// Trials outside a monotone's proven domain are recorded but never judged.
TrialStatus judged(const MonotoneDescriptor& f, bool in_domain, double before, double delta) {
  if (!in_domain && !f.conjectured) return TrialStatus::exploratory;
  return classify_delta(f, before, delta);
}

struct Leaf {
  double probability;
  DensityMatrix state;
};

TrialRecord from_leaves(const MonotoneDescriptor& f, const DensityMatrix& rho,
                        const std::vector<Leaf>& leaves, bool dropped, const std::string& op) {
  TrialRecord r;
  r.monotone = f.name;
  r.operation = op;
  r.before = f.evaluate(rho);
  for (const Leaf& leaf : leaves) {
    const double v = f.evaluate(leaf.state);
    r.branches.push_back({leaf.probability, v});
    r.after_avg += leaf.probability * v;
    r.probability_sum += leaf.probability;
  }
  r.delta = r.after_avg - r.before;
  r.single_branch = dropped;
  const bool in_domain = f.domain == Domain::mixed || is_pure(rho);
  r.status = judged(f, in_domain, r.before, r.delta);
  return r;
}

double max_eig_excess(const Matrix& s) {
  return hermitian_eigenvalues((s + s.adjoint()) / 2.0).maxCoeff() - 1.0;
}

}  // namespace

const char* to_string(TrialStatus s) {
  switch (s) {
    case TrialStatus::pass: return "pass";
    case TrialStatus::violation: return "violation";
    case TrialStatus::exploratory: return "exploratory";
    case TrialStatus::sampled: return "sampled";
  }
  return "unknown";
}

TrialStatus classify_delta(const MonotoneDescriptor& f, double before, double delta, double tol) {
  if (f.conjectured) return TrialStatus::exploratory;
  const double thr = tol * std::max(1.0, std::abs(before));
  const double signed_delta = f.direction == Direction::decreasing ? delta : -delta;
  return signed_delta > thr ? TrialStatus::violation : TrialStatus::pass;
}

TrialRecord single_step_trial(const MonotoneDescriptor& f, const DensityMatrix& rho,
                              const TwoOutcomeMeasurement& meas, double p_floor) {
  return chained_measurement_trial(f, rho, {meas}, p_floor);
}

TrialRecord chained_measurement_trial(const MonotoneDescriptor& f, const DensityMatrix& rho,
                                      const std::vector<TwoOutcomeMeasurement>& chain,
                                      double p_floor) {
  if (chain.empty() || chain.size() > 3) {
    throw std::invalid_argument("chained_measurement_trial: chain depth must be 1..3");
  }
  std::vector<Leaf> leaves{{1.0, rho}};
  bool dropped = false;
  for (const auto& meas : chain) {
    if (!(meas.shape() == rho.shape())) {
      throw std::invalid_argument("chained_measurement_trial: shape mismatch");
    }
    const Matrix k1 = meas.kraus(1);
    const Matrix k2 = meas.kraus(2);
    std::vector<Leaf> next;
    for (const Leaf& leaf : leaves) {
      for (const Matrix* k : {&k1, &k2}) {
        KrausBranch b = apply_kraus(leaf.state, *k, p_floor);
        if (!b.state) {
          dropped = true;
          continue;
        }
        next.push_back({leaf.probability * b.probability, std::move(*b.state)});
      }
    }
    leaves = std::move(next);
  }
  return from_leaves(f, rho, leaves, dropped, chain.size() == 1 ? "measurement" : "measurement_chain");
}

TrialRecord mixing_trial(const MonotoneDescriptor& f,
                         const std::vector<std::pair<double, DensityMatrix>>& ensemble) {
  if (ensemble.empty()) throw std::invalid_argument("mixing_trial: empty ensemble");
  double total = 0.0;
  for (const auto& [p, r] : ensemble) {
    if (p < 0.0) throw std::invalid_argument("mixing_trial: negative weight");
    if (!(r.shape() == ensemble.front().second.shape())) {
      throw std::invalid_argument("mixing_trial: shape mismatch");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kClosureTol) throw std::invalid_argument("mixing_trial: weights must sum to 1");

  const DensityMatrix& first = ensemble.front().second;
  Matrix mix = Matrix::Zero(first.dim(), first.dim());
  TrialRecord r;
  r.monotone = f.name;
  r.operation = "mixing";
  for (const auto& [p, rho] : ensemble) {
    mix += p * rho.matrix();
    const double v = f.evaluate(rho);
    r.branches.push_back({p, v});
    r.before += p * v;
    r.probability_sum += p;
  }
  r.after_avg = f.evaluate(DensityMatrix(first.shape(), mix));
  r.delta = r.after_avg - r.before;
  r.status = judged(f, f.domain == Domain::mixed, r.before, r.delta);
  return r;
}

TrialRecord channel_trial(const MonotoneDescriptor& f, const DensityMatrix& rho,
                          const std::vector<Matrix>& kraus, bool postselect) {
  if (kraus.empty()) throw std::invalid_argument("channel_trial: empty Kraus set");
  const int d = rho.dim();
  Matrix completeness = Matrix::Zero(d, d);
  Matrix out = Matrix::Zero(d, d);
  for (const Matrix& m : kraus) {
    if (m.rows() != d || m.cols() != d) throw std::invalid_argument("channel_trial: Kraus size mismatch");
    completeness += m.adjoint() * m;
    out += m * rho.matrix() * m.adjoint();
  }
  if (postselect) {
    if (max_eig_excess(completeness) > kClosureTol) {
      throw DomainError("channel_trial: Σ M†M exceeds the identity");
    }
  } else if ((completeness - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > kClosureTol) {
    throw DomainError("channel_trial: Σ M†M != I");
  }
  const double p = out.trace().real();
  if (postselect) {
    if (p < kProbabilityFloor) throw DomainError("channel_trial: postselected branch below p_floor");
    out /= p;
  }
  const DensityMatrix after(rho.shape(), out);

  TrialRecord r;
  r.monotone = f.name;
  r.operation = postselect ? "channel_postselected" : "channel";
  r.postselected = postselect;
  r.before = f.evaluate(rho);
  r.after_avg = f.evaluate(after);
  r.branches.push_back({p, r.after_avg});
  r.probability_sum = p;
  r.delta = r.after_avg - r.before;
  const bool in_domain = f.domain == Domain::mixed || (is_pure(rho) && is_pure(after));
  r.status = judged(f, in_domain, r.before, r.delta);
  return r;
}

TrajectoryRecord walk_trajectory_trial(const MonotoneDescriptor& f, const DensityMatrix& rho,
                                       const TwoOutcomeMeasurement& meas, const WalkConfig& config,
                                       Rng& rng) {
  std::vector<double> values{f.evaluate(rho)};
  WalkResult w = run_walk(rho, meas, config, rng,
                          [&](std::int64_t, double, const DensityMatrix& s) {
                            values.push_back(f.evaluate(s));
                          });
  return {std::move(w), std::move(values)};
}

WalkAverage walk_average(const MonotoneDescriptor& f, const DensityMatrix& rho,
                         const TwoOutcomeMeasurement& meas, const WalkConfig& config,
                         std::int64_t walks, std::uint64_t seed) {
  WalkAverage out;
  out.walks = walks;
  out.one_shot = single_step_trial(f, rho, meas).after_avg;

  double sum = 0.0, sum_sq = 0.0;
  std::int64_t n = 0;
  for (std::int64_t i = 0; i < walks; ++i) {
    Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(i));
    const WalkResult w = run_walk(rho, meas, config, rng);
    if (w.outcome == WalkOutcome::unabsorbed) {
      ++out.unabsorbed;
      continue;
    }
    const double v = f.evaluate(w.final_state);
    sum += v;
    sum_sq += v * v;
    ++n;
  }
  if (n > 0) {
    out.mean = sum / n;
    const double var = n > 1 ? std::max(0.0, (sum_sq - n * out.mean * out.mean) / (n - 1)) : 0.0;
    out.std_error = std::sqrt(var / n);
  }

  // The walk stops at x = ±K·step, where the state is M(x)ρM(x)/p exactly
  // (followed by U_i). The gap between f there and f on the one-shot branch
  // is the finite-cutoff allowance.
  const double xk = config.lattice_half_width() * config.step;
  const Matrix delta = meas.delta();
  double allowance = 0.0;
  for (int outcome : {1, 2}) {
    const double x = outcome == 1 ? -xk : xk;
    Matrix m = embed_local(curve_operator(x, delta), meas.shape(), meas.target());
    const auto& u = outcome == 1 ? meas.u1() : meas.u2();
    if (u) m = embed_local(*u, meas.shape(), meas.target()) * m;
    const KrausBranch walk_end = apply_kraus(rho, m);
    const KrausBranch exact = apply_kraus(rho, meas.kraus(outcome));
    if (walk_end.state && exact.state) {
      allowance = std::max(allowance,
                           std::abs(f.evaluate(*walk_end.state) - f.evaluate(*exact.state)));
    }
  }
  out.tolerance = 3.0 * out.std_error + allowance + 1e-12;
  out.consistent = n > 0 && std::abs(out.mean - out.one_shot) <= out.tolerance;
  return out;
}

//-------------------------------------------------------------------------
// Campaigns
//-------------------------------------------------------------------------

void CampaignConfig::validate() const {
  if (n_trials < 1) throw std::invalid_argument("campaign: trials must be >= 1");
  if (shape.empty()) throw std::invalid_argument("campaign: empty shape");
  for (int d : shape) {
    if (d < 2) throw std::invalid_argument("campaign: subsystem dimensions must be >= 2");
  }
  double total = 0.0;
  for (const auto& [k, w] : mix) {
    if (!kOperationKinds.count(k)) throw std::invalid_argument("campaign: unknown operation '" + k + "'");
    if (!(w >= 0.0)) throw std::invalid_argument("campaign: operation weights must be >= 0");
    total += w;
  }
  if (total > 0.0 && std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("campaign: operation weights must sum to 1");
  }
  if (chain_depth < 1 || chain_depth > 3) throw std::invalid_argument("campaign: chain_depth must be 1..3");
  if (mixing_components < 1) throw std::invalid_argument("campaign: mixing_components must be >= 1");
  if (trotter_steps < 1) throw std::invalid_argument("campaign: trotter_steps must be >= 1");
  walk.validate();
  for (const auto& name : monotones) {
    const auto d = find_monotone(name);
    if (!d) throw std::invalid_argument("campaign: unknown monotone '" + name + "'");
    if (!kShapeGeneric.count(name) && !(d->shape == SystemShape(shape))) {
      throw std::invalid_argument("campaign: monotone '" + name + "' needs a 3-qubit shape");
    }
  }
}

namespace {

DensityMatrix sample_state(const CampaignConfig& c, const SystemShape& shape, Rng& rng) {
  switch (c.ensemble) {
    case EnsembleKind::haar_pure:
      return sample::haar_pure(shape, rng).density();
    case EnsembleKind::ginibre_mixed:
      return sample::ginibre_mixed(shape, rng);
    case EnsembleKind::product_pure: {
      Matrix rho = Matrix::Ones(1, 1);
      for (int d : shape.dims()) {
        rho = tensor_product(rho, sample::haar_pure(SystemShape({d}), rng).density().matrix());
      }
      return DensityMatrix(shape, rho);
    }
  }
  throw std::logic_error("unreachable ensemble kind");
}

std::string pick_operation(const std::map<std::string, double>& mix, double u) {
  double acc = 0.0;
  std::string last;
  for (const auto& [k, w] : mix) {
    if (w <= 0.0) continue;
    acc += w;
    last = k;
    if (u < acc) return k;
  }
  return last;
}

void tally(MonotoneSummary& s, const MonotoneDescriptor& f, const TrialRecord& r) {
  ++s.trials;
  ++s.by_operation[r.operation];
  s.min_delta = s.trials == 1 ? r.delta : std::min(s.min_delta, r.delta);
  s.max_delta = s.trials == 1 ? r.delta : std::max(s.max_delta, r.delta);
  switch (r.status) {
    case TrialStatus::pass: ++s.passed; break;
    case TrialStatus::exploratory: ++s.exploratory; break;
    case TrialStatus::sampled: ++s.sampled; break;
    case TrialStatus::violation: {
      ++s.violations;
      const double signed_delta = f.direction == Direction::decreasing ? r.delta : -r.delta;
      const double excess = signed_delta - kTrialViolationTol * std::max(1.0, std::abs(r.before));
      s.worst_violation = std::max(s.worst_violation, excess);
      break;
    }
  }
}

}  // namespace

SimReport run_campaign(const CampaignConfig& config) {
  config.validate();
  SimReport report;
  report.config = config;
  const SystemShape shape(config.shape);

  std::vector<MonotoneDescriptor> fs;
  for (const auto& name : config.monotones) {
    MonotoneDescriptor d = *find_monotone(name);
    d.shape = shape;
    fs.push_back(std::move(d));
    MonotoneSummary s;
    s.name = name;
    s.direction = to_string(fs.back().direction);
    s.domain = to_string(fs.back().domain);
    s.conjectured = fs.back().conjectured;
    report.monotones.push_back(std::move(s));
  }

  double total_weight = 0.0;
  for (const auto& [k, w] : config.mix) total_weight += w;
  if (total_weight <= 0.0 || fs.empty()) return report;

  for (std::int64_t t = 0; t < config.n_trials; ++t) {
    Rng rng = Rng::derive(config.seed, static_cast<std::uint64_t>(t));
    const std::string op = pick_operation(config.mix, rng.uniform());
    const int target = rng.uniform_int(0, shape.num_subsystems() - 1);
    const DensityMatrix rho = sample_state(config, shape, rng);

    std::vector<TrialRecord> records;
    if (op == "measurement") {
      const int depth = rng.uniform_int(1, config.chain_depth);
      std::vector<TwoOutcomeMeasurement> chain;
      for (int k = 0; k < depth; ++k) {
        const int tk = k == 0 ? target : rng.uniform_int(0, shape.num_subsystems() - 1);
        chain.push_back(sample::measurement(shape, tk, rng, true));
      }
      for (const auto& f : fs) records.push_back(chained_measurement_trial(f, rho, chain));
    } else if (op == "walk") {
      const TwoOutcomeMeasurement meas = sample::measurement(shape, target, rng, true);
      Rng walk_rng = Rng::derive(config.seed, static_cast<std::uint64_t>(t), 1);
      const WalkResult w = run_walk(rho, meas, config.walk, walk_rng);
      for (const auto& f : fs) {
        TrialRecord r;
        r.monotone = f.name;
        r.operation = "walk";
        r.before = f.evaluate(rho);
        r.after_avg = f.evaluate(w.final_state);
        r.delta = r.after_avg - r.before;
        r.branches.push_back({1.0, r.after_avg});
        r.probability_sum = 1.0;
        r.single_branch = w.outcome == WalkOutcome::unabsorbed;
        r.status = TrialStatus::sampled;
        records.push_back(std::move(r));
      }
    } else if (op == "unitary") {
      const LocalHermitian h =
          sample::local_hermitian(shape, target, std::numbers::pi * rng.uniform(), rng);
      const Matrix u = trotter_unitary(h, config.trotter_steps).composed;
      for (const auto& f : fs) {
        TrialRecord r = channel_trial(f, rho, {u}, false);
        r.operation = "unitary";
        // Local unitaries must leave every monotone unchanged.
        if (r.status == TrialStatus::pass && !f.conjectured) {
          const double thr = kTrialViolationTol * std::max(1.0, std::abs(r.before));
          if (std::abs(r.delta) > thr) r.status = TrialStatus::violation;
        }
        records.push_back(std::move(r));
      }
    } else if (op == "channel") {
      const TwoOutcomeMeasurement meas = sample::measurement(shape, target, rng, true);
      std::vector<Matrix> kraus{meas.kraus(1)};
      if (!config.postselect) kraus.push_back(meas.kraus(2));
      for (const auto& f : fs) records.push_back(channel_trial(f, rho, kraus, config.postselect));
    } else if (op == "mixing") {
      std::vector<std::pair<double, DensityMatrix>> ensemble;
      std::vector<double> w(config.mixing_components);
      double wsum = 0.0;
      for (double& x : w) wsum += (x = -std::log(1.0 - rng.uniform()));
      ensemble.emplace_back(w[0] / wsum, rho);
      for (int k = 1; k < config.mixing_components; ++k) {
        ensemble.emplace_back(w[k] / wsum, sample_state(config, shape, rng));
      }
      for (const auto& f : fs) records.push_back(mixing_trial(f, ensemble));
    }

    for (std::size_t i = 0; i < records.size(); ++i) {
      records[i].trial = t;
      records[i].target = target;
      tally(report.monotones[i], fs[i], records[i]);
      if (config.keep_records) report.records.push_back(std::move(records[i]));
    }
  }
  for (const auto& s : report.monotones) report.total_violations += s.violations;
  return report;
}

}  // namespace qmono
