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

#include "qmono/weakmeas.hpp"

#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace qmono {

namespace {

constexpr double kCompletenessTol = 1e-10;

struct DeltaSpectrum {
  Matrix vectors;
  Eigen::VectorXd values;
};

DeltaSpectrum diagonalize_delta(const Matrix& delta) {
  if (hermiticity_residual(delta) > 1e-10) throw DomainError("walk generator Δ is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(delta);
  DeltaSpectrum s{solver.eigenvectors(), solver.eigenvalues()};
  if (s.values.cwiseAbs().maxCoeff() > 1.0 + 1e-10) {
    throw DomainError("walk generator Δ must satisfy ||Δ|| <= 1");
  }
  return s;
}

Matrix from_spectrum(const DeltaSpectrum& s, const Eigen::VectorXd& diag) {
  return s.vectors * diag.cast<Complex>().asDiagonal() * s.vectors.adjoint();
}

// Unitary closest to the identity among those mapping ker(P) onto range(M)⊥.
Matrix polar_unitary(const Matrix& m) {
  const Eigen::Index d = m.rows();
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix& w = svd.matrixU();
  const Matrix& v = svd.matrixV();
  const Eigen::VectorXd& sv = svd.singularValues();
  const double tol = 1e-12 * std::max(1.0, sv.size() ? sv[0] : 0.0);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv[rank] > tol) ++rank;

  Matrix u = w.leftCols(rank) * v.leftCols(rank).adjoint();
  const Eigen::Index null_dim = d - rank;
  if (null_dim > 0) {
    const Matrix w0 = w.rightCols(null_dim);
    const Matrix v0 = v.rightCols(null_dim);
    const Matrix overlap = w0.adjoint() * v0;
    Eigen::JacobiSVD<Matrix> osvd(overlap, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Matrix q = osvd.matrixU() * osvd.matrixV().adjoint();
    u += w0 * q * v0.adjoint();
  }
  return u;
}

int site_index(int k, int half_width) { return k + half_width; }

}  // namespace

//-------------------------------------------------------------------------
// Configuration
//-------------------------------------------------------------------------

void WalkConfig::validate() const {
  if (!(step > 0.0) || step > 0.2) throw std::invalid_argument("WalkConfig: step must be in (0, 0.2]");
  if (!(cutoff > step)) throw std::invalid_argument("WalkConfig: cutoff must exceed step");
  if (max_steps < 1) throw std::invalid_argument("WalkConfig: max_steps must be >= 1");
  if (!(p_floor > 0.0)) throw std::invalid_argument("WalkConfig: p_floor must be > 0");
}

int WalkConfig::lattice_half_width() const {
  return static_cast<int>(std::ceil(cutoff / step - 1e-9));
}

double WalkConfig::truncation() const { return 1.0 - std::tanh(lattice_half_width() * step); }

WalkConfig WalkConfig::with_truncation(double step, double truncation_tol) {
  WalkConfig c;
  c.step = step;
  c.cutoff = std::atanh(1.0 - truncation_tol);
  return c;
}

//-------------------------------------------------------------------------
// Operators
//-------------------------------------------------------------------------

PolarDecomposition polar_reduce(const Matrix& m1, const Matrix& m2) {
  if (m1.rows() != m1.cols() || m1.rows() != m2.rows() || m2.rows() != m2.cols()) {
    throw std::invalid_argument("polar_reduce: operators must be square and equal-sized");
  }
  const Matrix e1 = m1.adjoint() * m1;
  const Matrix e2 = m2.adjoint() * m2;
  const Matrix id = Matrix::Identity(m1.rows(), m1.cols());
  if ((e1 + e2 - id).cwiseAbs().maxCoeff() > kCompletenessTol) {
    throw DomainError("polar_reduce: M1†M1 + M2†M2 != I");
  }
  PolarDecomposition out;
  out.p1 = herm_matrix_function((e1 + e1.adjoint()) / 2.0, MatrixFunction::sqrt);
  out.p2 = herm_matrix_function((e2 + e2.adjoint()) / 2.0, MatrixFunction::sqrt);
  out.u1 = polar_unitary(m1);
  out.u2 = polar_unitary(m2);
  return out;
}

TwoOutcomeMeasurement measurement_from_kraus(const SystemShape& shape, int target,
                                             const Matrix& m1, const Matrix& m2) {
  PolarDecomposition pd = polar_reduce(m1, m2);
  return TwoOutcomeMeasurement(shape, target, pd.p1, pd.p2, pd.u1, pd.u2);
}

Matrix curve_operator(double x, const Matrix& delta) {
  const DeltaSpectrum s = diagonalize_delta(delta);
  const double t = std::tanh(x);
  Eigen::VectorXd diag(s.values.size());
  for (Eigen::Index k = 0; k < diag.size(); ++k) {
    const double arg = (1.0 + t * s.values[k]) / 2.0;
    if (arg < -kPsdClamp) throw DomainError("curve_operator: negative argument under sqrt");
    diag[k] = std::sqrt(std::max(arg, 0.0));
  }
  return from_spectrum(s, diag);
}

StepOperators step_operators(double x, double eps, const Matrix& delta, double p_floor) {
  if (!std::isfinite(x)) throw std::invalid_argument("step_operators: x must be finite");
  const DeltaSpectrum s = diagonalize_delta(delta);
  const double t = std::tanh(x);
  const double te = std::tanh(eps);
  const double tp = std::tanh(x + eps);
  const double tm = std::tanh(x - eps);

  StepOperators out;
  out.c_plus = (1.0 + te * t) / 2.0;
  out.c_minus = (1.0 - te * t) / 2.0;

  const Eigen::Index d = s.values.size();
  Eigen::VectorXd plus(d), minus(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const double den = 1.0 + t * s.values[k];
    if (den < p_floor) {
      std::ostringstream msg;
      msg << "step_operators: denominator eigenvalue " << den << " below p_floor at x=" << x;
      throw DomainError(msg.str());
    }
    plus[k] = std::sqrt(std::max(out.c_plus * (1.0 + tp * s.values[k]) / den, 0.0));
    minus[k] = std::sqrt(std::max(out.c_minus * (1.0 + tm * s.values[k]) / den, 0.0));
  }
  out.plus = from_spectrum(s, plus);
  out.minus = from_spectrum(s, minus);
  return out;
}

//-------------------------------------------------------------------------
// Sampled walks
//-------------------------------------------------------------------------

namespace {

void check_walk_inputs(const DensityMatrix& rho, const TwoOutcomeMeasurement& meas,
                       const WalkConfig& config) {
  config.validate();
  if (!(rho.shape() == meas.shape())) {
    throw std::invalid_argument("walk: state and measurement shapes differ");
  }
}

// Step operators of the target block on lattice sites -K+1..K-1, built lazily.
class StepTable {
 public:
  StepTable(const TwoOutcomeMeasurement& meas, const WalkConfig& config)
      : delta_(meas.delta()), config_(config), half_(config.lattice_half_width()),
        sites_(2 * half_ + 1) {}

  const StepOperators& at(int k) {
    auto& slot = sites_[site_index(k, half_)];
    if (!slot) slot = step_operators(k * config_.step, config_.step, delta_, config_.p_floor);
    return *slot;
  }

  int half_width() const { return half_; }

 private:
  Matrix delta_;
  WalkConfig config_;
  int half_;
  std::vector<std::optional<StepOperators>> sites_;
};

}  // namespace

WalkResult run_walk(const DensityMatrix& rho, const TwoOutcomeMeasurement& meas,
                    const WalkConfig& config, Rng& rng) {
  return run_walk(rho, meas, config, rng, {});
}

WalkResult run_walk(const DensityMatrix& rho, const TwoOutcomeMeasurement& meas,
                    const WalkConfig& config, Rng& rng,
                    const std::function<void(std::int64_t, double, const DensityMatrix&)>& observer) {
  check_walk_inputs(rho, meas, config);
  StepTable table(meas, config);
  const int half = table.half_width();
  std::vector<std::optional<std::pair<Matrix, Matrix>>> embedded(2 * half + 1);

  DensityMatrix state = rho.normalized();
  int k = 0;
  std::int64_t steps = 0;
  double log_weight = 0.0;
  while (std::abs(k) < half && steps < config.max_steps) {
    auto& slot = embedded[site_index(k, half)];
    if (!slot) {
      const StepOperators& ops = table.at(k);
      slot.emplace(embed_local(ops.plus, meas.shape(), meas.target()),
                   embed_local(ops.minus, meas.shape(), meas.target()));
    }
    const KrausBranch up = apply_kraus(state, slot->first, 0.0);
    const bool go_up = rng.uniform() < up.probability;
    KrausBranch taken = go_up ? up : apply_kraus(state, slot->second, 0.0);
    if (taken.probability < config.p_floor || !taken.state) {
      throw DomainError("run_walk: sampled a branch below p_floor");
    }
    log_weight += std::log(taken.probability);
    state = *taken.state;
    k += go_up ? 1 : -1;
    ++steps;
    if (observer) observer(steps, k * config.step, state);
  }

  WalkOutcome outcome = WalkOutcome::unabsorbed;
  if (k <= -half) outcome = WalkOutcome::first;
  if (k >= half) outcome = WalkOutcome::second;
  if (outcome != WalkOutcome::unabsorbed) {
    const std::optional<Matrix>& u = outcome == WalkOutcome::first ? meas.u1() : meas.u2();
    if (u) {
      const Matrix full = embed_local(*u, meas.shape(), meas.target());
      state = DensityMatrix(state.shape(), full * state.matrix() * full.adjoint());
    }
  }
  return WalkResult{outcome, k * config.step, steps, state, log_weight};
}

WalkCounts run_walk_counts(const DensityMatrix& rho, const TwoOutcomeMeasurement& meas,
                           const WalkConfig& config, std::int64_t trials, std::uint64_t seed) {
  check_walk_inputs(rho, meas, config);
  StepTable table(meas, config);
  const int half = table.half_width();
  const int target = meas.target();
  const Matrix reduced = partial_trace(rho.normalized().matrix(), rho.shape(), std::span(&target, 1));
  const Matrix delta = meas.delta();

  // Probability of the +step outcome at each interior site, for the state
  // M(x) ρ M(x) / Tr(M(x)^2 ρ) reached there.
  std::vector<double> p_up(2 * half + 1, 0.0);
  for (int k = -half + 1; k < half; ++k) {
    const Matrix m = curve_operator(k * config.step, delta);
    Matrix here = m * reduced * m.adjoint();
    here /= here.trace().real();
    const StepOperators& ops = table.at(k);
    p_up[site_index(k, half)] = (ops.plus * here * ops.plus.adjoint()).trace().real();
  }

  WalkCounts counts;
  for (std::int64_t t = 0; t < trials; ++t) {
    Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(t));
    int k = 0;
    std::int64_t steps = 0;
    while (std::abs(k) < half && steps < config.max_steps) {
      k += rng.uniform() < p_up[site_index(k, half)] ? 1 : -1;
      ++steps;
    }
    if (k <= -half) {
      ++counts.first;
    } else if (k >= half) {
      ++counts.second;
    } else {
      ++counts.unabsorbed;
    }
  }
  return counts;
}

//-------------------------------------------------------------------------
// Exact oracle
//-------------------------------------------------------------------------

WalkProbabilities exact_walk_probabilities(const DensityMatrix& rho,
                                           const TwoOutcomeMeasurement& meas,
                                           const WalkConfig& config, double mass_tol) {
  check_walk_inputs(rho, meas, config);
  const int half = config.lattice_half_width();
  if (2.0 * half * half > 1e5) {
    std::ostringstream msg;
    msg << "exact_walk_probabilities: lattice half-width " << half << " exceeds the tree budget";
    throw std::length_error(msg.str());
  }
  const int target = meas.target();
  const int d = meas.shape().dim(target);
  const Matrix delta = meas.delta();

  std::vector<Matrix> up(2 * half + 1), down(2 * half + 1);
  for (int k = -half + 1; k < half; ++k) {
    StepOperators ops = step_operators(k * config.step, config.step, delta, config.p_floor);
    up[site_index(k, half)] = std::move(ops.plus);
    down[site_index(k, half)] = std::move(ops.minus);
  }

  std::vector<Matrix> occ(2 * half + 1, Matrix::Zero(d, d));
  std::vector<Matrix> next(2 * half + 1, Matrix::Zero(d, d));
  occ[site_index(0, half)] = partial_trace(rho.matrix(), rho.shape(), std::span(&target, 1));
  const double total = occ[site_index(0, half)].trace().real();

  WalkProbabilities out;
  Matrix tmp(d, d);
  double remaining = total;
  while (remaining > mass_tol * total && out.sweeps < config.max_steps) {
    // Sites of the wrong parity are empty on this sweep.
    const int parity = static_cast<int>(out.sweeps % 2);
    for (int k = -half + 1; k < half; ++k) {
      if (((k % 2) + 2) % 2 != parity) continue;
      const Matrix& a = occ[site_index(k, half)];
      const Matrix& mp = up[site_index(k, half)];
      const Matrix& mm = down[site_index(k, half)];
      tmp.noalias() = mp * a;
      next[site_index(k + 1, half)].noalias() += tmp * mp.adjoint();
      tmp.noalias() = mm * a;
      next[site_index(k - 1, half)].noalias() += tmp * mm.adjoint();
    }
    out.p1 += next[site_index(-half, half)].trace().real();
    out.p2 += next[site_index(half, half)].trace().real();
    next[site_index(-half, half)].setZero();
    next[site_index(half, half)].setZero();
    remaining = 0.0;
    for (int k = -half + 1; k < half; ++k) {
      occ[site_index(k, half)].setZero();
      remaining += next[site_index(k, half)].trace().real();
    }
    std::swap(occ, next);
    ++out.sweeps;
  }
  out.p1 /= total;
  out.p2 /= total;
  out.residual_mass = remaining / total;
  return out;
}

//-------------------------------------------------------------------------
// Unitaries
//-------------------------------------------------------------------------

TrotterResult trotter_unitary(const LocalHermitian& h, int n) {
  if (n < 1) throw std::invalid_argument("trotter_unitary: n must be >= 1");
  const Matrix& block = h.block();
  const Eigen::Index d = block.rows();
  const Matrix id = Matrix::Identity(d, d);

  const Matrix step = unitary_exp(block / static_cast<double>(n));
  const Matrix raw_step = id + Complex(0.0, 1.0) * block / static_cast<double>(n);
  Matrix composed = id;
  Matrix raw = id;
  for (int i = 0; i < n; ++i) {
    composed = step * composed;
    raw = raw_step * raw;
  }
  const Matrix exact = unitary_exp(block);

  TrotterResult out;
  out.raw_deviation = operator_norm(raw - exact);
  out.composed_deviation = operator_norm(composed - exact);
  out.step_unitary = embed_local(step, h.shape(), h.target());
  out.composed = embed_local(composed, h.shape(), h.target());
  out.raw_product = embed_local(raw, h.shape(), h.target());
  out.exact = embed_local(exact, h.shape(), h.target());
  return out;
}

}  // namespace qmono
