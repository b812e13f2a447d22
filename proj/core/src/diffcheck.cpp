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

#include "qmono/diffcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qmono/sampling.hpp"

namespace qmono {

namespace {

constexpr double kMarginFraction = 0.05;

double capped_step(double h, double margin) {
  return std::isfinite(margin) ? std::min(h, kMarginFraction * margin) : h;
}

// Shared stencil logic for any probe p(s) = f(x + s u), u normalized.
FdResult stencil(const std::function<double(double)>& probe, double step, int order,
                 bool richardson) {
  if (order != 1 && order != 2) throw std::invalid_argument("fd: order must be 1 or 2");
  FdResult out;
  if (!(step > 0.0)) {
    out.ok = false;
    return out;
  }
  try {
    const double f0 = order == 2 ? probe(0.0) : 0.0;
    auto diff = [&](double s) {
      const double up = probe(s);
      const double down = probe(-s);
      return order == 1 ? (up - down) / (2.0 * s) : (up - 2.0 * f0 + down) / (s * s);
    };
    const double coarse = diff(step);
    out.value = richardson ? (4.0 * diff(step / 2.0) - coarse) / 3.0 : coarse;
    out.ok = std::isfinite(out.value);
  } catch (const DomainError&) {
    out.ok = false;
    out.value = 0.0;
  }
  return out;
}

Matrix unit_block(const LocalHermitian& eps, double& norm) {
  norm = operator_norm(eps.block());
  return norm > 0.0 ? Matrix(eps.block() / norm) : eps.block();
}

}  // namespace

void CheckConfig::validate() const {
  if (n_states < 1 || n_directions < 1) throw std::invalid_argument("CheckConfig: counts must be >= 1");
  if (fd_step < 1e-6 || fd_step > 1e-2) throw std::invalid_argument("CheckConfig: fd_step must be in [1e-6, 1e-2]");
  if (fd_step2 < 1e-6 || fd_step2 > 1e-2) throw std::invalid_argument("CheckConfig: fd_step2 must be in [1e-6, 1e-2]");
  if (!(eps_norm > 0.0) || eps_norm >= 1.0) throw std::invalid_argument("CheckConfig: eps_norm must be in (0, 1)");
  if (!(tol_zero > 0.0) || !(tol_sign > 0.0)) throw std::invalid_argument("CheckConfig: tolerances must be positive");
  if (!(g_time > 0.0) || g_time >= 0.5) throw std::invalid_argument("CheckConfig: g_time must be in (0, 0.5)");
}

FdResult fd_directional(const StateFunction& f, const DensityMatrix& rho, const Matrix& a,
                        double h, int order, bool richardson, double margin) {
  if (a.rows() != rho.dim() || a.cols() != rho.dim()) {
    throw std::invalid_argument("fd_directional: direction size mismatch");
  }
  const double n = a.norm();
  if (n == 0.0) return {};
  const Matrix u = a / n;
  auto probe = [&](double s) { return f(DensityMatrix(rho.shape(), rho.matrix() + s * u)); };
  FdResult r = stencil(probe, capped_step(h, margin), order, richardson);
  r.value *= order == 1 ? n : n * n;
  return r;
}

Matrix measurement_direction(const Matrix& rho, const Matrix& eps) {
  const double mean = (eps * rho).trace().real();
  return mean * rho - 0.5 * bracket(eps, rho, BracketKind::anticommutator);
}

Matrix double_commutator(const Matrix& rho, const Matrix& eps) {
  return bracket(bracket(eps, rho, BracketKind::commutator), eps, BracketKind::commutator);
}

double f_function(const StateFunction& f, const DensityMatrix& rho, const Matrix& eps) {
  const Matrix u = unitary_exp(eps);
  return f(DensityMatrix(rho.shape(), u * rho.matrix() * u.adjoint())) - f(rho);
}

double g_function(const StateFunction& f, const DensityMatrix& rho, const Matrix& eps) {
  if (operator_norm(eps) > 1.0 + 1e-12) throw std::invalid_argument("g_function: ||eps|| must be <= 1");
  const Matrix id = Matrix::Identity(rho.dim(), rho.dim());
  double avg = 0.0;
  for (double sign : {1.0, -1.0}) {
    const Matrix m = herm_matrix_function((id + sign * eps) / 2.0, MatrixFunction::sqrt);
    const KrausBranch b = apply_kraus(rho, m, 0.0);
    if (b.state && b.probability > 0.0) avg += b.probability * f(*b.state);
  }
  return avg - f(rho);
}

LuValue lu_condition(const StateFunction& f, const DensityMatrix& rho, const LocalHermitian& eps,
                     const FdSteps& steps) {
  double norm = 0.0;
  const Matrix unit = embed_local(unit_block(eps, norm), eps.shape(), eps.target());
  LuValue out;
  if (norm == 0.0) return out;
  const Matrix dir = Complex(0.0, 1.0) * bracket(unit, rho.matrix(), BracketKind::commutator);
  const FdResult fd = fd_directional(f, rho, dir, steps.h1, 1, steps.richardson, steps.margin);
  out.fd_value = fd.value;
  out.ok = fd.ok;
  try {
    out.exact_value = f_function(f, rho, unit);
  } catch (const DomainError&) {
    out.ok = false;
  }
  return out;
}

MeasurementValue measurement_condition(const StateFunction& f, const DensityMatrix& rho,
                                       const LocalHermitian& eps, const FdSteps& steps,
                                       double g_time) {
  double norm = 0.0;
  const Matrix unit = embed_local(unit_block(eps, norm), eps.shape(), eps.target());
  MeasurementValue out;
  if (norm == 0.0) return out;

  const FdResult first = fd_directional(f, rho, double_commutator(rho.matrix(), unit), steps.h1,
                                        1, steps.richardson, steps.margin);
  const FdResult second = fd_directional(f, rho, measurement_direction(rho.matrix(), unit),
                                         steps.h2, 2, steps.richardson, steps.margin);
  out.first_term = 0.25 * first.value;
  out.second_term = second.value;
  out.lhs = out.first_term + out.second_term;
  out.ok = first.ok && second.ok;
  try {
    const double t1 = g_time, t2 = g_time / 2.0;
    const double g1 = g_function(f, rho, t1 * unit) / (t1 * t1);
    const double g2 = g_function(f, rho, t2 * unit) / (t2 * t2);
    out.g_ratio = steps.richardson ? (4.0 * g2 - g1) / 3.0 : g2;
  } catch (const DomainError&) {
    out.ok = false;
  }
  return out;
}

FdResult convexity_condition(const StateFunction& f, const DensityMatrix& rho, const Matrix& sigma,
                             const FdSteps& steps) {
  return fd_directional(f, rho, sigma, steps.h2, 2, steps.richardson, steps.margin);
}

AmplitudeFunction amplitude_form(const StateFunction& f, const SystemShape& shape) {
  return [f, shape](const Vector& a) {
    return f(DensityMatrix(shape, a * a.adjoint()));
  };
}

AmplitudeConditions pure_amplitude_conditions(const AmplitudeFunction& f, const PureState& psi,
                                              const LocalHermitian& eps, const FdSteps& steps) {
  double norm = 0.0;
  const Matrix unit = embed_local(unit_block(eps, norm), eps.shape(), eps.target());
  AmplitudeConditions out;
  if (norm == 0.0) return out;
  const Vector& alpha = psi.amplitudes();

  auto along = [&](const Vector& w, double h, int order) {
    const double n = w.norm();
    if (n == 0.0) return FdResult{};
    const Vector u = w / n;
    auto probe = [&](double s) { return f(alpha + s * u); };
    FdResult r = stencil(probe, capped_step(h, steps.margin), order, steps.richardson);
    r.value *= order == 1 ? n : n * n;
    return r;
  };

  const Complex i(0.0, 1.0);
  const Vector e_alpha = unit * alpha;
  const FdResult lu = along(i * e_alpha, steps.h1, 1);
  const Complex mean = alpha.dot(e_alpha);  // <ψ|ε|ψ>
  const Vector v = e_alpha - mean.real() * alpha;
  const FdResult real_dir = along(v, steps.h2, 2);
  const FdResult imag_dir = along(i * v, steps.h2, 2);
  out.lu_residual = lu.value;
  out.meas_lhs = 0.5 * (real_dir.value - imag_dir.value);
  out.ok = lu.ok && real_dir.ok && imag_dir.ok;
  return out;
}

double purity_hessian_closed_form(const Matrix& y_part) { return 2.0 * (y_part * y_part).trace().real(); }

double entropy_hessian_commuting_form(const Matrix& rho_part, const Matrix& y_part) {
  const Matrix inv = apply_spectral(rho_part, [](double x) {
    if (x <= 0.0) throw DomainError("entropy_hessian_commuting_form: singular marginal");
    return 1.0 / x;
  });
  return -(inv * y_part * y_part).trace().real() / std::numbers::ln2;
}

double entropy_hessian_spectral_form(const Matrix& rho_part, const Matrix& y_part) {
  Eigen::SelfAdjointEigenSolver<Matrix> es((rho_part + rho_part.adjoint()) / 2.0);
  const Eigen::VectorXd& l = es.eigenvalues();
  if (l.minCoeff() <= 0.0) throw DomainError("entropy_hessian_spectral_form: singular marginal");
  const Matrix yt = es.eigenvectors().adjoint() * y_part * es.eigenvectors();
  double sum = 0.0;
  for (Eigen::Index a = 0; a < l.size(); ++a) {
    for (Eigen::Index b = 0; b < l.size(); ++b) {
      const double gap = l[a] - l[b];
      const double weight = std::abs(gap) <= 1e-12 * std::max(l[a], l[b])
                                ? 2.0 / (l[a] + l[b])
                                : (std::log(l[a]) - std::log(l[b])) / gap;
      sum += std::norm(yt(a, b)) * weight;
    }
  }
  return -sum / std::numbers::ln2;
}

const char* to_string(SampleClass c) {
  switch (c) {
    case SampleClass::pass: return "pass";
    case SampleClass::violation: return "violation";
    case SampleClass::ill_conditioned: return "ill_conditioned";
  }
  return "unknown";
}

CheckReport run_check(const MonotoneDescriptor& descriptor, const CheckConfig& config) {
  config.validate();
  const SystemShape& shape = descriptor.shape;
  const bool pure = descriptor.domain == Domain::pure_only;
  const bool decreasing = descriptor.direction == Direction::decreasing;

  CheckReport report;
  report.monotone = descriptor.name;
  report.direction = to_string(descriptor.direction);
  report.domain = to_string(descriptor.domain);
  report.conjectured = descriptor.conjectured;
  report.config = config;

  double lg = 0.0, gg = 0.0;
  bool have_lhs = false;
  for (int s = 0; s < config.n_states; ++s) {
    Rng state_rng = Rng::derive(config.seed, static_cast<std::uint64_t>(s));
    const DensityMatrix rho = pure ? sample::haar_pure(shape, state_rng).density()
                                   : sample::ginibre_mixed(shape, state_rng);
    const bool smooth = descriptor.is_smooth(rho);
    const double scale = smooth ? std::max(1.0, std::abs(descriptor.evaluate(rho))) : 1.0;
    const FdSteps steps{config.fd_step, config.fd_step2, config.richardson,
                        smooth ? descriptor.margin(rho) : 0.0};

    for (int target = 0; target < shape.num_subsystems(); ++target) {
      for (int d = 0; d < config.n_directions; ++d) {
        const auto stream = static_cast<std::uint64_t>(1 + target * config.n_directions + d);
        Rng rng = Rng::derive(config.seed, static_cast<std::uint64_t>(s), stream);
        const LocalHermitian eps = sample::local_hermitian(shape, target, config.eps_norm, rng);

        ConditionSample cs;
        cs.state_id = s;
        cs.direction_id = d;
        cs.target = target;
        cs.scale = scale;
        ++report.total;
        if (!smooth) {
          cs.classification = SampleClass::ill_conditioned;
          ++report.ill_conditioned;
          report.samples.push_back(cs);
          continue;
        }

        const LuValue lu = lu_condition(descriptor.evaluate, rho, eps, steps);
        const MeasurementValue mv =
            measurement_condition(descriptor.evaluate, rho, eps, steps, config.g_time);
        bool ok = lu.ok && mv.ok;
        if (!pure) {
          const Matrix sigma = sample::traceless_direction(shape.total_dim(), 1.0, rng);
          const FdResult cv = convexity_condition(descriptor.evaluate, rho, sigma, steps);
          ok = ok && cv.ok;
          cs.convexity_value = cv.value;
        }
        cs.lu_value = lu.fd_value;
        cs.lu_exact = lu.exact_value;
        cs.meas_value = mv.lhs;
        cs.g_exact_ratio = mv.g_ratio;

        if (!ok) {
          cs.classification = SampleClass::ill_conditioned;
          ++report.ill_conditioned;
          report.samples.push_back(cs);
          continue;
        }

        const double tz = config.tol_zero * scale;
        const double ts = config.tol_sign * scale;
        double excess = 0.0;
        excess = std::max(excess, std::abs(lu.fd_value) - tz);
        excess = std::max(excess, std::abs(lu.exact_value) - tz);
        excess = std::max(excess, decreasing ? mv.lhs - ts : -mv.lhs - ts);
        // A mixed-state monotone must be convex whatever its direction of travel
        // under measurements; increasing monotones are tested as -f.
        if (cs.convexity_value) {
          const double c = decreasing ? *cs.convexity_value : -*cs.convexity_value;
          excess = std::max(excess, -c - ts);
        }
        if (excess > 0.0) {
          cs.classification = SampleClass::violation;
          ++report.violations;
          report.worst_violation = std::max(report.worst_violation, excess);
        } else {
          ++report.passed;
        }

        report.max_abs_lu = std::max({report.max_abs_lu, std::abs(lu.fd_value), std::abs(lu.exact_value)});
        const double disc = std::abs(mv.lhs - mv.g_ratio);
        report.max_cross_discrepancy = std::max(report.max_cross_discrepancy, disc);
        if (disc > std::max(1e-4, 1e-3 * std::abs(mv.lhs))) ++report.cross_failures;
        if (std::abs(mv.g_ratio) > 1e-8 * scale) {
          lg += mv.lhs * mv.g_ratio;
          gg += mv.g_ratio * mv.g_ratio;
        }
        report.min_lhs = have_lhs ? std::min(report.min_lhs, mv.lhs) : mv.lhs;
        report.max_lhs = have_lhs ? std::max(report.max_lhs, mv.lhs) : mv.lhs;
        have_lhs = true;
        report.samples.push_back(cs);
      }
    }
  }
  if (gg > 0.0) report.fitted_factor = lg / gg;
  return report;
}

}  // namespace qmono
