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

#include "qmono/monotones.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qmono {

namespace {

constexpr double kPurityTol = 1e-8;
constexpr double kEntropySmoothFloor = 1e-6;
constexpr double kTangleSmoothFloor = 1e-8;

double purity_of(const Matrix& m) { return (m * m).trace().real(); }

Matrix marginal(const DensityMatrix& rho, std::initializer_list<int> part) {
  std::vector<int> keep(part);
  return partial_trace(rho.matrix(), rho.shape(), keep);
}

double min_marginal_eigenvalue(const DensityMatrix& rho, int subsystem) {
  const Matrix m = partial_trace(rho.matrix(), rho.shape(), std::span(&subsystem, 1));
  return hermitian_eigenvalues((m + m.adjoint()) / 2.0).minCoeff();
}

}  // namespace

double norm_monotone(const DensityMatrix& rho) { return rho.trace(); }

double local_purity(const DensityMatrix& rho, std::span<const int> part) {
  return purity_of(partial_trace(rho.matrix(), rho.shape(), part));
}

double marginal_entropy(const DensityMatrix& rho, std::span<const int> part) {
  const Matrix m = partial_trace(rho.matrix(), rho.shape(), part);
  const Eigen::VectorXd lambda = hermitian_eigenvalues((m + m.adjoint()) / 2.0);
  double s = 0.0;
  for (double l : lambda) {
    if (l < -kPsdClamp) throw DomainError("marginal_entropy: negative eigenvalue in marginal");
    if (l > kPsdClamp) s -= l * std::log2(l);
  }
  return s;
}

double entropy_of_entanglement(const DensityMatrix& rho, std::span<const int> part) {
  if (rho.purity() < 1.0 - kPurityTol) {
    throw DomainError("entropy_of_entanglement: state is not pure");
  }
  return marginal_entropy(rho, part);
}

const char* to_string(Direction d) {
  return d == Direction::decreasing ? "decreasing" : "increasing";
}

const char* to_string(Domain d) { return d == Domain::pure_only ? "pure_only" : "mixed"; }

double MonotoneDescriptor::margin(const DensityMatrix& rho) const {
  return domain_margin ? domain_margin(rho) : std::numeric_limits<double>::infinity();
}

const std::vector<MonotoneDescriptor>& catalog() {
  static const std::vector<MonotoneDescriptor> entries = [] {
    std::vector<MonotoneDescriptor> c;

    MonotoneDescriptor norm;
    norm.name = "norm";
    norm.evaluate = norm_monotone;
    norm.domain = Domain::mixed;
    c.push_back(norm);

    MonotoneDescriptor purity;
    purity.name = "purity_A";
    purity.evaluate = [](const DensityMatrix& r) { return purity_of(marginal(r, {0})); };
    purity.direction = Direction::increasing;
    c.push_back(purity);

    MonotoneDescriptor entropy;
    entropy.name = "entropy_A";
    entropy.evaluate = [](const DensityMatrix& r) {
      const int a = 0;
      return marginal_entropy(r, std::span(&a, 1));
    };
    entropy.smooth_on = [](const DensityMatrix& r) {
      return min_marginal_eigenvalue(r, 0) >= kEntropySmoothFloor;
    };
    entropy.domain_margin = [](const DensityMatrix& r) { return min_marginal_eigenvalue(r, 0); };
    c.push_back(entropy);

    auto tangle = [](std::string name, int traced) {
      MonotoneDescriptor d;
      d.name = std::move(name);
      d.evaluate = [traced](const DensityMatrix& r) {
        return 2.0 * (1.0 - purity_of(marginal(r, {traced})));
      };
      return d;
    };
    // Purity of C, B, A respectively.
    c.push_back(tangle("tau_AB_C", 2));
    c.push_back(tangle("tau_AC_B", 1));
    c.push_back(tangle("tau_BC_A", 0));

    MonotoneDescriptor tau3;
    tau3.name = "tau_ABC";
    tau3.evaluate = [](const DensityMatrix& r) {
      return 2.0 * std::sqrt(std::max(i5_from_density(r.matrix()), 0.0));
    };
    tau3.smooth_on = [](const DensityMatrix& r) {
      return i5_from_density(r.matrix()) >= kTangleSmoothFloor;
    };
    // sqrt(I5) is only smooth on the scale of I5 itself.
    tau3.domain_margin = [](const DensityMatrix& r) { return i5_from_density(r.matrix()); };
    c.push_back(tau3);

    MonotoneDescriptor phi;
    phi.name = "phi_ABC";
    phi.evaluate = [](const DensityMatrix& r) { return phi_abc(r); };
    c.push_back(phi);

    MonotoneDescriptor sigma;
    sigma.name = "sigma_ABC";
    sigma.evaluate = [](const DensityMatrix& r) { return sigma_abc(r); };
    sigma.conjectured = true;
    c.push_back(sigma);
    return c;
  }();
  return entries;
}

std::optional<MonotoneDescriptor> find_monotone(const std::string& name) {
  for (const auto& d : catalog()) {
    if (d.name == name) return d;
  }
  return std::nullopt;
}

std::vector<std::string> catalog_names() {
  std::vector<std::string> names;
  for (const auto& d : catalog()) names.push_back(d.name);
  return names;
}

MonotoneDescriptor relabeled(const MonotoneDescriptor& d, Direction direction) {
  MonotoneDescriptor out = d;
  out.direction = direction;
  out.name = d.name + (direction == Direction::decreasing ? "[as decreasing]" : "[as increasing]");
  return out;
}

}  // namespace qmono
