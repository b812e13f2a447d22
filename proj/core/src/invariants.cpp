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

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "qmono/monotones.hpp"

namespace qmono {

namespace {

// Amplitude index of |i j k>, subsystem A slowest.
constexpr int flat(int i, int j, int k) { return 4 * i + 2 * j + k; }

constexpr int levi(int a, int b) { return a == b ? 0 : (a == 0 ? 1 : -1); }

void require_three_qubits(const SystemShape& shape, const char* what) {
  if (!(shape == SystemShape::qubits(3))) {
    throw std::invalid_argument(std::string(what) + ": expects a 3-qubit state");
  }
}

void require_permutation(const Permutation& p, std::size_t n) {
  if (p.size() != n) throw std::invalid_argument("polynomial_invariant: permutation arity mismatch");
  std::vector<bool> seen(n, false);
  for (int v : p) {
    if (v < 0 || static_cast<std::size_t>(v) >= n || seen[v]) {
      throw std::invalid_argument("polynomial_invariant: not a permutation");
    }
    seen[v] = true;
  }
}

double trace_real(const Matrix& m) { return m.trace().real(); }
double tr_pow(const Matrix& m, int k) {
  Matrix p = m;
  for (int i = 1; i < k; ++i) p = p * m;
  return trace_real(p);
}

struct Marginals {
  Matrix a, b, c, ab, ac, bc;
};

Marginals marginals_of(const Matrix& rho) {
  const SystemShape s = SystemShape::qubits(3);
  auto keep = [&](std::initializer_list<int> k) {
    std::vector<int> v(k);
    return partial_trace(rho, s, v);
  };
  return {keep({0}), keep({1}), keep({2}), keep({0, 1}), keep({0, 2}), keep({1, 2})};
}

Matrix id2() { return Matrix::Identity(2, 2); }

// The 64 index quadruples (a, b, c, d) of full basis indices on which the
// ε-tensor of the I5 contraction is nonzero, with their signs.
struct EpsTerm {
  std::array<int, 4> idx;
  int sign;
};

const std::vector<EpsTerm>& eps_terms() {
  static const std::vector<EpsTerm> terms = [] {
    std::vector<EpsTerm> t;
    for (int i1 = 0; i1 < 2; ++i1)
      for (int i3 = 0; i3 < 2; ++i3)
        for (int j1 = 0; j1 < 2; ++j1)
          for (int j3 = 0; j3 < 2; ++j3)
            for (int k1 = 0; k1 < 2; ++k1)
              for (int k2 = 0; k2 < 2; ++k2) {
                const int i2 = 1 - i1, i4 = 1 - i3, j2 = 1 - j1, j4 = 1 - j3;
                const int k3 = 1 - k1, k4 = 1 - k2;
                const int sign = levi(i1, i2) * levi(i3, i4) * levi(j1, j2) * levi(j3, j4) *
                                 levi(k1, k3) * levi(k2, k4);
                t.push_back({{flat(i1, j1, k1), flat(i2, j2, k2), flat(i3, j3, k3),
                              flat(i4, j4, k4)},
                             sign});
              }
    return t;
  }();
  return terms;
}

}  // namespace

InvariantValue polynomial_invariant(const PureState& psi, const Permutation& sigma,
                                    const Permutation& tau) {
  require_three_qubits(psi.shape(), "polynomial_invariant");
  const std::size_t n = sigma.size();
  if (n < 1 || n > 3) throw std::invalid_argument("polynomial_invariant: degree must be 1..3");
  require_permutation(sigma, n);
  require_permutation(tau, n);

  const Vector& a = psi.amplitudes();
  std::size_t tuples = 1;
  for (std::size_t m = 0; m < n; ++m) tuples *= 8;

  Complex total = 0.0;
  std::array<int, 3> is{}, js{}, ks{};
  for (std::size_t t = 0; t < tuples; ++t) {
    std::size_t rest = t;
    for (std::size_t m = 0; m < n; ++m) {
      const int idx = static_cast<int>(rest % 8);
      rest /= 8;
      is[m] = idx >> 2;
      js[m] = (idx >> 1) & 1;
      ks[m] = idx & 1;
    }
    Complex term = 1.0;
    for (std::size_t m = 0; m < n; ++m) {
      term *= a[flat(is[m], js[m], ks[m])] *
              std::conj(a[flat(is[m], js[sigma[m]], ks[tau[m]])]);
    }
    total += term;
  }
  return {total.real(), total.imag()};
}

Complex i5_contraction_exhaustive(const PureState& psi) {
  require_three_qubits(psi.shape(), "i5_contraction_exhaustive");
  const Vector& a = psi.amplitudes();
  Complex c = 0.0;
  for (int bits = 0; bits < (1 << 12); ++bits) {
    auto b = [bits](int pos) { return (bits >> pos) & 1; };
    const int i1 = b(0), i2 = b(1), i3 = b(2), i4 = b(3);
    const int j1 = b(4), j2 = b(5), j3 = b(6), j4 = b(7);
    const int k1 = b(8), k2 = b(9), k3 = b(10), k4 = b(11);
    const int sign = levi(i1, i2) * levi(i3, i4) * levi(j1, j2) * levi(j3, j4) *
                     levi(k1, k3) * levi(k2, k4);
    if (sign == 0) continue;
    c += static_cast<double>(sign) * a[flat(i1, j1, k1)] * a[flat(i2, j2, k2)] *
         a[flat(i3, j3, k3)] * a[flat(i4, j4, k4)];
  }
  return c;
}

Complex i5_contraction_sliced(const PureState& psi) {
  require_three_qubits(psi.shape(), "i5_contraction_sliced");
  const Vector& a = psi.amplitudes();
  auto slice = [&](int k, int i, int j) { return a[flat(i, j, k)]; };
  Complex b[2][2];
  for (int k = 0; k < 2; ++k) {
    for (int l = 0; l < 2; ++l) {
      b[k][l] = slice(k, 0, 0) * slice(l, 1, 1) - slice(k, 0, 1) * slice(l, 1, 0) -
                slice(k, 1, 0) * slice(l, 0, 1) + slice(k, 1, 1) * slice(l, 0, 0);
    }
  }
  Complex c = 0.0;
  for (int k1 = 0; k1 < 2; ++k1)
    for (int k2 = 0; k2 < 2; ++k2) {
      const int k3 = 1 - k1, k4 = 1 - k2;
      c += static_cast<double>(levi(k1, k3) * levi(k2, k4)) * b[k1][k2] * b[k3][k4];
    }
  return c;
}

double i5_from_density(const Matrix& rho) {
  if (rho.rows() != 8 || rho.cols() != 8) {
    throw std::invalid_argument("i5_from_density: expects an 8x8 operator");
  }
  const auto& terms = eps_terms();
  Complex total = 0.0;
  for (const auto& s : terms) {
    for (const auto& t : terms) {
      total += static_cast<double>(s.sign * t.sign) * rho(s.idx[0], t.idx[0]) *
               rho(s.idx[1], t.idx[1]) * rho(s.idx[2], t.idx[2]) * rho(s.idx[3], t.idx[3]);
    }
  }
  return total.real();
}

KempeRoutes kempe_i4_three_ways(const DensityMatrix& rho) {
  require_three_qubits(rho.shape(), "kempe_i4_three_ways");
  const Marginals m = marginals_of(rho.matrix());
  auto route = [](const Matrix& xy, const Matrix& x, const Matrix& y) {
    return 3.0 * trace_real(xy * tensor_product(x, y)) - tr_pow(x, 3) - tr_pow(y, 3);
  };
  return {route(m.ab, m.a, m.b), route(m.ac, m.a, m.c), route(m.bc, m.b, m.c)};
}

double phi_from_rho_ab(const Matrix& rho_ab, bool check_positive) {
  if (rho_ab.rows() != 4 || rho_ab.cols() != 4) {
    throw std::invalid_argument("phi_from_rho_ab: expects a 4x4 operator");
  }
  const SystemShape s = SystemShape::qubits(2);
  const int a = 0, b = 1;
  const Matrix ra = partial_trace(rho_ab, s, std::span(&a, 1));
  const Matrix rb = partial_trace(rho_ab, s, std::span(&b, 1));
  const Matrix x = 2.0 * rho_ab + tensor_product(ra, id2()) + tensor_product(id2(), rb);
  if (check_positive) {
    const double lo = hermitian_eigenvalues((x + x.adjoint()) / 2.0).minCoeff();
    if (lo < -kPsdClamp) throw DomainError("phi_from_rho_ab: X is not positive");
  }
  return 69.0 - tr_pow(x, 3) - 3.0 * tr_pow(rho_ab, 2);
}

double phi_abc(const DensityMatrix& rho) {
  require_three_qubits(rho.shape(), "phi_abc");
  const std::vector<int> ab{0, 1};
  return phi_from_rho_ab(partial_trace(rho.matrix(), rho.shape(), ab));
}

double phi_abc(const PureState& psi) {
  require_three_qubits(psi.shape(), "phi_abc");
  const DensityMatrix rho = psi.density();
  const std::vector<int> ab{0, 1};
  return phi_from_rho_ab(partial_trace(rho.matrix(), rho.shape(), ab), true);
}

ExpansionCheck trx3_expansion_check(const PureState& psi) {
  require_three_qubits(psi.shape(), "trx3_expansion_check");
  const Marginals m = marginals_of(psi.density().matrix());
  const Matrix x = 2.0 * m.ab + tensor_product(m.a, id2()) + tensor_product(id2(), m.b);
  const double i4 = polynomial_invariant(psi, {1, 2, 0}, {2, 0, 1}).value;

  const double ab_ab = trace_real(m.ab * tensor_product(m.a, m.b));
  const double ab2_ib = trace_real(m.ab * m.ab * tensor_product(id2(), m.b));
  const double ab2_ai = trace_real(m.ab * m.ab * tensor_product(m.a, id2()));
  const double bc_bc = trace_real(m.bc * tensor_product(m.b, m.c));
  const double ac_ac = trace_real(m.ac * tensor_product(m.a, m.c));

  ExpansionCheck out;
  out.tr_x3_direct = tr_pow(x, 3);
  out.tr_x3_expanded = 12.0 * i4 + 16.0 * (tr_pow(m.a, 3) + tr_pow(m.b, 3) + tr_pow(m.c, 3)) +
                       3.0 * tr_pow(m.a, 2) + 3.0 * tr_pow(m.b, 2);
  const double intermediate = 12.0 * ab_ab + 12.0 * ab2_ib + 12.0 * ab2_ai + 8.0 * tr_pow(m.a, 3) +
                              8.0 * tr_pow(m.b, 3) + 8.0 * tr_pow(m.ab, 3) +
                              3.0 * tr_pow(m.a, 2) + 3.0 * tr_pow(m.b, 2);
  const double residuals[] = {
      std::abs(out.tr_x3_direct - out.tr_x3_expanded),
      std::abs(out.tr_x3_direct - intermediate),
      std::abs(ab2_ib - bc_bc),
      std::abs(ab2_ai - ac_ac),
      std::abs(tr_pow(m.ab, 3) - tr_pow(m.c, 3)),
  };
  out.max_residual = *std::max_element(std::begin(residuals), std::end(residuals));
  return out;
}

double sigma_abc(const DensityMatrix& rho) {
  require_three_qubits(rho.shape(), "sigma_abc");
  const Marginals m = marginals_of(rho.matrix());
  const double i4 = 3.0 * trace_real(m.ab * tensor_product(m.a, m.b)) - tr_pow(m.a, 3) -
                    tr_pow(m.b, 3);
  return 3.0 - (tr_pow(m.c, 2) + tr_pow(m.b, 2) + tr_pow(m.a, 2)) * i4;
}

double sigma_abc(const PureState& psi) {
  const InvariantSet s = three_qubit_invariants(psi);
  return s.sigma;
}

InvariantSet three_qubit_invariants(const PureState& psi) {
  require_three_qubits(psi.shape(), "three_qubit_invariants");
  InvariantSet s;
  const InvariantValue v1 = polynomial_invariant(psi, {0, 1}, {1, 0});
  const InvariantValue v2 = polynomial_invariant(psi, {1, 0}, {0, 1});
  const InvariantValue v3 = polynomial_invariant(psi, {1, 0}, {1, 0});
  const InvariantValue v4 = polynomial_invariant(psi, {1, 2, 0}, {2, 0, 1});
  s.i1 = v1.value;
  s.i2 = v2.value;
  s.i3 = v3.value;
  s.i4 = v4.value;
  s.i5 = std::norm(i5_contraction_exhaustive(psi));
  s.max_imag_residual =
      std::max({std::abs(v1.imag), std::abs(v2.imag), std::abs(v3.imag), std::abs(v4.imag)});
  s.tau_ab_c = 2.0 * (1.0 - s.i1);
  s.tau_ac_b = 2.0 * (1.0 - s.i2);
  s.tau_bc_a = 2.0 * (1.0 - s.i3);
  s.tau_abc = 2.0 * std::sqrt(s.i5);
  s.phi = phi_abc(psi);
  s.sigma = 3.0 - (s.i1 + s.i2 + s.i3) * s.i4;
  return s;
}

double tangle_calibration_factor() {
  Vector ghz = Vector::Zero(8);
  ghz[0] = ghz[7] = 1.0 / std::sqrt(2.0);
  return 2.0 * std::abs(i5_contraction_exhaustive(PureState(SystemShape::qubits(3), ghz)));
}

}  // namespace qmono
