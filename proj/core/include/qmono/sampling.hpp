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

#ifndef QMONO_SAMPLING_HPP_
#define QMONO_SAMPLING_HPP_

#include <cstdint>
#include <random>
#include <utility>

#include "qmono/qcore.hpp"

namespace qmono {

// Seeded generator. Campaigns derive one independent stream per trial from
// (master seed, trial index) so results do not depend on execution order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng derive(std::uint64_t master, std::uint64_t index);
  static Rng derive(std::uint64_t master, std::uint64_t index, std::uint64_t sub);

  double uniform() { return uniform_(engine_); }
  double normal() { return normal_(engine_); }
  Complex complex_normal() { return {normal(), normal()}; }
  int uniform_int(int lo, int hi) {  // inclusive
    return std::uniform_int_distribution<int>(lo, hi)(engine_);
  }
  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

namespace sample {

// Haar-random normalized pure state.
PureState haar_pure(const SystemShape& shape, Rng& rng);

// Ginibre-induced mixed state ρ = GG†/Tr(GG†) with G of size total x rank
// (rank <= 0 means full rank).
DensityMatrix ginibre_mixed(const SystemShape& shape, Rng& rng, int rank = 0);

// Haar unitary via QR of a Ginibre matrix with the phase fix.
Matrix haar_unitary(int dim, Rng& rng);

// Gaussian (GUE-like) Hermitian block rescaled to operator norm norm_bound.
Matrix hermitian_direction(int dim, double norm_bound, Rng& rng);

// Same, with the trace projected out before rescaling.
Matrix traceless_direction(int dim, double norm_bound, Rng& rng);

// Random P1 with 0 <= P1 <= I (Haar eigenbasis, uniform spectrum) and
// P2 = sqrt(I - P1^2).
std::pair<Matrix, Matrix> positive_pair(int dim, Rng& rng);

LocalHermitian local_hermitian(const SystemShape& shape, int target, double norm_bound, Rng& rng);

// Positive pair on the target subsystem, with polar unitaries attached when requested.
TwoOutcomeMeasurement measurement(const SystemShape& shape, int target, Rng& rng,
                                  bool with_unitaries = false);

}  // namespace sample
}  // namespace qmono

#endif  // QMONO_SAMPLING_HPP_
