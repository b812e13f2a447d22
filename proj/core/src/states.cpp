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

#include "qmono/states.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qmono {

std::optional<PureState> named_state(const std::string& name) {
  const double r2 = 1.0 / std::sqrt(2.0);
  const double r3 = 1.0 / std::sqrt(3.0);
  Vector a;
  if (name == "product") {
    a = Vector::Zero(8);
    a[0] = 1.0;
    return PureState(SystemShape::qubits(3), a);
  }
  if (name == "bell") {
    a = Vector::Zero(4);
    a[0] = a[3] = r2;
    return PureState(SystemShape::qubits(2), a);
  }
  if (name == "ghz") {
    a = Vector::Zero(8);
    a[0] = a[7] = r2;
    return PureState(SystemShape::qubits(3), a);
  }
  if (name == "w") {
    a = Vector::Zero(8);
    a[1] = a[2] = a[4] = r3;
    return PureState(SystemShape::qubits(3), a);
  }
  return std::nullopt;
}

std::vector<std::string> named_state_names() { return {"product", "bell", "ghz", "w"}; }

PureState parse_state_text(const std::string& text, const std::optional<SystemShape>& shape) {
  std::istringstream in(text);
  std::string line;
  std::vector<Complex> amps;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    double re = 0.0, im = 0.0;
    if (!(fields >> re)) {
      std::string rest;
      if (std::istringstream(line) >> rest) {
        throw std::invalid_argument("state file line " + std::to_string(line_no) + ": expected 're im'");
      }
      continue;  // blank or comment-only
    }
    std::string extra;
    if (!(fields >> im) || (fields >> extra)) {
      throw std::invalid_argument("state file line " + std::to_string(line_no) + ": expected 're im'");
    }
    if (!std::isfinite(re) || !std::isfinite(im)) {
      throw std::invalid_argument("state file line " + std::to_string(line_no) + ": non-finite amplitude");
    }
    amps.emplace_back(re, im);
  }

  const auto n = static_cast<int>(amps.size());
  std::optional<SystemShape> s = shape;
  if (!s) {
    int qubits = 0;
    while ((1 << qubits) < n) ++qubits;
    if (n < 2 || (1 << qubits) != n) {
      throw std::invalid_argument("state file: amplitude count " + std::to_string(n) +
                                  " is not a power of two >= 2");
    }
    s = SystemShape::qubits(qubits);
  }
  if (s->total_dim() != n) {
    throw std::invalid_argument("state file: expected " + std::to_string(s->total_dim()) +
                                " amplitudes, got " + std::to_string(n));
  }
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = amps[i];
  if (std::abs(v.norm() - 1.0) > 1e-6) {
    throw std::invalid_argument("state file: amplitudes are not normalized");
  }
  return PureState::normalized(*s, v);
}

PureState read_state_file(const std::string& path, const std::optional<SystemShape>& shape) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open state file '" + path + "'");
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_state_text(buf.str(), shape);
}

PureState load_state(const std::string& name_or_path) {
  if (auto s = named_state(name_or_path)) return *s;
  return read_state_file(name_or_path);
}

}  // namespace qmono
