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

#ifndef QMONO_STATES_HPP_
#define QMONO_STATES_HPP_

#include <optional>
#include <string>
#include <vector>

#include "qmono/qcore.hpp"

namespace qmono {

// Named fixtures, amplitudes in row-major |i_A j_B k_C> order:
//   product  |000>
//   bell     (|00> + |11>)/√2           (two qubits)
//   ghz      (|000> + |111>)/√2
//   w        (|001> + |010> + |100>)/√3
std::optional<PureState> named_state(const std::string& name);
std::vector<std::string> named_state_names();

// Plain-text amplitudes: one "re im" pair per line, '#' starts a comment,
// blank lines ignored. The amplitude count must be a power of two (qubits)
// unless `shape` is given. Norm must be 1 within 1e-6; the state is then
// renormalized exactly. Throws std::invalid_argument with the line number.
PureState parse_state_text(const std::string& text,
                           const std::optional<SystemShape>& shape = std::nullopt);
PureState read_state_file(const std::string& path,
                          const std::optional<SystemShape>& shape = std::nullopt);

// Named state if `name_or_path` names one, otherwise a state file path.
PureState load_state(const std::string& name_or_path);

}  // namespace qmono

#endif  // QMONO_STATES_HPP_
