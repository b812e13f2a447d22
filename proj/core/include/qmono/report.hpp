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

// Serialization of reports: canonical JSON, CSV and aligned tables.

#ifndef QMONO_REPORT_HPP_
#define QMONO_REPORT_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qmono/diffcheck.hpp"
#include "qmono/loccsim.hpp"
#include "qmono/monotones.hpp"
#include "qmono/weakmeas.hpp"

namespace qmono {

using Json = nlohmann::json;

// Sorted keys, no whitespace, every number printed with %.17g. Throws
// std::domain_error on NaN or infinity.
std::string canonical_json(const Json& j);

std::uint64_t fnv1a64(const std::string& bytes);

// {version, config, timestamp, payload, checksum}; checksum is FNV-1a of the
// canonical payload, as 16 hex digits.
Json make_envelope(const Json& config, const Json& payload, const std::string& timestamp);
std::string utc_timestamp();

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string to_csv(const Table& t);
std::string to_aligned(const Table& t);
std::string format_number(double v);  // %.17g, finite only

Json to_json(const InvariantSet& s);
Json to_json(const CheckConfig& c);
Json to_json(const CheckReport& r, bool include_samples = false);
Json to_json(const CampaignConfig& c);
Json to_json(const SimReport& r, bool include_records = false);
Json to_json(const WalkConfig& c);

CampaignConfig campaign_config_from_json(const Json& j);  // throws std::invalid_argument

Table invariant_table(const InvariantSet& s);
Table check_samples_table(const CheckReport& r);
Table trial_records_table(const std::vector<TrialRecord>& records);

// Directory for report files: $QMONO_OUT_DIR when set, otherwise ".".
std::string output_directory();

}  // namespace qmono

#endif  // QMONO_REPORT_HPP_
