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

#include "qmono/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <set>
#include <stdexcept>

#ifndef QMONO_VERSION
#define QMONO_VERSION "0.0.0"
#endif

namespace qmono {

namespace {

void emit(const Json& j, std::string& out) {
  switch (j.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [k, v] : j.items()) {  // object_t is an ordered std::map
        if (!first) out += ',';
        first = false;
        out += Json(k).dump();
        out += ':';
        emit(v, out);
      }
      out += '}';
      break;
    }
    case Json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        emit(j[i], out);
      }
      out += ']';
      break;
    }
    case Json::value_t::number_float:
      out += format_number(j.get<double>());
      break;
    default:
      out += j.dump();
  }
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

const char* ensemble_name(EnsembleKind k) {
  switch (k) {
    case EnsembleKind::haar_pure: return "haar_pure";
    case EnsembleKind::ginibre_mixed: return "ginibre_mixed";
    case EnsembleKind::product_pure: return "product_pure";
  }
  return "unknown";
}

template <typename T>
T field(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("campaign config: bad value for '") + key + "'");
  }
}

void reject_unknown(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument(where + ": expected a JSON object");
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) throw std::invalid_argument(where + ": unknown key '" + k + "'");
  }
}

}  // namespace

std::string format_number(double v) {
  if (!std::isfinite(v)) throw DomainError("refusing to serialize a non-finite number");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string canonical_json(const Json& j) {
  std::string out;
  emit(j, out);
  return out;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json make_envelope(const Json& config, const Json& payload, const std::string& timestamp) {
  Json env;
  env["version"] = QMONO_VERSION;
  env["config"] = config;
  env["timestamp"] = timestamp;
  env["payload"] = payload;
  env["checksum"] = hex64(fnv1a64(canonical_json(payload)));
  return env;
}

std::string to_csv(const Table& t) {
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  };
  std::string out;
  auto row = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += quote(cells[i]);
    }
    out += '\n';
  };
  row(t.header);
  for (const auto& r : t.rows) row(r);
  return out;
}

std::string to_aligned(const Table& t) {
  std::vector<std::size_t> width(t.header.size(), 0);
  auto measure = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size() && i < width.size(); ++i) {
      width[i] = std::max(width[i], cells[i].size());
    }
  };
  measure(t.header);
  for (const auto& r : t.rows) measure(r);
  std::string out;
  auto row = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += "  ";
      out += cells[i];
      if (i + 1 < cells.size()) out.append(width[i] - cells[i].size(), ' ');
    }
    out += '\n';
  };
  row(t.header);
  for (const auto& r : t.rows) row(r);
  return out;
}

Json to_json(const InvariantSet& s) {
  return Json{{"I1", s.i1},
              {"I2", s.i2},
              {"I3", s.i3},
              {"I4", s.i4},
              {"I5", s.i5},
              {"tau_AB_C", s.tau_ab_c},
              {"tau_AC_B", s.tau_ac_b},
              {"tau_BC_A", s.tau_bc_a},
              {"tau_ABC", s.tau_abc},
              {"phi_ABC", s.phi},
              {"sigma_ABC", s.sigma},
              {"max_imag_residual", s.max_imag_residual}};
}

Json to_json(const CheckConfig& c) {
  return Json{{"n_states", c.n_states},   {"n_directions", c.n_directions},
              {"fd_step", c.fd_step},     {"fd_step2", c.fd_step2},
              {"eps_norm", c.eps_norm},   {"tol_zero", c.tol_zero},
              {"tol_sign", c.tol_sign},   {"richardson", c.richardson},
              {"g_time", c.g_time},       {"seed", c.seed}};
}

Json to_json(const CheckReport& r, bool include_samples) {
  Json j{{"monotone", r.monotone},
         {"direction", r.direction},
         {"domain", r.domain},
         {"conjectured", r.conjectured},
         {"config", to_json(r.config)},
         {"counts",
          {{"total", r.total},
           {"pass", r.passed},
           {"violation", r.violations},
           {"ill_conditioned", r.ill_conditioned}}},
         {"worst_violation", r.worst_violation},
         {"max_abs_lu", r.max_abs_lu},
         {"cross_validation",
          {{"max_discrepancy", r.max_cross_discrepancy},
           {"failures", r.cross_failures},
           {"fitted_factor", optional_number(r.fitted_factor)}}},
         {"lhs_range", {r.min_lhs, r.max_lhs}}};
  if (include_samples) {
    Json arr = Json::array();
    for (const auto& s : r.samples) {
      arr.push_back({{"state", s.state_id},
                     {"direction", s.direction_id},
                     {"target", s.target},
                     {"scale", s.scale},
                     {"lu_value", s.lu_value},
                     {"lu_exact", s.lu_exact},
                     {"meas_value", s.meas_value},
                     {"convexity_value", optional_number(s.convexity_value)},
                     {"g_exact_ratio", s.g_exact_ratio},
                     {"classification", to_string(s.classification)}});
    }
    j["samples"] = arr;
  }
  return j;
}

Json to_json(const WalkConfig& c) {
  return Json{{"step", c.step}, {"cutoff", c.cutoff}, {"max_steps", c.max_steps}, {"p_floor", c.p_floor}};
}

Json to_json(const CampaignConfig& c) {
  Json mix = Json::object();
  for (const auto& [k, w] : c.mix) mix[k] = w;
  return Json{{"trials", c.n_trials},
              {"seed", c.seed},
              {"shape", c.shape},
              {"ensemble", ensemble_name(c.ensemble)},
              {"mix", mix},
              {"walk", to_json(c.walk)},
              {"chain_depth", c.chain_depth},
              {"mixing_components", c.mixing_components},
              {"trotter_steps", c.trotter_steps},
              {"postselect", c.postselect},
              {"monotones", c.monotones},
              {"keep_records", c.keep_records}};
}

Json to_json(const SimReport& r, bool include_records) {
  Json mons = Json::array();
  for (const auto& s : r.monotones) {
    Json ops = Json::object();
    for (const auto& [k, n] : s.by_operation) ops[k] = n;
    mons.push_back({{"name", s.name},
                    {"direction", s.direction},
                    {"domain", s.domain},
                    {"conjectured", s.conjectured},
                    {"trials", s.trials},
                    {"pass", s.passed},
                    {"violation", s.violations},
                    {"exploratory", s.exploratory},
                    {"sampled", s.sampled},
                    {"worst_violation", s.worst_violation},
                    {"min_delta", s.min_delta},
                    {"max_delta", s.max_delta},
                    {"by_operation", ops}});
  }
  Json j{{"config", to_json(r.config)}, {"monotones", mons}, {"total_violations", r.total_violations}};
  if (include_records) {
    Json arr = Json::array();
    for (const auto& t : r.records) {
      Json branches = Json::array();
      for (const auto& b : t.branches) branches.push_back({b.probability, b.value});
      arr.push_back({{"trial", t.trial},
                     {"monotone", t.monotone},
                     {"operation", t.operation},
                     {"target", t.target},
                     {"before", t.before},
                     {"after_avg", t.after_avg},
                     {"delta", t.delta},
                     {"probability_sum", t.probability_sum},
                     {"branches", branches},
                     {"status", to_string(t.status)}});
    }
    j["records"] = arr;
  }
  return j;
}

CampaignConfig campaign_config_from_json(const Json& j) {
  reject_unknown(j,
                 {"trials", "seed", "shape", "ensemble", "mix", "walk", "chain_depth",
                  "mixing_components", "trotter_steps", "postselect", "monotones", "keep_records"},
                 "campaign config");
  if (!j.contains("seed")) throw std::invalid_argument("campaign config: 'seed' is required");
  CampaignConfig c;
  c.n_trials = field<std::int64_t>(j, "trials", c.n_trials);
  c.seed = field<std::uint64_t>(j, "seed", 0);
  c.shape = field<std::vector<int>>(j, "shape", c.shape);
  const auto ens = field<std::string>(j, "ensemble", "haar_pure");
  if (ens == "haar_pure") {
    c.ensemble = EnsembleKind::haar_pure;
  } else if (ens == "ginibre_mixed") {
    c.ensemble = EnsembleKind::ginibre_mixed;
  } else if (ens == "product_pure") {
    c.ensemble = EnsembleKind::product_pure;
  } else {
    throw std::invalid_argument("campaign config: unknown ensemble '" + ens + "'");
  }
  if (j.contains("mix")) {
    reject_unknown(j["mix"], {"measurement", "walk", "unitary", "channel", "mixing"}, "campaign mix");
    c.mix = field<std::map<std::string, double>>(j, "mix", {});
  }
  if (j.contains("walk")) {
    const Json& w = j["walk"];
    reject_unknown(w, {"step", "cutoff", "max_steps", "p_floor"}, "campaign walk");
    c.walk.step = field<double>(w, "step", c.walk.step);
    c.walk.cutoff = field<double>(w, "cutoff", c.walk.cutoff);
    c.walk.max_steps = field<std::int64_t>(w, "max_steps", c.walk.max_steps);
    c.walk.p_floor = field<double>(w, "p_floor", c.walk.p_floor);
  }
  c.chain_depth = field<int>(j, "chain_depth", c.chain_depth);
  c.mixing_components = field<int>(j, "mixing_components", c.mixing_components);
  c.trotter_steps = field<int>(j, "trotter_steps", c.trotter_steps);
  c.postselect = field<bool>(j, "postselect", c.postselect);
  c.monotones = field<std::vector<std::string>>(j, "monotones", catalog_names());
  c.keep_records = field<bool>(j, "keep_records", c.keep_records);
  c.validate();
  return c;
}

Table invariant_table(const InvariantSet& s) {
  Table t{{"quantity", "value"}, {}};
  const Json j = to_json(s);
  for (const auto& [k, v] : j.items()) t.rows.push_back({k, format_number(v.get<double>())});
  return t;
}

Table check_samples_table(const CheckReport& r) {
  Table t{{"state", "direction", "target", "scale", "lu_value", "lu_exact", "meas_value",
           "convexity_value", "g_exact_ratio", "classification"},
          {}};
  for (const auto& s : r.samples) {
    t.rows.push_back({std::to_string(s.state_id), std::to_string(s.direction_id),
                      std::to_string(s.target), format_number(s.scale), format_number(s.lu_value),
                      format_number(s.lu_exact), format_number(s.meas_value),
                      s.convexity_value ? format_number(*s.convexity_value) : "",
                      format_number(s.g_exact_ratio), to_string(s.classification)});
  }
  return t;
}

Table trial_records_table(const std::vector<TrialRecord>& records) {
  Table t{{"trial", "monotone", "operation", "target", "before", "after_avg", "delta",
           "probability_sum", "branches", "status"},
          {}};
  for (const auto& r : records) {
    t.rows.push_back({std::to_string(r.trial), r.monotone, r.operation, std::to_string(r.target),
                      format_number(r.before), format_number(r.after_avg), format_number(r.delta),
                      format_number(r.probability_sum), std::to_string(r.branches.size()),
                      to_string(r.status)});
  }
  return t;
}

std::string output_directory() {
  const char* env = std::getenv("QMONO_OUT_DIR");
  return env && *env ? std::string(env) : std::string(".");
}

}  // namespace qmono
