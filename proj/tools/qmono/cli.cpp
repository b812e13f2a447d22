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

#include "qmono/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "qmono/diffcheck.hpp"
#include "qmono/loccsim.hpp"
#include "qmono/monotones.hpp"
#include "qmono/report.hpp"
#include "qmono/sampling.hpp"
#include "qmono/states.hpp"
#include "qmono/weakmeas.hpp"

namespace qmono::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string format = "json";
  std::string out;
};

void add_common(CLI::App* sub, Common& c, const std::vector<std::string>& formats) {
  sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember(formats));
  sub->add_option("--out", c.out, "Write output to this path (relative to $QMONO_OUT_DIR)");
}

std::filesystem::path resolve(const std::string& path) {
  std::filesystem::path p(path);
  return p.is_absolute() ? p : std::filesystem::path(output_directory()) / p;
}

void write_text(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  const auto p = resolve(path);
  std::ofstream f(p, std::ios::binary);
  if (!f || !(f << text)) throw std::runtime_error("cannot write '" + p.string() + "'");
}

std::string envelope_text(const Json& config, const Json& payload) {
  return canonical_json(make_envelope(config, payload, utc_timestamp())) + "\n";
}

Table key_value_table(const Json& flat) {
  Table t{{"key", "value"}, {}};
  for (const auto& [k, v] : flat.items()) {
    t.rows.push_back({k, v.is_number_float() ? format_number(v.get<double>()) : v.dump()});
  }
  return t;
}

// Flattens nested objects to dotted keys for tables.
void flatten(const Json& j, const std::string& prefix, Json& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else {
    out[prefix] = j;
  }
}

//-------------------------------------------------------------------------

struct InvariantsArgs {
  Common common;
  std::string state;
};

int run_invariants(const InvariantsArgs& a, std::ostream& out) {
  const PureState psi = load_state(a.state);
  if (!(psi.shape() == SystemShape::qubits(3))) throw UsageError("--state: expected 8 amplitudes (3 qubits)");
  const InvariantSet s = three_qubit_invariants(psi);
  Json payload = to_json(s);
  payload["tau_ABC_ghz_calibration"] = tangle_calibration_factor();
  const Json config{{"command", "invariants"}, {"state", a.state}, {"format", a.common.format}};
  if (a.common.format == "json") {
    write_text(envelope_text(config, payload), a.common.out, out);
  } else {
    Table t{{"quantity", "value"}, {}};
    for (const auto& [k, v] : payload.items()) t.rows.push_back({k, format_number(v.get<double>())});
    write_text(a.common.format == "csv" ? to_csv(t) : to_aligned(t), a.common.out, out);
  }
  return kExitOk;
}

//-------------------------------------------------------------------------

struct WalkArgs {
  Common common;
  std::optional<int> dim;
  std::string state;
  int target = 0;
  int measurements = 20;
  std::int64_t trials = 100000;
  std::uint64_t seed = 0;
  double step = 0.1;
  double cutoff = 4.0;
};

int run_walk_command(const WalkArgs& a, std::ostream& out) {
  WalkConfig wc;
  wc.step = a.step;
  wc.cutoff = a.cutoff;
  try {
    wc.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--step/--cutoff: ") + e.what());
  }
  if (a.measurements < 1) throw UsageError("--measurements must be >= 1");
  if (a.trials < 1) throw UsageError("--trials must be >= 1");

  std::optional<PureState> fixed;
  if (!a.state.empty()) fixed = load_state(a.state);
  const SystemShape shape = fixed ? fixed->shape() : SystemShape({a.dim.value_or(2)});
  if (a.target < 0 || a.target >= shape.num_subsystems()) throw UsageError("--target out of range");
  if (shape.dim(a.target) < 2) throw UsageError("--dim must be >= 2");

  const double bound = 2.0 * (1.0 - std::tanh(wc.cutoff));
  Json records = Json::array();
  std::int64_t violations = 0;
  for (int m = 0; m < a.measurements; ++m) {
    Rng rng = Rng::derive(a.seed, static_cast<std::uint64_t>(m));
    const DensityMatrix rho = fixed ? fixed->density() : sample::ginibre_mixed(shape, rng);
    const TwoOutcomeMeasurement meas = sample::measurement(shape, a.target, rng);
    const int t = a.target;
    const Matrix reduced = partial_trace(rho.matrix(), shape, std::span(&t, 1));
    const double p_exact = (meas.p1() * meas.p1() * reduced).trace().real();
    const Eigen::VectorXd evals = hermitian_eigenvalues(meas.p1());
    const WalkCounts counts = run_walk_counts(rho, meas, wc, a.trials, mix_seed(a.seed, 0x5741'4c4bull + m));

    Json rec{{"index", m},
             {"target", a.target},
             {"p1_eigenvalues", std::vector<double>(evals.begin(), evals.end())},
             {"p_exact", p_exact},
             {"p_walk", counts.p1()},
             {"counts", {{"first", counts.first}, {"second", counts.second}, {"unabsorbed", counts.unabsorbed}}}};
    try {
      const WalkProbabilities dp = exact_walk_probabilities(rho, meas, wc);
      const double se = std::sqrt(std::max(dp.p1 * (1.0 - dp.p1), 1e-300) / counts.trials());
      rec["p_oracle"] = dp.p1;
      rec["oracle_residual_mass"] = dp.residual_mass;
      rec["z_score"] = (counts.p1() - dp.p1) / se;
      const bool exact = std::abs(dp.p1 - p_exact) <= bound;
      rec["exact_within_bound"] = exact;
      if (!exact) ++violations;
    } catch (const std::length_error&) {
      rec["p_oracle"] = nullptr;
    }
    records.push_back(rec);
  }

  const Json config{{"command", "walk"},       {"shape", shape.dims()},         {"target", a.target},
                    {"measurements", a.measurements}, {"trials", a.trials},    {"seed", a.seed},
                    {"walk", to_json(wc)},     {"state", a.state.empty() ? Json("ginibre") : Json(a.state)},
                    {"format", a.common.format}};
  const Json payload{{"records", records}, {"exactness_bound", bound}, {"violations", violations}};
  if (a.common.format == "json") {
    write_text(envelope_text(config, payload), a.common.out, out);
  } else {
    Table t{{"index", "p_exact", "p_oracle", "p_walk", "z_score"}, {}};
    for (const auto& r : records) {
      t.rows.push_back({r["index"].dump(), format_number(r["p_exact"].get<double>()),
                        r["p_oracle"].is_null() ? "" : format_number(r["p_oracle"].get<double>()),
                        format_number(r["p_walk"].get<double>()),
                        r.contains("z_score") ? format_number(r["z_score"].get<double>()) : ""});
    }
    write_text(a.common.format == "csv" ? to_csv(t) : to_aligned(t), a.common.out, out);
  }
  return violations > 0 ? kExitViolations : kExitOk;
}

//-------------------------------------------------------------------------

struct CheckArgs {
  Common common;
  std::string monotone;
  int states = 200;
  int dirs = 20;
  std::uint64_t seed = 0;
  double h = 1e-4;
  double h2 = 1e-2;
  double eps_norm = 0.1;
  std::string relabel;
  bool samples = false;
};

int run_check_command(const CheckArgs& a, std::ostream& out) {
  MonotoneDescriptor d = *find_monotone(a.monotone);
  if (a.relabel == "decreasing") d = relabeled(d, Direction::decreasing);
  if (a.relabel == "increasing") d = relabeled(d, Direction::increasing);
  CheckConfig cc;
  cc.n_states = a.states;
  cc.n_directions = a.dirs;
  cc.seed = a.seed;
  cc.fd_step = a.h;
  cc.fd_step2 = a.h2;
  cc.eps_norm = a.eps_norm;
  try {
    cc.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const CheckReport r = run_check(d, cc);
  Json config{{"command", "check"}, {"monotone", a.monotone}, {"check", to_json(cc)},
              {"format", a.common.format}, {"samples", a.samples}};
  if (!a.relabel.empty()) config["relabel"] = a.relabel;
  const Json payload = to_json(r, a.samples);
  if (a.common.format == "json") {
    write_text(envelope_text(config, payload), a.common.out, out);
  } else if (a.common.format == "csv") {
    write_text(to_csv(check_samples_table(r)), a.common.out, out);
  } else {
    Json flat = Json::object();
    flatten(payload, "", flat);
    write_text(to_aligned(key_value_table(flat)), a.common.out, out);
  }
  return r.violations > 0 ? kExitViolations : kExitOk;
}

//-------------------------------------------------------------------------

struct CampaignArgs {
  Common common;
  std::string config;
  std::string csv;
  std::optional<std::uint64_t> seed;
};

int run_campaign_command(const CampaignArgs& a, std::ostream& out) {
  std::ifstream f(a.config);
  if (!f) throw UsageError("--config: cannot open '" + a.config + "'");
  Json raw;
  try {
    raw = Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw UsageError(std::string("--config: invalid JSON: ") + e.what());
  }
  if (a.seed && raw.is_object()) raw["seed"] = *a.seed;
  CampaignConfig cc;
  try {
    cc = campaign_config_from_json(raw);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--config: ") + e.what());
  }
  cc.keep_records = cc.keep_records || !a.csv.empty();
  const SimReport r = run_campaign(cc);
  if (!a.csv.empty()) write_text(to_csv(trial_records_table(r.records)), a.csv, out);

  const Json config{{"command", "campaign"}, {"campaign", to_json(cc)}, {"format", a.common.format}};
  const Json payload = to_json(r, false);
  if (a.common.format == "json") {
    write_text(envelope_text(config, payload), a.common.out, out);
  } else {
    Table t{{"monotone", "direction", "trials", "pass", "violation", "exploratory", "sampled",
             "min_delta", "max_delta"},
            {}};
    for (const auto& s : r.monotones) {
      t.rows.push_back({s.name, s.direction, std::to_string(s.trials), std::to_string(s.passed),
                        std::to_string(s.violations), std::to_string(s.exploratory),
                        std::to_string(s.sampled), format_number(s.min_delta),
                        format_number(s.max_delta)});
    }
    write_text(to_aligned(t), a.common.out, out);
  }
  return r.total_violations > 0 ? kExitViolations : kExitOk;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"qmono: entanglement monotone laboratory", "qmono"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "qmono 0.1.0");

  InvariantsArgs inv;
  auto* inv_cmd = app.add_subcommand("invariants", "Three-qubit invariants of a state");
  inv_cmd->add_option("--state", inv.state, "Named state (product, ghz, w) or amplitude file")->required();
  add_common(inv_cmd, inv.common, {"json", "csv", "table"});

  WalkArgs walk;
  auto* walk_cmd = app.add_subcommand("walk", "Weak-measurement walks against the exact oracle");
  auto* dim_opt = walk_cmd->add_option("--dim", walk.dim, "Dimension of a random single-qudit state");
  walk_cmd->add_option("--state", walk.state, "Named state or amplitude file")->excludes(dim_opt);
  walk_cmd->add_option("--target", walk.target, "Measured subsystem");
  walk_cmd->add_option("--measurements", walk.measurements, "Number of random measurements");
  walk_cmd->add_option("--trials", walk.trials, "Monte Carlo walks per measurement");
  walk_cmd->add_option("--seed", walk.seed, "Master seed")->required();
  walk_cmd->add_option("--step", walk.step, "Walk step size");
  walk_cmd->add_option("--cutoff", walk.cutoff, "Absorption threshold X");
  add_common(walk_cmd, walk.common, {"json", "csv", "table"});

  CheckArgs check;
  auto* check_cmd = app.add_subcommand("check", "Differential monotonicity conditions");
  check_cmd->set_help_flag("--help", "Print this help message and exit");  // -h clashes with --h
  check_cmd->add_option("--monotone", check.monotone, "Catalog name")
      ->required()
      ->check(CLI::IsMember(catalog_names()));
  check_cmd->add_option("--states", check.states, "Sampled states");
  check_cmd->add_option("--dirs", check.dirs, "Directions per state and subsystem");
  check_cmd->add_option("--seed", check.seed, "Master seed")->required();
  check_cmd->add_option("--h", check.h, "First-order finite-difference step");
  check_cmd->add_option("--h2", check.h2, "Second-order finite-difference step");
  check_cmd->add_option("--eps-norm", check.eps_norm, "Norm of sampled local directions");
  check_cmd->add_option("--relabel", check.relabel, "Override the monotone direction")
      ->check(CLI::IsMember({"decreasing", "increasing"}));
  check_cmd->add_flag("--samples", check.samples, "Include per-sample records in JSON");
  add_common(check_cmd, check.common, {"json", "csv", "table"});

  CampaignArgs camp;
  auto* camp_cmd = app.add_subcommand("campaign", "Integrated monotonicity campaign");
  camp_cmd->add_option("--config", camp.config, "Campaign JSON file")->required();
  camp_cmd->add_option("--csv", camp.csv, "Also write trial records as CSV");
  camp_cmd->add_option("--seed", camp.seed, "Override the config seed");
  add_common(camp_cmd, camp.common, {"json", "table"});

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << "qmono 0.1.0\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    err << "run 'qmono --help' for usage\n";
    return kExitUsage;
  }

  try {
    if (*inv_cmd) return run_invariants(inv, out);
    if (*walk_cmd) return run_walk_command(walk, out);
    if (*check_cmd) return run_check_command(check, out);
    if (*camp_cmd) return run_campaign_command(camp, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace qmono::cli
