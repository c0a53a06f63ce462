#include "nsvi/experiment.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>

#include <json.hpp>

#include "nsvi/mdp_io.hpp"
#include "nsvi/numfmt.hpp"
#include "nsvi/rng.hpp"
#include "nsvi/solvers.hpp"

namespace nsvi {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) {
  throw std::runtime_error("config: " + what);
}

double get_real(const json& j, const char* name, double fallback) {
  const auto it = j.find(name);
  if (it == j.end()) return fallback;
  if (!it->is_number()) fail(std::string("'") + name + "' must be a number");
  return it->get<double>();
}

int get_int(const json& j, const char* name, int fallback) {
  const auto it = j.find(name);
  if (it == j.end()) return fallback;
  if (!it->is_number_integer()) fail(std::string("'") + name + "' must be an integer");
  return it->get<int>();
}

std::string get_string(const json& j, const char* name, const std::string& fallback) {
  const auto it = j.find(name);
  if (it == j.end()) return fallback;
  if (!it->is_string()) fail(std::string("'") + name + "' must be a string");
  return it->get<std::string>();
}

InstanceSpec parse_instance(const json& j) {
  InstanceSpec out;
  if (!j.is_object()) fail("'instance' must be an object");
  const std::string kind = get_string(j, "kind", "garnet");
  if (kind == "garnet") {
    out.kind = InstanceSpec::Kind::garnet;
    out.garnet.n_states = get_int(j, "n_states", out.garnet.n_states);
    out.garnet.n_actions = get_int(j, "n_actions", out.garnet.n_actions);
    out.garnet.branching = get_int(j, "branching", out.garnet.branching);
    out.garnet.gamma = get_real(j, "gamma", out.garnet.gamma);
    out.garnet.reward_scale = get_real(j, "reward_scale", out.garnet.reward_scale);
  } else if (kind == "file") {
    out.kind = InstanceSpec::Kind::file;
    out.path = get_string(j, "path", "");
    if (out.path.empty()) fail("instance kind 'file' needs a 'path'");
  } else if (kind == "tightness") {
    out.kind = InstanceSpec::Kind::tightness;
    out.gamma = get_real(j, "gamma", out.gamma);
    out.eps = get_real(j, "eps", out.eps);
    out.delta = get_real(j, "delta", out.delta);
  } else {
    fail("unknown instance kind '" + kind + "'");
  }
  return out;
}

ErrorModel parse_error_model(const json& j) {
  if (!j.is_object()) fail("'error_model' must be an object");
  const std::string kind = get_string(j, "kind", "zero");
  if (kind == "zero") return ErrorModel::zero();
  if (kind == "random_span")
    return ErrorModel::random_span(get_real(j, "span_bound", 0.0), 0);
  fail("unknown error model kind '" + kind + "'");
}

TieBreak parse_tie_break(const json& j) {
  if (!j.is_string()) fail("'tie_break' must be a string");
  const std::string s = j.get<std::string>();
  if (s == "lowest") return TieBreak::lowest();
  if (s == "highest") return TieBreak::highest();
  fail("unknown tie_break '" + s + "' (use 'lowest' or 'highest')");
}

}  // namespace

ExperimentConfig config_from_json(const std::string& text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) fail("not valid JSON");
  if (!j.is_object()) fail("top level must be a JSON object");

  ExperimentConfig out;
  if (const auto it = j.find("instance"); it != j.end()) out.instance = parse_instance(*it);
  out.k = get_int(j, "k", out.k);
  if (const auto it = j.find("m_list"); it != j.end()) {
    if (!it->is_array() || it->empty()) fail("'m_list' must be a non-empty array");
    out.m_list.clear();
    for (const json& e : *it) {
      if (!e.is_number_integer()) fail("'m_list' entries must be integers");
      out.m_list.push_back(e.get<int>());
    }
  }
  if (const auto it = j.find("error_model"); it != j.end())
    out.error_model = parse_error_model(*it);
  if (const auto it = j.find("tie_break"); it != j.end())
    out.tie_break = parse_tie_break(*it);
  out.tol = get_real(j, "tol", out.tol);
  out.trials = get_int(j, "trials", out.trials);
  if (const auto it = j.find("base_seed"); it != j.end()) {
    if (!it->is_number_integer()) fail("'base_seed' must be an integer");
    out.base_seed = it->get<std::uint64_t>();
  }
  out.output = get_string(j, "output", out.output);
  out.save_traces_dir = get_string(j, "save_traces_dir", out.save_traces_dir);
  return out;
}

ExperimentConfig read_config_file(const std::string& path) {
  return config_from_json(read_text_file(path));
}

std::string csv_line(const CsvRow& row) {
  std::string out;
  out += std::to_string(row.trial);
  out += ',' + std::to_string(row.seed);
  out += ',' + std::to_string(row.n_states);
  out += ',' + std::to_string(row.n_actions);
  out += ',' + fmt_shortest(row.gamma);
  out += ',' + std::to_string(row.k);
  out += ',' + std::to_string(row.m);
  out += ',' + fmt_shortest(row.eps_span);
  out += ',' + fmt_shortest(row.eps_inf);
  out += ',' + fmt_shortest(row.delta);
  out += ',' + fmt_shortest(row.loss);
  out += ',' + fmt_shortest(row.periodic_bound);
  out += ',' + fmt_shortest(row.stationary_bound);
  out += ',' + fmt_shortest(row.margin);
  out += ',';
  out += row.audit_ok ? '1' : '0';
  return out;
}

std::string to_csv(const std::vector<CsvRow>& rows) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const CsvRow& row : rows) {
    out += csv_line(row);
    out += '\n';
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (config.trials < 1) throw std::invalid_argument("trials must be at least 1");
  if (config.k < 1) throw std::invalid_argument("k must be at least 1");
  if (config.m_list.empty()) throw std::invalid_argument("m_list must be non-empty");
  for (int m : config.m_list) {
    if (m < 1 || m > config.k)
      throw std::invalid_argument("m_list entry " + std::to_string(m) +
                                  " outside [1, k = " + std::to_string(config.k) + "]");
  }
  if (!(config.tol > 0.0)) throw std::invalid_argument("tol must be positive");

  // Fixed-instance sources are prepared once; garnet redraws per trial.
  Mdp file_mdp;
  if (config.instance.kind == InstanceSpec::Kind::file)
    file_mdp = read_mdp_file(config.instance.path);
  TightnessInstance tight;
  if (config.instance.kind == InstanceSpec::Kind::tightness)
    tight = build_tightness_instance(config.instance.gamma, config.k,
                                     config.instance.eps, config.instance.delta);

  if (!config.save_traces_dir.empty())
    std::filesystem::create_directories(config.save_traces_dir);

  ExperimentResult result;
  result.rows.reserve(static_cast<std::size_t>(config.trials) * config.m_list.size());
  result.audits.reserve(config.trials);

  for (int trial = 0; trial < config.trials; ++trial) {
    const std::uint64_t trial_seed = config.base_seed + static_cast<std::uint64_t>(trial);

    Mdp mdp;
    ValueFunction v0;
    ErrorModel err = config.error_model;
    TieBreak tie = config.tie_break;
    switch (config.instance.kind) {
      case InstanceSpec::Kind::garnet: {
        GarnetSpec spec = config.instance.garnet;
        spec.seed = substream_seed(trial_seed, 0);
        mdp = generate_garnet(spec);
        v0.assign(mdp.n_states, 0.0);
        break;
      }
      case InstanceSpec::Kind::file:
        mdp = file_mdp;
        v0.assign(mdp.n_states, 0.0);
        break;
      case InstanceSpec::Kind::tightness:
        mdp = tight.mdp;
        v0 = tight.v0;
        err = tight.errors;
        err.sequence.push_back(ValueFunction(mdp.n_states, 0.0));
        tie = tight.tie_break;
        break;
    }
    if (err.kind == ErrorModel::Kind::random_span)
      err.seed = substream_seed(trial_seed, 1);

    const AviTrace trace = run_avi(mdp, v0, config.k, err, tie);
    const ValueFunction v_star = solve_optimal(mdp, config.tol).value;
    AuditReport audit =
        audit_trace_inequalities(mdp, trace, v_star, config.m_list, config.tol);
    const TraceStats stats = trace_stats(trace, v_star);
    const double stationary =
        stationary_loss_bound(mdp.gamma, config.k, stats.eps_span, stats.delta0);

    for (int m : config.m_list) {
      const AuditEntry* c = audit.find('c', m);
      CsvRow row;
      row.trial = trial;
      row.seed = trial_seed;
      row.n_states = mdp.n_states;
      row.n_actions = mdp.n_actions;
      row.gamma = mdp.gamma;
      row.k = config.k;
      row.m = m;
      row.eps_span = stats.eps_span;
      row.eps_inf = stats.eps_inf;
      row.delta = stats.delta0;
      row.loss = c->lhs;
      row.periodic_bound = c->rhs;
      row.stationary_bound = stationary;
      row.margin = c->margin;
      row.audit_ok = audit.ok_for_m(m);
      result.all_ok = result.all_ok && row.audit_ok;
      result.rows.push_back(row);
    }

    if (!config.save_traces_dir.empty()) {
      const std::filesystem::path p = std::filesystem::path(config.save_traces_dir) /
                                      ("trace_" + std::to_string(trial) + ".json");
      write_trace_file(p.string(), trace);
    }
    result.audits.push_back(std::move(audit));
  }
  return result;
}

}  // namespace nsvi
