#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nsvi/avi.hpp"
#include "nsvi/bounds.hpp"
#include "nsvi/garnet.hpp"
#include "nsvi/mdp.hpp"

namespace nsvi {

/// Where each trial's MDP comes from. garnet draws a fresh instance per
/// trial (the spec's seed field is ignored; per-trial seeds are derived from
/// the experiment's base seed). file loads one fixed MDP for all trials.
/// tightness builds the worst-case chain from (gamma, eps, delta) and the
/// experiment's k, and forces that instance's v0, errors and tie breaking.
struct InstanceSpec {
  enum class Kind { garnet, file, tightness };

  Kind kind = Kind::garnet;
  GarnetSpec garnet;
  std::string path;
  double gamma = 0.9;
  double eps = 0.1;
  double delta = 1.0;
};

/// Mirrored one-to-one by the JSON config file: field names here are the
/// config keys. error_model.seed is derived per trial and ignored if set.
struct ExperimentConfig {
  InstanceSpec instance;
  int k = 10;
  std::vector<int> m_list = {1};
  ErrorModel error_model;
  TieBreak tie_break;
  double tol = kDefaultTol;
  int trials = 1;
  std::uint64_t base_seed = 0;
  std::string output;           // CSV path; empty means stdout
  std::string save_traces_dir;  // empty means don't save traces
};

ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig read_config_file(const std::string& path);

/// One output row. The serialized column names (kCsvHeader) are the
/// published schema consumed downstream and are kept stable even where the
/// in-code names differ.
struct CsvRow {
  int trial = 0;
  std::uint64_t seed = 0;
  int n_states = 0;
  int n_actions = 0;
  double gamma = 0.0;
  int k = 0;
  int m = 0;
  double eps_span = 0.0;
  double eps_inf = 0.0;
  double delta = 0.0;
  double loss = 0.0;
  double periodic_bound = 0.0;    // column bound_thm3
  double stationary_bound = 0.0;  // column bound_thm1
  double margin = 0.0;            // periodic_bound - loss
  bool audit_ok = false;
};

inline constexpr const char* kCsvHeader =
    "trial,seed,n_states,n_actions,gamma,k,m,eps_span,eps_inf,delta,loss,"
    "bound_thm3,bound_thm1,margin,audit_ok";

std::string csv_line(const CsvRow& row);

/// Header plus one line per row, '\n' endings, reals in shortest exact form.
std::string to_csv(const std::vector<CsvRow>& rows);

struct ExperimentResult {
  std::vector<CsvRow> rows;          // trials x m_list, trial-major
  std::vector<AuditReport> audits;   // one per trial
  bool all_ok = true;                // every row within bound and audit clean
};

/// Runs config.trials independent trials. Trial t uses seed base_seed + t;
/// the garnet draw and the error stream get separate substreams of it.
/// Deterministic: identical configs produce byte-identical CSV.
ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace nsvi
