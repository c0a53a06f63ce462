#include "nsvi/cli.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nsvi/bounds.hpp"
#include "nsvi/experiment.hpp"
#include "nsvi/garnet.hpp"
#include "nsvi/mdp_io.hpp"
#include "nsvi/solvers.hpp"

namespace nsvi {

namespace {

// Human-readable table precision; CSV output keeps full precision instead.
std::string fmt_table(double x) {
  char buf[64];
  const int len = std::snprintf(buf, sizeof(buf), "%.12g", x);
  return std::string(buf, buf + len);
}

bool parse_seed(const char* text, std::uint64_t& seed) {
  if (text == nullptr || *text == '\0' || *text == '-') return false;
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(text, &end, 10);
  if (errno != 0 || end == nullptr || *end != '\0') return false;
  seed = static_cast<std::uint64_t>(v);
  return true;
}

int run_bounds(std::ostream& out, double gamma, int k, const std::vector<int>& m_list,
               double eps, double delta, double eps_inf) {
  out << "thm1 = " << fmt_table(stationary_loss_bound(gamma, k, eps, delta)) << "\n";
  for (int m : m_list) {
    out << "thm3 (m=" << m
        << ") = " << fmt_table(periodic_loss_bound(gamma, k, m, eps, delta)) << "\n";
  }
  const AsymptoticBounds a = asymptotic_bounds(gamma, eps_inf, eps);
  out << "classic_asymptotic = " << fmt_table(a.classic) << "\n";
  out << "span_limit = " << fmt_table(a.span_limit) << "\n";
  out << "nonstat_limit = " << fmt_table(a.nonstat_limit) << "\n";
  return 0;
}

int run_tightness(std::ostream& out, double gamma, int k, double eps, double delta,
                  bool check, const std::string& out_path) {
  const TightnessInstance instance = build_tightness_instance(gamma, k, eps, delta);
  if (!out_path.empty()) {
    write_mdp_file(out_path, instance.mdp);
    out << "wrote " << out_path << "\n";
  }
  if (!check) {
    out << "states = " << instance.mdp.n_states << "\n";
    out << "stay_reward = " << fmt_table(instance.stay_reward) << "\n";
    out << "predicted_loss = " << fmt_table(instance.predicted_loss) << "\n";
    return 0;
  }
  const TightnessRun run = nsvi::run_tightness(instance);
  const double bound = run.predicted_loss;
  const double diff = std::abs(run.measured_loss - bound);
  // r is built in floating point, so the engineered tie survives only
  // approximately; compare at relative 1e-6.
  if (diff <= 1e-6 * std::max(1.0, std::abs(bound))) {
    out << "equality OK: loss " << fmt_table(run.measured_loss) << " = bound "
        << fmt_table(bound) << "\n";
    return 0;
  }
  out << "equality FAILED: loss " << fmt_table(run.measured_loss) << " vs bound "
      << fmt_table(bound) << " (diff " << fmt_table(diff) << ")\n";
  return 1;
}

int run_garnet(std::ostream& out, const GarnetSpec& spec, const std::string& out_path) {
  const Mdp mdp = generate_garnet(spec);
  if (out_path.empty()) {
    out << mdp_to_json(mdp);
  } else {
    write_mdp_file(out_path, mdp);
    out << "wrote " << out_path << "\n";
  }
  return 0;
}

int run_audit(std::ostream& out, const std::string& mdp_path,
              const std::string& trace_path, const std::vector<int>& m_list,
              double tol) {
  const Mdp mdp = read_mdp_file(mdp_path);
  const AviTrace trace = read_trace_file(trace_path);
  if (static_cast<int>(trace.v0.size()) != mdp.n_states)
    throw std::runtime_error("trace has " + std::to_string(trace.v0.size()) +
                             " states, mdp has " + std::to_string(mdp.n_states));
  if (trace.gamma != mdp.gamma)
    throw std::runtime_error("trace gamma " + fmt_table(trace.gamma) +
                             " does not match mdp gamma " + fmt_table(mdp.gamma));
  for (const Policy& pi : trace.policies) check_policy(mdp, pi);

  const ValueFunction v_star = solve_optimal(mdp, tol).value;
  const AuditReport report = audit_trace_inequalities(mdp, trace, v_star, m_list, tol);
  for (const AuditEntry& e : report.entries) {
    out << e.check << (e.check == 'a' ? " j=" : " m=") << e.index
        << ": lhs=" << fmt_table(e.lhs) << " rhs=" << fmt_table(e.rhs)
        << " margin=" << fmt_table(e.margin) << (e.ok ? " OK" : " VIOLATED") << "\n";
  }
  out << "min_margin = " << fmt_table(report.min_margin()) << "\n";
  out << (report.all_ok() ? "audit OK" : "audit FAILED") << "\n";
  return report.all_ok() ? 0 : 1;
}

}  // namespace

int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Noisy value iteration, periodic policies, and their loss bounds"};
  app.name("nonstat_vi");
  app.require_subcommand(1);

  double gamma = 0.9;
  int k = 10;
  std::vector<int> m_list = {1};
  double eps = 0.0;
  double delta = 0.0;
  double eps_inf = 0.0;
  bool check = false;
  std::string out_path;

  CLI::App* bounds = app.add_subcommand("bounds", "Evaluate the closed-form bounds");
  bounds->add_option("--gamma", gamma, "Discount factor")->required();
  bounds->add_option("--k", k, "Iteration count")->required();
  bounds->add_option("--m", m_list, "Cycle lengths to evaluate");
  bounds->add_option("--eps", eps, "Span bound on per-iteration errors");
  bounds->add_option("--delta", delta, "Span of v* - v0");
  bounds->add_option("--eps-inf", eps_inf, "Max-norm error bound for the classic bound");

  CLI::App* tightness =
      app.add_subcommand("tightness", "Build the equality-case chain instance");
  tightness->add_option("--gamma", gamma, "Discount factor")->required();
  tightness->add_option("--k", k, "Iteration count")->required();
  tightness->add_option("--eps", eps, "Span bound on per-iteration errors");
  tightness->add_option("--delta", delta, "Span of v* - v0");
  tightness->add_flag("--check", check, "Run the instance and verify loss = bound");
  tightness->add_option("--out", out_path, "Write the instance MDP to this file");

  GarnetSpec garnet_spec;
  CLI::App* garnet = app.add_subcommand("garnet", "Emit a random MDP");
  garnet->add_option("--states", garnet_spec.n_states, "Number of states");
  garnet->add_option("--actions", garnet_spec.n_actions, "Number of actions");
  garnet->add_option("--branching", garnet_spec.branching, "Successors per (s, a)");
  garnet->add_option("--gamma", garnet_spec.gamma, "Discount factor");
  garnet->add_option("--reward-scale", garnet_spec.reward_scale, "Reward upper bound");
  garnet->add_option("--seed", garnet_spec.seed, "Generator seed");
  garnet->add_option("--out", out_path, "Write the MDP to this file (default stdout)");

  std::string config_path;
  std::string mdp_path;
  std::uint64_t seed_flag = 0;
  int trials = 0;
  double run_eps = 0.0;
  GarnetSpec run_garnet_spec;
  std::string output_path;
  std::string traces_dir;
  CLI::App* run = app.add_subcommand("run", "Run an experiment and write CSV");
  run->add_option("--config", config_path, "JSON experiment config");
  CLI::Option* o_trials = run->add_option("--trials", trials, "Number of trials");
  CLI::Option* o_seed = run->add_option("--seed", seed_flag, "Base seed");
  CLI::Option* o_k = run->add_option("--k", k, "Iteration count");
  CLI::Option* o_m = run->add_option("--m", m_list, "Cycle lengths");
  CLI::Option* o_eps = run->add_option("--eps", run_eps, "Random error span bound");
  CLI::Option* o_gamma = run->add_option("--gamma", run_garnet_spec.gamma, "Discount");
  CLI::Option* o_states = run->add_option("--states", run_garnet_spec.n_states, "States");
  CLI::Option* o_actions =
      run->add_option("--actions", run_garnet_spec.n_actions, "Actions");
  CLI::Option* o_branching =
      run->add_option("--branching", run_garnet_spec.branching, "Successors per (s, a)");
  CLI::Option* o_mdp = run->add_option("--mdp", mdp_path, "Use a fixed MDP file");
  CLI::Option* o_output = run->add_option("--output", output_path, "CSV output path");
  CLI::Option* o_traces = run->add_option("--save-traces", traces_dir, "Trace directory");

  std::string trace_path;
  double tol = kDefaultTol;
  CLI::App* audit = app.add_subcommand("audit", "Audit a saved trace against an MDP");
  audit->add_option("--mdp", mdp_path, "MDP file")->required();
  audit->add_option("--trace", trace_path, "Trace file")->required();
  audit->add_option("--m", m_list, "Cycle lengths to audit");
  audit->add_option("--tol", tol, "Policy evaluation tolerance");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("nonstat_vi");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (app.got_subcommand(bounds))
      return run_bounds(out, gamma, k, m_list, eps, delta, eps_inf);
    if (app.got_subcommand(tightness))
      return run_tightness(out, gamma, k, eps, delta, check, out_path);
    if (app.got_subcommand(garnet)) return run_garnet(out, garnet_spec, out_path);
    if (app.got_subcommand(audit))
      return run_audit(out, mdp_path, trace_path, m_list, tol);

    // run: config file first, then flags on top, with --seed beating the
    // NONSTAT_VI_SEED environment variable beating the config.
    ExperimentConfig config;
    if (!config_path.empty()) config = read_config_file(config_path);
    if (o_trials->count() > 0) config.trials = trials;
    if (o_k->count() > 0) config.k = k;
    if (o_m->count() > 0) config.m_list = m_list;
    if (o_eps->count() > 0) config.error_model = ErrorModel::random_span(run_eps, 0);
    if (o_mdp->count() > 0) {
      config.instance.kind = InstanceSpec::Kind::file;
      config.instance.path = mdp_path;
    }
    if (o_gamma->count() > 0) config.instance.garnet.gamma = run_garnet_spec.gamma;
    if (o_states->count() > 0) config.instance.garnet.n_states = run_garnet_spec.n_states;
    if (o_actions->count() > 0)
      config.instance.garnet.n_actions = run_garnet_spec.n_actions;
    if (o_branching->count() > 0)
      config.instance.garnet.branching = run_garnet_spec.branching;
    if (o_output->count() > 0) config.output = output_path;
    if (o_traces->count() > 0) config.save_traces_dir = traces_dir;
    if (o_seed->count() > 0) {
      config.base_seed = seed_flag;
    } else if (const char* env = std::getenv("NONSTAT_VI_SEED")) {
      std::uint64_t env_seed = 0;
      if (!parse_seed(env, env_seed)) {
        err << "NONSTAT_VI_SEED: not an unsigned integer: '" << env << "'\n";
        return 2;
      }
      config.base_seed = env_seed;
    }

    const ExperimentResult result = run_experiment(config);
    const std::string csv = to_csv(result.rows);
    if (config.output.empty()) {
      out << csv;
    } else {
      write_text_file(config.output, csv);
      out << "wrote " << result.rows.size() << " rows to " << config.output << "\n";
    }
    if (!result.all_ok) {
      err << "bound or audit violations found\n";
      return 1;
    }
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace nsvi
