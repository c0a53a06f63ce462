#include "nsvi/mdp_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "nsvi/numfmt.hpp"

namespace nsvi {

namespace {

using nlohmann::json;

std::string join_reals(const double* first, int count) {
  std::string out;
  for (int i = 0; i < count; ++i) {
    if (i > 0) out += ", ";
    out += fmt_full(first[i]);
  }
  return out;
}

[[noreturn]] void fail(const std::string& what) {
  throw std::runtime_error(what);
}

const json& get_field(const json& j, const char* name) {
  const auto it = j.find(name);
  if (it == j.end()) fail(std::string("missing field '") + name + "'");
  return *it;
}

int get_int(const json& j, const char* name) {
  const json& f = get_field(j, name);
  if (!f.is_number_integer()) fail(std::string("field '") + name + "' must be an integer");
  return f.get<int>();
}

double get_real(const json& j, const char* name) {
  const json& f = get_field(j, name);
  if (!f.is_number()) fail(std::string("field '") + name + "' must be a number");
  return f.get<double>();
}

std::vector<double> get_real_array(const json& f, const std::string& where, int expected) {
  if (!f.is_array() || static_cast<int>(f.size()) != expected)
    fail(where + " must be an array of " + std::to_string(expected) + " numbers");
  std::vector<double> out(expected);
  for (int i = 0; i < expected; ++i) {
    if (!f[i].is_number()) fail(where + "[" + std::to_string(i) + "] must be a number");
    out[i] = f[i].get<double>();
  }
  return out;
}

json parse_text(const std::string& text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) fail("not valid JSON");
  if (!j.is_object()) fail("top level must be a JSON object");
  return j;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail("cannot open '" + path + "' for writing");
  out << text;
  if (!out) fail("write to '" + path + "' failed");
}

std::string mdp_to_json(const Mdp& mdp) {
  const int n = mdp.n_states;
  const int na = mdp.n_actions;
  std::string out;
  out += "{\n";
  out += "  \"gamma\": " + fmt_full(mdp.gamma) + ",\n";
  out += "  \"n_states\": " + std::to_string(n) + ",\n";
  out += "  \"n_actions\": " + std::to_string(na) + ",\n";
  out += "  \"rewards\": [\n";
  for (int s = 0; s < n; ++s) {
    out += "    [" + join_reals(mdp.rewards.data() + static_cast<std::size_t>(s) * na, na) + "]";
    out += (s + 1 < n) ? ",\n" : "\n";
  }
  out += "  ],\n";
  out += "  \"transitions\": [\n";
  for (int s = 0; s < n; ++s) {
    out += "    [\n";
    for (int a = 0; a < na; ++a) {
      out += "      [" + join_reals(mdp.row(s, a).data(), n) + "]";
      out += (a + 1 < na) ? ",\n" : "\n";
    }
    out += (s + 1 < n) ? "    ],\n" : "    ]\n";
  }
  out += "  ]\n";
  out += "}\n";
  return out;
}

Mdp mdp_from_json(const std::string& text) {
  const json j = parse_text(text);
  const double gamma = get_real(j, "gamma");
  const int n = get_int(j, "n_states");
  const int na = get_int(j, "n_actions");
  if (n < 1) fail("n_states must be at least 1");
  if (na < 1) fail("n_actions must be at least 1");
  if (!(gamma >= 0.0 && gamma < 1.0)) fail("gamma must lie in [0, 1)");

  Mdp mdp(n, na, gamma);

  const json& rewards = get_field(j, "rewards");
  if (!rewards.is_array() || static_cast<int>(rewards.size()) != n)
    fail("rewards must be an array of n_states rows");
  for (int s = 0; s < n; ++s) {
    const std::vector<double> row =
        get_real_array(rewards[s], "rewards[" + std::to_string(s) + "]", na);
    for (int a = 0; a < na; ++a) mdp.reward(s, a) = row[a];
  }

  const json& transitions = get_field(j, "transitions");
  if (!transitions.is_array() || static_cast<int>(transitions.size()) != n)
    fail("transitions must be an array of n_states entries");
  for (int s = 0; s < n; ++s) {
    const json& per_state = transitions[s];
    const std::string where = "transitions[" + std::to_string(s) + "]";
    if (!per_state.is_array() || static_cast<int>(per_state.size()) != na)
      fail(where + " must be an array of n_actions rows");
    for (int a = 0; a < na; ++a) {
      const std::vector<double> row =
          get_real_array(per_state[a], where + "[" + std::to_string(a) + "]", n);
      for (int s2 = 0; s2 < n; ++s2) mdp.prob(s, a, s2) = row[s2];
    }
  }

  const ValidationReport report = validate_mdp(mdp);
  if (!report.ok()) {
    std::string msg = "invalid MDP:";
    for (const std::string& v : report.violations) msg += "\n  " + v;
    fail(msg);
  }
  return mdp;
}

void write_mdp_file(const std::string& path, const Mdp& mdp) {
  write_text_file(path, mdp_to_json(mdp));
}

Mdp read_mdp_file(const std::string& path) {
  try {
    return mdp_from_json(read_text_file(path));
  } catch (const std::runtime_error& e) {
    fail("mdp file '" + path + "': " + e.what());
  }
}

std::string trace_to_json(const AviTrace& trace) {
  const int n = static_cast<int>(trace.v0.size());
  std::string out;
  out += "{\n";
  out += "  \"gamma\": " + fmt_full(trace.gamma) + ",\n";
  out += "  \"k\": " + std::to_string(trace.k) + ",\n";
  out += "  \"n_states\": " + std::to_string(n) + ",\n";
  out += "  \"v0\": [" + join_reals(trace.v0.data(), n) + "],\n";
  out += "  \"policies\": [\n";
  for (int j = 0; j < trace.k; ++j) {
    out += "    [";
    for (int s = 0; s < n; ++s) {
      if (s > 0) out += ", ";
      out += std::to_string(trace.policies[j][s]);
    }
    out += (j + 1 < trace.k) ? "],\n" : "]\n";
  }
  out += "  ],\n";
  out += "  \"values\": [\n";
  for (int j = 0; j < trace.k; ++j) {
    out += "    [" + join_reals(trace.values[j].data(), n) + "]";
    out += (j + 1 < trace.k) ? ",\n" : "\n";
  }
  out += "  ],\n";
  out += "  \"errors\": [\n";
  for (int j = 0; j < trace.k; ++j) {
    out += "    [" + join_reals(trace.errors[j].data(), n) + "]";
    out += (j + 1 < trace.k) ? ",\n" : "\n";
  }
  out += "  ]\n";
  out += "}\n";
  return out;
}

AviTrace trace_from_json(const std::string& text) {
  const json j = parse_text(text);
  AviTrace trace;
  trace.gamma = get_real(j, "gamma");
  trace.k = get_int(j, "k");
  const int n = get_int(j, "n_states");
  if (trace.k < 1) fail("k must be at least 1");
  if (n < 1) fail("n_states must be at least 1");
  if (!(trace.gamma >= 0.0 && trace.gamma < 1.0)) fail("gamma must lie in [0, 1)");

  trace.v0 = get_real_array(get_field(j, "v0"), "v0", n);

  const json& policies = get_field(j, "policies");
  if (!policies.is_array() || static_cast<int>(policies.size()) != trace.k)
    fail("policies must be an array of k entries");
  trace.policies.resize(trace.k);
  for (int i = 0; i < trace.k; ++i) {
    const json& p = policies[i];
    const std::string where = "policies[" + std::to_string(i) + "]";
    if (!p.is_array() || static_cast<int>(p.size()) != n)
      fail(where + " must be an array of n_states integers");
    trace.policies[i].resize(n);
    for (int s = 0; s < n; ++s) {
      if (!p[s].is_number_integer() || p[s].get<int>() < 0)
        fail(where + "[" + std::to_string(s) + "] must be a nonnegative integer");
      trace.policies[i][s] = p[s].get<int>();
    }
  }

  for (const char* name : {"values", "errors"}) {
    const json& arr = get_field(j, name);
    if (!arr.is_array() || static_cast<int>(arr.size()) != trace.k)
      fail(std::string(name) + " must be an array of k entries");
    auto& dst = (std::string(name) == "values") ? trace.values : trace.errors;
    dst.resize(trace.k);
    for (int i = 0; i < trace.k; ++i)
      dst[i] = get_real_array(arr[i], std::string(name) + "[" + std::to_string(i) + "]", n);
  }
  return trace;
}

void write_trace_file(const std::string& path, const AviTrace& trace) {
  write_text_file(path, trace_to_json(trace));
}

AviTrace read_trace_file(const std::string& path) {
  try {
    return trace_from_json(read_text_file(path));
  } catch (const std::runtime_error& e) {
    fail("trace file '" + path + "': " + e.what());
  }
}

}  // namespace nsvi
