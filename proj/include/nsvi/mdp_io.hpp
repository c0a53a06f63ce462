#pragma once

#include <string>

#include "nsvi/avi.hpp"
#include "nsvi/mdp.hpp"

namespace nsvi {

/// Canonical JSON form of an MDP: fixed field order (gamma, n_states,
/// n_actions, rewards, transitions), every real printed with 17 significant
/// digits so values round-trip exactly. Writing what was just read
/// reproduces the file byte for byte.
std::string mdp_to_json(const Mdp& mdp);

/// Parses any JSON with the fields above (shape and stochasticity checked);
/// throws std::runtime_error naming the offending field on bad input.
Mdp mdp_from_json(const std::string& text);

void write_mdp_file(const std::string& path, const Mdp& mdp);
Mdp read_mdp_file(const std::string& path);

/// Same canonical treatment for run traces: gamma, k, n_states, v0, then the
/// per-iteration policies, values and errors.
std::string trace_to_json(const AviTrace& trace);
AviTrace trace_from_json(const std::string& text);

void write_trace_file(const std::string& path, const AviTrace& trace);
AviTrace read_trace_file(const std::string& path);

/// Whole-file helpers; throw std::runtime_error naming the path on failure.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace nsvi
