#pragma once

#include <cstdint>

#include "nsvi/mdp.hpp"

namespace nsvi {

/// Parameters of a randomly generated MDP: every (state, action) pair gets
/// `branching` distinct successor states with normalized uniform
/// probabilities and a uniform reward in [0, reward_scale].
struct GarnetSpec {
  int n_states = 20;
  int n_actions = 4;
  int branching = 3;
  double gamma = 0.9;
  double reward_scale = 1.0;
  std::uint64_t seed = 0;
};

/// Deterministic in the spec: the same spec (seed included) always yields
/// the same MDP, bit for bit.
Mdp generate_garnet(const GarnetSpec& spec);

}  // namespace nsvi
