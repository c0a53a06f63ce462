#include "nsvi/garnet.hpp"

#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "nsvi/rng.hpp"

namespace nsvi {

Mdp generate_garnet(const GarnetSpec& spec) {
  if (spec.n_states < 1) throw std::invalid_argument("n_states must be at least 1");
  if (spec.n_actions < 1) throw std::invalid_argument("n_actions must be at least 1");
  if (spec.branching < 1 || spec.branching > spec.n_states)
    throw std::invalid_argument("branching must lie in [1, n_states]");
  if (!(spec.gamma >= 0.0 && spec.gamma < 1.0))
    throw std::invalid_argument("gamma must lie in [0, 1)");
  if (spec.reward_scale < 0.0)
    throw std::invalid_argument("reward_scale must be nonnegative");

  const int n = spec.n_states;
  const int b = spec.branching;
  Mdp mdp(n, spec.n_actions, spec.gamma);
  Rng rng(spec.seed);

  // Draw order per (s, a), in ascending (s, a): b successor picks, then b
  // probability weights, then one reward. Changing this order changes every
  // generated MDP, so it is part of the format.
  std::vector<int> idx(n);
  std::vector<double> weights(b);
  for (int s = 0; s < n; ++s) {
    for (int a = 0; a < spec.n_actions; ++a) {
      std::iota(idx.begin(), idx.end(), 0);
      for (int i = 0; i < b; ++i) {
        const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
        std::swap(idx[i], idx[j]);
      }
      double total = 0.0;
      for (int i = 0; i < b; ++i) {
        weights[i] = rng.uniform01();
        total += weights[i];
      }
      for (int i = 0; i < b; ++i) {
        // total == 0 only if every draw was exactly 0; fall back to uniform.
        const double p = total > 0.0 ? weights[i] / total : 1.0 / b;
        mdp.prob(s, a, idx[i]) = p;
      }
      mdp.reward(s, a) = rng.uniform01() * spec.reward_scale;
    }
  }
  return mdp;
}

}  // namespace nsvi
