#pragma once

// Built-in instances and instance generators.

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cbmai/instance.hpp"

namespace cbmai {

/// Names accepted by builtin_instance.
const std::vector<std::string>& builtin_names();

/// D1P, D2P, D3P, D1I, D2I, D3I (K = K0 = 24, L = 2) and the synthetic
/// unit-test anchors E1 (feasible, K = 2, L = 1) and E2 (infeasible).
/// Throws std::invalid_argument for unknown names.
Instance builtin_instance(std::string_view name);

/// Same instance with both standard deviations set to zero.
Instance noise_free(Instance instance);

enum class NoiseMode { Permutation, Iid };
enum class RewardRule { D1, D2, D3 };

/// Two-constraint grid family: costs on {0.4..1.4} x {0.7..1.3}, rewards
/// from the rule minus a noise vector, regenerated until the optimal support
/// has 1, 2 or 3 true arms, then the support is bumped by `bump`.
struct GridNoise {
  NoiseMode noise = NoiseMode::Permutation;
  RewardRule rule = RewardRule::D1;
  double bump = 0.02;
};

/// One-constraint hard geometry: a low-reward low-cost arm 1, a high-reward
/// arm 2 just above the cost bound, and arms 3..K stacked at one point just
/// inside the bound, `cluster_gap` below the segment joining arms 1 and 2.
struct HardCluster {
  int K = 16;
  double cost_bound = 1.0;
  double low_cost = -0.2;
  double low_reward = -0.2;
  double high_cost = 1.2;
  double high_reward = 1.2;
  double cluster_cost = 0.9;
  double cluster_gap = 0.15;
  double sigma_r = 1.0;
  double sigma_c = 0.5;
};

/// Rewards and costs drawn uniformly, redrawn until the optimum is unique
/// with full support size.
struct RandomUniform {
  int K = 8;
  int K0 = 8;
  int L = 1;
  double reward_low = 0.0;
  double reward_high = 1.0;
  double cost_low = 0.0;
  double cost_high = 2.0;
  double cost_bound = 1.0;
  double sigma_r = 1.0;
  double sigma_c = 0.5;
};

using GeneratorSpec = std::variant<GridNoise, HardCluster, RandomUniform>;

inline constexpr int kMaxRegenerations = 1000;

struct GeneratedInstance {
  Instance instance;
  int attempts = 0;
};

/// Throws std::runtime_error after kMaxRegenerations failed attempts.
GeneratedInstance generate(const GeneratorSpec& spec, std::uint64_t seed);

}  // namespace cbmai
