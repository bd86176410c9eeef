#include "cbmai/catalog.hpp"

#include <algorithm>
#include <array>
#include <random>
#include <stdexcept>

#include "cbmai/bandit.hpp"

namespace cbmai {

namespace {

constexpr std::array<double, 6> kGridCost1 = {0.4, 0.6, 0.8, 1.0, 1.2, 1.4};
constexpr std::array<double, 4> kGridCost2 = {0.7, 0.9, 1.1, 1.3};
constexpr int kGridArms = 24;

using GridRewards = std::array<double, kGridArms>;

// Rows follow c1 = 0.4..1.4, columns c2 = 0.7..1.3; arm index = 4 * row + col.
constexpr GridRewards kD1P = {0.88, 0.80, 0.82, 0.66, 0.72, 1.02, 0.70, 0.54,
                              0.92, 0.74, 0.94, 0.84, 0.76, 0.60, 0.56, 0.86,
                              0.98, 0.64, 0.68, 0.78, 0.62, 0.96, 0.90, 0.58};
constexpr GridRewards kD2P = {0.08, 0.28, -0.02, 0.22, 0.20, 0.46, 0.54, 0.40,
                              0.42, 0.52, 0.80,  0.34, 0.92, 0.78, 0.96, 0.70,
                              0.94, 0.76, 1.10,  0.86, 1.42, 1.16, 1.04, 1.24};
constexpr GridRewards kD3P = {1.04, 1.22, 1.28, 1.26, 0.98, 1.22, 1.60, 1.54,
                              1.26, 1.40, 1.88, 1.84, 1.72, 1.76, 1.64, 1.92,
                              1.78, 1.70, 1.96, 2.08, 1.94, 2.30, 2.32, 2.50};
constexpr GridRewards kD1I = {0.84, 1.02, 0.74, 0.76, 0.84, 0.88, 0.96, 0.90,
                              0.90, 0.98, 0.92, 0.80, 0.98, 0.98, 0.90, 0.74,
                              0.94, 0.90, 0.88, 0.72, 0.78, 0.82, 0.88, 0.84};
constexpr GridRewards kD2I = {0.40, 0.18, 0.28, 0.14, 0.44, 0.54, 0.40, 0.32,
                              0.56, 0.52, 0.68, 0.64, 0.84, 0.80, 0.82, 0.74,
                              0.94, 1.18, 1.02, 1.12, 1.42, 1.16, 1.24, 1.24};
constexpr GridRewards kD3I = {0.92, 1.12, 1.32, 1.42, 1.14, 1.42, 1.62, 1.68,
                              1.30, 1.70, 1.68, 2.06, 1.46, 1.82, 2.02, 2.04,
                              1.84, 2.02, 2.12, 2.24, 2.06, 2.28, 2.32, 2.58};

Instance grid_instance(std::string name, const GridRewards& rewards) {
  Instance inst;
  inst.name = std::move(name);
  inst.K = kGridArms;
  inst.K0 = kGridArms;
  inst.L = 2;
  inst.rewards.assign(rewards.begin(), rewards.end());
  inst.costs = Matrix(2, kGridArms);
  for (int row = 0; row < 6; ++row) {
    for (int col = 0; col < 4; ++col) {
      inst.costs(0, 4 * row + col) = kGridCost1[row];
      inst.costs(1, 4 * row + col) = kGridCost2[col];
    }
  }
  inst.cost_bounds = {1.0, 1.0};
  inst.sigma_r = 1.0;
  inst.sigma_c = 0.5;
  return inst;
}

Instance anchor_instance(std::string name, double cost2) {
  Instance inst;
  inst.name = std::move(name);
  inst.K = 2;
  inst.K0 = 2;
  inst.L = 1;
  inst.rewards = {1.0, 0.0};
  inst.costs = Matrix(1, 2);
  inst.costs(0, 0) = 2.0;
  inst.costs(0, 1) = cost2;
  inst.cost_bounds = {1.0};
  inst.sigma_r = 1.0;
  inst.sigma_c = 0.5;
  return inst;
}

std::vector<int> true_arm_support(const Instance& inst, const SolvedTruth& truth) {
  std::vector<int> arms;
  for (int col : truth.optimal_basis.indices()) {
    if (col < inst.K && truth.x_star[col] > kSupportTol) arms.push_back(col);
  }
  return arms;
}

int rule_target(RewardRule rule) {
  switch (rule) {
    case RewardRule::D1:
      return 1;
    case RewardRule::D2:
      return 2;
    case RewardRule::D3:
      return 3;
  }
  return 0;
}

std::string rule_label(RewardRule rule) { return "D" + std::to_string(rule_target(rule)); }

GeneratedInstance generate_grid(const GridNoise& spec, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  const int target = rule_target(spec.rule);
  const std::string name = "grid-" + rule_label(spec.rule) +
                           (spec.noise == NoiseMode::Permutation ? "P" : "I") + "-" +
                           std::to_string(seed);
  for (int attempt = 1; attempt <= kMaxRegenerations; ++attempt) {
    std::array<double, kGridArms> noise{};
    if (spec.noise == NoiseMode::Permutation) {
      std::array<int, kGridArms> steps{};
      for (int i = 0; i < kGridArms; ++i) steps[i] = i;
      std::shuffle(steps.begin(), steps.end(), engine);
      for (int i = 0; i < kGridArms; ++i) noise[i] = 0.02 * steps[i];
    } else {
      std::uniform_int_distribution<int> pick(0, 14);
      for (int i = 0; i < kGridArms; ++i) noise[i] = 0.02 * pick(engine);
    }
    GridRewards rewards{};
    Instance inst = grid_instance(name, rewards);
    for (int i = 0; i < kGridArms; ++i) {
      const double c1 = inst.costs(0, i);
      const double c2 = inst.costs(1, i);
      double base = 1.0;
      if (spec.rule == RewardRule::D2) base = c1;
      if (spec.rule == RewardRule::D3) base = c1 + c2;
      inst.rewards[i] = base - noise[i];
    }
    const TrueOptimum before = true_optimum(inst);
    if (!before.feasible()) continue;
    const std::vector<int> support = true_arm_support(inst, before.solved());
    if (static_cast<int>(support.size()) != target) continue;
    for (int arm : support) inst.rewards[arm] += spec.bump;
    const TrueOptimum after = true_optimum(inst);
    if (!after.feasible() || !after.solved().assumption_ok) continue;
    if (true_arm_support(inst, after.solved()) != support) continue;
    return {std::move(inst), attempt};
  }
  throw std::runtime_error("generate: grid instance not found within the regeneration limit");
}

GeneratedInstance generate_hard_cluster(const HardCluster& spec) {
  if (spec.K < 3) throw std::invalid_argument("generate: hard cluster needs K >= 3");
  if (!(spec.high_cost > spec.low_cost)) throw std::invalid_argument("generate: anchors must differ in cost");
  Instance inst;
  inst.name = "hard-cluster-" + std::to_string(spec.K);
  inst.K = spec.K;
  inst.K0 = spec.K;
  inst.L = 1;
  inst.costs = Matrix(1, spec.K);
  inst.rewards.resize(spec.K);
  const double slope = (spec.high_reward - spec.low_reward) / (spec.high_cost - spec.low_cost);
  const double cluster_reward =
      spec.low_reward + slope * (spec.cluster_cost - spec.low_cost) - spec.cluster_gap;
  inst.rewards[0] = spec.low_reward;
  inst.costs(0, 0) = spec.low_cost;
  inst.rewards[1] = spec.high_reward;
  inst.costs(0, 1) = spec.high_cost;
  for (int a = 2; a < spec.K; ++a) {
    inst.rewards[a] = cluster_reward;
    inst.costs(0, a) = spec.cluster_cost;
  }
  inst.cost_bounds = {spec.cost_bound};
  inst.sigma_r = spec.sigma_r;
  inst.sigma_c = spec.sigma_c;
  inst.validate();
  const TrueOptimum truth = true_optimum(inst);
  if (!truth.feasible() || !truth.solved().assumption_ok ||
      truth.solved().optimal_basis.indices() != std::vector<int>{0, 1}) {
    throw std::runtime_error("generate: hard cluster parameters do not make {1, 2} the unique optimum");
  }
  return {std::move(inst), 1};
}

GeneratedInstance generate_uniform(const RandomUniform& spec, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::uniform_real_distribution<double> reward(spec.reward_low, spec.reward_high);
  std::uniform_real_distribution<double> cost(spec.cost_low, spec.cost_high);
  for (int attempt = 1; attempt <= kMaxRegenerations; ++attempt) {
    Instance inst;
    inst.name = "uniform-" + std::to_string(seed);
    inst.K = spec.K;
    inst.K0 = spec.K0;
    inst.L = spec.L;
    inst.rewards.resize(spec.K);
    inst.costs = Matrix(spec.L, spec.K);
    for (int a = 0; a < spec.K; ++a) {
      inst.rewards[a] = reward(engine);
      for (int l = 0; l < spec.L; ++l) inst.costs(l, a) = cost(engine);
    }
    inst.cost_bounds.assign(spec.L, spec.cost_bound);
    inst.sigma_r = spec.sigma_r;
    inst.sigma_c = spec.sigma_c;
    inst.validate();
    const TrueOptimum truth = true_optimum(inst);
    if (truth.feasible() && truth.solved().assumption_ok) return {std::move(inst), attempt};
  }
  throw std::runtime_error("generate: uniform instance not found within the regeneration limit");
}

}  // namespace

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {"D1P", "D2P", "D3P", "D1I", "D2I",
                                                 "D3I", "E1",  "E2"};
  return names;
}

Instance builtin_instance(std::string_view name) {
  if (name == "D1P") return grid_instance("D1P", kD1P);
  if (name == "D2P") return grid_instance("D2P", kD2P);
  if (name == "D3P") return grid_instance("D3P", kD3P);
  if (name == "D1I") return grid_instance("D1I", kD1I);
  if (name == "D2I") return grid_instance("D2I", kD2I);
  if (name == "D3I") return grid_instance("D3I", kD3I);
  if (name == "E1") return anchor_instance("E1", 0.0);
  if (name == "E2") return anchor_instance("E2", 1.5);
  throw std::invalid_argument("unknown built-in instance '" + std::string(name) + "'");
}

Instance noise_free(Instance instance) {
  instance.sigma_r = 0.0;
  instance.sigma_c = 0.0;
  instance.name += "-noise-free";
  return instance;
}

GeneratedInstance generate(const GeneratorSpec& spec, std::uint64_t seed) {
  return std::visit(
      [&](const auto& s) -> GeneratedInstance {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, GridNoise>) {
          return generate_grid(s, seed);
        } else if constexpr (std::is_same_v<T, HardCluster>) {
          return generate_hard_cluster(s);
        } else {
          return generate_uniform(s, seed);
        }
      },
      spec);
}

}  // namespace cbmai
