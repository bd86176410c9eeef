#include <doctest.h>

#include "cbmai/bandit.hpp"
#include "cbmai/catalog.hpp"

using namespace cbmai;

namespace {

int grid_arm(double c1, double c2) {
  const int row = static_cast<int>(std::lround((c1 - 0.4) / 0.2));
  const int col = static_cast<int>(std::lround((c2 - 0.7) / 0.2));
  return 4 * row + col;
}

std::vector<int> true_arms(const Instance& inst) {
  const TrueOptimum t = true_optimum(inst);
  std::vector<int> arms;
  for (int c : t.solved().optimal_basis.indices()) {
    if (c < inst.K) arms.push_back(c);
  }
  return arms;
}

}  // namespace

TEST_CASE("grid instances carry the published means") {
  const Instance d1p = builtin_instance("D1P");
  CHECK(d1p.K == 24);
  CHECK(d1p.K0 == 24);
  CHECK(d1p.L == 2);
  CHECK(d1p.sigma_r == 1.0);
  CHECK(d1p.sigma_c == 0.5);
  CHECK(d1p.cost_bounds == std::vector<double>{1.0, 1.0});
  CHECK(d1p.rewards[grid_arm(0.6, 0.9)] == 1.02);
  CHECK(d1p.rewards[grid_arm(0.4, 0.7)] == 0.88);
  CHECK(d1p.costs(0, grid_arm(1.2, 1.1)) == 1.2);
  CHECK(d1p.costs(1, grid_arm(1.2, 1.1)) == 1.1);

  const Instance d3p = builtin_instance("D3P");
  CHECK(d3p.rewards[grid_arm(0.8, 1.1)] == 1.88);
  CHECK(d3p.rewards[grid_arm(1.0, 0.7)] == 1.72);
  CHECK(d3p.rewards[grid_arm(1.4, 0.9)] == 2.30);
  CHECK(builtin_instance("D2I").rewards[grid_arm(0.4, 0.7)] == 0.40);
}

TEST_CASE("optimal supports of the grid instances are the bold arms") {
  CHECK(true_arms(builtin_instance("D1P")) == std::vector<int>{grid_arm(0.6, 0.9)});
  CHECK(true_arms(builtin_instance("D2P")) == std::vector<int>{grid_arm(0.8, 1.1), grid_arm(1.4, 0.7)});
  CHECK(true_arms(builtin_instance("D3P")) ==
        std::vector<int>{grid_arm(0.8, 1.1), grid_arm(1.0, 0.7), grid_arm(1.4, 0.9)});
  CHECK(true_arms(builtin_instance("D1I")) == std::vector<int>{grid_arm(0.4, 0.9)});
  CHECK(true_arms(builtin_instance("D2I")) == std::vector<int>{grid_arm(0.4, 0.7), grid_arm(1.4, 0.7)});
  CHECK(true_arms(builtin_instance("D3I")) ==
        std::vector<int>{grid_arm(0.8, 0.9), grid_arm(0.8, 1.3), grid_arm(1.4, 0.9)});
}

TEST_CASE("every builtin except E2 satisfies the assumption") {
  for (const std::string& name : builtin_names()) {
    CAPTURE(name);
    const Instance inst = builtin_instance(name);
    CHECK_NOTHROW(inst.validate());
    CHECK(inst.name == name);
    const TrueOptimum t = true_optimum(inst);
    if (name == "E2") {
      CHECK_FALSE(t.feasible());
    } else {
      REQUIRE(t.feasible());
      CHECK(t.solved().assumption_ok);
    }
  }
  CHECK_THROWS_AS(builtin_instance("A1"), std::invalid_argument);
}

TEST_CASE("noise_free zeroes both noise levels only") {
  const Instance a = builtin_instance("D2P");
  const Instance b = noise_free(a);
  CHECK(b.sigma_r == 0.0);
  CHECK(b.sigma_c == 0.0);
  CHECK(b.rewards == a.rewards);
  CHECK(b.costs == a.costs);
}

TEST_CASE("grid generators hit their support sizes within the cap") {
  for (NoiseMode noise : {NoiseMode::Permutation, NoiseMode::Iid}) {
    for (RewardRule rule : {RewardRule::D1, RewardRule::D2, RewardRule::D3}) {
      const size_t target = rule == RewardRule::D1 ? 1 : rule == RewardRule::D2 ? 2 : 3;
      for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const GeneratedInstance g = generate(GridNoise{noise, rule, 0.02}, seed);
        CHECK(g.attempts <= kMaxRegenerations);
        CHECK(true_optimum(g.instance).solved().assumption_ok);
        CHECK(true_arms(g.instance).size() == target);
      }
    }
  }
}

TEST_CASE("generators are deterministic in the seed") {
  const GridNoise spec{NoiseMode::Iid, RewardRule::D2, 0.02};
  CHECK(generate(spec, 5).instance == generate(spec, 5).instance);
  CHECK(generate(RandomUniform{}, 5).instance == generate(RandomUniform{}, 5).instance);
}

TEST_CASE("hard cluster geometry") {
  const Instance inst = generate(HardCluster{}, 0).instance;
  CHECK(inst.K == 16);
  CHECK(inst.L == 1);
  for (int a = 3; a < 16; ++a) {
    CHECK(inst.rewards[a] == inst.rewards[2]);
    CHECK(inst.costs(0, a) == inst.costs(0, 2));
  }
  const TrueOptimum t = true_optimum(inst);
  CHECK(t.solved().optimal_basis == Basis({0, 1}));
  CHECK(t.solved().assumption_ok);

  HardCluster broken;
  broken.cluster_gap = -0.5;
  CHECK_THROWS_AS(generate(broken, 0), std::runtime_error);
}

TEST_CASE("random uniform instances are valid") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RandomUniform spec;
    spec.K = 6;
    spec.K0 = 4;
    spec.L = 2;
    const Instance inst = generate(spec, seed).instance;
    CHECK_NOTHROW(inst.validate());
    CHECK(inst.K0 == 4);
    CHECK(true_optimum(inst).solved().assumption_ok);
  }
}
