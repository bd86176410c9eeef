#include <doctest.h>

#include <random>

#include "cbmai/algorithms.hpp"
#include "cbmai/catalog.hpp"
#include "oracles.hpp"

using namespace cbmai;

namespace {

EmpiricalLp true_view(const Instance& inst) {
  EmpiricalState state(inst.K0, inst.L);
  for (int a = 0; a < inst.K0; ++a) {
    Observation obs;
    obs.reward = inst.rewards[a];
    for (int l = 0; l < inst.L; ++l) obs.costs.push_back(inst.costs(l, a));
    state.record(a, obs);
  }
  std::vector<int> cols(inst.num_vars());
  for (int i = 0; i < inst.num_vars(); ++i) cols[i] = i;
  return empirical_views(state, inst, cols);
}

}  // namespace

TEST_CASE("Score ordering") {
  const Score lo = Score::neg_infinity();
  CHECK(lo < Score::finite(-1e300));
  CHECK(Score::finite(1.0) < Score::finite(2.0));
  CHECK(lo == Score::neg_infinity());
  CHECK_FALSE(lo < Score::neg_infinity());
}

TEST_CASE("pull schedule") {
  SUBCASE("K = K0 = 16, L = 1, N = 1000") {
    const Schedule s = pull_schedule(1000, 16, 16, 1);
    CHECK(s.psi == doctest::Approx(3.318229).epsilon(1e-6));
    REQUIRE(s.cumulative.size() == 15);
    CHECK(s.cumulative[0] == 19);
    CHECK(s.cumulative[1] == 20);
    CHECK(s.rounds[1] == 1);
    CHECK(s.cumulative[14] == 149);
    long sum = 0;
    for (size_t k = 0; k < s.rounds.size(); ++k) {
      CHECK(s.rounds[k] >= 0);
      sum += s.rounds[k];
    }
    CHECK(sum == s.cumulative.back());
  }
  SUBCASE("K = 2, K0 = 1, L = 1 spends everything in one round") {
    const Schedule s = pull_schedule(500, 2, 1, 1);
    CHECK(s.psi == 0.5);
    REQUIRE(s.rounds.size() == 1);
    CHECK(s.rounds[0] == 499);
  }
  CHECK_THROWS_AS(pull_schedule(16, 16, 16, 1), std::invalid_argument);
}

TEST_CASE("scores of E1 at the true means") {
  const EmpiricalLp view = true_view(builtin_instance("E1"));
  const auto iv = iv_scores(view);
  CHECK(iv[0].value() == doctest::Approx(0.5));
  CHECK(iv[1].value() == doctest::Approx(0.5));
  CHECK(iv[2].value() == doctest::Approx(0.0));
  const auto lag = lagrangian_scores(view);
  CHECK(lag[0].value() == doctest::Approx(0.0));
  CHECK(lag[1].value() == doctest::Approx(0.0));
  CHECK(lag[2].value() == doctest::Approx(-0.5));
}

TEST_CASE("an infeasible view scores minus infinity under both flavors") {
  const EmpiricalLp view = true_view(builtin_instance("E2"));
  for (const Score& s : iv_scores(view)) CHECK_FALSE(s.is_finite());
  for (const Score& s : lagrangian_scores(view)) CHECK_FALSE(s.is_finite());
}

TEST_CASE("IV scores match a Cramer's-rule enumeration") {
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 200; ++trial) {
    const Instance inst = oracle::random_small_instance(gen, 5, 1);
    const EmpiricalLp view = true_view(inst);
    std::vector<oracle::Column> cols;
    for (int a = 0; a < inst.K; ++a) cols.push_back({inst.rewards[a], inst.costs(0, a), 1.0});
    cols.push_back({0.0, 1.0, 0.0});
    const auto expected = oracle::iv_scores_2x2(cols, inst.cost_bounds[0]);
    const auto got = iv_scores(view);
    for (int c = 0; c < 6; ++c) {
      REQUIRE(got[c].is_finite() == expected[c].has_value());
      if (expected[c]) CHECK(got[c].value() == doctest::Approx(*expected[c]).epsilon(1e-9));
    }
    // The best IV score is the LP optimum.
    const LpOutcome lp = solve_primal(view.constraints, view.rhs, view.objective);
    if (std::holds_alternative<Optimal>(lp)) {
      const Score best = *std::max_element(got.begin(), got.end());
      CHECK(best.value() == doctest::Approx(std::get<Optimal>(lp).value).epsilon(1e-9));
    }
  }
}

TEST_CASE("noise-free runs recover the optimal support") {
  for (const std::string name : {"E1", "D1P", "D2P", "D3P", "D1I", "D2I", "D3I"}) {
    CAPTURE(name);
    const Instance inst = noise_free(builtin_instance(name));
    const auto expected = true_optimum(inst).solved().optimal_basis.indices();
    for (Algorithm algo : {Algorithm::SfsrIv, Algorithm::SfsrL, Algorithm::Uslp}) {
      CAPTURE(algorithm_name(algo));
      NormalStream rng(1);
      const Identification out = run_algorithm(algo, inst, 5000, rng);
      REQUIRE(std::holds_alternative<SupportOutcome>(out));
      CHECK(std::get<SupportOutcome>(out).support == expected);
    }
  }
}

TEST_CASE("noise-free E1 reports the exact mixture") {
  NormalStream rng(1);
  const Identification out = sfsr_run(noise_free(builtin_instance("E1")), 3, ScoreFlavor::IntersectionValue, rng);
  const auto& s = std::get<SupportOutcome>(out);
  CHECK(s.support == std::vector<int>{0, 1});
  REQUIRE(s.mixture.has_value());
  CHECK((*s.mixture)[0] == doctest::Approx(0.5));
  CHECK((*s.mixture)[1] == doctest::Approx(0.5));
}

TEST_CASE("noise-free E2 is declared infeasible") {
  const Instance inst = noise_free(builtin_instance("E2"));
  for (Algorithm algo : {Algorithm::SfsrIv, Algorithm::SfsrL, Algorithm::Uslp}) {
    NormalStream rng(4);
    CHECK(std::holds_alternative<InfeasibleVerdict>(run_algorithm(algo, inst, 100, rng)));
  }
}

TEST_CASE("run traces respect the budget and round structure") {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 200; ++trial) {
    const int K = 3 + static_cast<int>(gen() % 8);
    const int L = 1 + static_cast<int>(gen() % 2);
    Instance inst = oracle::random_small_instance(gen, K, L);
    inst.K0 = 1 + static_cast<int>(gen() % K);
    const long budget = inst.K0 + 10 + static_cast<long>(gen() % 3000);
    for (Algorithm algo : {Algorithm::SfsrIv, Algorithm::SfsrL, Algorithm::Uslp}) {
      NormalStream rng(gen());
      RunTrace trace;
      const Identification out = run_algorithm(algo, inst, budget, rng, &trace);
      CHECK(trace.total_pulls <= budget);
      for (int c = inst.K0; c < inst.num_vars(); ++c) CHECK(trace.pulls_per_column[c] == 0);
      if (algo == Algorithm::Uslp) continue;
      CHECK(trace.rounds <= K - 1);
      for (size_t k = 0; k < trace.remaining_after_round.size(); ++k) {
        CHECK(trace.remaining_after_round[k] == K + L - static_cast<int>(k) - 1);
      }
      if (std::holds_alternative<SupportOutcome>(out)) {
        CHECK(trace.rounds == K - 1);
        CHECK(std::get<SupportOutcome>(out).support.size() == static_cast<size_t>(L + 1));
      }
    }
  }
}

TEST_CASE("USLP pulls every unknown arm floor(N / K0) times") {
  const Instance inst = builtin_instance("D1P");
  NormalStream rng(2);
  RunTrace trace;
  uslp_run(inst, 1000, rng, &trace);
  for (int a = 0; a < inst.K0; ++a) CHECK(trace.pulls_per_column[a] == 41);
  CHECK(trace.total_pulls == 41 * 24);
}

TEST_CASE("mixture estimate on a singular support is omitted") {
  EmpiricalLp view;
  view.columns = {0, 1};
  view.objective = {1.0, 1.0};
  view.constraints = Matrix(2, 2, 1.0);
  view.rhs = {1.0, 1.0};
  CHECK_FALSE(mixture_estimate(view).has_value());
}

TEST_CASE("algorithm names round-trip") {
  for (Algorithm algo : {Algorithm::SfsrIv, Algorithm::SfsrL, Algorithm::Uslp}) {
    CHECK(parse_algorithm(algorithm_name(algo)) == algo);
  }
  CHECK_THROWS_AS(parse_algorithm("ucb"), std::invalid_argument);
}
