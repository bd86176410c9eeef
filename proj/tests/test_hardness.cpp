#include <doctest.h>

#include "cbmai/catalog.hpp"
#include "cbmai/hardness.hpp"
#include "oracles.hpp"

using namespace cbmai;

namespace {

// Rebuilds an instance from a witness and checks the defining constraints of
// the basis gap directly.
void check_basis_witness(const Instance& inst, const Basis& J, const GapWitness& w) {
  Instance alt = inst;
  alt.rewards = w.rewards;
  alt.costs = w.costs;
  const StandardLp lp = build_standard_form(alt);
  const Basis I = true_optimum(inst).solved().optimal_basis;
  const auto xJ = basic_solution(lp, J);
  const auto xI = basic_solution(lp, I);
  REQUIRE(std::holds_alternative<FeasibleBasis>(xJ));
  REQUIRE(std::holds_alternative<FeasibleBasis>(xI));
  auto value = [&](const Basis& B, const std::vector<double>& x) {
    double v = 0.0;
    for (int i = 0; i < B.size(); ++i) v += lp.objective[B.indices()[i]] * x[i];
    return v;
  };
  CHECK(value(J, std::get<FeasibleBasis>(xJ).x_basis) >=
        value(I, std::get<FeasibleBasis>(xI).x_basis) - kFeasTol);
  double dist = 0.0;
  for (int a = 0; a < inst.K; ++a) {
    const double dr = (alt.rewards[a] - inst.rewards[a]) / inst.sigma_r;
    dist += dr * dr;
    for (int l = 0; l < inst.L; ++l) {
      const double dc = (alt.costs(l, a) - inst.costs(l, a)) / inst.sigma_c;
      dist += dc * dc;
    }
  }
  CHECK(dist == doctest::Approx(w.value).epsilon(1e-6));
}

}  // namespace

TEST_CASE("basis gaps of E1") {
  const Instance e1 = builtin_instance("E1");
  CHECK(estimate_delta_J(e1, Basis({0, 1})) == 0.0);
  CHECK(estimate_delta_J(e1, Basis({1, 2})) == doctest::Approx(0.5).epsilon(0.02));
  CHECK(estimate_delta_J(e1, Basis({0, 2})) == doctest::Approx(4.0).epsilon(0.0125));
}

TEST_CASE("basis gaps of E1 agree with a grid oracle") {
  const Instance e1 = builtin_instance("E1");
  const double grid13 = oracle::grid_delta_arm_slack(e1, 0, 0.01, 2.5);
  const double grid23 = oracle::grid_delta_arm_slack(e1, 1, 0.01, 2.5);
  CHECK(grid13 == doctest::Approx(4.0).epsilon(0.01));
  CHECK(grid23 == doctest::Approx(0.5).epsilon(0.01));
  // The estimate is an upper bound backed by a witness; the grid is coarse,
  // so allow it to sit slightly above the true infimum.
  CHECK(estimate_delta_J(e1, Basis({0, 2})) <= grid13 + 1e-6);
  CHECK(estimate_delta_J(e1, Basis({1, 2})) <= grid23 + 1e-6);
  // The infeasibility set is open, so the grid value sits one step above.
  const double grid0 = oracle::grid_delta0(e1, 0.001, 2.5);
  CHECK(grid0 == doctest::Approx(4.0).epsilon(0.01));
  CHECK(estimate_delta0(e1) <= grid0 + 1e-6);
  CHECK(estimate_delta0(e1) >= grid0 - 0.01);
}

TEST_CASE("basis gap witnesses satisfy their constraints") {
  const Instance e1 = builtin_instance("E1");
  for (const Basis& J : {Basis({1, 2}), Basis({0, 2})}) {
    const GapWitness w = basis_gap_witness(e1, J);
    REQUIRE(std::isfinite(w.value));
    check_basis_witness(e1, J, w);
  }
}

TEST_CASE("the infeasibility witness breaks the optimal basis") {
  const Instance e1 = builtin_instance("E1");
  const GapWitness w = infeasibility_gap_witness(e1);
  CHECK(w.value == doctest::Approx(4.0).epsilon(0.0125));
  Instance alt = e1;
  alt.rewards = w.rewards;
  alt.costs = w.costs;
  const auto out = basic_solution(build_standard_form(alt), Basis({0, 1}));
  if (const auto* f = std::get_if<FeasibleBasis>(&out)) {
    CHECK(*std::min_element(f->x_basis.begin(), f->x_basis.end()) <= kFeasTol);
  }
}

TEST_CASE("arm gaps and rates of E1") {
  const Instance e1 = builtin_instance("E1");
  CHECK(estimate_delta_a(e1, 0) == 0.0);
  CHECK(estimate_delta_a(e1, 1) == 0.0);
  CHECK(estimate_delta_a(e1, 2) == doctest::Approx(0.5).epsilon(0.02));
  const GapReport report = gap_report(e1);
  CHECK(report.delta0_sq == doctest::Approx(4.0).epsilon(0.0125));
  CHECK(report.basis_gaps.size() == 3);
  CHECK(report.sorted_gaps.front() == 0.0);
  CHECK(report.sorted_columns.back() == 2);
  const RateBounds rates = rate_bounds(e1, report);
  CHECK(rates.lower_bound_rate == doctest::Approx(0.25).epsilon(0.04));
  CHECK(rates.uslp_rate == doctest::Approx(0.125).epsilon(0.04));
}

TEST_CASE("cost gaps scale with the cost noise level") {
  Instance e1 = builtin_instance("E1");
  e1.sigma_c = 1.0;
  CHECK(estimate_delta0(e1) == doctest::Approx(1.0).epsilon(0.0125));
  CHECK(estimate_delta_J(e1, Basis({0, 2})) == doctest::Approx(1.0).epsilon(0.0125));
}

TEST_CASE("serial and parallel gap reports agree") {
  const Instance e1 = builtin_instance("E1");
  GapOptions opt;
  opt.restarts = 16;
  const GapReport a = gap_report(e1, opt, Execution::Serial);
  const GapReport b = gap_report(e1, opt, Execution::Parallel);
  CHECK(a.delta0_sq == b.delta0_sq);
  REQUIRE(a.basis_gaps.size() == b.basis_gaps.size());
  for (size_t i = 0; i < a.basis_gaps.size(); ++i) CHECK(a.basis_gaps[i].delta_sq == b.basis_gaps[i].delta_sq);
}

TEST_CASE("gaps need a well-posed instance") {
  CHECK_THROWS_AS(estimate_delta0(builtin_instance("E2")), AssumptionError);
  CHECK_THROWS_AS(estimate_delta0(noise_free(builtin_instance("E1"))), AssumptionError);
  CHECK_THROWS_AS(estimate_delta_J(builtin_instance("E1"), Basis({0, 1, 2})), std::invalid_argument);
}
