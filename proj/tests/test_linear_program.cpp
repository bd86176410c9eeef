#include <doctest.h>

#include <random>

#include "cbmai/catalog.hpp"
#include "cbmai/linear_program.hpp"
#include "oracles.hpp"

using namespace cbmai;

namespace {

std::vector<double> basis_values(const BasicSolveOutcome& out) {
  REQUIRE(std::holds_alternative<FeasibleBasis>(out));
  return std::get<FeasibleBasis>(out).x_basis;
}

}  // namespace

TEST_CASE("standard form of E1") {
  const StandardLp lp = build_standard_form(builtin_instance("E1"));
  CHECK(lp.num_vars() == 3);
  CHECK(lp.num_rows() == 2);
  Matrix A(2, 3);
  A(0, 0) = 2.0;
  A(0, 2) = 1.0;
  A(1, 0) = 1.0;
  A(1, 1) = 1.0;
  CHECK(lp.constraints == A);
  CHECK(lp.rhs == std::vector<double>{1.0, 1.0});
  CHECK(lp.objective == std::vector<double>{1.0, 0.0, 0.0});
}

TEST_CASE("basic solutions of E1") {
  const StandardLp lp = build_standard_form(builtin_instance("E1"));
  const auto x12 = basis_values(basic_solution(lp, Basis({0, 1})));
  CHECK(x12[0] == doctest::Approx(0.5));
  CHECK(x12[1] == doctest::Approx(0.5));
  CHECK(std::holds_alternative<InfeasibleBasis>(basic_solution(lp, Basis({0, 2}))));
  const auto x23 = basis_values(basic_solution(lp, Basis({1, 2})));
  CHECK(x23[0] == doctest::Approx(1.0));
  CHECK(x23[1] == doctest::Approx(1.0));
}

TEST_CASE("a singular basis is reported as such") {
  Matrix A(2, 3);
  A(0, 0) = 1.0;
  A(0, 1) = 1.0;
  A(0, 2) = 1.0;
  A(1, 0) = 1.0;
  A(1, 1) = 1.0;
  A(1, 2) = 0.0;
  const std::vector<double> b{1.0, 1.0};
  CHECK(std::holds_alternative<SingularBasis>(basic_solution(A, b, Basis({0, 1}))));
  CHECK_THROWS_AS(dual_certificate(A, std::vector<double>{1, 1, 0}, Basis({0, 1})), SingularBasisError);
}

TEST_CASE("Basis validates its indices") {
  CHECK_THROWS_AS(Basis({1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(Basis({0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(Basis({-1, 2}), std::invalid_argument);
  CHECK(Basis({0, 2}).contains(2));
  CHECK_FALSE(Basis({0, 2}).contains(1));
  CHECK(Basis({0, 1}) < Basis({0, 2}));
}

TEST_CASE("solve_primal on E1") {
  const StandardLp lp = build_standard_form(builtin_instance("E1"));
  const LpOutcome out = solve_primal(lp, lp.objective);
  REQUIRE(std::holds_alternative<Optimal>(out));
  const auto& opt = std::get<Optimal>(out);
  CHECK(opt.value == doctest::Approx(0.5));
  CHECK(opt.basis == Basis({0, 1}));
  CHECK(opt.x[0] == doctest::Approx(0.5));
  CHECK(opt.x[1] == doctest::Approx(0.5));
  CHECK(opt.x[2] == 0.0);

  SUBCASE("ties go to the lexicographically smallest basis") {
    const LpOutcome flat = solve_primal(lp, std::vector<double>{0, 0, 0});
    REQUIRE(std::holds_alternative<Optimal>(flat));
    CHECK(std::get<Optimal>(flat).value == 0.0);
    CHECK(std::get<Optimal>(flat).basis == Basis({0, 1}));
  }
}

TEST_CASE("solve_primal on E2 is infeasible") {
  const StandardLp lp = build_standard_form(builtin_instance("E2"));
  CHECK(std::holds_alternative<Infeasible>(solve_primal(lp, lp.objective)));
}

TEST_CASE("dual certificates of E1") {
  const StandardLp lp = build_standard_form(builtin_instance("E1"));
  const DualCertificate d12 = dual_certificate(lp, lp.objective, Basis({0, 1}));
  CHECK(d12.multipliers[0] == doctest::Approx(0.5));
  CHECK(d12.multipliers[1] == doctest::Approx(0.0));
  CHECK(d12.reduced_costs[0] == 0.0);
  CHECK(d12.reduced_costs[1] == 0.0);
  CHECK(d12.reduced_costs[2] == doctest::Approx(-0.5));

  const DualCertificate d23 = dual_certificate(lp, lp.objective, Basis({1, 2}));
  CHECK(d23.multipliers[0] == doctest::Approx(0.0));
  CHECK(d23.multipliers[1] == doctest::Approx(0.0));
  CHECK(d23.reduced_costs[0] == doctest::Approx(1.0));
}

TEST_CASE("optimal bases carry a nonpositive reduced cost vector and no duality gap") {
  std::mt19937_64 gen(11);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int K = 2 + static_cast<int>(gen() % 5);
    const int L = 1 + static_cast<int>(gen() % 3);
    const Instance inst = oracle::random_small_instance(gen, K, L);
    const StandardLp lp = build_standard_form(inst);
    const LpOutcome out = solve_primal(lp, lp.objective);
    if (!std::holds_alternative<Optimal>(out)) continue;
    const auto& opt = std::get<Optimal>(out);
    const DualCertificate d = dual_certificate(lp, lp.objective, opt.basis);
    for (double rc : d.reduced_costs) CHECK(rc <= 1e-7);
    double dual_value = 0.0;
    for (int i = 0; i < lp.num_rows(); ++i) dual_value += d.multipliers[i] * lp.rhs[i];
    CHECK(dual_value == doctest::Approx(opt.value).epsilon(1e-9));
    for (double x : opt.x) CHECK(x >= 0.0);
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("solve_primal agrees with a dense simplex grid") {
  std::mt19937_64 gen(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const int K = 2 + static_cast<int>(gen() % 2);
    const int L = 1 + static_cast<int>(gen() % 2);
    const Instance inst = oracle::random_small_instance(gen, K, L);
    const StandardLp lp = build_standard_form(inst);
    const LpOutcome out = solve_primal(lp, lp.objective);
    const oracle::GridLp grid = oracle::grid_lp(inst, 200, 0.05);
    if (std::holds_alternative<Infeasible>(out)) {
      CHECK_FALSE(grid.strict.has_value());
      continue;
    }
    const double value = std::get<Optimal>(out).value;
    CHECK(grid.relaxed.has_value());
    if (grid.strict) {
      CHECK(*grid.strict <= value + 1e-9);
      CHECK(value - *grid.strict <= 0.02);
    }
  }
}
