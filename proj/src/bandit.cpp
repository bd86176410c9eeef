#include "cbmai/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cbmai {

double NormalStream::uniform() {
  // 53 random bits, shifted off zero so the logarithm below stays finite.
  return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

double NormalStream::next() {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Observation sample_pull(const Instance& instance, int arm, NormalStream& rng) {
  if (!instance.is_unknown_arm(arm)) {
    throw std::out_of_range("sample_pull: arm " + std::to_string(arm) + " is not an unknown arm");
  }
  Observation obs;
  obs.reward = instance.rewards[arm] + instance.sigma_r * rng.next();
  obs.costs.resize(instance.L);
  for (int l = 0; l < instance.L; ++l) {
    obs.costs[l] = instance.costs(l, arm) + instance.sigma_c * rng.next();
  }
  return obs;
}

EmpiricalState::EmpiricalState(int num_unknown, int num_constraints)
    : num_constraints_(num_constraints),
      pull_counts_(num_unknown, 0),
      reward_sums_(num_unknown, 0.0),
      cost_sums_(static_cast<size_t>(num_unknown) * num_constraints, 0.0) {}

void EmpiricalState::record(int arm, const Observation& obs) {
  ++pull_counts_.at(arm);
  reward_sums_[arm] += obs.reward;
  for (int l = 0; l < num_constraints_; ++l) {
    cost_sums_[static_cast<size_t>(l) * num_unknown() + arm] += obs.costs[l];
  }
}

long EmpiricalState::pull(const Instance& instance, int arm, long count, NormalStream& rng) {
  if (!instance.is_unknown_arm(arm)) {
    throw std::out_of_range("pull: arm " + std::to_string(arm) + " is not an unknown arm");
  }
  const int L = num_constraints_;
  const double r = instance.rewards[arm];
  double& reward_sum = reward_sums_[arm];
  for (long t = 0; t < count; ++t) {
    reward_sum += r + instance.sigma_r * rng.next();
    for (int l = 0; l < L; ++l) {
      cost_sums_[static_cast<size_t>(l) * num_unknown() + arm] +=
          instance.costs(l, arm) + instance.sigma_c * rng.next();
    }
  }
  pull_counts_[arm] += count;
  return count;
}

long EmpiricalState::total_pulls() const {
  long total = 0;
  for (long c : pull_counts_) total += c;
  return total;
}

double EmpiricalState::mean_reward(int arm) const {
  return reward_sums_[arm] / static_cast<double>(pull_counts_[arm]);
}

double EmpiricalState::mean_cost(int l, int arm) const {
  return cost_sums_[static_cast<size_t>(l) * num_unknown() + arm] /
         static_cast<double>(pull_counts_[arm]);
}

EmpiricalLp empirical_views(const EmpiricalState& state, const Instance& instance,
                            std::span<const int> remaining) {
  const int K = instance.K;
  const int L = instance.L;
  EmpiricalLp view;
  view.columns.assign(remaining.begin(), remaining.end());
  const int m = static_cast<int>(remaining.size());
  view.objective.assign(m, 0.0);
  view.constraints = Matrix(L + 1, m);
  for (int j = 0; j < m; ++j) {
    const int col = remaining[j];
    if (col < 0 || col >= K + L) throw std::out_of_range("empirical_views: column out of range");
    if (col < K) {
      const bool empirical = instance.is_unknown_arm(col);
      if (empirical && state.pulls(col) == 0) {
        throw std::invalid_argument("empirical_views: unknown arm " + std::to_string(col) +
                                    " has no pulls");
      }
      view.objective[j] = empirical ? state.mean_reward(col) : instance.rewards[col];
      for (int l = 0; l < L; ++l) {
        view.constraints(l, j) = empirical ? state.mean_cost(l, col) : instance.costs(l, col);
      }
      view.constraints(L, j) = 1.0;
    } else {
      view.constraints(col - K, j) = 1.0;
    }
  }
  view.rhs = standard_rhs(instance);
  return view;
}

TrueOptimum true_optimum(const Instance& instance) {
  const StandardLp lp = build_standard_form(instance);
  const LpOutcome outcome = solve_primal(lp, lp.objective);
  if (std::holds_alternative<Infeasible>(outcome)) return TrueOptimum{InfeasibleTruth{}};
  const auto& opt = std::get<Optimal>(outcome);

  SolvedTruth solved;
  solved.optimal_basis = opt.basis;
  solved.x_star = opt.x;
  solved.value = opt.value;

  int support = 0;
  for (double v : opt.x) support += v > kSupportTol ? 1 : 0;
  bool unique = true;
  const int n = lp.num_rows();
  for_each_feasible_basis(lp.constraints, lp.rhs,
                          [&](std::span<const int> idx, std::span<const double> y) {
                            if (std::equal(idx.begin(), idx.end(),
                                           opt.basis.indices().begin())) {
                              return;
                            }
                            double value = 0.0;
                            for (int i = 0; i < n; ++i) value += lp.objective[idx[i]] * y[i];
                            if (value >= opt.value - kUniqueTol) unique = false;
                          });
  // The optimal basis came out of the enumeration, so it is nonsingular.
  solved.assumption_ok = support == lp.num_rows() && unique;
  return TrueOptimum{std::move(solved)};
}

}  // namespace cbmai
