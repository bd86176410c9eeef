#include "cbmai/harness.hpp"

#include <algorithm>
#include <cmath>

namespace cbmai {

Interval ci95(long errors, long trials) {
  if (trials < 1 || errors < 0 || errors > trials) throw std::invalid_argument("ci95: need 0 <= errors <= trials, trials >= 1");
  const double p = static_cast<double>(errors) / static_cast<double>(trials);
  const double half = 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
  return {std::clamp(p - half, 0.0, 1.0), std::clamp(p + half, 0.0, 1.0)};
}

std::uint64_t trial_seed(std::uint64_t base_seed, Algorithm algorithm, long trial) {
  const std::uint64_t offset = static_cast<std::uint64_t>(algorithm);
  return base_seed + offset * kAlgorithmSeedStride + static_cast<std::uint64_t>(trial);
}

bool is_correct(const Identification& output, const TrueOptimum& truth) {
  if (!truth.feasible()) return std::holds_alternative<InfeasibleVerdict>(output);
  const auto* support = std::get_if<SupportOutcome>(&output);
  return support != nullptr && support->support == truth.solved().optimal_basis.indices();
}

long count_errors(const Instance& instance, const TrueOptimum& truth, Algorithm algorithm,
                  long budget, long trials, std::uint64_t base_seed, Execution execution) {
  long errors = 0;
  auto one = [&](long t) -> long {
    NormalStream rng(trial_seed(base_seed, algorithm, t));
    return is_correct(run_algorithm(algorithm, instance, budget, rng), truth) ? 0 : 1;
  };
  if (execution == Execution::Parallel) {
#pragma omp parallel for reduction(+ : errors) schedule(dynamic, 16)
    for (long t = 0; t < trials; ++t) errors += one(t);
  } else {
    for (long t = 0; t < trials; ++t) errors += one(t);
  }
  return errors;
}

std::vector<CellResult> run_trials(const ExperimentSpec& spec, Execution execution) {
  spec.instance.validate();
  if (spec.trials < 1) throw std::invalid_argument("run_trials: trials must be at least 1");
  for (long n : spec.budgets) {
    if (n <= spec.instance.K0) throw std::invalid_argument("run_trials: every budget must exceed K0");
  }
  const TrueOptimum truth = true_optimum(spec.instance);
  if (truth.feasible() && !truth.solved().assumption_ok && !spec.force) {
    throw InstanceValidationError("instance '" + spec.instance.name +
                                  "' has no unique optimum with L + 1 nonzero coordinates");
  }
  std::vector<CellResult> results;
  for (Algorithm algorithm : spec.algorithms) {
    for (long budget : spec.budgets) {
      CellResult cell;
      cell.instance = spec.instance.name;
      cell.algorithm = algorithm;
      cell.budget = budget;
      cell.trials = spec.trials;
      cell.base_seed = spec.base_seed;
      cell.errors = count_errors(spec.instance, truth, algorithm, budget, spec.trials,
                                 spec.base_seed, execution);
      cell.error_rate = static_cast<double>(cell.errors) / static_cast<double>(cell.trials);
      const Interval ci = ci95(cell.errors, cell.trials);
      cell.ci_low = ci.low;
      cell.ci_high = ci.high;
      results.push_back(cell);
    }
  }
  return results;
}

double decay_fit(std::span<const long> budgets, std::span<const double> error_rates) {
  if (budgets.size() != error_rates.size()) throw std::invalid_argument("decay_fit: length mismatch");
  std::vector<double> xs, ys;
  for (size_t i = 0; i < budgets.size(); ++i) {
    if (error_rates[i] > 0.0 && error_rates[i] < 1.0) {
      xs.push_back(static_cast<double>(budgets[i]));
      ys.push_back(std::log(error_rates[i]));
    }
  }
  if (xs.size() < 3) throw std::invalid_argument("decay_fit: need at least three error rates in (0, 1)");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx == 0.0) throw std::invalid_argument("decay_fit: budgets must differ");
  return sxy / sxx;
}

double decay_fit(std::span<const CellResult> results) {
  std::vector<long> budgets;
  std::vector<double> rates;
  for (const CellResult& c : results) {
    budgets.push_back(c.budget);
    rates.push_back(c.error_rate);
  }
  return decay_fit(budgets, rates);
}

}  // namespace cbmai
