#pragma once

// Monte Carlo error-rate experiments.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cbmai/algorithms.hpp"
#include "cbmai/bandit.hpp"
#include "cbmai/hardness.hpp"

namespace cbmai {

class InstanceValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentSpec {
  Instance instance;
  std::vector<Algorithm> algorithms;
  std::vector<long> budgets;
  long trials = 1000;
  std::uint64_t base_seed = 1;
  bool force = false;  // run even if the optimum is not unique
};

struct CellResult {
  std::string instance;
  Algorithm algorithm = Algorithm::SfsrIv;
  long budget = 0;
  long trials = 0;
  long errors = 0;
  double error_rate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t base_seed = 0;

  bool operator==(const CellResult&) const = default;
};

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

/// Normal-approximation 95% interval p +- 1.96 sqrt(p (1 - p) / n), clamped
/// to [0, 1].
Interval ci95(long errors, long trials);

inline constexpr std::uint64_t kAlgorithmSeedStride = 10'000'000ULL;

/// base_seed + offset * 10^7 + trial, offset 0/1/2 for sfsr-iv/sfsr-l/uslp.
std::uint64_t trial_seed(std::uint64_t base_seed, Algorithm algorithm, long trial);

/// Strict criterion: the output support equals I* exactly, or the verdict is
/// infeasible when the instance is.
bool is_correct(const Identification& output, const TrueOptimum& truth);

/// Counts misidentifications over `trials` independent runs. The serial and
/// parallel paths produce identical counts.
long count_errors(const Instance& instance, const TrueOptimum& truth, Algorithm algorithm,
                  long budget, long trials, std::uint64_t base_seed, Execution execution);

/// One CellResult per (algorithm, budget), algorithms outer. Throws
/// InstanceValidationError for instances failing the uniqueness check
/// unless spec.force is set.
std::vector<CellResult> run_trials(const ExperimentSpec& spec,
                                   Execution execution = Execution::Parallel);

/// Least-squares slope of log(error_rate) against budget over cells with
/// error_rate in (0, 1). Throws std::invalid_argument with fewer than three
/// such cells.
double decay_fit(std::span<const CellResult> results);
double decay_fit(std::span<const long> budgets, std::span<const double> error_rates);

}  // namespace cbmai
