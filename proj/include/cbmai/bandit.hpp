#pragma once

// Gaussian sampling environment, empirical-mean bookkeeping, and the true
// optimum of an instance.

#include <cstdint>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include "cbmai/instance.hpp"
#include "cbmai/linear_program.hpp"

namespace cbmai {

inline constexpr double kSupportTol = 1e-7;
inline constexpr double kUniqueTol = 1e-7;

/// Standard normal variates from a 64-bit Mersenne Twister. Each variate
/// consumes exactly two engine outputs (Box-Muller, cosine branch only), so
/// a given seed yields the same sequence on every platform.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

  double next();
  /// Uniform in (0, 1].
  double uniform();
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

struct Observation {
  double reward = 0.0;
  std::vector<double> costs;
};

/// Draws one observation of an unknown arm: reward first, then costs in
/// order l = 0..L-1. Throws std::out_of_range for known arms.
Observation sample_pull(const Instance& instance, int arm, NormalStream& rng);

/// Running sums for the unknown arms.
class EmpiricalState {
 public:
  EmpiricalState(int num_unknown, int num_constraints);

  void record(int arm, const Observation& obs);
  /// Pulls `arm` `count` times, consuming the same draws in the same order as
  /// `count` calls to sample_pull, and returns the number of pulls made.
  long pull(const Instance& instance, int arm, long count, NormalStream& rng);

  long pulls(int arm) const { return pull_counts_[arm]; }
  long total_pulls() const;
  double mean_reward(int arm) const;
  double mean_cost(int l, int arm) const;

  int num_unknown() const { return static_cast<int>(pull_counts_.size()); }
  int num_constraints() const { return num_constraints_; }

 private:
  int num_constraints_;
  std::vector<long> pull_counts_;
  std::vector<double> reward_sums_;
  std::vector<double> cost_sums_;  // L x K0, row-major
};

/// Empirical LP restricted to a subset of columns: the objective and
/// constraint columns use empirical means for unknown arms and true or
/// structural values elsewhere. `columns[j]` names the original column.
struct EmpiricalLp {
  std::vector<int> columns;
  std::vector<double> objective;
  Matrix constraints;
  std::vector<double> rhs;
};

/// Throws std::invalid_argument if an unknown arm in `remaining` has no pulls.
EmpiricalLp empirical_views(const EmpiricalState& state, const Instance& instance,
                            std::span<const int> remaining);

struct InfeasibleTruth {};
struct SolvedTruth {
  Basis optimal_basis;
  std::vector<double> x_star;
  double value = 0.0;
  bool assumption_ok = false;
};

struct TrueOptimum {
  std::variant<InfeasibleTruth, SolvedTruth> status;

  bool feasible() const { return std::holds_alternative<SolvedTruth>(status); }
  const SolvedTruth& solved() const { return std::get<SolvedTruth>(status); }
};

/// Solves the true-mean LP and checks for a unique optimum supported on
/// exactly L + 1 coordinates.
TrueOptimum true_optimum(const Instance& instance);

}  // namespace cbmai
