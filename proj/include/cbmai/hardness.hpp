#pragma once

// Numerical estimates of the instance hardness gaps and the rate exponents
// built from them.
//
// Each gap is the squared, variance-normalized distance from the true means
// to the nearest alternative instance satisfying some condition on the
// optimal basis I*. The estimates come from multi-start penalty
// minimization, and every finite estimate is backed by a witness instance
// that satisfies the defining constraints to within kFeasTol. Estimates are
// therefore upper bounds on the true infimum.

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "cbmai/bandit.hpp"
#include "cbmai/instance.hpp"

namespace cbmai {

inline constexpr double kGapTol = 1e-3;
inline constexpr double kInfiniteGap = std::numeric_limits<double>::infinity();

class AssumptionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class Execution { Serial, Parallel };

struct GapOptions {
  int restarts = 64;
  int penalty_rounds = 10;
  double initial_weight = 10.0;
  std::uint64_t seed = 0x5eed'0f'9a95ULL;
};

/// Perturbed means achieving `value`; rewards has K entries, costs is L x K.
/// Only unknown arms differ from the instance. Empty when value is infinite.
struct GapWitness {
  double value = kInfiniteGap;
  std::vector<double> rewards;
  Matrix costs;
};

/// Basis value gap: cheapest move under which basis J is feasible, I* stays
/// feasible, and J's value is at least I*'s. Throws AssumptionError unless
/// the instance has a unique optimum with full support and positive noise.
GapWitness basis_gap_witness(const Instance& instance, const Basis& J, const GapOptions& options = {});
double estimate_delta_J(const Instance& instance, const Basis& J, const GapOptions& options = {});

/// Arm value gap: minimum basis gap over bases containing `column`.
double estimate_delta_a(const Instance& instance, int column, const GapOptions& options = {});

/// Optimal support infeasibility gap: cheapest cost move making A_{I*}
/// singular or its basic solution negative somewhere.
GapWitness infeasibility_gap_witness(const Instance& instance, const GapOptions& options = {});
double estimate_delta0(const Instance& instance, const GapOptions& options = {});

struct BasisGap {
  Basis basis;
  double delta_sq = kInfiniteGap;
};

struct GapReport {
  Basis optimal_basis;
  double delta0_sq = kInfiniteGap;
  std::vector<BasisGap> basis_gaps;  // every (L+1)-subset, lexicographic
  std::vector<double> arm_gaps;      // length K + L
  std::vector<double> sorted_gaps;   // nondecreasing
  std::vector<int> sorted_columns;   // column achieving each sorted gap
  /// N_tilde = (N - K0) * n_tilde_coefficient.
  double n_tilde_coefficient = 0.0;
};

GapReport gap_report(const Instance& instance, const GapOptions& options = {},
                     Execution execution = Execution::Parallel);

struct RateBounds {
  double sfsr_exponent_coeff = 0.0;
  double lower_bound_rate = 0.0;
  double uslp_rate = 0.0;
};

RateBounds rate_bounds(const Instance& instance, const GapReport& gaps);

}  // namespace cbmai
