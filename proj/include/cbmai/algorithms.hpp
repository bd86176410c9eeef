#pragma once

// Score-function successive reject (SFSR) and the uniform-sampling baseline.

#include <compare>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "cbmai/bandit.hpp"

namespace cbmai {

/// A per-arm score; an empty score stands for minus infinity and orders
/// strictly below every finite score.
class Score {
 public:
  static Score finite(double value) { return Score(value); }
  static Score neg_infinity() { return Score(); }

  bool is_finite() const { return value_.has_value(); }
  double value() const { return value_.value(); }

  friend bool operator==(const Score&, const Score&) = default;
  friend std::partial_ordering operator<=>(const Score& a, const Score& b) {
    if (!a.is_finite() || !b.is_finite()) return a.is_finite() <=> b.is_finite();
    return *a.value_ <=> *b.value_;
  }

 private:
  Score() = default;
  explicit Score(double v) : value_(v) {}
  std::optional<double> value_;
};

struct Schedule {
  double psi = 0.0;
  std::vector<long> rounds;      // T_k, k = 1..K-1
  std::vector<long> cumulative;  // n_k, k = 1..K-1
};

/// n_k = ceil((N - K0) / (psi * (K + 1 - k))) with
/// psi = sum_{j=1..K0} 1 / max(2, j - L). Throws if budget <= K0.
Schedule pull_schedule(long budget, int K, int K0, int L);

double schedule_psi(int K0, int L);

/// Per-column maximum LP value over feasible nonsingular bases of the view
/// containing that column, from a single enumeration pass.
std::vector<Score> iv_scores(const EmpiricalLp& view);

/// Per-column reduced costs at the optimal dual of the view, or all minus
/// infinity when the view's primal is infeasible.
std::vector<Score> lagrangian_scores(const EmpiricalLp& view);

enum class ScoreFlavor { IntersectionValue, Lagrangian };

struct SupportOutcome {
  std::vector<int> support;
  std::optional<std::vector<double>> mixture;
};
struct InfeasibleVerdict {};
using Identification = std::variant<SupportOutcome, InfeasibleVerdict>;

/// Optional per-run diagnostics.
struct RunTrace {
  long total_pulls = 0;
  int rounds = 0;
  std::vector<int> eliminated;
  std::vector<int> remaining_after_round;
  std::vector<long> pulls_per_column;  // length K + L
};

Identification sfsr_run(const Instance& instance, long budget, ScoreFlavor flavor,
                        NormalStream& rng, RunTrace* trace = nullptr);

/// Pulls each unknown arm floor(N / K0) times and solves the empirical LP.
Identification uslp_run(const Instance& instance, long budget, NormalStream& rng,
                        RunTrace* trace = nullptr);

/// Final mixture A_X^{-1} b for a support view, or nullopt if singular.
std::optional<std::vector<double>> mixture_estimate(const EmpiricalLp& view);

enum class Algorithm { SfsrIv, SfsrL, Uslp };

std::string_view algorithm_name(Algorithm algorithm);
/// Accepts "sfsr-iv", "sfsr-l", "uslp"; throws std::invalid_argument.
Algorithm parse_algorithm(std::string_view name);

Identification run_algorithm(Algorithm algorithm, const Instance& instance, long budget,
                             NormalStream& rng, RunTrace* trace = nullptr);

}  // namespace cbmai
