#include "cbmai/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace cbmai {

double schedule_psi(int K0, int L) {
  double psi = 0.0;
  for (int j = 1; j <= K0; ++j) psi += 1.0 / std::max(2, j - L);
  return psi;
}

Schedule pull_schedule(long budget, int K, int K0, int L) {
  if (K < 1 || K0 < 1 || K0 > K || L < 1) throw std::invalid_argument("pull_schedule: bad dimensions");
  if (budget <= K0) {
    throw std::invalid_argument("pull_schedule: budget " + std::to_string(budget) +
                                " must exceed the number of unknown arms");
  }
  Schedule s;
  s.psi = schedule_psi(K0, L);
  const double spare = static_cast<double>(budget - K0);
  long prev = 0;
  for (int k = 1; k <= K - 1; ++k) {
    const long n = static_cast<long>(std::ceil(spare / (s.psi * (K + 1 - k))));
    s.cumulative.push_back(n);
    s.rounds.push_back(n - prev);
    prev = n;
  }
  return s;
}

std::vector<Score> iv_scores(const EmpiricalLp& view) {
  const int m = view.constraints.cols();
  const int n = view.constraints.rows();
  if (m < n) throw std::invalid_argument("iv_scores: fewer columns than rows");
  std::vector<double> best(m, 0.0);
  std::vector<char> seen(m, 0);
  for_each_feasible_basis(view.constraints, view.rhs,
                          [&](std::span<const int> idx, std::span<const double> y) {
                            double value = 0.0;
                            for (int i = 0; i < n; ++i) value += view.objective[idx[i]] * y[i];
                            for (int j : idx) {
                              if (!seen[j] || value > best[j]) {
                                best[j] = value;
                                seen[j] = 1;
                              }
                            }
                          });
  std::vector<Score> scores;
  scores.reserve(m);
  for (int j = 0; j < m; ++j) {
    scores.push_back(seen[j] ? Score::finite(best[j]) : Score::neg_infinity());
  }
  return scores;
}

std::vector<Score> lagrangian_scores(const EmpiricalLp& view) {
  const int m = view.constraints.cols();
  if (m < view.constraints.rows()) throw std::invalid_argument("lagrangian_scores: fewer columns than rows");
  const LpOutcome outcome = solve_primal(view.constraints, view.rhs, view.objective);
  if (std::holds_alternative<Infeasible>(outcome)) {
    return std::vector<Score>(m, Score::neg_infinity());
  }
  const auto& opt = std::get<Optimal>(outcome);
  const DualCertificate cert = dual_certificate(view.constraints, view.objective, opt.basis);
  std::vector<Score> scores;
  scores.reserve(m);
  for (double rc : cert.reduced_costs) scores.push_back(Score::finite(rc));
  return scores;
}

std::optional<std::vector<double>> mixture_estimate(const EmpiricalLp& view) {
  const int n = view.constraints.rows();
  if (view.constraints.cols() != n) return std::nullopt;
  double square[kMaxRows * kMaxRows];
  std::vector<double> x(view.rhs);
  for (int r = 0; r < n; ++r) {
    for (int j = 0; j < n; ++j) square[r * n + j] = view.constraints(r, j);
  }
  const double det = detail::solve_in_place(square, x.data(), n);
  if (!(std::abs(det) > kSingularTol)) return std::nullopt;
  return x;
}

namespace {

std::vector<int> all_columns(const Instance& instance) {
  std::vector<int> cols(instance.num_vars());
  std::iota(cols.begin(), cols.end(), 0);
  return cols;
}

void note_pulls(RunTrace* trace, int arm, long count) {
  if (trace == nullptr) return;
  trace->total_pulls += count;
  trace->pulls_per_column[arm] += count;
}

SupportOutcome finish_support(const EmpiricalState& state, const Instance& instance,
                              const std::vector<int>& remaining) {
  SupportOutcome out;
  out.support = remaining;
  const bool all_pulled = std::all_of(remaining.begin(), remaining.end(), [&](int col) {
    return !instance.is_unknown_arm(col) || state.pulls(col) > 0;
  });
  if (all_pulled) out.mixture = mixture_estimate(empirical_views(state, instance, remaining));
  return out;
}

}  // namespace

Identification sfsr_run(const Instance& instance, long budget, ScoreFlavor flavor,
                        NormalStream& rng, RunTrace* trace) {
  const Schedule schedule = pull_schedule(budget, instance.K, instance.K0, instance.L);
  if (trace != nullptr) *trace = RunTrace{0, 0, {}, {}, std::vector<long>(instance.num_vars(), 0)};

  EmpiricalState state(instance.K0, instance.L);
  std::vector<int> remaining = all_columns(instance);
  for (int k = 0; k < instance.K - 1; ++k) {
    const long pulls = schedule.rounds[k];
    for (int col : remaining) {
      if (instance.is_unknown_arm(col)) note_pulls(trace, col, state.pull(instance, col, pulls, rng));
    }
    const EmpiricalLp view = empirical_views(state, instance, remaining);
    const std::vector<Score> scores =
        flavor == ScoreFlavor::IntersectionValue ? iv_scores(view) : lagrangian_scores(view);

    const auto best = std::max_element(scores.begin(), scores.end());
    if (!best->is_finite()) return InfeasibleVerdict{};
    // min_element keeps the first minimum, and `remaining` is sorted, so
    // ties go to the smallest column index.
    const auto worst = std::min_element(scores.begin(), scores.end());
    const int victim = static_cast<int>(worst - scores.begin());
    if (trace != nullptr) {
      trace->eliminated.push_back(remaining[victim]);
      ++trace->rounds;
    }
    remaining.erase(remaining.begin() + victim);
    if (trace != nullptr) trace->remaining_after_round.push_back(static_cast<int>(remaining.size()));
  }
  return finish_support(state, instance, remaining);
}

Identification uslp_run(const Instance& instance, long budget, NormalStream& rng, RunTrace* trace) {
  const long per_arm = budget / instance.K0;
  if (per_arm < 1) {
    throw std::invalid_argument("uslp_run: budget " + std::to_string(budget) +
                                " admits no pulls per unknown arm");
  }
  if (trace != nullptr) *trace = RunTrace{0, 0, {}, {}, std::vector<long>(instance.num_vars(), 0)};
  EmpiricalState state(instance.K0, instance.L);
  for (int arm = 0; arm < instance.K0; ++arm) note_pulls(trace, arm, state.pull(instance, arm, per_arm, rng));

  const std::vector<int> cols = all_columns(instance);
  const EmpiricalLp view = empirical_views(state, instance, cols);
  const LpOutcome outcome = solve_primal(view.constraints, view.rhs, view.objective);
  if (std::holds_alternative<Infeasible>(outcome)) return InfeasibleVerdict{};
  const auto& opt = std::get<Optimal>(outcome);
  SupportOutcome out;
  out.support = opt.basis.indices();
  out.mixture.emplace();
  for (int col : out.support) out.mixture->push_back(opt.x[col]);
  return out;
}

std::string_view algorithm_name(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::SfsrIv:
      return "sfsr-iv";
    case Algorithm::SfsrL:
      return "sfsr-l";
    case Algorithm::Uslp:
      return "uslp";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "sfsr-iv") return Algorithm::SfsrIv;
  if (name == "sfsr-l") return Algorithm::SfsrL;
  if (name == "uslp") return Algorithm::Uslp;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

Identification run_algorithm(Algorithm algorithm, const Instance& instance, long budget,
                             NormalStream& rng, RunTrace* trace) {
  switch (algorithm) {
    case Algorithm::SfsrIv:
      return sfsr_run(instance, budget, ScoreFlavor::IntersectionValue, rng, trace);
    case Algorithm::SfsrL:
      return sfsr_run(instance, budget, ScoreFlavor::Lagrangian, rng, trace);
    case Algorithm::Uslp:
      return uslp_run(instance, budget, rng, trace);
  }
  throw std::invalid_argument("run_algorithm: bad algorithm");
}

}  // namespace cbmai
