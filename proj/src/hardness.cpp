#include "cbmai/hardness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>

namespace cbmai {

namespace {

constexpr double kUnsolvedViolation = 1e3;
constexpr double kProjectionMargin = 1e-13;
constexpr double kNearActive = 1e-10;
constexpr int kMaxLmIterations = 100;
constexpr int kMaxProjectionSteps = 50;
constexpr double kRestartScales[] = {0.03, 0.1, 0.3, 1.0};

SolvedTruth require_assumption(const Instance& instance) {
  instance.validate();
  if (!(instance.sigma_r > 0.0) || !(instance.sigma_c > 0.0)) {
    throw AssumptionError("hardness gaps need positive noise levels");
  }
  TrueOptimum truth = true_optimum(instance);
  if (!truth.feasible()) throw AssumptionError("instance is infeasible");
  if (!truth.solved().assumption_ok) {
    throw AssumptionError("instance optimum is not unique with exactly L + 1 nonzero coordinates");
  }
  return truth.solved();
}

// Maps a normalized perturbation vector u onto the means of selected unknown
// arms: r~ = r + sigma_r u, c~ = c + sigma_c u.
class PerturbationModel {
 public:
  PerturbationModel(const Instance& instance, const std::vector<int>& arms, bool move_rewards)
      : inst_(instance),
        move_rewards_(move_rewards),
        stride_(instance.L + (move_rewards ? 1 : 0)),
        slot_(instance.K, -1) {
    for (size_t p = 0; p < arms.size(); ++p) slot_[arms[p]] = static_cast<int>(p) * stride_;
    dim_ = static_cast<int>(arms.size()) * stride_;
  }

  int dim() const { return dim_; }

  double reward(std::span<const double> u, int col) const {
    if (col >= inst_.K) return 0.0;
    const int s = slot_[col];
    if (s < 0 || !move_rewards_) return inst_.rewards[col];
    return inst_.rewards[col] + inst_.sigma_r * u[s];
  }

  double cost(std::span<const double> u, int l, int col) const {
    const int s = slot_[col];
    if (s < 0) return inst_.costs(l, col);
    return inst_.costs(l, col) + inst_.sigma_c * u[s + (move_rewards_ ? 1 : 0) + l];
  }

  // Fills the square constraint matrix of a basis (row-major).
  void fill(std::span<const double> u, std::span<const int> basis, double* square) const {
    const int n = inst_.L + 1;
    for (int j = 0; j < n; ++j) {
      const int col = basis[j];
      for (int r = 0; r < n; ++r) square[r * n + j] = 0.0;
      if (col < inst_.K) {
        for (int l = 0; l < inst_.L; ++l) square[l * n + j] = cost(u, l, col);
        square[inst_.L * n + j] = 1.0;
      } else {
        square[(col - inst_.K) * n + j] = 1.0;
      }
    }
  }

  // Basic solution and its value; false when the basis is singular.
  bool solve(std::span<const double> u, std::span<const int> basis, double* x, double& value) const {
    const int n = inst_.L + 1;
    double square[kMaxRows * kMaxRows];
    fill(u, basis, square);
    for (int r = 0; r < inst_.L; ++r) x[r] = inst_.cost_bounds[r];
    x[inst_.L] = 1.0;
    const double det = detail::solve_in_place(square, x, n);
    if (!(std::abs(det) > kSingularTol)) return false;
    value = 0.0;
    for (int j = 0; j < n; ++j) value += reward(u, basis[j]) * x[j];
    return true;
  }

  double determinant(std::span<const double> u, std::span<const int> basis) const {
    const int n = inst_.L + 1;
    double square[kMaxRows * kMaxRows];
    double scratch[kMaxRows] = {};
    fill(u, basis, square);
    return detail::solve_in_place(square, scratch, n);
  }

  GapWitness witness(std::span<const double> u, double value) const {
    GapWitness w;
    w.value = value;
    w.rewards = inst_.rewards;
    w.costs = inst_.costs;
    for (int a = 0; a < inst_.K; ++a) {
      w.rewards[a] = reward(u, a);
      for (int l = 0; l < inst_.L; ++l) w.costs(l, a) = cost(u, l, a);
    }
    return w;
  }

 private:
  const Instance& inst_;
  bool move_rewards_;
  int stride_;
  int dim_ = 0;
  std::vector<int> slot_;
};

// Find the smallest ||u||^2 with g(u) >= 0 (or g(u) == 0 for equality
// problems). `constraints` returns false where g is undefined.
struct ConstraintProblem {
  int dim = 0;
  int count = 0;
  bool equality = false;
  std::function<bool(std::span<const double>, std::span<double>)> constraints;
};

double squared_norm(std::span<const double> u) {
  return std::inner_product(u.begin(), u.end(), u.begin(), 0.0);
}

class PenaltySolver {
 public:
  explicit PenaltySolver(const ConstraintProblem& problem)
      : p_(problem), g_(problem.count), g2_(problem.count) {}

  bool satisfied(std::span<const double> u, double slack) {
    if (!p_.constraints(u, g_)) return false;
    for (double v : g_) {
      if (p_.equality ? !(std::abs(v) <= kSingularTol) : !(v >= -slack)) return false;
    }
    return true;
  }

  // Penalized minimization from u, then projection onto the constraint set.
  std::optional<double> solve(std::vector<double>& u, const GapOptions& options) {
    double weight = options.initial_weight;
    for (int round = 0; round < options.penalty_rounds; ++round) {
      levenberg_marquardt(u, weight);
      weight *= 2.0;
    }
    if (satisfied(u, 0.0)) return squared_norm(u);
    std::vector<double> projected = u;
    if (project(projected) && satisfied(projected, kFeasTol)) {
      u = projected;
      return squared_norm(u);
    }
    if (satisfied(u, kFeasTol)) return squared_norm(u);
    return std::nullopt;
  }

 private:
  void violations(std::span<const double> u, std::vector<double>& v, bool& defined) {
    v.resize(p_.count);
    defined = p_.constraints(u, g2_);
    for (int j = 0; j < p_.count; ++j) {
      if (!defined) {
        v[j] = kUnsolvedViolation;
      } else {
        v[j] = p_.equality ? g2_[j] : std::max(0.0, -g2_[j]);
      }
    }
  }

  double penalized(std::span<const double> u, const std::vector<double>& v, double weight) {
    return squared_norm(u) + weight * squared_norm(v);
  }

  void levenberg_marquardt(std::vector<double>& u, double weight) {
    const int d = p_.dim;
    const int m = p_.count;
    std::vector<double> v, v_step, jac(static_cast<size_t>(m) * d), trial(d);
    std::vector<double> normal(static_cast<size_t>(d) * d), step(d);
    bool defined = false;
    violations(u, v, defined);
    double cost = penalized(u, v, weight);
    double damping = 1e-3;
    for (int iter = 0; iter < kMaxLmIterations; ++iter) {
      // Forward-difference Jacobian of the violation vector.
      for (int k = 0; k < d; ++k) {
        const double h = 1e-7 * std::max(1.0, std::abs(u[k]));
        trial = u;
        trial[k] += h;
        bool ok = false;
        violations(trial, v_step, ok);
        for (int j = 0; j < m; ++j) {
          jac[static_cast<size_t>(j) * d + k] = (ok && defined) ? (v_step[j] - v[j]) / h : 0.0;
        }
      }
      std::vector<double> grad(u);
      for (int k = 0; k < d; ++k) {
        for (int j = 0; j < m; ++j) grad[k] += weight * jac[static_cast<size_t>(j) * d + k] * v[j];
      }
      bool accepted = false;
      while (!accepted && damping < 1e12) {
        for (int a = 0; a < d; ++a) {
          for (int b = 0; b < d; ++b) {
            double acc = a == b ? 1.0 : 0.0;
            for (int j = 0; j < m; ++j) {
              acc += weight * jac[static_cast<size_t>(j) * d + a] * jac[static_cast<size_t>(j) * d + b];
            }
            normal[static_cast<size_t>(a) * d + b] = acc;
          }
          normal[static_cast<size_t>(a) * d + a] *= 1.0 + damping;
          step[a] = -grad[a];
        }
        if (detail::solve_in_place(normal.data(), step.data(), d) == 0.0) {
          damping *= 10.0;
          continue;
        }
        for (int k = 0; k < d; ++k) trial[k] = u[k] + step[k];
        bool ok = false;
        violations(trial, v_step, ok);
        const double trial_cost = penalized(trial, v_step, weight);
        if (trial_cost < cost) {
          accepted = true;
          const double improvement = cost - trial_cost;
          u = trial;
          v = v_step;
          defined = ok;
          cost = trial_cost;
          damping = std::max(damping * 0.3, 1e-12);
          if (improvement <= 1e-15 * (1.0 + cost) && squared_norm(step) < 1e-20) return;
        } else {
          damping *= 5.0;
        }
      }
      if (!accepted) return;
    }
  }

  // Gauss-Newton projection: minimum-norm corrections that move violated
  // constraints to zero (equalities always) while holding near-active ones in
  // place. Opposing constraints that pin a thin feasible set give a
  // rank-deficient system, hence the Tikhonov term.
  bool project(std::vector<double>& u) {
    const int d = p_.dim;
    std::vector<double> g(p_.count), gp(p_.count), gm(p_.count), probe(d);
    for (int it = 0; it < kMaxProjectionSteps; ++it) {
      if (!p_.constraints(u, g)) return false;
      std::vector<int> active;
      bool violated = false;
      for (int j = 0; j < p_.count; ++j) {
        if (p_.equality) {
          active.push_back(j);
          violated = violated || std::abs(g[j]) > 1e-15;
        } else if (g[j] < kNearActive) {
          active.push_back(j);
          violated = violated || g[j] < 0.0;
        }
      }
      if (!violated) return true;
      const int a = static_cast<int>(active.size());
      std::vector<double> grad(static_cast<size_t>(a) * d);
      for (int k = 0; k < d; ++k) {
        const double h = 1e-6 * std::max(1.0, std::abs(u[k]));
        probe = u;
        probe[k] += h;
        const bool up = p_.constraints(probe, gp);
        probe[k] = u[k] - h;
        const bool down = p_.constraints(probe, gm);
        for (int i = 0; i < a; ++i) {
          const int j = active[i];
          double slope = 0.0;
          if (up && down) {
            slope = (gp[j] - gm[j]) / (2.0 * h);
          } else if (up) {
            slope = (gp[j] - g[j]) / h;
          } else if (down) {
            slope = (g[j] - gm[j]) / h;
          }
          grad[static_cast<size_t>(i) * d + k] = slope;
        }
      }
      std::vector<double> gram(static_cast<size_t>(a) * a), rhs(a);
      double largest = 0.0;
      for (int i = 0; i < a; ++i) {
        const double gj = g[active[i]];
        rhs[i] = p_.equality ? -gj : (gj < 0.0 ? kProjectionMargin - gj : 0.0);
        for (int k = 0; k < a; ++k) {
          double acc = 0.0;
          for (int c = 0; c < d; ++c) {
            acc += grad[static_cast<size_t>(i) * d + c] * grad[static_cast<size_t>(k) * d + c];
          }
          gram[static_cast<size_t>(i) * a + k] = acc;
        }
        largest = std::max(largest, gram[static_cast<size_t>(i) * a + i]);
      }
      if (!(largest > 0.0)) return false;
      for (int i = 0; i < a; ++i) gram[static_cast<size_t>(i) * a + i] += 1e-12 * largest;
      if (detail::solve_in_place(gram.data(), rhs.data(), a) == 0.0) return false;
      for (int c = 0; c < d; ++c) {
        double delta = 0.0;
        for (int i = 0; i < a; ++i) delta += grad[static_cast<size_t>(i) * d + c] * rhs[i];
        u[c] += delta;
      }
    }
    return p_.constraints(u, g) &&
           std::all_of(g.begin(), g.end(), [&](double v) {
             return p_.equality ? std::abs(v) <= kSingularTol : v >= -kFeasTol;
           });
  }

  const ConstraintProblem& p_;
  std::vector<double> g_;
  std::vector<double> g2_;
};

std::uint64_t basis_seed(std::uint64_t seed, std::span<const int> cols, std::uint64_t salt) {
  std::uint64_t s = seed ^ (salt * 0x9E3779B97F4A7C15ULL);
  for (int c : cols) s = s * 1000003ULL + static_cast<std::uint64_t>(c + 1);
  return s;
}

// Multi-start driver: restart 0 starts at the true means, the others at
// Gaussian offsets of varying scale.
std::optional<std::pair<double, std::vector<double>>> multi_start(const ConstraintProblem& problem,
                                                                  const GapOptions& options,
                                                                  std::uint64_t seed) {
  PenaltySolver solver(problem);
  std::optional<std::pair<double, std::vector<double>>> best;
  NormalStream rng(seed);
  const int restarts = std::max(1, options.restarts);
  for (int r = 0; r < restarts; ++r) {
    std::vector<double> u(problem.dim, 0.0);
    if (r > 0) {
      const double scale = kRestartScales[(r - 1) % std::size(kRestartScales)];
      for (double& x : u) x = scale * rng.next();
    }
    // Nudge starts that sit on a singular configuration.
    std::vector<double> g(problem.count);
    for (int tries = 0; tries < 10 && !problem.constraints(u, g); ++tries) {
      for (double& x : u) x += 1e-3 * rng.next();
    }
    if (auto value = solver.solve(u, options)) {
      if (!best || *value < best->first) best.emplace(*value, u);
    }
    if (best && best->first <= 1e-15) break;
  }
  return best;
}

std::vector<int> unknown_arms_of(const Instance& instance, std::span<const int> a, std::span<const int> b) {
  std::vector<int> arms;
  for (int c : a) {
    if (instance.is_unknown_arm(c)) arms.push_back(c);
  }
  for (int c : b) {
    if (instance.is_unknown_arm(c)) arms.push_back(c);
  }
  std::sort(arms.begin(), arms.end());
  arms.erase(std::unique(arms.begin(), arms.end()), arms.end());
  return arms;
}

GapWitness basis_gap(const Instance& instance, const Basis& optimal, const Basis& J,
                     const GapOptions& options) {
  const int n = instance.L + 1;
  if (J.size() != n || J.indices().back() >= instance.num_vars()) {
    throw std::invalid_argument("basis gap: basis must hold L + 1 valid columns");
  }
  const auto& I = optimal.indices();
  const auto& Jc = J.indices();
  const PerturbationModel model(instance, unknown_arms_of(instance, I, Jc), true);
  ConstraintProblem problem;
  problem.dim = model.dim();
  problem.count = 2 * n + 1;
  problem.constraints = [&](std::span<const double> u, std::span<double> g) {
    double value_i = 0.0;
    double value_j = 0.0;
    if (!model.solve(u, I, g.data(), value_i)) return false;
    if (!model.solve(u, Jc, g.data() + n, value_j)) return false;
    g[2 * n] = value_j - value_i;
    return true;
  };
  auto best = multi_start(problem, options, basis_seed(options.seed, Jc, 1));
  if (!best) return GapWitness{};
  return model.witness(best->second, best->first);
}

GapWitness infeasibility_gap(const Instance& instance, const Basis& optimal, const GapOptions& options) {
  const int n = instance.L + 1;
  const auto& I = optimal.indices();
  const PerturbationModel model(instance, unknown_arms_of(instance, I, {}), false);
  if (model.dim() == 0) return GapWitness{};

  std::optional<std::pair<double, std::vector<double>>> best;
  auto consider = [&](const ConstraintProblem& problem, std::uint64_t salt) {
    auto found = multi_start(problem, options, basis_seed(options.seed, I, salt));
    if (found && (!best || found->first < best->first)) best = std::move(found);
  };
  for (int i = 0; i < n; ++i) {
    ConstraintProblem sign;
    sign.dim = model.dim();
    sign.count = 1;
    sign.constraints = [&, i](std::span<const double> u, std::span<double> g) {
      double x[kMaxRows];
      double value = 0.0;
      if (!model.solve(u, I, x, value)) return false;
      g[0] = -x[i];
      return true;
    };
    consider(sign, 100 + i);
  }
  ConstraintProblem singular;
  singular.dim = model.dim();
  singular.count = 1;
  singular.equality = true;
  singular.constraints = [&](std::span<const double> u, std::span<double> g) {
    g[0] = model.determinant(u, I);
    return true;
  };
  consider(singular, 99);
  if (!best) return GapWitness{};
  return model.witness(best->second, best->first);
}

std::vector<Basis> all_bases(int num_vars, int size) {
  std::vector<Basis> out;
  std::vector<int> idx(size);
  std::iota(idx.begin(), idx.end(), 0);
  if (size > num_vars) return out;
  while (true) {
    out.emplace_back(idx);
    int i = size - 1;
    while (i >= 0 && idx[i] == num_vars - size + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

}  // namespace

GapWitness basis_gap_witness(const Instance& instance, const Basis& J, const GapOptions& options) {
  const SolvedTruth truth = require_assumption(instance);
  return basis_gap(instance, truth.optimal_basis, J, options);
}

double estimate_delta_J(const Instance& instance, const Basis& J, const GapOptions& options) {
  return basis_gap_witness(instance, J, options).value;
}

double estimate_delta_a(const Instance& instance, int column, const GapOptions& options) {
  const SolvedTruth truth = require_assumption(instance);
  if (column < 0 || column >= instance.num_vars()) throw std::out_of_range("estimate_delta_a: bad column");
  double best = kInfiniteGap;
  for (const Basis& J : all_bases(instance.num_vars(), instance.L + 1)) {
    if (!J.contains(column)) continue;
    if (J == truth.optimal_basis) return 0.0;
    best = std::min(best, basis_gap(instance, truth.optimal_basis, J, options).value);
  }
  return best;
}

GapWitness infeasibility_gap_witness(const Instance& instance, const GapOptions& options) {
  const SolvedTruth truth = require_assumption(instance);
  return infeasibility_gap(instance, truth.optimal_basis, options);
}

double estimate_delta0(const Instance& instance, const GapOptions& options) {
  return infeasibility_gap_witness(instance, options).value;
}

GapReport gap_report(const Instance& instance, const GapOptions& options, Execution execution) {
  const SolvedTruth truth = require_assumption(instance);
  GapReport report;
  report.optimal_basis = truth.optimal_basis;
  report.delta0_sq = infeasibility_gap(instance, truth.optimal_basis, options).value;

  const std::vector<Basis> bases = all_bases(instance.num_vars(), instance.L + 1);
  report.basis_gaps.resize(bases.size());
  const long count = static_cast<long>(bases.size());
  auto evaluate = [&](long i) {
    report.basis_gaps[i].basis = bases[i];
    report.basis_gaps[i].delta_sq = basis_gap(instance, truth.optimal_basis, bases[i], options).value;
  };
  if (execution == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < count; ++i) evaluate(i);
  } else {
    for (long i = 0; i < count; ++i) evaluate(i);
  }

  report.arm_gaps.assign(instance.num_vars(), kInfiniteGap);
  for (const BasisGap& bg : report.basis_gaps) {
    for (int c : bg.basis.indices()) report.arm_gaps[c] = std::min(report.arm_gaps[c], bg.delta_sq);
  }
  report.sorted_columns.resize(instance.num_vars());
  std::iota(report.sorted_columns.begin(), report.sorted_columns.end(), 0);
  std::stable_sort(report.sorted_columns.begin(), report.sorted_columns.end(),
                   [&](int a, int b) { return report.arm_gaps[a] < report.arm_gaps[b]; });
  for (int c : report.sorted_columns) report.sorted_gaps.push_back(report.arm_gaps[c]);
  report.n_tilde_coefficient =
      1.0 / (3.0 * ((instance.L + 1) / 2.0 + std::log(static_cast<double>(instance.K0))));
  return report;
}

RateBounds rate_bounds(const Instance& instance, const GapReport& gaps) {
  const int K = instance.K;
  const int L = instance.L;
  if (static_cast<int>(gaps.sorted_gaps.size()) != K + L) {
    throw std::invalid_argument("rate_bounds: gap report does not match the instance");
  }
  // sorted_gaps[L + i - 1] is the (L + i)-th smallest arm gap.
  double sfsr_min = gaps.delta0_sq / K;
  for (int i = 2; i <= K; ++i) sfsr_min = std::min(sfsr_min, gaps.sorted_gaps[L + i - 1] / i);
  double lb_min = gaps.delta0_sq;
  if (K >= 2) lb_min = std::min(lb_min, gaps.sorted_gaps[L + 1]);

  RateBounds rates;
  rates.sfsr_exponent_coeff = sfsr_min / (3.0 * ((L + 1) / 2.0 + std::log(static_cast<double>(K))));
  rates.lower_bound_rate = 0.5 * lb_min;
  rates.uslp_rate = rates.lower_bound_rate / K;
  return rates;
}

}  // namespace cbmai
