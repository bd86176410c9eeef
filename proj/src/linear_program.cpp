#include "cbmai/linear_program.hpp"

#include <algorithm>
#include <string>

#include "cbmai/instance.hpp"

namespace cbmai {

Basis::Basis(std::vector<int> indices) : indices_(std::move(indices)) {
  for (size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] < 0) throw std::invalid_argument("basis index must be nonnegative");
    if (i > 0 && indices_[i] <= indices_[i - 1]) {
      throw std::invalid_argument("basis indices must be strictly increasing");
    }
  }
}

bool Basis::contains(int column) const {
  return std::binary_search(indices_.begin(), indices_.end(), column);
}

void Instance::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("instance: " + what); };
  if (K < 1) fail("K must be positive");
  if (L < 1) fail("L must be positive");
  if (K0 < 1 || K0 > K) fail("K0 must lie in [1, K]");
  if (L + 1 > kMaxRows) fail("too many constraints");
  if (static_cast<int>(rewards.size()) != K) fail("rewards must have K entries");
  if (costs.rows() != L || costs.cols() != K) fail("costs must be L x K");
  if (static_cast<int>(cost_bounds.size()) != L) fail("cost_bounds must have L entries");
  if (!(sigma_r >= 0.0) || !(sigma_c >= 0.0)) fail("standard deviations must be nonnegative");
  auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(rewards.begin(), rewards.end(), finite) ||
      !std::all_of(costs.values().begin(), costs.values().end(), finite) ||
      !std::all_of(cost_bounds.begin(), cost_bounds.end(), finite) || !std::isfinite(sigma_r) ||
      !std::isfinite(sigma_c)) {
    fail("all parameters must be finite");
  }
}

std::vector<double> standard_rhs(const Instance& instance) {
  std::vector<double> b(instance.cost_bounds);
  b.push_back(1.0);
  return b;
}

StandardLp build_standard_form(const Instance& instance) {
  const int K = instance.K;
  const int L = instance.L;
  StandardLp lp;
  lp.num_arms = K;
  lp.num_constraints = L;
  lp.objective.assign(K + L, 0.0);
  std::copy(instance.rewards.begin(), instance.rewards.end(), lp.objective.begin());
  lp.constraints = Matrix(L + 1, K + L);
  for (int l = 0; l < L; ++l) {
    for (int a = 0; a < K; ++a) lp.constraints(l, a) = instance.costs(l, a);
    lp.constraints(l, K + l) = 1.0;
  }
  for (int a = 0; a < K; ++a) lp.constraints(L, a) = 1.0;
  lp.rhs = standard_rhs(instance);
  return lp;
}

BasicSolveOutcome basic_solution(const Matrix& A, std::span<const double> b, const Basis& basis) {
  if (basis.size() != A.rows()) throw std::invalid_argument("basis size must equal row count");
  if (basis.indices().back() >= A.cols()) throw std::invalid_argument("basis index out of range");
  std::vector<double> y(A.rows());
  switch (detail::solve_basis(A, b, basis.indices(), y.data())) {
    case detail::BasisStatus::Singular:
      return SingularBasis{};
    case detail::BasisStatus::Infeasible:
      return InfeasibleBasis{};
    case detail::BasisStatus::Feasible:
      break;
  }
  return FeasibleBasis{std::move(y)};
}

BasicSolveOutcome basic_solution(const StandardLp& lp, const Basis& basis) {
  return basic_solution(lp.constraints, lp.rhs, basis);
}

LpOutcome solve_primal(const Matrix& A, std::span<const double> b,
                       std::span<const double> objective) {
  if (static_cast<int>(objective.size()) != A.cols()) {
    throw std::invalid_argument("objective length must equal column count");
  }
  const int n = A.rows();
  bool found = false;
  double best_value = 0.0;
  std::vector<int> best_idx(n);
  std::vector<double> best_y(n);
  for_each_feasible_basis(A, b, [&](std::span<const int> idx, std::span<const double> y) {
    double value = 0.0;
    for (int i = 0; i < n; ++i) value += objective[idx[i]] * y[i];
    // Enumeration is lexicographic, so only a strict improvement replaces.
    if (!found || value > best_value + kValueTol) {
      found = true;
      best_value = value;
      std::copy(idx.begin(), idx.end(), best_idx.begin());
      std::copy(y.begin(), y.end(), best_y.begin());
    }
  });
  if (!found) return Infeasible{};
  Optimal opt;
  opt.value = best_value;
  opt.x.assign(A.cols(), 0.0);
  for (int i = 0; i < n; ++i) opt.x[best_idx[i]] = best_y[i];
  opt.basis = Basis(std::move(best_idx));
  return opt;
}

LpOutcome solve_primal(const StandardLp& lp, std::span<const double> objective) {
  return solve_primal(lp.constraints, lp.rhs, objective);
}

DualCertificate dual_certificate(const Matrix& A, std::span<const double> objective,
                                 const Basis& basis) {
  const int n = A.rows();
  if (basis.size() != n) throw std::invalid_argument("basis size must equal row count");
  if (static_cast<int>(objective.size()) != A.cols()) {
    throw std::invalid_argument("objective length must equal column count");
  }
  double square[kMaxRows * kMaxRows];
  DualCertificate cert;
  cert.multipliers.resize(n);
  const auto& idx = basis.indices();
  for (int j = 0; j < n; ++j) {
    for (int r = 0; r < n; ++r) square[j * n + r] = A(r, idx[j]);
    cert.multipliers[j] = objective[idx[j]];
  }
  const double det = detail::solve_in_place(square, cert.multipliers.data(), n);
  if (!(std::abs(det) > kSingularTol)) throw SingularBasisError("dual certificate: singular basis");
  cert.reduced_costs.resize(A.cols());
  for (int c = 0; c < A.cols(); ++c) {
    double acc = objective[c];
    for (int r = 0; r < n; ++r) acc -= A(r, c) * cert.multipliers[r];
    cert.reduced_costs[c] = acc;
  }
  for (int c : idx) cert.reduced_costs[c] = 0.0;
  return cert;
}

DualCertificate dual_certificate(const StandardLp& lp, std::span<const double> objective,
                                 const Basis& basis) {
  return dual_certificate(lp.constraints, objective, basis);
}

}  // namespace cbmai
