#pragma once

// Exact small-LP machinery for max{ mu^T x : A x = b, x >= 0 } where A has a
// handful of rows. Everything is done by enumerating bases; no pivoting.

#include <cmath>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

namespace cbmai {

inline constexpr double kSingularTol = 1e-10;
inline constexpr double kFeasTol = 1e-9;
inline constexpr double kLinTol = 1e-9;
inline constexpr double kValueTol = 1e-9;

// Largest number of rows (L + 1) the fixed-size kernels handle.
inline constexpr int kMaxRows = 8;

class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
  double operator()(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

  std::span<const double> values() const { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

class SingularBasisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A sorted set of column indices (0-based) of size L + 1.
class Basis {
 public:
  Basis() = default;
  explicit Basis(std::vector<int> indices);

  const std::vector<int>& indices() const { return indices_; }
  int size() const { return static_cast<int>(indices_.size()); }
  bool contains(int column) const;

  auto operator<=>(const Basis&) const = default;

 private:
  std::vector<int> indices_;
};

/// The standard-form LP built from an instance: columns 0..K-1 are arms,
/// columns K..K+L-1 are slacks, the last row is the simplex row.
struct StandardLp {
  int num_arms = 0;
  int num_constraints = 0;
  std::vector<double> objective;
  Matrix constraints;
  std::vector<double> rhs;

  int num_vars() const { return num_arms + num_constraints; }
  int num_rows() const { return num_constraints + 1; }
};

struct FeasibleBasis {
  std::vector<double> x_basis;
};
struct InfeasibleBasis {};
struct SingularBasis {};
using BasicSolveOutcome = std::variant<FeasibleBasis, InfeasibleBasis, SingularBasis>;

struct Optimal {
  double value = 0.0;
  Basis basis;
  std::vector<double> x;
};
struct Infeasible {};
using LpOutcome = std::variant<Optimal, Infeasible>;

struct DualCertificate {
  std::vector<double> multipliers;
  std::vector<double> reduced_costs;
};

namespace detail {

// Gaussian elimination with partial pivoting on a row-major n x n system.
// Overwrites rhs with the solution and returns det(a). When the returned
// determinant is exactly zero, rhs is left unspecified.
inline double solve_in_place(double* a, double* rhs, int n) {
  double det = 1.0;
  for (int k = 0; k < n; ++k) {
    int pivot = k;
    double best = std::abs(a[k * n + k]);
    for (int i = k + 1; i < n; ++i) {
      double v = std::abs(a[i * n + k]);
      if (v > best) {
        best = v;
        pivot = i;
      }
    }
    if (best == 0.0) return 0.0;
    if (pivot != k) {
      for (int j = 0; j < n; ++j) std::swap(a[k * n + j], a[pivot * n + j]);
      std::swap(rhs[k], rhs[pivot]);
      det = -det;
    }
    const double diag = a[k * n + k];
    det *= diag;
    for (int i = k + 1; i < n; ++i) {
      const double factor = a[i * n + k] / diag;
      if (factor == 0.0) continue;
      for (int j = k; j < n; ++j) a[i * n + j] -= factor * a[k * n + j];
      rhs[i] -= factor * rhs[k];
    }
  }
  for (int i = n - 1; i >= 0; --i) {
    double acc = rhs[i];
    for (int j = i + 1; j < n; ++j) acc -= a[i * n + j] * rhs[j];
    rhs[i] = acc / a[i * n + i];
  }
  return det;
}

enum class BasisStatus { Feasible, Infeasible, Singular };

// Solves A_I y = b for the columns listed in `basis`; y must hold rows
// doubles. Negative entries within kFeasTol are clamped to zero.
inline BasisStatus solve_basis(const Matrix& A, std::span<const double> b,
                               std::span<const int> basis, double* y) {
  const int n = A.rows();
  double square[kMaxRows * kMaxRows];
  for (int r = 0; r < n; ++r) {
    for (int j = 0; j < n; ++j) square[r * n + j] = A(r, basis[j]);
    y[r] = b[r];
  }
  const double det = solve_in_place(square, y, n);
  if (!(std::abs(det) > kSingularTol)) return BasisStatus::Singular;
  for (int r = 0; r < n; ++r) {
    if (y[r] < -kFeasTol) return BasisStatus::Infeasible;
  }
  for (int r = 0; r < n; ++r) {
    if (y[r] < 0.0) y[r] = 0.0;
  }
  return BasisStatus::Feasible;
}

}  // namespace detail

/// Visits every feasible nonsingular basis of (A, b) in lexicographic order
/// of its sorted column indices. The visitor receives the basis columns and
/// the basic solution, both as spans valid only for the duration of the call.
template <class Visitor>
void for_each_feasible_basis(const Matrix& A, std::span<const double> b, Visitor&& visit) {
  const int n = A.rows();
  const int m = A.cols();
  if (n > kMaxRows) throw std::invalid_argument("too many constraint rows");
  if (m < n) return;
  int idx[kMaxRows];
  double y[kMaxRows];
  for (int i = 0; i < n; ++i) idx[i] = i;
  while (true) {
    if (detail::solve_basis(A, b, std::span<const int>(idx, n), y) ==
        detail::BasisStatus::Feasible) {
      visit(std::span<const int>(idx, n), std::span<const double>(y, n));
    }
    int i = n - 1;
    while (i >= 0 && idx[i] == m - n + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
  }
}

BasicSolveOutcome basic_solution(const Matrix& A, std::span<const double> b, const Basis& basis);
BasicSolveOutcome basic_solution(const StandardLp& lp, const Basis& basis);

/// Maximizes objective^T x over {A x = b, x >= 0} by basis enumeration.
/// Value ties within kValueTol go to the lexicographically smallest basis.
LpOutcome solve_primal(const Matrix& A, std::span<const double> b,
                       std::span<const double> objective);
LpOutcome solve_primal(const StandardLp& lp, std::span<const double> objective);

/// Solves A_I^T lambda = objective_I and returns lambda with the reduced
/// costs objective - A^T lambda. Throws SingularBasisError.
DualCertificate dual_certificate(const Matrix& A, std::span<const double> objective,
                                 const Basis& basis);
DualCertificate dual_certificate(const StandardLp& lp, std::span<const double> objective,
                                 const Basis& basis);

}  // namespace cbmai
