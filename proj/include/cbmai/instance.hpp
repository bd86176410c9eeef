#pragma once

#include <string>
#include <vector>

#include "cbmai/linear_program.hpp"

namespace cbmai {

/// A constrained bandit instance. Arms 0..K0-1 are unknown (sampled), arms
/// K0..K-1 have known means. Costs are stored L x K.
struct Instance {
  std::string name;
  int K = 0;
  int K0 = 0;
  int L = 0;
  std::vector<double> rewards;
  Matrix costs;
  std::vector<double> cost_bounds;
  double sigma_r = 1.0;
  double sigma_c = 1.0;

  /// Throws std::invalid_argument when dimensions or parameters are
  /// inconsistent. Zero standard deviations are accepted (noise-free runs).
  void validate() const;

  int num_vars() const { return K + L; }
  int num_rows() const { return L + 1; }
  bool is_unknown_arm(int arm) const { return arm >= 0 && arm < K0; }

  bool operator==(const Instance&) const = default;
};

/// Right-hand side (c_bar_1, ..., c_bar_L, 1).
std::vector<double> standard_rhs(const Instance& instance);

StandardLp build_standard_form(const Instance& instance);

}  // namespace cbmai
