#pragma once
// Small dense phase-1 simplex for linear feasibility: find x >= 0 with
// A x = b. Bland's rule keeps pivoting deterministic and cycle-free.

#include <vector>

namespace ldhp {

struct LinFeasResult {
  bool feasible = false;
  std::vector<double> x;   // solution when feasible (size = #columns)
  double residual = 0.0;   // max |A x - b| after solve
};

// Solve: does there exist x >= 0 with A x = b? A is row-major, m rows.
LinFeasResult solve_linear_feasibility(const std::vector<std::vector<double>>& A,
                                       const std::vector<double>& b,
                                       double tol = 1e-9);

}  // namespace ldhp
