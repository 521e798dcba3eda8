#include "ldhp/lp.hpp"

#include <cmath>
#include <cstddef>

namespace ldhp {

// Phase-1 simplex with artificial variables and Bland's rule. The tableau is
// tiny (3..12 rows, tens of columns), so a plain dense implementation is fine.
LinFeasResult solve_linear_feasibility(const std::vector<std::vector<double>>& A,
                                       const std::vector<double>& b,
                                       double tol) {
  LinFeasResult res;
  size_t m = A.size();
  size_t n = m ? A[0].size() : 0;
  res.x.assign(n, 0.0);
  if (m == 0) {
    res.feasible = true;
    return res;
  }

  // Scale rows so tolerances are meaningful across units.
  std::vector<std::vector<double>> T(m, std::vector<double>(n + m + 1, 0.0));
  for (size_t i = 0; i < m; ++i) {
    double rhs = b[i];
    double sign = rhs < 0 ? -1.0 : 1.0;
    double scale = 0.0;
    for (size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(A[i][j]));
    scale = std::max(scale, std::abs(rhs));
    if (scale <= 0) scale = 1.0;
    for (size_t j = 0; j < n; ++j) T[i][j] = sign * A[i][j] / scale;
    T[i][n + i] = 1.0;  // artificial
    T[i][n + m] = sign * rhs / scale;
  }

  std::vector<int> basis(m);
  for (size_t i = 0; i < m; ++i) basis[i] = static_cast<int>(n + i);

  // Objective: minimize sum of artificials -> reduced costs row.
  std::vector<double> z(n + m + 1, 0.0);
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j <= n + m; ++j) z[j] += T[i][j];

  auto pivot = [&](size_t pr, size_t pc) {
    double pv = T[pr][pc];
    for (size_t j = 0; j <= n + m; ++j) T[pr][j] /= pv;
    for (size_t i = 0; i < m; ++i) {
      if (i == pr) continue;
      double f = T[i][pc];
      if (f == 0.0) continue;
      for (size_t j = 0; j <= n + m; ++j) T[i][j] -= f * T[pr][j];
    }
    double f = z[pc];
    if (f != 0.0)
      for (size_t j = 0; j <= n + m; ++j) z[j] -= f * T[pr][j];
    basis[pr] = static_cast<int>(pc);
  };

  const size_t max_iter = 200 * (n + m + 4);
  for (size_t iter = 0; iter < max_iter; ++iter) {
    // Bland: entering = lowest structural index with positive z (minimizing
    // the artificial sum; artificials never re-enter).
    size_t pc = n + m;
    for (size_t j = 0; j < n; ++j) {
      if (z[j] > tol) {
        pc = j;
        break;
      }
    }
    if (pc == n + m) break;  // optimal
    // Ratio test; Bland tie-break on basis index.
    size_t pr = m;
    double best = 0.0;
    for (size_t i = 0; i < m; ++i) {
      if (T[i][pc] > tol) {
        double ratio = T[i][n + m] / T[i][pc];
        if (pr == m || ratio < best - 1e-15 ||
            (std::abs(ratio - best) <= 1e-15 && basis[i] < basis[pr])) {
          pr = i;
          best = ratio;
        }
      }
    }
    if (pr == m) break;  // unbounded objective direction; cannot happen here
    pivot(pr, pc);
  }

  double obj = z[n + m];
  // z was built as the sum of rows minus eliminations: objective value of the
  // artificials is the rhs entry of the reduced cost row.
  res.feasible = std::abs(obj) <= 1e-7;
  if (res.feasible) {
    for (size_t i = 0; i < m; ++i) {
      if (basis[i] < static_cast<int>(n)) {
        res.x[basis[i]] = std::max(0.0, T[i][n + m]);
      }
    }
    double worst = 0.0;
    for (size_t i = 0; i < m; ++i) {
      double acc = 0.0;
      for (size_t j = 0; j < n; ++j) acc += A[i][j] * res.x[j];
      worst = std::max(worst, std::abs(acc - b[i]));
    }
    res.residual = worst;
  }
  return res;
}

}  // namespace ldhp
