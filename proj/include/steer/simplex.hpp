#pragma once

// Dense phase-1 simplex for feasibility problems of the form
//   find x >= 0 with A x = b,
// where A has few rows (<= 10 here) and many columns.

#include <cstddef>
#include <span>
#include <vector>

namespace steer {

struct SimplexOptions {
  double feasibility_tol = 1e-7;   // accept when sum of artificials <= this
  double pricing_tol = 1e-11;      // reduced-cost threshold for optimality
  double pivot_tol = 1e-12;
  int max_iterations = 20000;
  int refactor_every = 32;
  bool parallel_pricing = true;    // use the OpenMP pricing kernel
};

struct SimplexResult {
  bool feasible = false;
  double infeasibility = 0.0;         // phase-1 objective (L1 residual) at the optimum
  std::vector<std::size_t> basis;      // structural column indices with positive weight
  std::vector<double> weights;         // matching weights
  std::vector<double> dual;            // y with y^T A_j <= pricing_tol for all j, y^T b = infeasibility
  int iterations = 0;
};

/// `columns` is column-major: column j occupies [j*rows, (j+1)*rows).
/// Throws NumericError when the iteration limit is hit.
SimplexResult solve_phase_one(std::span<const double> columns, std::span<const double> rhs,
                              const SimplexOptions& options = {});

}  // namespace steer
