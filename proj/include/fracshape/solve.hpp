#pragma once

// State solvers: torsion equation K u = h^n 1, Dirichlet eigenproblem of
// (1/h^n) K, and the relative capacity problem, plus the comparison /
// K_s-membership checks. All solves are pure functions of immutable
// inputs and may run concurrently.

#include <Eigen/Dense>
#include <vector>

#include "fracshape/nonlocal_operator.hpp"

namespace fracshape {

struct TorsionSolution {
  SetMask domain;
  double s = 0.0;
  std::vector<int> cells;   // grid indices of the dofs
  Eigen::VectorXd u;        // per dof, >= 0
  double residual_norm = 0.0;

  // zero-extended values on the full grid
  Eigen::VectorXd on_grid(const BoxGrid& grid) const;
};

// Direct SPD solve of K u = h^n 1 to relative residual 1e-10. Negative
// entries above -1e-12 (solver roundoff against the exact discrete
// maximum principle) are clamped to zero; anything worse throws.
TorsionSolution solve_torsion(const NonlocalOperator& op);

struct SpectralResult {
  SetMask domain;
  double s = 0.0;
  std::vector<int> cells;
  std::vector<double> eigenvalues;  // ascending
  Eigen::MatrixXd eigenvectors;     // dofs x count, h^n-orthonormal
  std::vector<bool> degenerate;     // flags near-equal eigenvalue groups
};

enum class EigMethod { Auto, Dense, Lanczos };

// Smallest `count` eigenpairs of (1/h^n) K. Dense below 2000 dofs,
// shift-invert Lanczos above. Deterministic sign convention: the first
// component of each vector that is nonzero at scale is positive.
SpectralResult solve_eigs(const NonlocalOperator& op, int count,
                          EigMethod method = EigMethod::Auto);

struct CapacityValue {
  SetMask condenser;
  double s = 0.0;
  double value = 0.0;         // [potential]_s^2, no c(n,s)/2 factor
  Eigen::VectorXd potential;  // per grid cell; 1 on the condenser
};

// Gagliardo s-capacity of the condenser relative to the box: minimize
// [u]_s^2 subject to u = 1 on the condenser and u = 0 outside Q. The
// unconstrained minimizer already lies in [0,1] by the discrete
// comparison principle, so the linear solve on the free cells is exact.
CapacityValue capacity(const KernelTable& table, const SetMask& condenser);

struct KsReport {
  bool member = false;
  int worst_cell = -1;       // cell with the largest operator excess
  double worst_excess = 0.0; // max_i ((K u)_i - h^n) / h^n
  int min_cell = -1;
  double min_value = 0.0;    // most negative entry of u
};

// u belongs to the discrete K_s iff u >= 0 everywhere and
// (K u)_i <= h^n (1 + tol) on every cell; K is the full-grid operator.
KsReport ks_membership(const Eigen::VectorXd& u_on_grid,
                       const NonlocalOperator& full_grid_op,
                       double tol = 1e-8);

// Maximality of the torsion function: every admissible w (w <= 0 outside
// A, discrete operator bound) stays below u_A^s. Samples violating the
// precondition are rejected with std::invalid_argument.
bool torsion_maximality_check(const KernelTable& table, const SetMask& domain,
                              const std::vector<Eigen::VectorXd>& sample_ws_on_grid,
                              double tol = 1e-8);

}  // namespace fracshape
