#pragma once

// Stiffness matrices for a(u,v) = (c(n,s)/2) * double-sum form on
// piecewise-constant cell functions vanishing outside a mask, and the
// classical stencil at s = 1.
//
// Factor convention (the single place the 1/2 lives): u^T K u equals
// (cns/2) times the discrete Gagliardo double sum of the zero-extension
// of u. Rayleigh quotients u^T K u / (h^n u^T u) then approximate the
// eigenvalues directly, and the torsion right-hand side is h^n per cell
// with no extra factor.

#include <Eigen/Dense>
#include <vector>

#include "fracshape/grid.hpp"
#include "fracshape/kernel.hpp"

namespace fracshape {

// Dirichlet rule for the s = 1 stencil.
//  - CellExtension: zero values at exterior cell centers. This is the
//    entrywise s->1 limit of the fractional assembly and keeps K_A a
//    principal submatrix of K_B for nested masks.
//  - FaceDirichlet: zero at the geometric cell interface via ghost
//    reflection; second-order accurate against continuum eigenvalues.
enum class ClassicalBoundary { CellExtension, FaceDirichlet };

class NonlocalOperator {
 public:
  const FracParam& param() const { return param_; }
  const BoxGrid& grid() const { return grid_; }
  const SetMask& domain() const { return domain_; }
  const std::vector<int>& cells() const { return cells_; }
  int size() const { return static_cast<int>(cells_.size()); }
  const Eigen::MatrixXd& matrix() const { return K_; }
  // h^n; the piecewise-constant mass matrix is mass() * identity.
  double mass() const { return mass_; }

  double quadratic_form(const Eigen::VectorXd& u) const {
    return u.dot(K_ * u);
  }

  // Extend a dof vector by zero to the full grid.
  Eigen::VectorXd extend_by_zero(const Eigen::VectorXd& u) const;
  // Restrict a full-grid vector to the dofs.
  Eigen::VectorXd restrict_to_domain(const Eigen::VectorXd& u_grid) const;

 private:
  friend NonlocalOperator assemble(const KernelTable&, const SetMask&);
  friend NonlocalOperator assemble_classical(const BoxGrid&, const SetMask&,
                                             ClassicalBoundary);
  NonlocalOperator() : grid_(Interval{0.0, 1.0}, 2), domain_(grid_) {}

  FracParam param_;
  BoxGrid grid_;
  SetMask domain_;
  std::vector<int> cells_;
  Eigen::MatrixXd K_;
  double mass_ = 0.0;
};

// Fractional assembly (s < 1) from a full-grid kernel table. Exterior
// cells of the mask contribute through the diagonal (their value is 0),
// so K_A is a principal submatrix of the full-grid matrix.
NonlocalOperator assemble(const KernelTable& table, const SetMask& domain);

// Classical s = 1 assembly: 3-point / 5-point stencil.
NonlocalOperator assemble_classical(
    const BoxGrid& grid, const SetMask& domain,
    ClassicalBoundary boundary = ClassicalBoundary::CellExtension);

// Convenience dispatcher; builds a kernel table internally for s < 1.
NonlocalOperator assemble(
    const BoxGrid& grid, const FracParam& param, const SetMask& domain,
    ClassicalBoundary boundary = ClassicalBoundary::CellExtension);

// [u]_s^2 of a grid function (implicitly zero outside Q), via the
// full-grid table: pair sum plus exterior tails.
double gagliardo_seminorm_sq(const KernelTable& table,
                             const Eigen::VectorXd& u_on_grid);

// (1-s) [u]_s^2, the diagnostic tracked across s-sweeps.
double uniform_bound_check(const KernelTable& table,
                           const Eigen::VectorXd& u_on_grid);

// Thin wrapper holding a full-grid table for repeated seminorm queries.
struct SeminormEvaluator {
  const KernelTable* table;
  double seminorm_sq(const Eigen::VectorXd& u_on_grid) const {
    return gagliardo_seminorm_sq(*table, u_on_grid);
  }
  double uniform_bound(const Eigen::VectorXd& u_on_grid) const {
    return uniform_bound_check(*table, u_on_grid);
  }
};

// Debug dump: ASCII triplets "i j value", row-major over the dofs.
void dump_operator(std::ostream& out, const NonlocalOperator& op);

}  // namespace fracshape
