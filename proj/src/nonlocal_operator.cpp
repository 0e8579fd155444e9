#include "fracshape/nonlocal_operator.hpp"

#include <cmath>
#include <ostream>

namespace fracshape {

Eigen::VectorXd NonlocalOperator::extend_by_zero(const Eigen::VectorXd& u) const {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(grid_.cell_count());
  for (int a = 0; a < size(); ++a) full[cells_[a]] = u[a];
  return full;
}

Eigen::VectorXd NonlocalOperator::restrict_to_domain(
    const Eigen::VectorXd& u_grid) const {
  Eigen::VectorXd out(size());
  for (int a = 0; a < size(); ++a) out[a] = u_grid[cells_[a]];
  return out;
}

NonlocalOperator assemble(const KernelTable& table, const SetMask& domain) {
  if (!(domain.grid() == table.grid()))
    throw ConfigError("assemble: mask grid does not match kernel table");
  if (domain.empty()) throw ConfigError("assemble: empty domain");

  NonlocalOperator op;
  op.param_ = table.param();
  op.grid_ = table.grid();
  op.domain_ = domain;
  op.cells_ = domain.cells();
  op.mass_ = op.grid_.cell_volume();
  const double c = table.param().cns;
  const int n = op.size();
  op.K_.resize(n, n);
  for (int a = 0; a < n; ++a) {
    op.K_(a, a) = c * (table.row_sum(op.cells_[a]) + table.tail_cell(op.cells_[a]));
    for (int b = a + 1; b < n; ++b) {
      const double v = -c * table.weight(op.cells_[a], op.cells_[b]);
      op.K_(a, b) = v;
      op.K_(b, a) = v;
    }
  }
  return op;
}

NonlocalOperator assemble_classical(const BoxGrid& grid, const SetMask& domain,
                                    ClassicalBoundary boundary) {
  if (!(domain.grid() == grid))
    throw ConfigError("assemble: mask grid mismatch");
  if (domain.empty()) throw ConfigError("assemble: empty domain");

  NonlocalOperator op;
  op.param_ = FracParam::make(grid.dim(), 1.0);
  op.grid_ = grid;
  op.domain_ = domain;
  op.cells_ = domain.cells();
  op.mass_ = grid.cell_volume();

  const int n = op.size();
  const double scale = op.mass_ / (grid.h() * grid.h());
  std::vector<int> dof_of(grid.cell_count(), -1);
  for (int a = 0; a < n; ++a) dof_of[op.cells_[a]] = a;

  op.K_ = Eigen::MatrixXd::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    const auto m = grid.to_multi(op.cells_[a]);
    double diag = 0.0;
    const int dirs[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    const int ndirs = 2 * grid.dim();
    for (int d = 0; d < ndirs; ++d) {
      const int ix = m[0] + dirs[d][0];
      const int iy = m[1] + dirs[d][1];
      int nb = -1;
      if (ix >= 0 && ix < grid.cells(0) && iy >= 0 && iy < grid.cells(1))
        nb = dof_of[grid.to_index(ix, iy)];
      if (nb >= 0) {
        diag += 1.0;
        op.K_(a, nb) = -scale;
      } else {
        // absent neighbor: zero at its center, or ghost reflection
        diag += (boundary == ClassicalBoundary::FaceDirichlet) ? 3.0 : 1.0;
      }
    }
    op.K_(a, a) = scale * diag;
  }
  return op;
}

NonlocalOperator assemble(const BoxGrid& grid, const FracParam& param,
                          const SetMask& domain, ClassicalBoundary boundary) {
  if (param.classical()) return assemble_classical(grid, domain, boundary);
  KernelTable table(grid, param);
  return assemble(table, domain);
}

double gagliardo_seminorm_sq(const KernelTable& table,
                             const Eigen::VectorXd& u_on_grid) {
  const BoxGrid& g = table.grid();
  const int n = g.cell_count();
  if (u_on_grid.size() != n)
    throw ConfigError("seminorm: vector size does not match grid");
  double pairs = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double d = u_on_grid[i] - u_on_grid[j];
      if (d != 0.0) pairs += d * d * table.weight(i, j);
    }
  double tails = 0.0;
  for (int i = 0; i < n; ++i)
    tails += u_on_grid[i] * u_on_grid[i] * table.tail_cell(i);
  return 2.0 * (pairs + tails);
}

double uniform_bound_check(const KernelTable& table,
                           const Eigen::VectorXd& u_on_grid) {
  return (1.0 - table.param().s) * gagliardo_seminorm_sq(table, u_on_grid);
}

void dump_operator(std::ostream& out, const NonlocalOperator& op) {
  const Eigen::MatrixXd& K = op.matrix();
  char buf[64];
  for (int i = 0; i < K.rows(); ++i)
    for (int j = 0; j < K.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", i, j, K(i, j));
      out << buf;
    }
}

}  // namespace fracshape
