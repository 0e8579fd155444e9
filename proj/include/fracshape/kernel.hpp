#pragma once

// Normalization constant c(n,s), cell-pair integrals of the kernel
// |x-y|^{-(n+2s)}, and exterior-tail integrals over R^n \ Q.
//
// Pair integrals are reduced to difference coordinates: the interaction
// of two cells is the integral of the kernel against a tent (1D) or a
// tensor product of tents (2D), which has closed-form pieces. The double
// integral between touching cells diverges for s >= 1/2 (piecewise
// constants are not in H^s there); the table then switches to a
// near-field rule that is exact on smooth quadratics and whose s->1
// limit is the classical Laplacian stencil. See KernelTable notes.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fracshape/grid.hpp"

namespace fracshape {

// n-1 dimensional measure of the unit sphere S^{n-1}: omega_0 = 2,
// omega_1 = 2*pi. Used by the s->1 asymptotic checks.
double sphere_measure(int n_minus_1);

// Limit of c(n,s)/(1-s) as s->1, equal to 4n/omega_{n-1}.
double cns_limit_factor(int n);

// c(n,s) = ( \int_{R^n} (1 - cos z_1) / |z|^{n+2s} dz )^{-1}.
// Closed-form route: s * 4^s * Gamma(n/2 + s) / (pi^{n/2} * Gamma(1 - s)).
double cns(int n, double s);

// Independent quadrature of the defining integral (series near 0,
// adaptive panels, oscillatory tail by contour rotation; the 2D case
// reduces to the 1D radial integral times a numeric angular factor).
double cns_defining_integral(int n, double s);

struct FracParam {
  double s = 0.5;
  int dim = 1;
  double cns = 0.0;  // NaN at s = 1 (never used by the classical backend)

  static FracParam make(int dim, double s);
  bool classical() const { return s == 1.0; }
};

// Exact double integral of the kernel over C_i x C_j, i != j.
// Throws std::domain_error for touching cells with s >= 1/2, where the
// integral diverges (see KernelTable for the regularized weight used in
// assembly).
double pair_weight(const BoxGrid& grid, const FracParam& param, int i, int j);

// Point-evaluated exterior integral \int_{R^n \ Q} |x_i - y|^{-(n+2s)} dy
// at the center of cell i. 1D is closed form; 2D uses the polar
// reduction (half-planes minus corner wedges), relative accuracy 1e-8.
double exterior_tail(const BoxGrid& grid, const FracParam& param, int i);

// Dense kernel table for a full grid: symmetric pair weights (stored by
// offset; the grid is uniform so weights are translation invariant),
// per-cell exterior tails, and cached row sums.
//
// Assembly weights equal the exact pair integrals wherever those
// converge. For s >= 1/2 the touching-cell entries use the near-field
// rule: the kernel integral restricted outside the cell-width square,
// plus a Taylor term that carries the |x-y| < h energy of smooth
// functions. Tails are cell-integrated (closed form) for s < 1/2 and
// center-collocated times cell volume for s >= 1/2.
class KernelTable {
 public:
  KernelTable(const BoxGrid& grid, const FracParam& param);

  const BoxGrid& grid() const { return grid_; }
  const FracParam& param() const { return param_; }

  double weight(int i, int j) const;
  double weight_by_offset(int adx, int ady = 0) const;
  double tail_cell(int i) const { return tail_cell_[i]; }
  double tail_point(int i) const { return tail_point_[i]; }
  double row_sum(int i) const { return row_sum_[i]; }

  // Binary cache: header keyed by (dim, extent, cells, s) plus an FNV-1a
  // content hash, then row-major 8-byte floats.
  void save_cache(const std::string& path) const;
  static std::optional<KernelTable> try_load_cache(const std::string& path,
                                                   const BoxGrid& grid,
                                                   const FracParam& param);

 private:
  KernelTable() = default;
  void build();
  void finalize_row_sums();

  BoxGrid grid_{Interval{0.0, 1.0}, 2};
  FracParam param_;
  std::vector<double> w_off_;      // [ady * cells(0) + adx], (0,0) unused
  std::vector<double> tail_cell_;
  std::vector<double> tail_point_;
  std::vector<double> row_sum_;
};

}  // namespace fracshape
