#pragma once

// Uniform cell grids on a box Q in R^n (n = 1 or 2) and boolean pixel
// subsets of them. Cells are half-open with centers at (i + 1/2)h;
// membership of a cell in a geometric region is decided by its center.
// Everything here is immutable after construction and safe to share.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fracshape/errors.hpp"

namespace fracshape {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  double length() const { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

class BoxGrid {
 public:
  // 1D constructor.
  BoxGrid(Interval extent, int cells);
  // General constructor; all axes must share the same cell width h.
  BoxGrid(int dim, std::array<Interval, 2> extent, std::array<int, 2> cells);

  int dim() const { return dim_; }
  const Interval& extent(int axis) const { return extent_[axis]; }
  int cells(int axis) const { return cells_[axis]; }
  int cell_count() const { return total_; }
  double h() const { return h_; }
  double cell_volume() const { return cell_volume_; }

  // Row-major linear index: index = iy * cells(0) + ix.
  int to_index(int ix, int iy = 0) const { return iy * cells_[0] + ix; }
  std::array<int, 2> to_multi(int index) const {
    return {index % cells_[0], index / cells_[0]};
  }

  // Center coordinates of a cell; y component is 0 in 1D.
  std::array<double, 2> center(int index) const;
  // Inverse of center(): cell containing the point. Throws if outside Q.
  int coord_to_index(std::array<double, 2> p) const;

  bool operator==(const BoxGrid&) const = default;

 private:
  int dim_ = 1;
  std::array<Interval, 2> extent_{};
  std::array<int, 2> cells_{1, 1};
  int total_ = 0;
  double h_ = 0.0;
  double cell_volume_ = 0.0;
};

BoxGrid make_grid(int dim, std::array<Interval, 2> extent,
                  std::array<int, 2> cells_per_axis);
inline BoxGrid make_grid(Interval extent, int cells) {
  return BoxGrid(extent, cells);
}

class SetMask {
 public:
  explicit SetMask(const BoxGrid& grid, bool value = false)
      : grid_(grid), member_(static_cast<std::size_t>(grid.cell_count()), value ? 1 : 0) {}
  SetMask(const BoxGrid& grid, std::vector<std::uint8_t> member);

  const BoxGrid& grid() const { return grid_; }
  bool contains(int index) const { return member_[index] != 0; }
  void set(int index, bool value) { member_[index] = value ? 1 : 0; }
  int count() const;
  bool empty() const { return count() == 0; }
  double measure() const { return count() * grid_.cell_volume(); }

  // Indices of member cells, ascending.
  std::vector<int> cells() const;

  SetMask complement() const;
  bool is_subset_of(const SetMask& other) const;

  bool operator==(const SetMask&) const = default;

 private:
  BoxGrid grid_;
  std::vector<std::uint8_t> member_;
};

SetMask mask_union(const SetMask& a, const SetMask& b);
SetMask mask_intersection(const SetMask& a, const SetMask& b);

// Cells whose centers lie within `radius` of `center`. Empty masks allowed.
SetMask ball_mask(const BoxGrid& grid, std::array<double, 2> center,
                  double radius);

inline double measure(const SetMask& mask) { return mask.measure(); }

// ASCII mask file, bit-exact round trip:
//   fracshape-mask v1 dim=<d> cells=<k1>[x<k2>] extent=<a1>,<b1>[;<a2>,<b2>]
// followed by rows of 0/1 characters (row-major, one row per line).
void save_mask(std::ostream& out, const SetMask& mask);
void save_mask(const std::string& path, const SetMask& mask);
SetMask load_mask(std::istream& in);
SetMask load_mask(const std::string& path);

}  // namespace fracshape
