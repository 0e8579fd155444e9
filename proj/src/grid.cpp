#include "fracshape/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>

namespace fracshape {

namespace {

void check_axis(const Interval& e, int cells) {
  if (!(e.lo < e.hi)) throw ConfigError("grid extent is degenerate");
  if (cells < 2) throw ConfigError("cells_per_axis must be >= 2");
}

// Shortest decimal that round-trips a double exactly.
std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  double back = std::strtod(buf, nullptr);
  if (back == v) {
    for (int prec = 1; prec < 17; ++prec) {
      char shorter[32];
      std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
      if (std::strtod(shorter, nullptr) == v) return shorter;
    }
  }
  return buf;
}

}  // namespace

BoxGrid::BoxGrid(Interval extent, int cells)
    : BoxGrid(1, {extent, Interval{0.0, 1.0}}, {cells, 1}) {}

BoxGrid::BoxGrid(int dim, std::array<Interval, 2> extent,
                 std::array<int, 2> cells) {
  if (dim != 1 && dim != 2)
    throw ConfigError("unsupported dimension " + std::to_string(dim) +
                      " (must be 1 or 2)");
  dim_ = dim;
  extent_ = extent;
  cells_ = cells;
  if (dim == 1) {
    cells_[1] = 1;
    extent_[1] = Interval{0.0, 1.0};
  }
  check_axis(extent_[0], cells_[0]);
  h_ = extent_[0].length() / cells_[0];
  if (dim == 2) {
    check_axis(extent_[1], cells_[1]);
    const double h2 = extent_[1].length() / cells_[1];
    if (std::abs(h2 - h_) > 1e-12 * std::max(h_, h2))
      throw ConfigError("non-uniform cell width across axes");
  }
  total_ = cells_[0] * cells_[1];
  cell_volume_ = (dim == 1) ? h_ : h_ * h_;
}

std::array<double, 2> BoxGrid::center(int index) const {
  const auto m = to_multi(index);
  std::array<double, 2> p{extent_[0].lo + (m[0] + 0.5) * h_, 0.0};
  if (dim_ == 2) p[1] = extent_[1].lo + (m[1] + 0.5) * h_;
  return p;
}

int BoxGrid::coord_to_index(std::array<double, 2> p) const {
  auto axis_index = [this](double x, int axis) {
    const Interval& e = extent_[axis];
    if (x < e.lo || x > e.hi) throw ConfigError("coordinate outside box");
    int i = static_cast<int>(std::floor((x - e.lo) / h_));
    return std::clamp(i, 0, cells_[axis] - 1);
  };
  const int ix = axis_index(p[0], 0);
  const int iy = (dim_ == 2) ? axis_index(p[1], 1) : 0;
  return to_index(ix, iy);
}

BoxGrid make_grid(int dim, std::array<Interval, 2> extent,
                  std::array<int, 2> cells_per_axis) {
  return BoxGrid(dim, extent, cells_per_axis);
}

SetMask::SetMask(const BoxGrid& grid, std::vector<std::uint8_t> member)
    : grid_(grid), member_(std::move(member)) {
  if (member_.size() != static_cast<std::size_t>(grid_.cell_count()))
    throw ConfigError("mask size does not match grid");
  for (auto& v : member_) v = v ? 1 : 0;
}

int SetMask::count() const {
  return static_cast<int>(
      std::count(member_.begin(), member_.end(), std::uint8_t{1}));
}

std::vector<int> SetMask::cells() const {
  std::vector<int> out;
  out.reserve(member_.size());
  for (int i = 0; i < static_cast<int>(member_.size()); ++i)
    if (member_[i]) out.push_back(i);
  return out;
}

SetMask SetMask::complement() const {
  SetMask out(grid_);
  for (int i = 0; i < grid_.cell_count(); ++i) out.set(i, !contains(i));
  return out;
}

bool SetMask::is_subset_of(const SetMask& other) const {
  if (!(grid_ == other.grid_)) throw ConfigError("mask grids differ");
  for (int i = 0; i < grid_.cell_count(); ++i)
    if (contains(i) && !other.contains(i)) return false;
  return true;
}

SetMask mask_union(const SetMask& a, const SetMask& b) {
  if (!(a.grid() == b.grid())) throw ConfigError("mask grids differ");
  SetMask out(a.grid());
  for (int i = 0; i < a.grid().cell_count(); ++i)
    out.set(i, a.contains(i) || b.contains(i));
  return out;
}

SetMask mask_intersection(const SetMask& a, const SetMask& b) {
  if (!(a.grid() == b.grid())) throw ConfigError("mask grids differ");
  SetMask out(a.grid());
  for (int i = 0; i < a.grid().cell_count(); ++i)
    out.set(i, a.contains(i) && b.contains(i));
  return out;
}

SetMask ball_mask(const BoxGrid& grid, std::array<double, 2> center,
                  double radius) {
  for (int axis = 0; axis < grid.dim(); ++axis) {
    const Interval& e = grid.extent(axis);
    if (center[axis] < e.lo || center[axis] > e.hi)
      throw ConfigError("ball center outside box");
  }
  SetMask out(grid);
  for (int i = 0; i < grid.cell_count(); ++i) {
    const auto c = grid.center(i);
    double d2 = (c[0] - center[0]) * (c[0] - center[0]);
    if (grid.dim() == 2) d2 += (c[1] - center[1]) * (c[1] - center[1]);
    out.set(i, d2 <= radius * radius);
  }
  return out;
}

void save_mask(std::ostream& out, const SetMask& mask) {
  const BoxGrid& g = mask.grid();
  out << "fracshape-mask v1 dim=" << g.dim() << " cells=" << g.cells(0);
  if (g.dim() == 2) out << "x" << g.cells(1);
  out << " extent=" << format_double(g.extent(0).lo) << ","
      << format_double(g.extent(0).hi);
  if (g.dim() == 2)
    out << ";" << format_double(g.extent(1).lo) << ","
        << format_double(g.extent(1).hi);
  out << "\n";
  const int rows = (g.dim() == 2) ? g.cells(1) : 1;
  for (int iy = 0; iy < rows; ++iy) {
    for (int ix = 0; ix < g.cells(0); ++ix)
      out << (mask.contains(g.to_index(ix, iy)) ? '1' : '0');
    out << "\n";
  }
}

void save_mask(const std::string& path, const SetMask& mask) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open mask file for writing: " + path);
  save_mask(f, mask);
}

namespace {

double parse_double(const std::string& tok) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size())
    throw ConfigError("bad number in mask header: " + tok);
  return v;
}

}  // namespace

SetMask load_mask(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw ConfigError("empty mask file");
  std::istringstream hs(header);
  std::string magic, version, dim_kv, cells_kv, extent_kv;
  hs >> magic >> version >> dim_kv >> cells_kv >> extent_kv;
  if (magic != "fracshape-mask" || version != "v1")
    throw ConfigError("not a fracshape-mask v1 file");
  auto strip = [](const std::string& kv, const char* key) {
    const std::string prefix = std::string(key) + "=";
    if (kv.rfind(prefix, 0) != 0)
      throw ConfigError("mask header: expected " + prefix);
    return kv.substr(prefix.size());
  };
  const int dim = std::stoi(strip(dim_kv, "dim"));

  std::array<int, 2> cells{0, 1};
  {
    const std::string c = strip(cells_kv, "cells");
    const auto x = c.find('x');
    cells[0] = std::stoi(c.substr(0, x));
    if (x != std::string::npos) cells[1] = std::stoi(c.substr(x + 1));
  }

  std::array<Interval, 2> extent{Interval{0, 1}, Interval{0, 1}};
  {
    std::string e = strip(extent_kv, "extent");
    const auto semi = e.find(';');
    auto parse_pair = [](const std::string& p) {
      const auto comma = p.find(',');
      if (comma == std::string::npos)
        throw ConfigError("mask header: bad extent");
      return Interval{parse_double(p.substr(0, comma)),
                      parse_double(p.substr(comma + 1))};
    };
    extent[0] = parse_pair(e.substr(0, semi));
    if (semi != std::string::npos) extent[1] = parse_pair(e.substr(semi + 1));
  }

  BoxGrid grid(dim, extent, cells);
  std::vector<std::uint8_t> member(grid.cell_count(), 0);
  const int rows = (dim == 2) ? cells[1] : 1;
  for (int iy = 0; iy < rows; ++iy) {
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("mask file truncated");
    if (static_cast<int>(line.size()) < cells[0])
      throw ConfigError("mask row too short");
    for (int ix = 0; ix < cells[0]; ++ix) {
      const char ch = line[ix];
      if (ch != '0' && ch != '1') throw ConfigError("mask row has non-binary character");
      member[grid.to_index(ix, iy)] = (ch == '1');
    }
  }
  return SetMask(grid, std::move(member));
}

SetMask load_mask(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open mask file: " + path);
  return load_mask(f);
}

}  // namespace fracshape
