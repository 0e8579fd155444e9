#include "fracshape/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>

#include "fracshape/quadrature.hpp"

namespace fracshape {

using quad::pow_m1_over;

double sphere_measure(int n_minus_1) {
  switch (n_minus_1) {
    case 0:
      return 2.0;
    case 1:
      return 2.0 * M_PI;
    default:
      throw ConfigError("sphere_measure: only S^0 and S^1 are used here");
  }
}

double cns_limit_factor(int n) { return 4.0 * n / sphere_measure(n - 1); }

double cns(int n, double s) {
  if (n != 1 && n != 2) throw ConfigError("cns: n must be 1 or 2");
  if (!(s > 0.0 && s < 1.0)) throw ConfigError("cns: s must lie in (0,1)");
  const double log_c = std::log(s) + 2.0 * s * std::log(2.0) +
                       std::lgamma(0.5 * n + s) - 0.5 * n * std::log(M_PI) -
                       std::lgamma(1.0 - s);
  return std::exp(log_c);
}

namespace {

// I1(s) = \int_0^inf (1 - cos u) u^{-1-2s} du, split as
//   series on [0, 1/2] + panels on [1/2, 1] + 1/(2s) - \int_1^inf cos(u) u^{-1-2s} du,
// with the oscillatory piece rotated onto the ray u = 1 + iv where it
// decays like e^{-v}.
double radial_half_integral(double s) {
  const double eps = 0.5;
  double series = 0.0;
  double fact = 1.0;  // (2k)!
  for (int k = 1; k <= 16; ++k) {
    fact *= (2.0 * k - 1.0) * (2.0 * k);
    const double sgn = (k % 2 == 1) ? 1.0 : -1.0;
    series += sgn * std::pow(eps, 2.0 * k - 2.0 * s) / (fact * (2.0 * k - 2.0 * s));
  }
  const double mid = quad::integrate(
      [s](double u) { return (1.0 - std::cos(u)) * std::pow(u, -1.0 - 2.0 * s); },
      eps, 1.0, 1e-13);
  const double a = 1.0 + 2.0 * s;
  const double osc = quad::integrate(
      [a](double v) {
        const std::complex<double> i(0.0, 1.0);
        const std::complex<double> val =
            i * std::exp(i) * std::exp(-v) * std::pow(std::complex<double>(1.0, v), -a);
        return val.real();
      },
      0.0, 60.0, 1e-13, 1e-16);
  return series + mid + 1.0 / (2.0 * s) - osc;
}

// \int_{-pi/2}^{pi/2} cos^{2s}(t) dt
double angular_cos_pow(double s) {
  return 2.0 * quad::integrate(
                   [s](double t) { return std::pow(std::cos(t), 2.0 * s); }, 0.0,
                   0.5 * M_PI, 1e-12, 1e-15);
}

}  // namespace

double cns_defining_integral(int n, double s) {
  if (n != 1 && n != 2) throw ConfigError("cns: n must be 1 or 2");
  if (!(s > 0.0 && s < 1.0)) throw ConfigError("cns: s must lie in (0,1)");
  const double i1 = radial_half_integral(s);
  double total;
  if (n == 1) {
    total = 2.0 * i1;
  } else {
    // polar reduction: the angular factor is \int_0^{2pi} |cos t|^{2s} dt.
    total = i1 * 2.0 * angular_cos_pow(s);
  }
  return 1.0 / total;
}

FracParam FracParam::make(int dim, double s) {
  if (dim != 1 && dim != 2) throw ConfigError("FracParam: dim must be 1 or 2");
  if (!(s > 0.0 && s <= 1.0)) throw ConfigError("FracParam: s must lie in (0,1]");
  FracParam p;
  p.dim = dim;
  p.s = s;
  p.cns = (s < 1.0) ? cns(dim, s) : std::numeric_limits<double>::quiet_NaN();
  return p;
}

namespace {

// ---- 1D pieces -----------------------------------------------------------
//
// With difference coordinate t = x - y, the pair integral over two cells at
// center offset m*h is the kernel integrated against a tent of height h
// supported on ((m-1)h, (m+1)h). Primitives:
//   P0(t) = \int t^{-1-2s} dt = t^{-2s} / (-2s)
//   P1(t) = \int t^{-2s}  dt -> pow_m1_over(t, 1-2s)   (log branch at s=1/2)

double tent_weight_1d_exact(double h, int m, double s) {
  const double q = 1.0 - 2.0 * s;
  auto P0 = [s](double t) { return std::pow(t, -2.0 * s) / (-2.0 * s); };
  auto P1 = [q](double t) { return pow_m1_over(t, q); };
  const double a = (m - 1) * h, b = m * h, c = (m + 1) * h;
  double w = P1(b) - P1(a);
  if (m > 1) w -= a * (P0(b) - P0(a));
  w += c * (P0(c) - P0(b)) - (P1(c) - P1(b));
  return w;
}

// Touching cells with s >= 1/2: exact integral over |t| >= h plus the
// near-field term h^{1-2s}/(2-2s) that carries the |t| < h energy of
// smooth functions. The s->1 limit of cns * weight is the classical 1/h.
double tent_weight_1d_adjacent_reg(double h, double s) {
  const double q = 1.0 - 2.0 * s;
  auto P0 = [s](double t) { return std::pow(t, -2.0 * s) / (-2.0 * s); };
  auto P1 = [q](double t) { return pow_m1_over(t, q); };
  double w = 2.0 * h * (P0(2.0 * h) - P0(h)) - (P1(2.0 * h) - P1(h));
  w += std::pow(h, q) / (2.0 - 2.0 * s);
  return w;
}

// ---- 2D pieces -----------------------------------------------------------

double kernel2(double t1, double t2, double s) {
  return std::pow(t1 * t1 + t2 * t2, -1.0 - s);
}

double tent(double t, int m, double h) { return h - std::abs(t - m * h); }

double tent2_box(double h, int a, int b, double s, const quad::Box2& box,
                 double rtol) {
  return quad::integrate2(
      [=](double t1, double t2) {
        return tent(t1, a, h) * tent(t2, b, h) * kernel2(t1, t2, s);
      },
      box, rtol);
}

// Both tent segments of one axis as boxes: offset 0 -> [-h,0],[0,h];
// offset m >= 1 -> [(m-1)h, mh],[mh,(m+1)h].
std::array<std::array<double, 2>, 2> tent_segments(int m, double h) {
  return {{{(m - 1) * h, m * h}, {m * h, (m + 1) * h}}};
}

double tent_weight_2d_separated(double h, int a, int b, double s) {
  const auto segx = tent_segments(a, h);
  const auto segy = tent_segments(b, h);
  double w = 0.0;
  for (const auto& sx : segx)
    for (const auto& sy : segy)
      w += tent2_box(h, a, b, s, {sx[0], sx[1], sy[0], sy[1]}, 1e-10);
  return w;
}

// Edge-adjacent offset (0,1). The quadrant t2 in (0,h) contains the
// singular corner; its t2-integral has the closed form
//   \int_0^h t2 (t1^2+t2^2)^{-1-s} dt2 = ((t1^2)^{-s} - (t1^2+h^2)^{-s})/(2s),
// which leaves smooth 1D integrals in t1.
double tent_weight_2d_edge_exact(double h, double s) {
  if (s >= 0.5) throw std::domain_error("edge pair integral diverges for s >= 1/2");
  const double q = 1.0 - 2.0 * s;
  const double near_power = std::pow(h, 2.0 - 2.0 * s) *
                            (1.0 / q - 1.0 / (2.0 - 2.0 * s));
  const double near_smooth = quad::integrate(
      [h, s](double u) {
        return (h - u) * std::pow(u * u + h * h, -s);
      },
      0.0, h, 1e-11);
  const double near = (near_power - near_smooth) / s;
  double far = 0.0;
  for (const auto& sx : tent_segments(0, h))
    far += tent2_box(h, 0, 1, s, {sx[0], sx[1], h, 2.0 * h}, 1e-10);
  return near + far;
}

// Same offset, s >= 1/2: only the region |t|_inf >= h survives; the inner
// square is carried by the smooth-function correction sigma2/2 placed on
// the four edge neighbors.
double sigma2_half(double h, double s) {
  const double itheta = quad::integrate(
      [s](double t) { return std::pow(std::cos(t), 2.0 * s - 2.0); }, 0.0,
      0.25 * M_PI, 1e-12);
  return 2.0 * std::pow(h, 2.0 - 2.0 * s) / (2.0 - 2.0 * s) * itheta;
}

double tent_weight_2d_edge_reg(double h, double s) {
  double far = 0.0;
  for (const auto& sx : tent_segments(0, h))
    far += tent2_box(h, 0, 1, s, {sx[0], sx[1], h, 2.0 * h}, 1e-10);
  return far + sigma2_half(h, s);
}

// Corner-adjacent offset (1,1). The quadrant (0,h)^2 is closed form:
//   \iint t1 t2 (t1^2+t2^2)^{-1-s} = h^{2-2s}/(2s(2-2s))
//                                  - h^{2-2s} (2^{1-s}-1)/(4s(1-s)).
double corner_quadrant_exact(double h, double s) {
  const double h22s = std::pow(h, 2.0 - 2.0 * s);
  const double term1 = h22s / (2.0 * s * (2.0 - 2.0 * s));
  const double term2 = h22s * pow_m1_over(2.0, 1.0 - s) / (4.0 * s);
  return term1 - term2;
}

double tent_weight_2d_corner(double h, double s, bool include_quadrant) {
  double w = include_quadrant ? corner_quadrant_exact(h, s) : 0.0;
  w += tent2_box(h, 1, 1, s, {h, 2.0 * h, 0.0, h}, 1e-10);
  w += tent2_box(h, 1, 1, s, {0.0, h, h, 2.0 * h}, 1e-10);
  w += tent2_box(h, 1, 1, s, {h, 2.0 * h, h, 2.0 * h}, 1e-10);
  return w;
}

double tent_weight_2d(double h, int adx, int ady, double s, bool regularized) {
  const int a = std::min(adx, ady);
  const int b = std::max(adx, ady);
  if (a == 0 && b == 1)
    return regularized ? tent_weight_2d_edge_reg(h, s)
                       : tent_weight_2d_edge_exact(h, s);
  if (a == 1 && b == 1) return tent_weight_2d_corner(h, s, !regularized);
  return tent_weight_2d_separated(h, a, b, s);
}

// ---- exterior tails ------------------------------------------------------

double tail_point_1d(const BoxGrid& g, double s, double x) {
  const Interval& e = g.extent(0);
  return (std::pow(x - e.lo, -2.0 * s) + std::pow(e.hi - x, -2.0 * s)) /
         (2.0 * s);
}

// Quadrant {y1 >= px+dx, y2 >= py+dy} seen from a point, in polar form:
//   (1/2s) \int r0(t)^{-2s} dt with r0 = max(dx/cos t, dy/sin t).
double corner_wedge(double dx, double dy, double s) {
  const double split = std::atan2(dy, dx);
  const double part1 = quad::integrate(
      [dy, s](double t) { return std::pow(std::sin(t) / dy, 2.0 * s); }, 0.0,
      split, 1e-11, 1e-15);
  const double part2 = quad::integrate(
      [dx, s](double t) { return std::pow(std::cos(t) / dx, 2.0 * s); }, split,
      0.5 * M_PI, 1e-11, 1e-15);
  return (part1 + part2) / (2.0 * s);
}

double tail_point_2d(const BoxGrid& g, double s, double px, double py,
                     double ang) {
  const double dl = px - g.extent(0).lo, dr = g.extent(0).hi - px;
  const double db = py - g.extent(1).lo, dt = g.extent(1).hi - py;
  const double halfplanes = (std::pow(dl, -2.0 * s) + std::pow(dr, -2.0 * s) +
                             std::pow(db, -2.0 * s) + std::pow(dt, -2.0 * s)) *
                            ang / (2.0 * s);
  const double corners = corner_wedge(dl, db, s) + corner_wedge(dl, dt, s) +
                         corner_wedge(dr, db, s) + corner_wedge(dr, dt, s);
  return halfplanes - corners;
}

// Cell-integrated tail, s < 1/2 (the exact integral diverges for boundary
// cells once s >= 1/2; assembly then uses h^n times the point value).
double tail_cell_1d_exact(const BoxGrid& g, double s, int i) {
  const double q = 1.0 - 2.0 * s;
  const Interval& e = g.extent(0);
  const double c0 = e.lo + g.to_multi(i)[0] * g.h();
  const double c1 = c0 + g.h();
  const double left = pow_m1_over(c1 - e.lo, q) - pow_m1_over(c0 - e.lo, q);
  const double right = pow_m1_over(e.hi - c0, q) - pow_m1_over(e.hi - c1, q);
  return (left + right) / (2.0 * s);
}

double tail_cell_2d_exact(const BoxGrid& g, double s, int i, double ang) {
  const double q = 1.0 - 2.0 * s;
  const double h = g.h();
  const auto m = g.to_multi(i);
  const double x0 = g.extent(0).lo + m[0] * h, x1 = x0 + h;
  const double y0 = g.extent(1).lo + m[1] * h, y1 = y0 + h;

  // half-plane parts: distance is linear across the cell
  auto hp = [&](double d0, double d1) {
    return ang / (2.0 * s) * h * (pow_m1_over(d1, q) - pow_m1_over(d0, q));
  };
  double value = hp(x0 - g.extent(0).lo, x1 - g.extent(0).lo) +
                 hp(g.extent(0).hi - x1, g.extent(0).hi - x0) +
                 hp(y0 - g.extent(1).lo, y1 - g.extent(1).lo) +
                 hp(g.extent(1).hi - y1, g.extent(1).hi - y0);

  // corner wedges, integrated numerically over the cell
  struct Corner {
    double cx, cy;
  };
  const Corner corners[4] = {{g.extent(0).lo, g.extent(1).lo},
                             {g.extent(0).lo, g.extent(1).hi},
                             {g.extent(0).hi, g.extent(1).lo},
                             {g.extent(0).hi, g.extent(1).hi}};
  for (const Corner& c : corners) {
    // scale the absolute tolerance to a center estimate so cells touching
    // the corner (integrable r^{-2s} singularity) terminate cleanly
    const double est =
        corner_wedge(std::abs(0.5 * (x0 + x1) - c.cx),
                     std::abs(0.5 * (y0 + y1) - c.cy), s) * h * h;
    const double wedge = quad::integrate2(
        [&](double x, double y) {
          return corner_wedge(std::abs(x - c.cx), std::abs(y - c.cy), s);
        },
        {x0, x1, y0, y1}, 3e-7, 1e-8 * est + 1e-300, 18);
    value -= wedge;
  }
  return value;
}

}  // namespace

double pair_weight(const BoxGrid& grid, const FracParam& param, int i, int j) {
  if (i == j)
    throw std::invalid_argument(
        "pair_weight: i == j (the diagonal is an assembly rule, not a pair integral)");
  if (param.classical())
    throw ConfigError("pair_weight: no kernel at s = 1 (classical stencil)");
  if (i < 0 || j < 0 || i >= grid.cell_count() || j >= grid.cell_count())
    throw ConfigError("pair_weight: cell index out of range");
  const double s = param.s;
  if (grid.dim() == 1) {
    const int m = std::abs(i - j);
    if (m == 1 && s >= 0.5)
      throw std::domain_error(
          "pair integral between touching cells diverges for s >= 1/2");
    return tent_weight_1d_exact(grid.h(), m, s);
  }
  const auto mi = grid.to_multi(i), mj = grid.to_multi(j);
  const int adx = std::abs(mi[0] - mj[0]);
  const int ady = std::abs(mi[1] - mj[1]);
  if (std::min(adx, ady) == 0 && std::max(adx, ady) == 1 && s >= 0.5)
    throw std::domain_error(
        "pair integral between touching cells diverges for s >= 1/2");
  return tent_weight_2d(grid.h(), adx, ady, s, /*regularized=*/false);
}

double exterior_tail(const BoxGrid& grid, const FracParam& param, int i) {
  if (param.classical()) throw ConfigError("exterior_tail: requires s < 1");
  if (i < 0 || i >= grid.cell_count())
    throw ConfigError("exterior_tail: cell index out of range");
  const auto c = grid.center(i);
  if (grid.dim() == 1) return tail_point_1d(grid, param.s, c[0]);
  return tail_point_2d(grid, param.s, c[0], c[1], angular_cos_pow(param.s));
}

KernelTable::KernelTable(const BoxGrid& grid, const FracParam& param)
    : grid_(grid), param_(param) {
  if (param.classical())
    throw ConfigError("KernelTable: s = 1 uses the classical stencil, no table");
  if (param.dim != grid.dim())
    throw ConfigError("KernelTable: parameter and grid dimensions differ");
  build();
}

void KernelTable::build() {
  const double s = param_.s;
  const double h = grid_.h();
  const bool reg = (s >= 0.5);
  const int nx = grid_.cells(0);
  const int ny = grid_.cells(1);
  const int n = grid_.cell_count();

  if (grid_.dim() == 1) {
    w_off_.assign(nx, 0.0);
    for (int m = 1; m < nx; ++m) {
      if (m == 1 && reg)
        w_off_[m] = tent_weight_1d_adjacent_reg(h, s);
      else
        w_off_[m] = tent_weight_1d_exact(h, m, s);
    }
    tail_point_.resize(n);
    tail_cell_.resize(n);
    for (int i = 0; i < n; ++i) {
      tail_point_[i] = tail_point_1d(grid_, s, grid_.center(i)[0]);
      tail_cell_[i] = reg ? h * tail_point_[i] : tail_cell_1d_exact(grid_, s, i);
    }
  } else {
    w_off_.assign(static_cast<std::size_t>(nx) * ny, 0.0);
    std::map<std::pair<int, int>, double> canonical;
    for (int ady = 0; ady < ny; ++ady) {
      for (int adx = 0; adx < nx; ++adx) {
        if (adx == 0 && ady == 0) continue;
        const std::pair<int, int> key{std::min(adx, ady), std::max(adx, ady)};
        auto it = canonical.find(key);
        if (it == canonical.end())
          it = canonical.emplace(key, tent_weight_2d(h, adx, ady, s, reg)).first;
        w_off_[static_cast<std::size_t>(ady) * nx + adx] = it->second;
      }
    }
    const double ang = angular_cos_pow(s);
    tail_point_.resize(n);
    tail_cell_.resize(n);
    for (int i = 0; i < n; ++i) {
      const auto c = grid_.center(i);
      tail_point_[i] = tail_point_2d(grid_, s, c[0], c[1], ang);
      tail_cell_[i] = reg ? h * h * tail_point_[i]
                          : tail_cell_2d_exact(grid_, s, i, ang);
    }
  }
  finalize_row_sums();
}

void KernelTable::finalize_row_sums() {
  const int n = grid_.cell_count();
  row_sum_.assign(n, 0.0);
  if (grid_.dim() == 1) {
    for (int i = 0; i < n; ++i) {
      double sum = 0.0;
      for (int j = 0; j < n; ++j)
        if (j != i) sum += w_off_[std::abs(i - j)];
      row_sum_[i] = sum;
    }
  } else {
    const int nx = grid_.cells(0);
    for (int i = 0; i < n; ++i) {
      const auto mi = grid_.to_multi(i);
      double sum = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const auto mj = grid_.to_multi(j);
        sum += w_off_[static_cast<std::size_t>(std::abs(mi[1] - mj[1])) * nx +
                      std::abs(mi[0] - mj[0])];
      }
      row_sum_[i] = sum;
    }
  }
}

double KernelTable::weight_by_offset(int adx, int ady) const {
  if (grid_.dim() == 1) return w_off_[adx];
  return w_off_[static_cast<std::size_t>(ady) * grid_.cells(0) + adx];
}

double KernelTable::weight(int i, int j) const {
  if (grid_.dim() == 1) return w_off_[std::abs(i - j)];
  const auto mi = grid_.to_multi(i), mj = grid_.to_multi(j);
  return weight_by_offset(std::abs(mi[0] - mj[0]), std::abs(mi[1] - mj[1]));
}

namespace {

constexpr std::uint64_t kCacheMagic = 0x4652534846543031ull;  // "FRSHKT01"

std::uint64_t fnv1a(const void* data, std::size_t bytes) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t hash = 1469598103934665603ull;
  for (std::size_t k = 0; k < bytes; ++k) {
    hash ^= p[k];
    hash *= 1099511628211ull;
  }
  return hash;
}

struct CacheHeader {
  std::uint64_t magic;
  std::int32_t dim;
  std::int32_t cells[2];
  double extent[4];
  double s;
  std::uint64_t w_count;
  std::uint64_t cell_count;
  std::uint64_t payload_hash;
};

}  // namespace

void KernelTable::save_cache(const std::string& path) const {
  std::vector<double> payload;
  payload.reserve(w_off_.size() + 3 * tail_cell_.size());
  payload.insert(payload.end(), w_off_.begin(), w_off_.end());
  payload.insert(payload.end(), tail_cell_.begin(), tail_cell_.end());
  payload.insert(payload.end(), tail_point_.begin(), tail_point_.end());
  payload.insert(payload.end(), row_sum_.begin(), row_sum_.end());

  CacheHeader hd{};
  hd.magic = kCacheMagic;
  hd.dim = grid_.dim();
  hd.cells[0] = grid_.cells(0);
  hd.cells[1] = grid_.cells(1);
  hd.extent[0] = grid_.extent(0).lo;
  hd.extent[1] = grid_.extent(0).hi;
  hd.extent[2] = grid_.extent(1).lo;
  hd.extent[3] = grid_.extent(1).hi;
  hd.s = param_.s;
  hd.w_count = w_off_.size();
  hd.cell_count = tail_cell_.size();
  hd.payload_hash = fnv1a(payload.data(), payload.size() * sizeof(double));

  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open kernel cache for writing: " + path);
  f.write(reinterpret_cast<const char*>(&hd), sizeof(hd));
  f.write(reinterpret_cast<const char*>(payload.data()),
          static_cast<std::streamsize>(payload.size() * sizeof(double)));
}

std::optional<KernelTable> KernelTable::try_load_cache(const std::string& path,
                                                       const BoxGrid& grid,
                                                       const FracParam& param) {
  std::ifstream f(path, std::ios::binary);
  if (!f) return std::nullopt;
  CacheHeader hd{};
  f.read(reinterpret_cast<char*>(&hd), sizeof(hd));
  if (!f || hd.magic != kCacheMagic) return std::nullopt;
  if (hd.dim != grid.dim() || hd.cells[0] != grid.cells(0) ||
      hd.cells[1] != grid.cells(1) || hd.s != param.s ||
      hd.extent[0] != grid.extent(0).lo || hd.extent[1] != grid.extent(0).hi ||
      hd.extent[2] != grid.extent(1).lo || hd.extent[3] != grid.extent(1).hi)
    return std::nullopt;
  const std::size_t total = hd.w_count + 3 * hd.cell_count;
  std::vector<double> payload(total);
  f.read(reinterpret_cast<char*>(payload.data()),
         static_cast<std::streamsize>(total * sizeof(double)));
  if (!f) return std::nullopt;
  if (fnv1a(payload.data(), total * sizeof(double)) != hd.payload_hash)
    return std::nullopt;

  KernelTable t;
  t.grid_ = grid;
  t.param_ = param;
  auto it = payload.begin();
  t.w_off_.assign(it, it + hd.w_count);
  it += hd.w_count;
  t.tail_cell_.assign(it, it + hd.cell_count);
  it += hd.cell_count;
  t.tail_point_.assign(it, it + hd.cell_count);
  it += hd.cell_count;
  t.row_sum_.assign(it, it + hd.cell_count);
  return t;
}

}  // namespace fracshape
