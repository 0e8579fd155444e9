#pragma once

// Small quadrature toolbox: cached Gauss-Legendre rules plus adaptive
// panel integration in 1D and 2D. All kernel integrals in this project
// reduce to smooth integrands on panels, so a GL pair estimate with
// bisection is enough.

#include <cmath>
#include <functional>
#include <vector>

#include "fracshape/errors.hpp"

namespace fracshape::quad {

struct GaussRule {
  std::vector<double> nodes;    // on [-1,1]
  std::vector<double> weights;
};

// Nodes computed once per order by Newton iteration on Legendre polynomials.
const GaussRule& gauss_legendre(int order);

template <typename F>
double gauss(const F& f, double a, double b, int order) {
  const GaussRule& r = gauss_legendre(order);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t k = 0; k < r.nodes.size(); ++k)
    sum += r.weights[k] * f(mid + half * r.nodes[k]);
  return half * sum;
}

namespace detail {

template <typename F>
double adaptive_impl(const F& f, double a, double b, double rtol, double atol,
                     int depth, int max_depth) {
  const double coarse = gauss(f, a, b, 8);
  const double fine = gauss(f, a, b, 16);
  const double err = std::abs(fine - coarse);
  // atol is per panel; panel counts stay small so the total tracks it.
  if (err <= atol + rtol * std::abs(fine)) return fine;
  if (depth >= max_depth)
    throw NumericalError("adaptive quadrature did not converge on [" +
                         std::to_string(a) + ", " + std::to_string(b) + "]");
  const double mid = 0.5 * (a + b);
  return adaptive_impl(f, a, mid, rtol, atol, depth + 1, max_depth) +
         adaptive_impl(f, mid, b, rtol, atol, depth + 1, max_depth);
}

}  // namespace detail

// Adaptive GL8/GL16 bisection. `rtol` is relative to the local panel value;
// integrable endpoint singularities are resolved by geometric subdivision.
template <typename F>
double integrate(const F& f, double a, double b, double rtol = 1e-10,
                 double atol = 1e-15, int max_depth = 52) {
  if (a == b) return 0.0;
  return detail::adaptive_impl(f, a, b, rtol, atol, 0, max_depth);
}

struct Box2 {
  double x0, x1, y0, y1;
};

template <typename F>
double gauss2(const F& f, const Box2& box, int order) {
  const GaussRule& r = gauss_legendre(order);
  const double mx = 0.5 * (box.x0 + box.x1), hx = 0.5 * (box.x1 - box.x0);
  const double my = 0.5 * (box.y0 + box.y1), hy = 0.5 * (box.y1 - box.y0);
  double sum = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    const double x = mx + hx * r.nodes[i];
    double row = 0.0;
    for (std::size_t j = 0; j < r.nodes.size(); ++j)
      row += r.weights[j] * f(x, my + hy * r.nodes[j]);
    sum += r.weights[i] * row;
  }
  return hx * hy * sum;
}

namespace detail {

template <typename F>
double adaptive2_impl(const F& f, const Box2& box, double rtol, double atol,
                      int depth, int max_depth) {
  const double coarse = gauss2(f, box, 4);
  const double fine = gauss2(f, box, 7);
  const double err = std::abs(fine - coarse);
  if (err <= atol + rtol * std::abs(fine)) return fine;
  if (depth >= max_depth)
    throw NumericalError("2d adaptive quadrature did not converge");
  const double mx = 0.5 * (box.x0 + box.x1);
  const double my = 0.5 * (box.y0 + box.y1);
  const Box2 q[4] = {{box.x0, mx, box.y0, my},
                     {mx, box.x1, box.y0, my},
                     {box.x0, mx, my, box.y1},
                     {mx, box.x1, my, box.y1}};
  double sum = 0.0;
  for (const Box2& b : q)
    sum += adaptive2_impl(f, b, rtol, atol, depth + 1, max_depth);
  return sum;
}

}  // namespace detail

template <typename F>
double integrate2(const F& f, const Box2& box, double rtol = 1e-9,
                  double atol = 1e-15, int max_depth = 26) {
  if (box.x0 == box.x1 || box.y0 == box.y1) return 0.0;
  return detail::adaptive2_impl(f, box, rtol, atol, 0, max_depth);
}

// (t^q - 1) / q, the power primitive that degenerates to log(t) at q = 0.
// Used so closed-form kernel integrals pass smoothly through s = 1/2.
inline double pow_m1_over(double t, double q) {
  if (t == 0.0) {
    if (q <= 0.0) throw NumericalError("pow_m1_over: divergent at t=0");
    return -1.0 / q;
  }
  const double lt = std::log(t);
  if (q == 0.0) return lt;
  const double x = q * lt;
  if (std::abs(x) < 1e-3) return std::expm1(x) / q;
  return (std::pow(t, q) - 1.0) / q;
}

}  // namespace fracshape::quad
