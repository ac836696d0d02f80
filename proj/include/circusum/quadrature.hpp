#pragma once

#include <array>
#include <cmath>
#include <functional>

namespace circusum::detail {

// 7-point Gauss / 15-point Kronrod nodes on [-1, 1].
inline constexpr std::array<double, 8> kronrod_x = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kronrod_w = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gauss_w = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
void gk15(F& f, double a, double b, double& result, double& error) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(mid);
  double kronrod = fc * kronrod_w[7];
  double gauss = fc * gauss_w[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kronrod_x[j];
    const double pair = f(mid - dx) + f(mid + dx);
    kronrod += kronrod_w[j] * pair;
    if (j % 2 == 1) gauss += gauss_w[j / 2] * pair;
  }
  result = kronrod * half;
  error = std::abs((kronrod - gauss) * half);
}

template <class F>
double adaptive_gk(F& f, double a, double b, double tol, int depth) {
  double whole, err;
  gk15(f, a, b, whole, err);
  if (err <= tol || depth <= 0) return whole;
  const double mid = 0.5 * (a + b);
  return adaptive_gk(f, a, mid, 0.5 * tol, depth - 1) + adaptive_gk(f, mid, b, 0.5 * tol, depth - 1);
}

}  // namespace circusum::detail

namespace circusum {

/// Adaptive Gauss-Kronrod on a finite interval; `abs_tol` is the absolute
/// error target for the whole integral.
template <class F>
double integrate(F&& f, double a, double b, double abs_tol = 1e-13, int max_depth = 40) {
  return detail::adaptive_gk(f, a, b, abs_tol, max_depth);
}

}  // namespace circusum
