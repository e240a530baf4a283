#pragma once

// Adaptive Gauss-Kronrod (7/15) quadrature for complex vector integrands on
// a real interval.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>

namespace cph::detail {

template <std::size_t N>
using CVec = std::array<std::complex<double>, N>;

template <std::size_t N>
struct QuadratureResult {
  CVec<N> value{};
  double error = 0.0;
  bool converged = false;
  double worst_midpoint = 0.0;  ///< midpoint of the interval with the largest error
};

namespace gk15 {
inline constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for nodes 1, 3, 5, 7.
inline constexpr std::array<double, 4> kGauss = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
}  // namespace gk15

template <std::size_t N>
struct Panel {
  double a, b;
  CVec<N> value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <std::size_t N, class F>
Panel<N> gk15_panel(F& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  CVec<N> kron{}, gauss{};
  auto add = [](CVec<N>& acc, const CVec<N>& v, double w) {
    for (std::size_t i = 0; i < N; ++i) acc[i] += w * v[i];
  };
  const CVec<N> fc = f(c);
  add(kron, fc, gk15::kKronrod[7]);
  add(gauss, fc, gk15::kGauss[3]);
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = h * gk15::kNodes[j];
    const CVec<N> f1 = f(c - dx);
    const CVec<N> f2 = f(c + dx);
    add(kron, f1, gk15::kKronrod[j]);
    add(kron, f2, gk15::kKronrod[j]);
    if (j % 2 == 1) {
      add(gauss, f1, gk15::kGauss[j / 2]);
      add(gauss, f2, gk15::kGauss[j / 2]);
    }
  }
  double err = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    kron[i] *= h;
    gauss[i] *= h;
    err = std::max(err, std::abs(kron[i] - gauss[i]));
  }
  return {a, b, kron, err};
}

/// Integrates f over [a, b] until the summed error estimate drops below
/// abs_tol + rel_tol * |value|, splitting the worst panel each round.
template <std::size_t N, class F>
QuadratureResult<N> integrate(F&& f, double a, double b, double abs_tol, double rel_tol,
                              std::size_t max_panels = 2000) {
  std::priority_queue<Panel<N>> panels;
  Panel<N> first = gk15_panel<N>(f, a, b);
  CVec<N> total = first.value;
  double err = first.error;
  panels.push(first);
  QuadratureResult<N> out;
  for (;;) {
    double scale = 0.0;
    for (std::size_t i = 0; i < N; ++i) scale = std::max(scale, std::abs(total[i]));
    out.value = total;
    out.error = err;
    out.worst_midpoint = 0.5 * (panels.top().a + panels.top().b);
    if (err <= abs_tol + rel_tol * scale) {
      out.converged = true;
      return out;
    }
    if (panels.size() >= max_panels || !std::isfinite(err)) {
      return out;
    }
    const Panel<N> worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Panel<N> left = gk15_panel<N>(f, worst.a, mid);
    const Panel<N> right = gk15_panel<N>(f, mid, worst.b);
    for (std::size_t i = 0; i < N; ++i) total[i] += left.value[i] + right.value[i] - worst.value[i];
    err += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
  }
}

}  // namespace cph::detail
