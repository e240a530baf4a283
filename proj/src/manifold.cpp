#include "cph/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "cph/errors.hpp"

namespace cph {

namespace {

// Relative tolerance of the proportionality test alpha*y == beta*x.
constexpr double kProportionalTolerance = 1e-12;

Complex ldexp(Complex z, int k) { return {std::ldexp(z.real(), k), std::ldexp(z.imag(), k)}; }

using Series = std::vector<Complex>;

Series mul(const Series& a, const Series& b, std::size_t n) {
  Series out(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i <= k; ++i) {
      if (i < a.size() && k - i < b.size()) {
        out[k] += a[i] * b[k - i];
      }
    }
  }
  return out;
}

Series div(const Series& a, const Series& b, std::size_t n) {
  Series q(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc = k < a.size() ? a[k] : 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      if (k - i < b.size()) {
        acc -= q[i] * b[k - i];
      }
    }
    q[k] = acc / b[0];
  }
  return q;
}

Series derivative(const Series& c) {
  Series d;
  for (std::size_t k = 1; k < c.size(); ++k) {
    d.push_back(static_cast<double>(k) * c[k]);
  }
  return d;
}

// Taylor coefficients of one coordinate of the geodesic flow.
void extend(Series& w, const Series& u, const Series& v, std::size_t k) {
  const std::size_t n = k + 1;
  const Series s = mul(u, u, n);
  const Series s2 = mul(v, v, n);
  Series cone(n);
  for (std::size_t i = 0; i < n; ++i) cone[i] = s[i] + s2[i];
  const Series dw = derivative(w);
  Series f = mul(w, mul(dw, dw, n), n);
  f = div(f, cone, n);
  w.push_back(2.0 * f[k] / static_cast<double>((k + 1) * (k + 2)));
}

}  // namespace

std::string_view to_string(GermClass c) {
  switch (c) {
    case GermClass::NullUConst: return "NullUConst";
    case GermClass::NullVConst: return "NullVConst";
    case GermClass::Exponential: return "Exponential";
    case GermClass::Generic: return "Generic";
  }
  return "Unknown";
}

bool in_domain(const Point& p) {
  if (!std::isfinite(std::abs(p.u)) || !std::isfinite(std::abs(p.v))) {
    return false;
  }
  // u^2 + v^2 = (u + iv)(u - iv); the product form keeps the test exact on
  // the cone lines.
  // Scaled to unit size first so tiny or huge points neither underflow nor overflow.
  const double scale = std::max(std::abs(p.u), std::abs(p.v));
  if (scale == 0.0) return false;
  const Complex i(0.0, 1.0);
  const Complex u = p.u / scale, v = p.v / scale;
  const double lhs = std::abs(u + i * v) * std::abs(u - i * v);
  return lhs > kConeTolerance * (std::norm(u) + std::norm(v));
}

Complex cone_form(const Point& p) {
  if (!in_domain(p)) {
    throw OutOfDomainError("point lies on the excluded cone u^2 + v^2 = 0");
  }
  return p.u * p.u + p.v * p.v;
}

Complex metric_eval(const Point& p, const Tangent& x, const Tangent& y) {
  const Complex s = cone_form(p);
  return (x.du * y.dv + x.dv * y.du) / (2.0 * s);
}

State geodesic_rhs(const State& st) {
  const Complex s = cone_form({st.u, st.v});
  return {st.du, st.dv, 2.0 * st.u * st.du * st.du / s, 2.0 * st.v * st.dv * st.dv / s};
}

void validate(const GeodesicGerm& germ) {
  for (Complex c : {germ.point.u, germ.point.v, germ.velocity.du, germ.velocity.dv, germ.t0}) {
    require_finite(c, "germ");
  }
  if (!in_domain(germ.point)) {
    throw OutOfDomainError("germ point lies on the excluded cone u^2 + v^2 = 0");
  }
  if (germ.velocity.du == 0.0 && germ.velocity.dv == 0.0) {
    throw BothComponentsZeroError("germ velocity is zero");
  }
}

State germ_state(const GeodesicGerm& germ) {
  return {germ.point.u, germ.point.v, germ.velocity.du, germ.velocity.dv};
}

FirstIntegrals first_integrals(const State& s) {
  if (s.du == 0.0 || s.dv == 0.0) {
    throw NullVelocityComponentError("first integral B needs both velocity components nonzero");
  }
  const Complex cone = cone_form({s.u, s.v});
  return {s.du * s.dv / cone, s.u / s.du + s.v / s.dv};
}

FirstIntegrals first_integrals(const GeodesicGerm& germ) { return first_integrals(germ_state(germ)); }

Complex null_first_integral(const State& s) {
  const Complex cone = cone_form({s.u, s.v});
  return (s.du == 0.0 ? s.dv : s.du) / cone;
}

Complex exponential_discriminant(const GeodesicGerm& germ) {
  const auto [a, b] = first_integrals(germ);
  const Complex alpha = germ.point.u, beta = germ.point.v;
  if (alpha == 0.0 || beta == 0.0) {
    throw DegenerateGermError("discriminant undefined on a coordinate axis");
  }
  const Complex cosh_log_ratio = (alpha * alpha + beta * beta) / (2.0 * alpha * beta);
  return a * b * b * cosh_log_ratio;
}

GeodesicGerm taylor_step(const GeodesicGerm& germ, Complex h, int order) {
  validate(germ);
  Series u{germ.point.u, germ.velocity.du};
  Series v{germ.point.v, germ.velocity.dv};
  for (int k = 0; k + 2 <= order; ++k) {
    Series u_next = u;
    extend(u_next, u, v, static_cast<std::size_t>(k));
    extend(v, u, v, static_cast<std::size_t>(k));
    u = std::move(u_next);
  }
  auto eval = [h](const Series& c) {
    Complex val = 0.0, d = 0.0, hp = 1.0, hp_prev = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
      val += c[k] * hp;
      d += static_cast<double>(k) * c[k] * hp_prev;
      hp_prev = hp;
      hp *= h;
    }
    return std::pair{val, d};
  };
  const auto [u1, du1] = eval(u);
  const auto [v1, dv1] = eval(v);
  return {{u1, v1}, {du1, dv1}, germ.t0 + h};
}

GeodesicGerm step_off_axis(const GeodesicGerm& germ) {
  if (germ.point.u != 0.0 && germ.point.v != 0.0) {
    return germ;
  }
  GeodesicGerm moved = taylor_step(germ, kAxisStep);
  if (moved.point.u == 0.0 || moved.point.v == 0.0) {
    throw DegenerateGermError("germ cannot be moved off the coordinate axes");
  }
  return moved;
}

Classification classify(const GeodesicGerm& germ) {
  validate(germ);
  const Complex x = germ.velocity.du, y = germ.velocity.dv;
  if (x == 0.0) return {GermClass::NullUConst, std::nullopt, std::nullopt};
  if (y == 0.0) return {GermClass::NullVConst, std::nullopt, std::nullopt};

  const GeodesicGerm g = step_off_axis(germ);
  const FirstIntegrals fi = first_integrals(germ);
  const Complex disc = exponential_discriminant(g);
  const Complex lhs = g.point.u * g.velocity.dv;
  const Complex rhs = g.point.v * g.velocity.du;
  const bool proportional =
      std::abs(lhs - rhs) <= kProportionalTolerance * std::max(std::abs(lhs), std::abs(rhs));
  return {proportional ? GermClass::Exponential : GermClass::Generic, fi, disc};
}

GeodesicGerm dilate(const GeodesicGerm& germ, int k) {
  return {{ldexp(germ.point.u, k), ldexp(germ.point.v, k)},
          {ldexp(germ.velocity.du, k), ldexp(germ.velocity.dv, k)},
          germ.t0};
}

}  // namespace cph
