#include "cph/closed_forms.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cph/errors.hpp"
#include "quadrature.hpp"

namespace cph {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

Jet assemble_jet(int moving, Complex w, Complex dw, Complex ddw, Complex level) {
  return moving == 0 ? Jet{{w, level, dw, 0.0}, ddw, 0.0} : Jet{{level, w, 0.0, dw}, 0.0, ddw};
}

Jet rational_jet(const NullRationalConstants& c, Complex t) {
  const Complex den = c.offset - c.rate * t;
  const Complex pole = c.offset / c.rate;
  if (den == 0.0 || std::abs(1.0 / den) > kPoleThreshold) {
    throw PoleError("null rational geodesic evaluated at its pole", pole);
  }
  const Complex w = 1.0 / den;
  return assemble_jet(c.moving, w, c.rate * w * w, 2.0 * c.rate * c.rate * w * w * w, 0.0);
}

Jet tan_jet(const NullTanConstants& c, Complex t) {
  const Complex theta = c.rate * t + c.phase;
  const Complex tn = std::tan(theta);
  if (!is_finite(tn) || std::abs(c.level * tn) > kPoleThreshold) {
    const double k = std::round(((theta - kPi / 2.0) / kPi).real());
    throw PoleError("null tangent geodesic evaluated at a pole",
                    (kPi / 2.0 + k * kPi - c.phase) / c.rate);
  }
  const Complex sec2 = 1.0 + tn * tn;
  return assemble_jet(c.moving, c.level * tn, c.level * c.rate * sec2,
                      2.0 * c.level * c.rate * c.rate * tn * sec2, c.level);
}

Jet exponential_jet(const ExponentialConstants& c, Complex t) {
  const Complex e = std::exp(c.b * t);
  const Complex u = c.a1 * e, v = c.a2 * e;
  return {{u, v, c.b * u, c.b * v}, c.b * c.b * u, c.b * c.b * v};
}

ChainPoint generic_chain(const GenericConstants& g, Complex t) {
  const EllipticTriple e = jacobi_elliptic(g.scale * (t - g.t_base) + g.z0, g.m);
  ChainPoint c{};
  c.psi = kI * e.sn;
  c.dpsi = kI * g.scale * e.cn * e.dn;
  c.ddpsi = -kI * g.scale * g.scale * e.sn * (e.dn * e.dn + g.m * e.cn * e.cn);
  // 1 - psi^2 = 1 + sn^2 and 1 + psi^2 = cn^2.
  const Complex d = 1.0 + e.sn * e.sn;
  const Complex ab = g.fi.a * g.fi.b;
  c.cosh_phi = e.cn * e.cn / d;
  c.dphi = 2.0 * c.dpsi / d;
  const Complex dcosh = 4.0 * c.psi * c.dpsi / (d * d);
  const Complex ddphi = 2.0 * c.ddpsi / d + 4.0 * c.psi * c.dpsi * c.dpsi / (d * d);
  c.omega_rate = ab * c.cosh_phi + 0.5 * c.dphi;
  c.eta_rate = ab * c.cosh_phi - 0.5 * c.dphi;
  c.omega_accel = ab * dcosh + 0.5 * ddphi;
  c.eta_accel = ab * dcosh - 0.5 * ddphi;
  return c;
}

// omega(t), eta(t) by quadrature of the chain rates along the segment
// t_base -> t.
std::pair<Complex, Complex> generic_logs(const GenericConstants& g, Complex t) {
  const Complex span = t - g.t_base;
  if (span == 0.0) {
    return {g.omega0, g.eta0};
  }
  std::optional<Complex> bad;
  auto integrand = [&](double lambda) -> detail::CVec<2> {
    const Complex tl = g.t_base + lambda * span;
    try {
      const ChainPoint c = generic_chain(g, tl);
      if (is_finite(c.omega_rate) && is_finite(c.eta_rate)) {
        return {c.omega_rate * span, c.eta_rate * span};
      }
    } catch (const PoleError&) {
    }
    if (!bad) bad = tl;
    return {Complex(std::nan(""), 0.0), Complex(std::nan(""), 0.0)};
  };
  const auto r = detail::integrate<2>(integrand, 0.0, 1.0, 1e-14, 1e-14);
  if (bad || !r.converged) {
    const Complex where = bad ? *bad : g.t_base + r.worst_midpoint * span;
    throw ChartDegeneracyError(
        "log chart degenerates on the segment to t (u or v vanishes or blows up); "
        "use path continuation",
        where);
  }
  return {g.omega0 + r.value[0], g.eta0 + r.value[1]};
}

Jet generic_jet(const GenericConstants& g, Complex t) {
  const auto [omega, eta] = generic_logs(g, t);
  const ChainPoint c = generic_chain(g, t);
  const Complex u = std::exp(omega), v = std::exp(eta);
  return {{u, v, c.omega_rate * u, c.eta_rate * v},
          (c.omega_accel + c.omega_rate * c.omega_rate) * u,
          (c.eta_accel + c.eta_rate * c.eta_rate) * v};
}

// Polishes sn(z) = target with Newton steps.
Complex invert_sn(Complex target, Complex m) {
  Complex z;
  try {
    z = elliptic_f(target, m);
  } catch (const SingularPathError&) {
    // Target on a cut of the straight-path integral: start just off it and
    // let Newton land on a preimage.
    z = elliptic_f(target * Complex(1.0, 1e-7), m);
  }
  for (int it = 0; it < 8; ++it) {
    const EllipticTriple e = jacobi_elliptic(z, m);
    const Complex step = (e.sn - target) / (e.cn * e.dn);
    z -= step;
    if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(z))) break;
  }
  return z;
}

}  // namespace

std::string_view to_string(Family f) {
  switch (f) {
    case Family::NullRational: return "NullRational";
    case Family::NullTan: return "NullTan";
    case Family::Exponential: return "Exponential";
    case Family::GenericElliptic: return "GenericElliptic";
  }
  return "Unknown";
}

PsiCoefficients psi_coefficients(const FirstIntegrals& fi) {
  const Complex a2b2 = fi.a * fi.a * fi.b * fi.b;
  const Complex two_a = 2.0 * fi.a;
  const Complex den = two_a - a2b2;
  if (std::abs(den) <= 1e-12 * (std::abs(two_a) + std::abs(a2b2))) {
    throw DegenerateCoefficientsError("2A - A^2 B^2 vanishes: psi equation ratio has a pole");
  }
  return {std::sqrt(a2b2 - two_a), (a2b2 + two_a) / den};
}

std::pair<Complex, Complex> log_rates(const FirstIntegrals& fi, Complex cosh_phi, int sign) {
  const Complex root = std::sqrt(fi.b * fi.b - 2.0 / (fi.a * cosh_phi));
  const double sg = sign >= 0 ? 1.0 : -1.0;
  return {2.0 / (fi.b - sg * root), 2.0 / (fi.b + sg * root)};
}

GeodesicSampler::GeodesicSampler(GeodesicGerm source, FamilyConstants constants)
    : source_(source), constants_(std::move(constants)) {}

Family GeodesicSampler::family() const {
  return static_cast<Family>(constants_.index());
}

Jet GeodesicSampler::jet(Complex t) const {
  require_finite(t, "sample time");
  const auto* g = std::get_if<GenericConstants>(&constants_);
  if (g != nullptr && t == source_.t0 && t != g->t_base) {
    // The chain is anchored off the source germ (axis or turning point), and
    // the source itself may sit where the log chart degenerates.
    const State s = germ_state(source_);
    const State rhs = geodesic_rhs(s);
    return {s, rhs.du, rhs.dv};
  }
  return std::visit(
      [t](const auto& c) -> Jet {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, NullRationalConstants>) return rational_jet(c, t);
        if constexpr (std::is_same_v<T, NullTanConstants>) return tan_jet(c, t);
        if constexpr (std::is_same_v<T, ExponentialConstants>) return exponential_jet(c, t);
        if constexpr (std::is_same_v<T, GenericConstants>) return generic_jet(c, t);
      },
      constants_);
}

State GeodesicSampler::sample(Complex t) const { return jet(t).state; }

ChainPoint GeodesicSampler::chain(Complex t) const {
  const auto* g = std::get_if<GenericConstants>(&constants_);
  if (g == nullptr) {
    throw std::logic_error("chain() is only defined for the generic family");
  }
  return generic_chain(*g, t);
}

GeodesicSampler solve_null(const GeodesicGerm& germ) {
  validate(germ);
  const Complex x = germ.velocity.du, y = germ.velocity.dv;
  if (x != 0.0 && y != 0.0) {
    throw ClassificationMismatchError("solve_null needs one zero velocity component");
  }
  const int moving = x == 0.0 ? 1 : 0;
  const Complex level = moving == 0 ? germ.point.v : germ.point.u;
  const Complex w0 = moving == 0 ? germ.point.u : germ.point.v;
  const Complex dw0 = moving == 0 ? x : y;
  const Complex t0 = germ.t0;

  if (level == 0.0) {
    // w0 != 0 because the point is off the cone.
    const Complex rate = dw0 / (w0 * w0);
    return {germ, NullRationalConstants{moving, rate, 1.0 / w0 + rate * t0}};
  }
  // w = a tan(c t + d) solves w'' = 2 w w'^2 / (a^2 + w^2) for any c, d.
  const Complex rate = level * dw0 / (level * level + w0 * w0);
  const Complex phase = std::atan(w0 / level) - rate * t0;
  return {germ, NullTanConstants{moving, level, rate, phase}};
}

bool is_exponential_geodesic(const GeodesicGerm& germ) {
  if (classify(germ).tag != GermClass::Exponential) return false;
  const Complex a2 = germ.point.u * germ.point.u, b2 = germ.point.v * germ.point.v;
  return std::abs(a2 - b2) <= 1e-12 * (std::abs(a2) + std::abs(b2));
}

GeodesicSampler solve_exponential(const GeodesicGerm& germ) {
  if (classify(germ).tag != GermClass::Exponential) {
    throw ClassificationMismatchError("solve_exponential needs a germ with alpha y = beta x");
  }
  if (!is_exponential_geodesic(germ)) {
    throw ClassificationMismatchError(
        "solve_exponential needs alpha^2 = beta^2; other proportional germs are generic");
  }
  const Complex alpha = germ.point.u, beta = germ.point.v;
  const Complex b = germ.velocity.du / alpha;
  const Complex shift = std::exp(-b * germ.t0);
  return {germ, ExponentialConstants{alpha * shift, beta * shift, b}};
}

GeodesicSampler solve_generic(const GeodesicGerm& germ, GenericOptions options) {
  const GermClass tag = classify(germ).tag;
  if (tag != GermClass::Generic && (tag != GermClass::Exponential || is_exponential_geodesic(germ))) {
    throw ClassificationMismatchError("solve_generic needs a generic germ");
  }
  GeodesicGerm g = step_off_axis(germ);
  // psi0 = (alpha - beta) / (alpha + beta) has a pole on u = -v, and
  // proportional data put psi0 on a turning point where sn cannot be inverted
  // by Newton steps.
  const Complex skew = g.point.u * g.velocity.dv - g.point.v * g.velocity.du;
  if (std::abs(g.point.u + g.point.v) < 1e-6 * (std::abs(g.point.u) + std::abs(g.point.v)) ||
      std::abs(skew) < 1e-6 * (std::abs(g.point.u * g.velocity.dv) +
                               std::abs(g.point.v * g.velocity.du))) {
    g = taylor_step(g, kAxisStep);
  }
  const Complex alpha = g.point.u, beta = g.point.v;
  const Complex x = g.velocity.du, y = g.velocity.dv;

  GenericConstants c{};
  c.fi = first_integrals(g);
  c.coeffs = psi_coefficients(c.fi);
  c.m = -c.coeffs.ratio;
  c.phi0 = std::log(alpha / beta);
  // tanh(log(alpha/beta) / 2) in closed form.
  c.psi0 = (alpha - beta) / (alpha + beta);
  const Complex dpsi0 = 0.5 * (1.0 - c.psi0 * c.psi0) * (x / alpha - y / beta);

  const Complex w0 = -kI * c.psi0;
  const Complex dw0 = -kI * dpsi0;
  c.z0 = invert_sn(w0, c.m);
  const EllipticTriple e0 = jacobi_elliptic(c.z0, c.m);
  const Complex slope = e0.cn * e0.dn;
  const Complex s_plus = kI * c.coeffs.prefactor;
  c.scale = std::abs(s_plus * slope - dw0) <= std::abs(-s_plus * slope - dw0) ? s_plus : -s_plus;
  if (std::abs(c.scale * slope - dw0) > 1e-8 * (1.0 + std::abs(dw0))) {
    throw Error("solve_generic: elliptic normal form does not match the germ");
  }

  c.t_base = g.t0;
  c.omega0 = std::log(alpha) + Complex(0.0, 2.0 * kPi * options.omega_branch);
  c.eta0 = std::log(beta) + Complex(0.0, 2.0 * kPi * options.eta_branch);

  const Complex cosh0 = (alpha * alpha + beta * beta) / (2.0 * alpha * beta);
  const Complex target = x / alpha;
  c.rate_branch = std::abs(log_rates(c.fi, cosh0, 1).first - target) <=
                          std::abs(log_rates(c.fi, cosh0, -1).first - target)
                      ? 1
                      : -1;
  return {germ, c};
}

GeodesicSampler solve(const GeodesicGerm& germ) {
  switch (classify(germ).tag) {
    case GermClass::NullUConst:
    case GermClass::NullVConst: return solve_null(germ);
    case GermClass::Exponential:
      return is_exponential_geodesic(germ) ? solve_exponential(germ) : solve_generic(germ);
    case GermClass::Generic: return solve_generic(germ);
  }
  throw std::logic_error("unreachable");
}

}  // namespace cph
