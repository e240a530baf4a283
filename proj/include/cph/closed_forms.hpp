#pragma once

// Explicit solution families of the geodesic system.
//
//   null, constant coordinate 0:      w(t) = 1 / (C - B t)
//   null, constant coordinate a != 0: w(t) = a tan(c t + d)
//   exponential (u v' = v u'):        (a1 e^{b t}, a2 e^{b t}), a2 = +-a1
//   generic:                          log-chart chain through a Jacobi elliptic function
//
// Generic chain. With omega = log u, eta = log v, phi = omega - eta and
// psi = tanh(phi / 2) the first integrals give
//
//   psi'^2 = P^2 (1 + psi^2)(1 - r psi^2),   P^2 = A^2 B^2 - 2A,
//                                            r   = (A^2 B^2 + 2A) / (2A - A^2 B^2).
//
// Writing psi = i w maps this onto w'^2 = -P^2 (1 - w^2)(1 - m w^2) with
//
//   m = -r = (A^2 B^2 + 2A) / (A^2 B^2 - 2A),
//
// so psi(t) = i sn(s (t - t0) + z0 | m) with s = +-i P and sn(z0 | m) = -i psi0.
// The log-chart rates are then branch free:
//
//   cosh phi = (1 + psi^2) / (1 - psi^2),   phi' = 2 psi' / (1 - psi^2),
//   omega' = A B cosh phi + phi' / 2,       eta' = A B cosh phi - phi' / 2,
//
// and omega, eta follow by quadrature from log alpha, log beta.

#include <optional>
#include <utility>
#include <variant>

#include "cph/manifold.hpp"

namespace cph {

enum class Family { NullRational, NullTan, Exponential, GenericElliptic };

std::string_view to_string(Family f);

/// Coefficients of the quartic psi equation.
struct PsiCoefficients {
  Complex prefactor;  ///< sqrt(A^2 B^2 - 2A), principal branch
  Complex ratio;      ///< (A^2 B^2 + 2A) / (2A - A^2 B^2)
};

/// Throws DegenerateCoefficientsError when 2A - A^2 B^2 vanishes (relative 1e-12).
PsiCoefficients psi_coefficients(const FirstIntegrals& fi);

/// omega' and eta' solved from omega' eta' = 2A cosh phi and
/// 1/omega' + 1/eta' = B:
///   omega' = 2 / (B - sign sqrt(B^2 - 2 / (A cosh phi))),
///   eta'   = 2 / (B + sign sqrt(B^2 - 2 / (A cosh phi))).
std::pair<Complex, Complex> log_rates(const FirstIntegrals& fi, Complex cosh_phi, int sign);

/// Moving coordinate 1 / (offset - rate t); the other coordinate is 0.
struct NullRationalConstants {
  int moving;  ///< 0: u moves, 1: v moves
  Complex rate;
  Complex offset;
};

/// Moving coordinate level * tan(rate t + phase); the other coordinate is `level`.
struct NullTanConstants {
  int moving;
  Complex level;
  Complex rate;
  Complex phase;
};

struct ExponentialConstants {
  Complex a1;
  Complex a2;
  Complex b;
};

struct GenericConstants {
  FirstIntegrals fi;
  PsiCoefficients coeffs;
  Complex phi0;     ///< log(alpha / beta), principal branch
  Complex psi0;     ///< tanh(phi0 / 2)
  Complex m;        ///< elliptic parameter, -coeffs.ratio
  Complex scale;    ///< s, with s^2 = -prefactor^2
  Complex z0;       ///< sn(z0 | m) = -i psi0
  Complex t_base;   ///< time at which the chain is anchored
  Complex omega0;   ///< omega(t_base)
  Complex eta0;     ///< eta(t_base)
  int rate_branch;  ///< sign of the square root in log_rates at t_base
};

using FamilyConstants =
    std::variant<NullRationalConstants, NullTanConstants, ExponentialConstants, GenericConstants>;

/// Position, velocity and acceleration at one time.
struct Jet {
  State state;
  Complex ddu;
  Complex ddv;
};

/// Values of the generic chain at one time.
struct ChainPoint {
  Complex psi;
  Complex dpsi;
  Complex ddpsi;
  Complex cosh_phi;
  Complex dphi;
  Complex omega_rate;
  Complex eta_rate;
  Complex omega_accel;
  Complex eta_accel;
};

class GeodesicSampler {
 public:
  GeodesicSampler(GeodesicGerm source, FamilyConstants constants);

  Family family() const;
  const FamilyConstants& constants() const { return constants_; }
  const GeodesicGerm& source() const { return source_; }

  /// Position and velocity at t. Throws PoleError at poles of the family and
  /// ChartDegeneracyError when the generic chain cannot be integrated from
  /// the anchor to t along a straight segment.
  State sample(Complex t) const;

  Jet jet(Complex t) const;

  /// Generic family only; throws std::logic_error otherwise.
  ChainPoint chain(Complex t) const;

 private:
  GeodesicGerm source_;
  FamilyConstants constants_;
};

GeodesicSampler solve_null(const GeodesicGerm& germ);

/// True when the germ lies on an exponential geodesic: proportional data with
/// alpha^2 = beta^2. Along any geodesic (u v' - v u')' = 2 u v (v'^2 - u'^2) / (u^2 + v^2),
/// so other proportional germs leave the proportional locus at once and
/// follow the generic chain.
bool is_exponential_geodesic(const GeodesicGerm& germ);

/// Throws ClassificationMismatchError unless is_exponential_geodesic(germ).
GeodesicSampler solve_exponential(const GeodesicGerm& germ);

struct GenericOptions {
  int omega_branch = 0;  ///< omega(t0) = log alpha + 2 pi i omega_branch
  int eta_branch = 0;
};

/// Accepts Generic germs and proportional germs off the exponential family.
GeodesicSampler solve_generic(const GeodesicGerm& germ, GenericOptions options = {});

/// Classifies the germ and builds the matching family.
GeodesicSampler solve(const GeodesicGerm& germ);

inline State sample(const GeodesicSampler& s, Complex t) { return s.sample(t); }

}  // namespace cph
