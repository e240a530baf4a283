#pragma once

// Complex special functions with an explicit branch policy.
//
// All functions use principal branches. Multi-valued behaviour is obtained by
// continuation along paths in the caller, never by switching branches here.

#include <complex>

namespace cph {

using Complex = std::complex<double>;

/// Magnitude above which a function value is treated as a pole.
inline constexpr double kPoleThreshold = 1e12;

struct EllipticTriple {
  Complex sn;
  Complex cn;
  Complex dn;
};

/// Throws OutOfDomainError unless both components of `z` are finite.
void require_finite(Complex z, const char* what);

/// Principal inverse hyperbolic tangent, 1/2 log((1+z)/(1-z)).
/// Cuts along (-inf,-1] and [1,inf). Throws PoleError at z = +-1.
Complex artanh_principal(Complex z);

/// Jacobi sn, cn, dn of argument z with parameter m (m = k^2).
///
/// Uses the descending Landen (Gauss) transformation down to |m_n| < 1e-16,
/// after first mapping |m| > 1 onto 1/m with the reciprocal-modulus relations.
/// Throws PoleError when any value exceeds kPoleThreshold.
EllipticTriple jacobi_elliptic(Complex z, Complex m);

/// Carlson's symmetric integral R_F(x, y, z) on the principal branch.
/// Arguments must lie off the closed negative real axis, at most one zero.
Complex carlson_rf(Complex x, Complex y, Complex z);

/// Incomplete elliptic integral of the first kind in Jacobi form,
/// F(z | m) = int_0^z dt / sqrt((1 - t^2)(1 - m t^2)) along the straight segment.
///
/// Satisfies sn(F(z, m), m) = z. Throws SingularPathError when the segment
/// hits a branch point of the integrand (z^2 or m z^2 real and >= 1).
Complex elliptic_f(Complex z, Complex m);

}  // namespace cph
